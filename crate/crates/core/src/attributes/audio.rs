use std::path::Path;
use std::sync::{Arc, LazyLock};

use super::{schema_of, AttributeError};
use crate::dsns::DsnsString;

pub const AUDIO_SCHEMA: [&str; 10] = [
    "channels",
    "sample_rate",
    "file_size_bytes",
    "year",
    "average_loudness",
    "zero_crossing_rate",
    "dynamic_range_db",
    "bitrate",
    "bit_depth",
    "crest_factor",
];

static SCHEMA: LazyLock<Arc<[String]>> = LazyLock::new(|| schema_of(&AUDIO_SCHEMA));

/// Frames per analysis window for loudness and the noise floor.
pub const WINDOW: usize = 1024;

/// Integer PCM, interleaved by channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PcmAudio {
    pub channels: u16,
    pub sample_rate: u32,
    pub bit_depth: u16,
    samples: Vec<i32>,
    pub year: Option<i32>,
    pub file_size_bytes: Option<u64>,
}

impl PcmAudio {
    pub fn new(channels: u16, sample_rate: u32, bit_depth: u16, samples: Vec<i32>) -> Result<Self, AttributeError> {
        if !matches!(bit_depth, 8 | 16 | 24 | 32) {
            return Err(AttributeError::BitDepth(bit_depth));
        }
        if channels == 0 || !samples.len().is_multiple_of(channels as usize) {
            return Err(AttributeError::AudioShape);
        }
        if samples.is_empty() {
            return Err(AttributeError::EmptyAudio);
        }
        Ok(PcmAudio {
            channels,
            sample_rate,
            bit_depth,
            samples,
            year: None,
            file_size_bytes: None,
        })
    }

    /// Reads an integer PCM WAV file.
    pub fn read_wav(path: &Path) -> Result<Self, AttributeError> {
        let decode = |e: hound::Error| AttributeError::Decode {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        let reader = hound::WavReader::open(path).map_err(decode)?;
        let spec = reader.spec();
        if spec.sample_format != hound::SampleFormat::Int {
            return Err(AttributeError::Decode {
                path: path.display().to_string(),
                message: "floating-point samples are not supported".into(),
            });
        }
        let samples = reader
            .into_samples::<i32>()
            .collect::<Result<Vec<_>, _>>()
            .map_err(decode)?;
        let mut audio = PcmAudio::new(spec.channels, spec.sample_rate, spec.bits_per_sample, samples)?;
        audio.file_size_bytes = Some(std::fs::metadata(path)?.len());
        Ok(audio)
    }

    pub fn samples(&self) -> &[i32] {
        &self.samples
    }

    pub fn frames(&self) -> usize {
        self.samples.len() / self.channels as usize
    }

    pub fn bitrate(&self) -> u64 {
        self.sample_rate as u64 * self.channels as u64 * self.bit_depth as u64
    }

    /// Channel-averaged signal scaled to -1..1.
    fn mono(&self) -> Vec<f64> {
        let full = (1i64 << (self.bit_depth - 1)) as f64;
        self.samples
            .chunks(self.channels as usize)
            .map(|f| f.iter().map(|&s| s as f64).sum::<f64>() / f.len() as f64 / full)
            .collect()
    }
}

/// Signal measurements behind the audio attributes, on the -1..1 scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AudioMeasures {
    /// Mean of per-window peak-to-peak amplitude.
    pub average_loudness: f64,
    /// Fraction of adjacent frame pairs whose sign differs (zero counts
    /// as positive).
    pub zero_crossing_rate: f64,
    pub peak: f64,
    pub rms: f64,
    /// 5th percentile of per-window RMS.
    pub noise_floor: f64,
    pub peak_db: f64,
    /// `20 log10(peak / floor)`; 0 for silence. A zero floor is raised to
    /// one quantisation step.
    pub dynamic_range_db: f64,
    /// Peak over RMS; `None` for silence.
    pub crest_factor: Option<f64>,
}

pub fn audio_measures(a: &PcmAudio) -> AudioMeasures {
    let x = a.mono();
    let windows: Vec<&[f64]> = x.chunks(WINDOW).collect();
    let average_loudness = windows
        .iter()
        .map(|w| {
            let hi = w.iter().copied().fold(f64::MIN, f64::max);
            let lo = w.iter().copied().fold(f64::MAX, f64::min);
            hi - lo
        })
        .sum::<f64>()
        / windows.len() as f64;

    let crossings = x.windows(2).filter(|p| (p[0] < 0.0) != (p[1] < 0.0)).count();
    let zero_crossing_rate = if x.len() > 1 {
        crossings as f64 / (x.len() - 1) as f64
    } else {
        0.0
    };

    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();

    let mut window_rms: Vec<f64> = windows
        .iter()
        .map(|w| (w.iter().map(|v| v * v).sum::<f64>() / w.len() as f64).sqrt())
        .collect();
    window_rms.sort_by(f64::total_cmp);
    let rank = ((window_rms.len() - 1) as f64 * 0.05).round() as usize;
    let noise_floor = window_rms[rank];

    let step = 1.0 / (1i64 << (a.bit_depth - 1)) as f64;
    let peak_db = 20.0 * peak.max(step).log10();
    let dynamic_range_db = if peak == 0.0 {
        0.0
    } else {
        20.0 * (peak / noise_floor.max(step)).log10()
    };

    AudioMeasures {
        average_loudness,
        zero_crossing_rate,
        peak,
        rms,
        noise_floor,
        peak_db,
        dynamic_range_db,
        crest_factor: (rms > 0.0).then(|| peak / rms),
    }
}

/// The ten audio attributes. File size falls back to the PCM payload size
/// plus a 44-byte header when the source size is unknown.
pub fn audio_attributes(object_id: &str, a: &PcmAudio) -> DsnsString {
    let m = audio_measures(a);
    let size = a
        .file_size_bytes
        .unwrap_or(44 + a.samples.len() as u64 * (a.bit_depth as u64 / 8));
    let values = vec![
        Some(a.channels as f64),
        Some(a.sample_rate as f64),
        Some(size as f64),
        a.year.map(f64::from),
        Some(m.average_loudness),
        Some(m.zero_crossing_rate),
        Some(m.dynamic_range_db),
        Some(a.bitrate() as f64),
        Some(a.bit_depth as f64),
        m.crest_factor,
    ];
    DsnsString::new(object_id, SCHEMA.clone(), values).expect("schema width")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(period: usize, cycles: usize, bits: u16, amplitude: f64) -> PcmAudio {
        let full = ((1i64 << (bits - 1)) - 1) as f64;
        let samples = (0..period * cycles)
            .map(|i| {
                let t = i as f64 / period as f64 * std::f64::consts::TAU;
                (t.sin() * amplitude * full).round() as i32
            })
            .collect();
        PcmAudio::new(1, 44_100, bits, samples).unwrap()
    }

    #[test]
    fn sine_crest_factor() {
        let m = audio_measures(&sine(4, 1000, 16, 1.0));
        assert!((m.crest_factor.unwrap() - 2f64.sqrt()).abs() < 1e-6);
        let m = audio_measures(&sine(64, 100, 24, 0.8));
        assert!((m.crest_factor.unwrap() - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn silence() {
        let a = PcmAudio::new(2, 8_000, 16, vec![0; 4096]).unwrap();
        let m = audio_measures(&a);
        assert_eq!(m.zero_crossing_rate, 0.0);
        assert_eq!(m.dynamic_range_db, 0.0);
        assert_eq!(m.crest_factor, None);
        assert_eq!(audio_attributes("z", &a).get("crest_factor"), Some(None));
    }

    #[test]
    fn square_wave() {
        let samples: Vec<i32> = (0..4096).map(|i| if (i / 8) % 2 == 0 { 16_000 } else { -16_000 }).collect();
        let m = audio_measures(&PcmAudio::new(1, 8_000, 16, samples).unwrap());
        assert!((m.crest_factor.unwrap() - 1.0).abs() < 1e-12);
        assert!((m.zero_crossing_rate - 511.0 / 4095.0).abs() < 1e-12);
    }

    #[test]
    fn doubling_amplitude() {
        let quiet = sine(50, 200, 16, 0.25);
        let loud = PcmAudio::new(1, 44_100, 16, quiet.samples().iter().map(|s| s * 2).collect()).unwrap();
        let (q, l) = (audio_measures(&quiet), audio_measures(&loud));
        assert_eq!(q.zero_crossing_rate, l.zero_crossing_rate);
        assert!((q.crest_factor.unwrap() - l.crest_factor.unwrap()).abs() < 1e-12);
        assert!((l.peak_db - q.peak_db - 20.0 * 2f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn header_fields() {
        let a = PcmAudio::new(2, 44_100, 16, vec![1, -1, 2, -2]).unwrap();
        assert_eq!(a.bitrate(), 1_411_200);
        let s = audio_attributes("x", &a);
        assert_eq!(s.get("bit_depth"), Some(Some(16.0)));
        assert_eq!(s.get("file_size_bytes"), Some(Some(52.0)));
        assert!(matches!(PcmAudio::new(2, 1, 16, vec![1]), Err(AttributeError::AudioShape)));
        assert!(matches!(PcmAudio::new(1, 1, 12, vec![1]), Err(AttributeError::BitDepth(12))));
        assert!(matches!(PcmAudio::new(1, 1, 16, vec![]), Err(AttributeError::EmptyAudio)));
    }

    #[test]
    fn wav_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.wav");
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 8_000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(&path, spec).unwrap();
        for s in sine(4, 100, 16, 1.0).samples() {
            w.write_sample(*s as i16).unwrap();
        }
        w.finalize().unwrap();
        let a = PcmAudio::read_wav(&path).unwrap();
        assert_eq!(a.frames(), 400);
        assert_eq!(a.file_size_bytes, Some(std::fs::metadata(&path).unwrap().len()));
    }
}
