use std::collections::HashSet;
use std::path::Path;
use std::sync::{Arc, LazyLock};

use super::{schema_of, AttributeError};
use crate::dsns::DsnsString;

pub const IMAGE_SCHEMA: [&str; 10] = [
    "pixels",
    "colors",
    "objects",
    "year",
    "aspect_ratio",
    "brightness",
    "contrast",
    "noisiness",
    "lightness",
    "file_size_bits",
];

static SCHEMA: LazyLock<Arc<[String]>> = LazyLock::new(|| schema_of(&IMAGE_SCHEMA));

/// An 8-bit raster, grey (1 channel) or RGB (3 channels), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    samples: Vec<u8>,
    pub year: Option<i32>,
    /// Counted by a person; never computed here.
    pub objects: Option<u32>,
    /// Size of the source file when known.
    pub file_size_bits: Option<u64>,
}

impl RasterImage {
    pub fn new(width: u32, height: u32, channels: u8, samples: Vec<u8>) -> Result<Self, AttributeError> {
        if width == 0 || height == 0 {
            return Err(AttributeError::EmptyImage);
        }
        if !matches!(channels, 1 | 3) || samples.len() != width as usize * height as usize * channels as usize {
            return Err(AttributeError::ImageShape);
        }
        Ok(RasterImage {
            width,
            height,
            channels,
            samples,
            year: None,
            objects: None,
            file_size_bits: None,
        })
    }

    /// Reads a binary PGM (P5) or PPM (P6) file.
    pub fn read_pnm(path: &Path) -> Result<Self, AttributeError> {
        let decode = |e: image::ImageError| AttributeError::Decode {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        let bytes = std::fs::read(path)?;
        let img = image::load_from_memory_with_format(&bytes, image::ImageFormat::Pnm).map_err(decode)?;
        let (width, height) = (img.width(), img.height());
        let mut raster = match img.color().channel_count() {
            1 | 2 => RasterImage::new(width, height, 1, img.into_luma8().into_raw())?,
            _ => RasterImage::new(width, height, 3, img.into_rgb8().into_raw())?,
        };
        raster.file_size_bits = Some(bytes.len() as u64 * 8);
        Ok(raster)
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    fn rgb(&self, i: usize) -> [f64; 3] {
        if self.channels == 1 {
            let v = self.samples[i] as f64;
            [v; 3]
        } else {
            let s = &self.samples[i * 3..i * 3 + 3];
            [s[0] as f64, s[1] as f64, s[2] as f64]
        }
    }

    fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Rec. 601 luma per pixel, 0..=255.
    fn luma(&self) -> Vec<f64> {
        (0..self.pixel_count())
            .map(|i| {
                let [r, g, b] = self.rgb(i);
                0.299 * r + 0.587 * g + 0.114 * b
            })
            .collect()
    }
}

/// The ten image attributes.
///
/// Brightness is mean luma, contrast the standard deviation of luma,
/// noisiness the mean absolute response of the 4-neighbour Laplacian on
/// luma (edges replicated), and lightness the mean HSL lightness
/// `(max + min) / 2`. All four are on the 0..255 scale. File size falls
/// back to the decoded raster size when the source size is unknown.
pub fn image_attributes(object_id: &str, img: &RasterImage) -> DsnsString {
    let n = img.pixel_count();
    let luma = img.luma();
    let brightness = luma.iter().sum::<f64>() / n as f64;
    let contrast = (luma.iter().map(|l| (l - brightness).powi(2)).sum::<f64>() / n as f64).sqrt();

    let (w, h) = (img.width as usize, img.height as usize);
    let at = |x: isize, y: isize| {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        luma[y * w + x]
    };
    let mut laplacian = 0.0;
    for y in 0..h as isize {
        for x in 0..w as isize {
            let r = at(x - 1, y) + at(x + 1, y) + at(x, y - 1) + at(x, y + 1) - 4.0 * at(x, y);
            laplacian += r.abs();
        }
    }
    let noisiness = laplacian / n as f64;

    let lightness = (0..n)
        .map(|i| {
            let [r, g, b] = img.rgb(i);
            (r.max(g).max(b) + r.min(g).min(b)) / 2.0
        })
        .sum::<f64>()
        / n as f64;

    let colors: HashSet<&[u8]> = img.samples.chunks(img.channels as usize).collect();
    let file_bits = img
        .file_size_bits
        .unwrap_or(img.samples.len() as u64 * 8);

    let values = vec![
        Some(n as f64),
        Some(colors.len() as f64),
        img.objects.map(f64::from),
        img.year.map(f64::from),
        Some(img.width as f64 / img.height as f64),
        Some(brightness),
        Some(contrast),
        Some(noisiness),
        Some(lightness),
        Some(file_bits as f64),
    ];
    DsnsString::new(object_id, SCHEMA.clone(), values).expect("schema width")
}
