//! Extractors that turn domain objects into attribute strings: chess move
//! sequences, raster images and PCM audio. Each domain has a fixed
//! ten-attribute schema.

mod audio;
mod chess;
mod image;

pub use self::audio::{audio_attributes, audio_measures, AudioMeasures, PcmAudio, AUDIO_SCHEMA};
pub use self::chess::{chess_attributes, ChessSequence, CHESS_SCHEMA};
pub use self::image::{image_attributes, RasterImage, IMAGE_SCHEMA};

use std::sync::Arc;

use crate::chess::SanError;

#[derive(Debug, thiserror::Error)]
pub enum AttributeError {
    #[error("move {index} is illegal: {source}")]
    IllegalMove { index: usize, source: SanError },
    #[error("move {0} is not legal in its position")]
    IllegalSequence(usize),
    #[error("image has a zero dimension")]
    EmptyImage,
    #[error("image sample buffer does not match its dimensions")]
    ImageShape,
    #[error("audio has no frames")]
    EmptyAudio,
    #[error("audio sample count is not a multiple of the channel count")]
    AudioShape,
    #[error("unsupported bit depth {0}")]
    BitDepth(u16),
    #[error("cannot decode {path}: {message}")]
    Decode { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn schema_of(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect()
}
