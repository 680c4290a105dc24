//! Attribute recombination for computational creativity, applied to the
//! automatic composition of orthodox mate-in-3 chess problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`chess`]: positions, FEN/SAN, legal moves, position metrics.
//! * [`solver`]: forced mate-in-N search with cook and dual detection.
//! * [`dsns`]: attribute strings, deviation arithmetic, the merge rule and
//!   the three-stage matching search.
//! * [`attributes`]: extractors for chess sequences, raster images and PCM
//!   audio.
//! * [`composer`]: the placement pipeline, optimiser, conventions, baseline
//!   strategies and the cycle driver.
//! * [`corpus`]: PGN, attribute CSV, config files and the bundled
//!   regression corpus.

pub mod attributes;
pub mod composer;
pub mod chess;
pub mod corpus;
pub mod dsns;
pub mod solver;
