//! Chess positions, legal move generation, notation and the position
//! metrics consumed by the attribute extractor and the composer.

pub(crate) mod attacks;
mod fen;
mod metrics;
mod position;
mod san;
mod types;

pub use fen::{board_fen, emit_fen, parse_fen, FenError};
pub use metrics::{flight_squares, material_difference, shannon_value, sparsity};
pub use position::{perft, IllegalPosition, Position};
pub use san::{parse_san, to_san, SanError};
pub use types::{CastlingRights, Color, Move, ParseSquareError, Piece, PieceKind, Square};
