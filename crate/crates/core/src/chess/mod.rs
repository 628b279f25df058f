//! Chess rules kernel: board, legal move generation, make/unmake, hashing,
//! and FEN/EPD/SAN ingestion.

pub mod bitboard;
mod epd;
mod fen;
mod movegen;
mod perft;
mod position;
mod san;
mod types;
mod zobrist;

pub use epd::{parse_epd_file, EpdError, EpdLineError, EpdRecord};
pub use fen::{FenError, START_FEN};
pub use movegen::{
    find_uci_move, generate, generate_legal_moves, generate_tactical_moves, has_legal_move, GenMode, MoveList,
    MAX_MOVES,
};
pub use perft::{divide, perft};
pub use position::{Position, Undo};
pub use san::{parse_san, to_san, SanError};
pub use types::{CastlingRights, Color, Move, MoveKind, Piece, PieceKind, Square};
