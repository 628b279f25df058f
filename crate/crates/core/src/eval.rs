//! Fixed static evaluation: material plus piece-square tables.
//!
//! The evaluator is deliberately constant; only search parameters evolve.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::chess::bitboard::squares;
use crate::chess::{Color, PieceKind, Position};

/// Side-to-move-relative score in centipawns, with mate scores encoded as
/// `±(MATE_BOUND - plies to mate)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Score(pub i32);

impl Score {
    pub const MATE_BOUND: i32 = 30_000;
    /// Scores beyond this magnitude are mate scores.
    pub const MATE_THRESHOLD: i32 = Self::MATE_BOUND - 1_000;
    pub const INFINITE: Score = Score(Self::MATE_BOUND + 1);
    pub const ZERO: Score = Score(0);
    pub const DRAW: Score = Score(0);

    /// Score for delivering mate `ply` plies from the root.
    #[inline]
    pub const fn mate_in(ply: u32) -> Score {
        Score(Self::MATE_BOUND - ply as i32)
    }

    /// Score for being mated `ply` plies from the root.
    #[inline]
    pub const fn mated_in(ply: u32) -> Score {
        Score(-Self::MATE_BOUND + ply as i32)
    }

    #[inline]
    pub const fn is_mate(self) -> bool {
        self.0.abs() > Self::MATE_THRESHOLD && self.0.abs() <= Self::MATE_BOUND
    }

    /// True when the side to move is getting mated.
    #[inline]
    pub const fn is_mated(self) -> bool {
        self.0 < -Self::MATE_THRESHOLD
    }

    #[inline]
    pub const fn value(self) -> i32 {
        self.0
    }
}

impl Neg for Score {
    type Output = Score;
    #[inline]
    fn neg(self) -> Score {
        Score(-self.0)
    }
}

impl Add<i32> for Score {
    type Output = Score;
    #[inline]
    fn add(self, rhs: i32) -> Score {
        Score(self.0 + rhs)
    }
}

impl Sub<i32> for Score {
    type Output = Score;
    #[inline]
    fn sub(self, rhs: i32) -> Score {
        Score(self.0 - rhs)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_mate() {
            let plies = Self::MATE_BOUND - self.0.abs();
            let moves = (plies + 1) / 2;
            if self.0 > 0 {
                write!(f, "mate {moves}")
            } else {
                write!(f, "mate -{moves}")
            }
        } else {
            write!(f, "cp {}", self.0)
        }
    }
}

pub const PAWN_VALUE: i32 = 100;
pub const KNIGHT_VALUE: i32 = 320;
pub const BISHOP_VALUE: i32 = 330;
pub const ROOK_VALUE: i32 = 500;
pub const QUEEN_VALUE: i32 = 900;

/// Material value by piece kind; the king has none.
pub const PIECE_VALUES: [i32; 6] = [PAWN_VALUE, KNIGHT_VALUE, BISHOP_VALUE, ROOK_VALUE, QUEEN_VALUE, 0];

// Tables are written rank 8 first, as seen from white's side of the board.
#[rustfmt::skip]
const PAWN_PST: [i32; 64] = [
     0,  0,  0,  0,  0,  0,  0,  0,
    50, 50, 50, 50, 50, 50, 50, 50,
    10, 10, 20, 30, 30, 20, 10, 10,
     5,  5, 10, 25, 25, 10,  5,  5,
     0,  0,  0, 20, 20,  0,  0,  0,
     5, -5,-10,  0,  0,-10, -5,  5,
     5, 10, 10,-20,-20, 10, 10,  5,
     0,  0,  0,  0,  0,  0,  0,  0,
];

#[rustfmt::skip]
const KNIGHT_PST: [i32; 64] = [
   -50,-40,-30,-30,-30,-30,-40,-50,
   -40,-20,  0,  0,  0,  0,-20,-40,
   -30,  0, 10, 15, 15, 10,  0,-30,
   -30,  5, 15, 20, 20, 15,  5,-30,
   -30,  0, 15, 20, 20, 15,  0,-30,
   -30,  5, 10, 15, 15, 10,  5,-30,
   -40,-20,  0,  5,  5,  0,-20,-40,
   -50,-40,-30,-30,-30,-30,-40,-50,
];

#[rustfmt::skip]
const BISHOP_PST: [i32; 64] = [
   -20,-10,-10,-10,-10,-10,-10,-20,
   -10,  0,  0,  0,  0,  0,  0,-10,
   -10,  0,  5, 10, 10,  5,  0,-10,
   -10,  5,  5, 10, 10,  5,  5,-10,
   -10,  0, 10, 10, 10, 10,  0,-10,
   -10, 10, 10, 10, 10, 10, 10,-10,
   -10,  5,  0,  0,  0,  0,  5,-10,
   -20,-10,-10,-10,-10,-10,-10,-20,
];

#[rustfmt::skip]
const ROOK_PST: [i32; 64] = [
     0,  0,  0,  0,  0,  0,  0,  0,
     5, 10, 10, 10, 10, 10, 10,  5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
    -5,  0,  0,  0,  0,  0,  0, -5,
     0,  0,  0,  5,  5,  0,  0,  0,
];

#[rustfmt::skip]
const QUEEN_PST: [i32; 64] = [
   -20,-10,-10, -5, -5,-10,-10,-20,
   -10,  0,  0,  0,  0,  0,  0,-10,
   -10,  0,  5,  5,  5,  5,  0,-10,
    -5,  0,  5,  5,  5,  5,  0, -5,
     0,  0,  5,  5,  5,  5,  0, -5,
   -10,  5,  5,  5,  5,  5,  0,-10,
   -10,  0,  5,  0,  0,  0,  0,-10,
   -20,-10,-10, -5, -5,-10,-10,-20,
];

#[rustfmt::skip]
const KING_MIDDLE_PST: [i32; 64] = [
   -30,-40,-40,-50,-50,-40,-40,-30,
   -30,-40,-40,-50,-50,-40,-40,-30,
   -30,-40,-40,-50,-50,-40,-40,-30,
   -30,-40,-40,-50,-50,-40,-40,-30,
   -20,-30,-30,-40,-40,-30,-30,-20,
   -10,-20,-20,-20,-20,-20,-20,-10,
    20, 20,  0,  0,  0,  0, 20, 20,
    20, 30, 10,  0,  0, 10, 30, 20,
];

#[rustfmt::skip]
const KING_END_PST: [i32; 64] = [
   -50,-40,-30,-20,-20,-30,-40,-50,
   -30,-20,-10,  0,  0,-10,-20,-30,
   -30,-10, 20, 30, 30, 20,-10,-30,
   -30,-10, 30, 40, 40, 30,-10,-30,
   -30,-10, 30, 40, 40, 30,-10,-30,
   -30,-10, 20, 30, 30, 20,-10,-30,
   -30,-30,  0,  0,  0,  0,-30,-30,
   -50,-30,-30,-30,-30,-30,-30,-50,
];

const PSTS: [&[i32; 64]; 5] = [&PAWN_PST, &KNIGHT_PST, &BISHOP_PST, &ROOK_PST, &QUEEN_PST];

/// Non-pawn material (both sides) at or below which the endgame king table
/// applies.
const ENDGAME_MATERIAL: i32 = 2 * (ROOK_VALUE + BISHOP_VALUE);

/// Piece-square bonus for a piece of `color` and `kind` on square index `sq`
/// (0 = a1). Kings use the middlegame table.
pub fn pst_value(color: Color, kind: PieceKind, sq: usize) -> i32 {
    // Tables are stored rank 8 first; flip for white, keep for black.
    let idx = match color {
        Color::White => sq ^ 56,
        Color::Black => sq,
    };
    match kind {
        PieceKind::King => KING_MIDDLE_PST[idx],
        k => PSTS[k.index()][idx],
    }
}

fn is_endgame(pos: &Position) -> bool {
    let mut npm = 0;
    for kind in [PieceKind::Knight, PieceKind::Bishop, PieceKind::Rook, PieceKind::Queen] {
        npm += pos.kind_bb(kind).count_ones() as i32 * PIECE_VALUES[kind.index()];
    }
    npm <= ENDGAME_MATERIAL
}

/// Static score from white's point of view.
pub fn evaluate_white(pos: &Position) -> i32 {
    let endgame = is_endgame(pos);
    let mut total = 0;
    for color in Color::ALL {
        let mut side = 0;
        for kind in PieceKind::ALL {
            for sq in squares(pos.pieces(color, kind)) {
                side += PIECE_VALUES[kind.index()];
                side += if kind == PieceKind::King && endgame {
                    let idx = match color {
                        Color::White => sq.index() ^ 56,
                        Color::Black => sq.index(),
                    };
                    KING_END_PST[idx]
                } else {
                    pst_value(color, kind, sq.index())
                };
            }
        }
        total += color.sign() * side;
    }
    total
}

/// Static score relative to the side to move.
pub fn evaluate_static(pos: &Position) -> Score {
    Score(pos.side_to_move().sign() * evaluate_white(pos))
}
