//! Bitboard constants and precomputed attack tables.
//!
//! All tables are built at compile time. Sliding attacks use the classical
//! ray approach: one ray per direction, cut at the first blocker.

use super::types::{Color, Square};

pub const FILE_A: u64 = 0x0101_0101_0101_0101;
pub const FILE_H: u64 = FILE_A << 7;
pub const RANK_1: u64 = 0xFF;
pub const RANK_2: u64 = RANK_1 << 8;
pub const RANK_7: u64 = RANK_1 << 48;
pub const RANK_8: u64 = RANK_1 << 56;
pub const LIGHT_SQUARES: u64 = 0x55AA_55AA_55AA_55AA;

/// Direction deltas as (file, rank). Indices 0..4 grow the square index,
/// 4..8 shrink it.
const DIRS: [(i8, i8); 8] = [
    (0, 1),   // N
    (1, 1),   // NE
    (1, 0),   // E
    (-1, 1),  // NW
    (0, -1),  // S
    (-1, -1), // SW
    (-1, 0),  // W
    (1, -1),  // SE
];

const N: usize = 0;
const NE: usize = 1;
const E: usize = 2;
const NW: usize = 3;
const S: usize = 4;
const SW: usize = 5;
const W: usize = 6;
const SE: usize = 7;

const fn offset_bb(sq: usize, df: i8, dr: i8) -> u64 {
    let f = (sq % 8) as i8 + df;
    let r = (sq / 8) as i8 + dr;
    if f < 0 || f > 7 || r < 0 || r > 7 {
        0
    } else {
        1u64 << (r * 8 + f)
    }
}

const fn build_leaper(deltas: &[(i8, i8)]) -> [u64; 64] {
    let mut table = [0u64; 64];
    let mut sq = 0;
    while sq < 64 {
        let mut i = 0;
        while i < deltas.len() {
            table[sq] |= offset_bb(sq, deltas[i].0, deltas[i].1);
            i += 1;
        }
        sq += 1;
    }
    table
}

const fn build_pawn_attacks() -> [[u64; 64]; 2] {
    let mut table = [[0u64; 64]; 2];
    let mut sq = 0;
    while sq < 64 {
        table[0][sq] = offset_bb(sq, -1, 1) | offset_bb(sq, 1, 1);
        table[1][sq] = offset_bb(sq, -1, -1) | offset_bb(sq, 1, -1);
        sq += 1;
    }
    table
}

const fn build_rays() -> [[u64; 64]; 8] {
    let mut rays = [[0u64; 64]; 8];
    let mut d = 0;
    while d < 8 {
        let mut sq = 0;
        while sq < 64 {
            let mut f = (sq % 8) as i8;
            let mut r = (sq / 8) as i8;
            let mut bb = 0u64;
            loop {
                f += DIRS[d].0;
                r += DIRS[d].1;
                if f < 0 || f > 7 || r < 0 || r > 7 {
                    break;
                }
                bb |= 1u64 << (r * 8 + f);
            }
            rays[d][sq] = bb;
            sq += 1;
        }
        d += 1;
    }
    rays
}

pub static KNIGHT_ATTACKS: [u64; 64] = build_leaper(&[
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
    (-1, -2),
    (-2, -1),
    (-2, 1),
    (-1, 2),
]);

pub static KING_ATTACKS: [u64; 64] = build_leaper(&[
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
]);

/// `PAWN_ATTACKS[color][sq]`: squares a pawn of `color` on `sq` attacks.
pub static PAWN_ATTACKS: [[u64; 64]; 2] = build_pawn_attacks();

static RAYS: [[u64; 64]; 8] = build_rays();

const fn build_between() -> [[u64; 64]; 64] {
    let rays = build_rays();
    let mut table = [[0u64; 64]; 64];
    let mut a = 0;
    while a < 64 {
        let mut d = 0;
        while d < 8 {
            let ray = rays[d][a];
            let mut b = 0;
            while b < 64 {
                if ray & (1u64 << b) != 0 {
                    // squares on the ray from a strictly before b
                    table[a][b] = ray & !rays[d][b] & !(1u64 << b);
                }
                b += 1;
            }
            d += 1;
        }
        a += 1;
    }
    table
}

const fn build_line() -> [[u64; 64]; 64] {
    let rays = build_rays();
    let mut table = [[0u64; 64]; 64];
    let mut a = 0;
    while a < 64 {
        let mut d = 0;
        while d < 8 {
            let ray = rays[d][a];
            let opposite = rays[(d + 4) % 8][a];
            let mut b = 0;
            while b < 64 {
                if ray & (1u64 << b) != 0 {
                    table[a][b] = ray | opposite | (1u64 << a);
                }
                b += 1;
            }
            d += 1;
        }
        a += 1;
    }
    table
}

/// Squares strictly between two aligned squares; empty otherwise.
pub static BETWEEN: [[u64; 64]; 64] = build_between();
/// Full board line through two aligned squares; empty otherwise.
pub static LINE: [[u64; 64]; 64] = build_line();

#[inline]
fn ray_positive(dir: usize, sq: usize, occ: u64) -> u64 {
    let ray = RAYS[dir][sq];
    let blockers = ray & occ;
    if blockers == 0 {
        ray
    } else {
        ray ^ RAYS[dir][blockers.trailing_zeros() as usize]
    }
}

#[inline]
fn ray_negative(dir: usize, sq: usize, occ: u64) -> u64 {
    let ray = RAYS[dir][sq];
    let blockers = ray & occ;
    if blockers == 0 {
        ray
    } else {
        ray ^ RAYS[dir][63 - blockers.leading_zeros() as usize]
    }
}

#[inline]
pub fn bishop_attacks(sq: Square, occ: u64) -> u64 {
    let s = sq.index();
    ray_positive(NE, s, occ) | ray_positive(NW, s, occ) | ray_negative(SW, s, occ) | ray_negative(SE, s, occ)
}

#[inline]
pub fn rook_attacks(sq: Square, occ: u64) -> u64 {
    let s = sq.index();
    ray_positive(N, s, occ) | ray_positive(E, s, occ) | ray_negative(S, s, occ) | ray_negative(W, s, occ)
}

#[inline]
pub fn queen_attacks(sq: Square, occ: u64) -> u64 {
    bishop_attacks(sq, occ) | rook_attacks(sq, occ)
}

#[inline]
pub fn pawn_attacks(color: Color, sq: Square) -> u64 {
    PAWN_ATTACKS[color.index()][sq.index()]
}

#[inline]
pub fn knight_attacks(sq: Square) -> u64 {
    KNIGHT_ATTACKS[sq.index()]
}

#[inline]
pub fn king_attacks(sq: Square) -> u64 {
    KING_ATTACKS[sq.index()]
}

#[inline]
pub fn between(a: Square, b: Square) -> u64 {
    BETWEEN[a.index()][b.index()]
}

#[inline]
pub fn line(a: Square, b: Square) -> u64 {
    LINE[a.index()][b.index()]
}

/// Iterates the set squares of a bitboard, lowest first.
#[derive(Clone, Copy)]
pub struct Squares(pub u64);

impl Iterator for Squares {
    type Item = Square;

    #[inline]
    fn next(&mut self) -> Option<Square> {
        if self.0 == 0 {
            None
        } else {
            let sq = self.0.trailing_zeros() as u8;
            self.0 &= self.0 - 1;
            Some(Square::new(sq))
        }
    }
}

#[inline]
pub fn squares(bb: u64) -> Squares {
    Squares(bb)
}

/// Files adjacent to and including `file`.
pub fn adjacent_files_inclusive(file: u8) -> u64 {
    let f = FILE_A << file;
    f | ((f << 1) & !FILE_A) | ((f >> 1) & !FILE_H)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(s: &str) -> Square {
        s.parse().unwrap()
    }

    #[test]
    fn leaper_counts() {
        assert_eq!(knight_attacks(sq("a1")).count_ones(), 2);
        assert_eq!(knight_attacks(sq("d4")).count_ones(), 8);
        assert_eq!(king_attacks(sq("h8")).count_ones(), 3);
        assert_eq!(pawn_attacks(Color::White, sq("a2")), sq("b3").bb());
        assert_eq!(pawn_attacks(Color::Black, sq("e5")), sq("d4").bb() | sq("f4").bb());
    }

    #[test]
    fn sliders_stop_at_blockers() {
        let occ = sq("d6").bb() | sq("f4").bb();
        let att = rook_attacks(sq("d4"), occ);
        assert!(att & sq("d6").bb() != 0);
        assert!(att & sq("d7").bb() == 0);
        assert!(att & sq("f4").bb() != 0);
        assert!(att & sq("g4").bb() == 0);
        assert_eq!(rook_attacks(sq("a1"), 0).count_ones(), 14);
        assert_eq!(bishop_attacks(sq("d4"), 0).count_ones(), 13);
    }

    #[test]
    fn between_and_line() {
        assert_eq!(between(sq("a1"), sq("d4")), sq("b2").bb() | sq("c3").bb());
        assert_eq!(between(sq("d4"), sq("a1")), sq("b2").bb() | sq("c3").bb());
        assert_eq!(between(sq("a1"), sq("b3")), 0);
        assert_eq!(line(sq("a1"), sq("c3")).count_ones(), 8);
        assert_eq!(line(sq("b1"), sq("b5")), FILE_A << 1);
    }
}
