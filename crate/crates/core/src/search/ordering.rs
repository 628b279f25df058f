//! Move ordering: hash move, MVV-LVA captures, killers, history.

use crate::chess::{Color, Move, MoveList};
use crate::eval::PIECE_VALUES;

use super::MAX_PLY;

const HASH_MOVE: i32 = 1_000_000;
const TACTICAL: i32 = 100_000;
const KILLER_1: i32 = 90_000;
const KILLER_2: i32 = 89_000;
const HISTORY_LIMIT: i32 = 60_000;

/// Most valuable victim, least valuable attacker; promotions count the
/// promoted piece's gain.
#[inline]
pub fn mvv_lva(m: &Move) -> i32 {
    let victim = m.captured.map_or(0, |k| PIECE_VALUES[k.index()]);
    let promo = m.promotion.map_or(0, |k| PIECE_VALUES[k.index()]);
    (victim + promo) * 16 - m.piece.index() as i32
}

pub struct MoveOrderer {
    killers: Vec<[Option<Move>; 2]>,
    history: Box<[[[i32; 64]; 64]; 2]>,
}

impl Default for MoveOrderer {
    fn default() -> Self {
        Self::new()
    }
}

impl MoveOrderer {
    pub fn new() -> Self {
        MoveOrderer { killers: vec![[None; 2]; MAX_PLY + 1], history: Box::new([[[0; 64]; 64]; 2]) }
    }

    pub fn clear(&mut self) {
        self.killers.iter_mut().for_each(|k| *k = [None; 2]);
        for side in self.history.iter_mut() {
            for row in side.iter_mut() {
                row.fill(0);
            }
        }
    }

    /// Sorts `moves` best-first. Equal scores keep generation order.
    pub fn order(&self, moves: &mut MoveList, hash_move: Option<u16>, ply: usize, side: Color) {
        let mut scored: arrayvec::ArrayVec<(i32, Move), { crate::chess::MAX_MOVES }> =
            moves.iter().map(|&m| (self.score(&m, hash_move, ply, side), m)).collect();
        insertion_sort_desc(&mut scored);
        moves.clear();
        moves.extend(scored.into_iter().map(|(_, m)| m));
    }

    fn score(&self, m: &Move, hash_move: Option<u16>, ply: usize, side: Color) -> i32 {
        if hash_move == Some(m.key16()) {
            HASH_MOVE
        } else if m.is_tactical() {
            TACTICAL + mvv_lva(m)
        } else if self.killers[ply][0] == Some(*m) {
            KILLER_1
        } else if self.killers[ply][1] == Some(*m) {
            KILLER_2
        } else {
            self.history[side.index()][m.from.index()][m.to.index()]
        }
    }

    /// Records a quiet move that caused a beta cutoff.
    pub fn record_cutoff(&mut self, m: Move, ply: usize, side: Color, depth_plies: i32) {
        if m.is_tactical() {
            return;
        }
        let k = &mut self.killers[ply];
        if k[0] != Some(m) {
            k[1] = k[0];
            k[0] = Some(m);
        }
        let h = &mut self.history[side.index()][m.from.index()][m.to.index()];
        *h += depth_plies * depth_plies;
        if *h > HISTORY_LIMIT {
            for row in self.history[side.index()].iter_mut() {
                row.iter_mut().for_each(|v| *v /= 2);
            }
        }
    }
}

/// Sorts tactical moves by MVV-LVA, stable.
pub fn order_tactical(moves: &mut MoveList) {
    let mut scored: arrayvec::ArrayVec<(i32, Move), { crate::chess::MAX_MOVES }> =
        moves.iter().map(|&m| (mvv_lva(&m), m)).collect();
    insertion_sort_desc(&mut scored);
    moves.clear();
    moves.extend(scored.into_iter().map(|(_, m)| m));
}

/// Stable descending sort by score; move lists are short.
fn insertion_sort_desc(items: &mut [(i32, Move)]) {
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && items[j - 1].0 < items[j].0 {
            items.swap(j - 1, j);
            j -= 1;
        }
    }
}
