//! Transposition table with depth-preferred replacement.
//!
//! Each search bumps a generation counter; entries from older generations
//! read as empty, so every search starts from a logically empty table
//! without clearing memory.

use crate::chess::Move;
use crate::eval::Score;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Exact,
    /// Fail-high: the true score is at least the stored one.
    Lower,
    /// Fail-low: the true score is at most the stored one.
    Upper,
}

#[derive(Clone, Copy, Default)]
struct Slot {
    key: u64,
    generation: u32,
    mv: u16,
    score: i16,
    depth: i16,
    bound: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TtEntry {
    pub key: u64,
    /// Remaining depth in quarter plies.
    pub depth: i32,
    /// Ply-adjusted score, relative to the probing node.
    pub score: Score,
    pub bound: Bound,
    /// From/to/promotion key of the best move, if any.
    pub mv: Option<u16>,
}

impl TtEntry {
    pub fn matches(&self, m: &Move) -> bool {
        self.mv == Some(m.key16())
    }
}

pub struct TranspositionTable {
    slots: Vec<Slot>,
    mask: usize,
    generation: u32,
}

pub const DEFAULT_TT_BITS: u32 = 20;

impl TranspositionTable {
    pub fn new(bits: u32) -> Self {
        let size = 1usize << bits;
        TranspositionTable { slots: vec![Slot::default(); size], mask: size - 1, generation: 1 }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Starts a new search; all previous entries become invisible.
    pub fn new_search(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.slots.fill(Slot::default());
            self.generation = 1;
        }
    }

    #[inline]
    fn index(&self, key: u64) -> usize {
        (key as usize) & self.mask
    }

    pub fn probe(&self, key: u64, ply: usize) -> Option<TtEntry> {
        let s = &self.slots[self.index(key)];
        if s.generation != self.generation || s.key != key {
            return None;
        }
        let bound = match s.bound {
            0 => Bound::Exact,
            1 => Bound::Lower,
            _ => Bound::Upper,
        };
        Some(TtEntry {
            key,
            depth: s.depth as i32,
            score: score_from_tt(Score(s.score as i32), ply),
            bound,
            mv: (s.mv != 0).then_some(s.mv),
        })
    }

    pub fn store(&mut self, key: u64, depth: i32, score: Score, bound: Bound, mv: Option<Move>, ply: usize) {
        let idx = self.index(key);
        let generation = self.generation;
        let s = &mut self.slots[idx];
        let fresh = s.generation == generation;
        if fresh && depth < s.depth as i32 {
            return;
        }
        let keep_move = fresh && s.key == key && mv.is_none();
        let mv = match mv {
            Some(m) => m.key16(),
            None if keep_move => s.mv,
            None => 0,
        };
        *s = Slot {
            key,
            generation,
            mv,
            score: score_to_tt(score, ply).0 as i16,
            depth: depth.clamp(i16::MIN as i32, i16::MAX as i32) as i16,
            bound: match bound {
                Bound::Exact => 0,
                Bound::Lower => 1,
                Bound::Upper => 2,
            },
        };
    }
}

/// Mate scores are stored relative to the node, not the root.
#[inline]
fn score_to_tt(s: Score, ply: usize) -> Score {
    if s.0 > Score::MATE_THRESHOLD {
        Score(s.0 + ply as i32)
    } else if s.0 < -Score::MATE_THRESHOLD {
        Score(s.0 - ply as i32)
    } else {
        s
    }
}

#[inline]
fn score_from_tt(s: Score, ply: usize) -> Score {
    if s.0 > Score::MATE_THRESHOLD {
        Score(s.0 - ply as i32)
    } else if s.0 < -Score::MATE_THRESHOLD {
        Score(s.0 + ply as i32)
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::{find_uci_move, Position};

    #[test]
    fn store_probe_and_generations() {
        let mut tt = TranspositionTable::new(10);
        let m = find_uci_move(&Position::startpos(), "e2e4").unwrap();
        tt.store(42, 8, Score(35), Bound::Lower, Some(m), 0);
        let e = tt.probe(42, 0).unwrap();
        assert_eq!((e.depth, e.score, e.bound), (8, Score(35), Bound::Lower));
        assert!(e.matches(&m));
        assert!(tt.probe(43, 0).is_none());
        tt.new_search();
        assert!(tt.probe(42, 0).is_none());
    }

    #[test]
    fn depth_preferred_replacement() {
        let mut tt = TranspositionTable::new(4);
        tt.store(1, 12, Score(10), Bound::Exact, None, 0);
        // Same slot (index 1 of 16), shallower: kept out.
        tt.store(17, 4, Score(20), Bound::Exact, None, 0);
        assert!(tt.probe(17, 0).is_none());
        tt.store(17, 12, Score(20), Bound::Exact, None, 0);
        assert_eq!(tt.probe(17, 0).unwrap().score, Score(20));
    }

    #[test]
    fn mate_scores_are_ply_relative() {
        let mut tt = TranspositionTable::new(4);
        // Mate found 5 plies from root while at ply 3: mate in 2 from here.
        tt.store(5, 4, Score::mate_in(5), Bound::Exact, None, 3);
        assert_eq!(tt.probe(5, 1).unwrap().score, Score::mate_in(3));
    }
}
