//! Parameterized PVS searcher.
//!
//! Depth is tracked in quarter plies so fractional extensions accumulate
//! along a line. Node accounting: every entry into the main search,
//! quiescence, a null-move verification search or a multi-cut probe counts
//! exactly one node, and the budget is checked at each entry.

mod ordering;
mod params;
mod selective;
mod tt;

use std::time::{Duration, Instant};

use crate::chess::{generate_legal_moves, generate_tactical_moves, Move, Position, Square};
use crate::eval::{evaluate_static, Score};

pub use ordering::{mvv_lva, MoveOrderer};
pub use params::{ParamError, SearchParams, PARAM_RANGES};
pub use selective::{
    compute_extension, effective_null_reduction, futility_margin, futility_prunes, multicut_applies,
    multicut_probe_depth, null_move_allowed, null_search_depth, ExtensionContext, FutilityOutcome, MultiCutOutcome,
    NullMoveOutcome, MAX_EXTENSION_UNITS,
};
pub use tt::{Bound, TranspositionTable, TtEntry, DEFAULT_TT_BITS};

/// Depth units per ply.
pub const ONE_PLY: i32 = 4;
pub const MAX_PLY: usize = 128;
pub const DEFAULT_MAX_DEPTH: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchWindow {
    pub alpha: Score,
    pub beta: Score,
}

impl SearchWindow {
    pub fn new(alpha: Score, beta: Score) -> Self {
        assert!(alpha < beta, "empty window [{alpha}, {beta}]");
        SearchWindow { alpha, beta }
    }

    pub fn full() -> Self {
        SearchWindow { alpha: -Score::INFINITE, beta: Score::INFINITE }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_depth: u32,
    /// Wall-clock limit. Makes results timing dependent.
    pub max_time: Option<Duration>,
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        assert!(max_nodes >= 1, "node budget must be positive");
        SearchBudget { max_nodes, max_depth: DEFAULT_MAX_DEPTH, max_time: None }
    }

    pub fn depth(max_depth: u32) -> Self {
        SearchBudget { max_nodes: u64::MAX, max_depth, max_time: None }
    }

    pub fn with_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }
}

/// Engine-level switches that are not part of the evolvable record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Allow transposition-table score cutoffs (move hints are always used).
    pub tt_cutoffs: bool,
    pub internal_iterative_deepening: bool,
    /// log2 of the transposition-table entry count.
    pub tt_bits: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { tt_cutoffs: true, internal_iterative_deepening: true, tt_bits: DEFAULT_TT_BITS }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// `None` only when the root has no legal move.
    pub best_move: Option<Move>,
    pub score: Score,
    pub nodes: u64,
    pub depth_completed: u32,
    pub aborted: bool,
}

/// Summary handed to the per-iteration callback.
#[derive(Clone, Copy, Debug)]
pub struct IterationInfo {
    pub depth: u32,
    pub best_move: Move,
    pub score: Score,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationControl {
    Continue,
    Stop,
}

/// Node counter with budget enforcement.
#[derive(Clone, Debug)]
struct NodeMeter {
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl NodeMeter {
    fn unlimited() -> Self {
        NodeMeter { nodes: 0, max_nodes: u64::MAX, deadline: None, aborted: false }
    }

    /// Counts a node entry, or flags the abort and returns false when the
    /// budget is spent.
    #[inline]
    fn enter(&mut self) -> bool {
        if self.aborted {
            return false;
        }
        if self.nodes >= self.max_nodes {
            self.aborted = true;
            return false;
        }
        if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(1024) && Instant::now() >= deadline {
                self.aborted = true;
                return false;
            }
        }
        self.nodes += 1;
        true
    }
}

/// Quiescence search: stand pat, then captures and promotions; all
/// evasions when in check. Fail-soft. Does not count the node itself.
fn qsearch_node(pos: &mut Position, meter: &mut NodeMeter, mut alpha: Score, beta: Score, ply: usize) -> Score {
    if ply >= MAX_PLY {
        return evaluate_static(pos);
    }
    let in_check = pos.in_check();
    let mut moves;
    let mut best;
    if in_check {
        moves = generate_legal_moves(pos);
        if moves.is_empty() {
            return Score::mated_in(ply as u32);
        }
        best = -Score::INFINITE;
    } else {
        let stand_pat = evaluate_static(pos);
        if stand_pat >= beta {
            return stand_pat;
        }
        best = stand_pat;
        if stand_pat > alpha {
            alpha = stand_pat;
        }
        moves = generate_tactical_moves(pos);
    }
    ordering::order_tactical(&mut moves);
    for m in moves {
        if !meter.enter() {
            return Score::ZERO;
        }
        let undo = pos.make_move(m);
        let score = -qsearch_node(pos, meter, -beta, -alpha, ply + 1);
        pos.unmake_move(undo);
        if meter.aborted {
            return Score::ZERO;
        }
        if score > best {
            best = score;
            if score > alpha {
                alpha = score;
                if alpha >= beta {
                    break;
                }
            }
        }
    }
    best
}

/// Quiescence value of `pos` within `window`, without a node limit.
pub fn quiescence(pos: &Position, window: SearchWindow) -> Score {
    quiescence_counted(pos, window).0
}

/// Quiescence value and number of nodes visited (the root node included).
pub fn quiescence_counted(pos: &Position, window: SearchWindow) -> (Score, u64) {
    let mut p = pos.clone();
    let mut meter = NodeMeter::unlimited();
    meter.enter();
    let score = qsearch_node(&mut p, &mut meter, window.alpha, window.beta, 0);
    (score, meter.nodes)
}

/// A reusable search instance: transposition table, killers, history and
/// node meter. Confined to one thread.
pub struct Searcher {
    pos: Position,
    params: SearchParams,
    options: SearchOptions,
    tt: TranspositionTable,
    orderer: MoveOrderer,
    meter: NodeMeter,
    root_depth: i32,
    root_best: Option<Move>,
    /// Move played from each ply; `None` for a null move.
    line: Vec<Option<Move>>,
}

impl Default for Searcher {
    fn default() -> Self {
        Self::new(SearchOptions::default())
    }
}

impl Searcher {
    pub fn new(options: SearchOptions) -> Self {
        Searcher {
            pos: Position::startpos(),
            params: SearchParams::disabled(),
            options,
            tt: TranspositionTable::new(options.tt_bits),
            orderer: MoveOrderer::new(),
            meter: NodeMeter::unlimited(),
            root_depth: 0,
            root_best: None,
            line: vec![None; MAX_PLY + 2],
        }
    }

    pub fn options(&self) -> SearchOptions {
        self.options
    }

    /// Iterative deepening from depth 1 until the budget is spent, the
    /// maximum depth completes, or a mate is proven.
    pub fn search(&mut self, pos: &Position, params: &SearchParams, budget: SearchBudget) -> SearchResult {
        self.search_with(pos, params, budget, |_| IterationControl::Continue)
    }

    /// As [`search`](Self::search), calling `on_iteration` after every
    /// completed iteration; returning `Stop` ends the search there.
    pub fn search_with(
        &mut self,
        pos: &Position,
        params: &SearchParams,
        budget: SearchBudget,
        mut on_iteration: impl FnMut(&IterationInfo) -> IterationControl,
    ) -> SearchResult {
        debug_assert!(params.validate().is_ok());
        self.pos = pos.clone();
        self.params = *params;
        self.tt.new_search();
        self.orderer.clear();
        self.meter = NodeMeter {
            nodes: 0,
            max_nodes: budget.max_nodes.max(1),
            deadline: budget.max_time.map(|d| Instant::now() + d),
            aborted: false,
        };
        self.root_best = None;

        let root_moves = generate_legal_moves(&self.pos);
        let mut result = SearchResult {
            best_move: root_moves.first().copied(),
            score: Score::ZERO,
            nodes: 0,
            depth_completed: 0,
            aborted: false,
        };
        if root_moves.is_empty() {
            result.score = if self.pos.in_check() { Score::mated_in(0) } else { Score::DRAW };
            return result;
        }

        for depth in 1..=budget.max_depth.min(MAX_PLY as u32 / 2) {
            self.root_depth = depth as i32 * ONE_PLY;
            let score = self.negamax(self.root_depth, -Score::INFINITE, Score::INFINITE, 0, false, 0);
            if self.meter.aborted {
                result.aborted = true;
                break;
            }
            let best = self.root_best.expect("completed iteration has a best move");
            result.best_move = Some(best);
            result.score = score;
            result.depth_completed = depth;
            let info = IterationInfo { depth, best_move: best, score, nodes: self.meter.nodes };
            if on_iteration(&info) == IterationControl::Stop {
                break;
            }
            // A mate found within the nominal horizon cannot change.
            if score.is_mate() && (Score::MATE_BOUND - score.value().abs()) < depth as i32 {
                break;
            }
        }
        result.nodes = self.meter.nodes;
        debug_assert!(self.pos == *pos, "search must restore the root position");
        result
    }

    /// One fixed-depth search of `pos` inside `window`, without iterative
    /// deepening or a node limit. Fail-soft: a score at or below alpha is an
    /// upper bound, at or above beta a lower bound.
    pub fn search_window(
        &mut self,
        pos: &Position,
        params: &SearchParams,
        depth_plies: u32,
        window: SearchWindow,
    ) -> SearchResult {
        self.pos = pos.clone();
        self.params = *params;
        self.tt.new_search();
        self.orderer.clear();
        self.meter = NodeMeter::unlimited();
        self.root_best = None;
        self.root_depth = depth_plies as i32 * ONE_PLY;
        let score = self.negamax(self.root_depth, window.alpha, window.beta, 0, false, 0);
        SearchResult {
            best_move: self.root_best,
            score,
            nodes: self.meter.nodes,
            depth_completed: depth_plies,
            aborted: false,
        }
    }

    #[inline]
    fn qsearch(&mut self, alpha: Score, beta: Score, ply: usize) -> Score {
        if !self.meter.enter() {
            return Score::ZERO;
        }
        qsearch_node(&mut self.pos, &mut self.meter, alpha, beta, ply)
    }

    fn negamax(
        &mut self,
        depth: i32,
        mut alpha: Score,
        beta: Score,
        ply: usize,
        previous_was_null: bool,
        ext_used: i32,
    ) -> Score {
        if depth < ONE_PLY {
            return self.qsearch(alpha, beta, ply);
        }
        if !self.meter.enter() {
            return Score::ZERO;
        }
        let root = ply == 0;
        let pv = beta.value() - alpha.value() > 1;
        debug_assert!(
            ply as i32 * ONE_PLY <= 2 * self.root_depth,
            "line of {ply} plies exceeds twice the nominal depth"
        );

        if !root {
            if self.pos.halfmove_clock() >= 100 || self.pos.is_repetition() {
                return Score::DRAW;
            }
            if ply >= MAX_PLY {
                return evaluate_static(&self.pos);
            }
        }

        let key = self.pos.hash();
        let tt_entry = self.tt.probe(key, ply);
        let mut hash_move = tt_entry.and_then(|e| e.mv);
        if let Some(e) = tt_entry {
            if self.options.tt_cutoffs && !pv && !root && e.depth >= depth {
                let cut = match e.bound {
                    Bound::Exact => true,
                    Bound::Lower => e.score >= beta,
                    Bound::Upper => e.score <= alpha,
                };
                if cut {
                    return e.score;
                }
            }
        }

        let in_check = self.pos.in_check();
        let remaining_plies = depth / ONE_PLY;

        if !root {
            if let FutilityOutcome::Prune(score) = self.futility_check(remaining_plies, alpha, beta, ply, in_check) {
                return score;
            }
        }

        let mut mate_threat = false;
        if !root {
            match self.null_move_step(depth, beta, ply, previous_was_null, in_check, ext_used) {
                NullMoveOutcome::Cutoff(score) => return score,
                NullMoveOutcome::Refuted { mate_threat: t } => mate_threat = t,
                NullMoveOutcome::Skipped => {}
            }
            if self.meter.aborted {
                return Score::ZERO;
            }
        }

        let mut moves = generate_legal_moves(&self.pos);
        if moves.is_empty() {
            return if in_check { Score::mated_in(ply as u32) } else { Score::DRAW };
        }

        if root {
            hash_move = self.root_best.map(|m| m.key16()).or(hash_move);
        } else if pv
            && self.options.internal_iterative_deepening
            && depth >= 4 * ONE_PLY
            && hash_move.is_none()
        {
            self.negamax(depth - 2 * ONE_PLY, alpha, beta, ply, previous_was_null, ext_used);
            if self.meter.aborted {
                return Score::ZERO;
            }
            hash_move = self.tt.probe(key, ply).and_then(|e| e.mv);
        }
        self.orderer.order(&mut moves, hash_move, ply, self.pos.side_to_move());

        // Expected cut-nodes only: null-window nodes with a fail-high entry.
        if !pv {
            let tt_lower = tt_entry.is_some_and(|e| e.bound == Bound::Lower);
            if let MultiCutOutcome::Cutoff(score) =
                self.multicut_check(&moves, remaining_plies, depth, beta, ply, ext_used, tt_lower)
            {
                return score;
            }
            if self.meter.aborted {
                return Score::ZERO;
            }
        }

        let previous_capture_square = self.previous_capture_square(ply);
        let ext_ctx = ExtensionContext { legal_moves: moves.len(), previous_capture_square, mate_threat };
        let alpha_orig = alpha;
        let mut best = -Score::INFINITE;
        let mut best_move: Option<Move> = None;

        for (i, &m) in moves.iter().enumerate() {
            let ext = compute_extension(&self.pos, m, &ext_ctx, &self.params) as i32;
            // Extensions along one line never add more than the nominal depth.
            let ext = ext.min(self.root_depth - ext_used).max(0);
            let new_depth = depth - ONE_PLY + ext;
            let child_ext = ext_used + ext;

            self.line[ply] = Some(m);
            let undo = self.pos.make_move(m);
            let score = if i == 0 {
                -self.negamax(new_depth, -beta, -alpha, ply + 1, false, child_ext)
            } else {
                let s = -self.negamax(new_depth, -alpha - 1, -alpha, ply + 1, false, child_ext);
                if s > alpha && s < beta {
                    -self.negamax(new_depth, -beta, -alpha, ply + 1, false, child_ext)
                } else {
                    s
                }
            };
            self.pos.unmake_move(undo);
            if self.meter.aborted {
                return Score::ZERO;
            }

            if score > best {
                best = score;
                best_move = Some(m);
                if score > alpha {
                    alpha = score;
                    if alpha >= beta {
                        self.orderer.record_cutoff(m, ply, self.pos.side_to_move(), remaining_plies);
                        break;
                    }
                }
            }
        }

        let bound = if best >= beta {
            Bound::Lower
        } else if best > alpha_orig {
            Bound::Exact
        } else {
            Bound::Upper
        };
        let stored_move = if bound == Bound::Upper { None } else { best_move };
        self.tt.store(key, depth, best, bound, stored_move, ply);
        if root {
            self.root_best = best_move;
        }
        best
    }

    fn previous_capture_square(&self, ply: usize) -> Option<Square> {
        if ply == 0 {
            return None;
        }
        self.line[ply - 1].filter(Move::is_capture).map(|m| m.to)
    }

    /// Node-wise futility: near the horizon, when static evaluation plus
    /// the depth's margin is below alpha, the node's value is its
    /// quiescence value.
    fn futility_check(
        &mut self,
        remaining_plies: i32,
        alpha: Score,
        beta: Score,
        ply: usize,
        in_check: bool,
    ) -> FutilityOutcome {
        if in_check || futility_margin(&self.params, remaining_plies).is_none() {
            return FutilityOutcome::Proceed;
        }
        let static_eval = evaluate_static(&self.pos);
        if futility_prunes(&self.params, remaining_plies, in_check, static_eval, alpha) {
            FutilityOutcome::Prune(qsearch_node(&mut self.pos, &mut self.meter, alpha, beta, ply))
        } else {
            FutilityOutcome::Proceed
        }
    }

    /// Minimal-window null-move search around beta at depth d - 1 - R'.
    fn null_move_step(
        &mut self,
        depth: i32,
        beta: Score,
        ply: usize,
        previous_was_null: bool,
        in_check: bool,
        ext_used: i32,
    ) -> NullMoveOutcome {
        if !null_move_allowed(&self.params, &self.pos, in_check, previous_was_null) {
            return NullMoveOutcome::Skipped;
        }
        debug_assert!(!previous_was_null && !in_check);
        let null_depth = null_search_depth(&self.params, depth);
        self.line[ply] = None;
        let undo = self.pos.make_null();
        let value = -self.negamax(null_depth, -beta, -beta + 1, ply + 1, true, ext_used);
        self.pos.unmake_move(undo);
        if self.meter.aborted {
            return NullMoveOutcome::Skipped;
        }
        if value >= beta {
            // Never return an unproven mate from a null-move search.
            NullMoveOutcome::Cutoff(if value.is_mate() { beta } else { value })
        } else {
            NullMoveOutcome::Refuted { mate_threat: value.is_mated() }
        }
    }

    /// Probes the first M moves at reduced depth with a null window at
    /// beta; C fail-highs prune the node. Probe results are not stored.
    #[allow(clippy::too_many_arguments)]
    fn multicut_check(
        &mut self,
        moves: &[Move],
        remaining_plies: i32,
        depth: i32,
        beta: Score,
        ply: usize,
        ext_used: i32,
        tt_lower: bool,
    ) -> MultiCutOutcome {
        // A mate-range beta would let the cutoff report an unproven mate.
        if !multicut_applies(&self.params, remaining_plies, tt_lower) || beta.value().abs() >= Score::MATE_THRESHOLD {
            return MultiCutOutcome::Proceed;
        }
        let required = self.params.multicut_cut_num as usize;
        if required == 0 {
            return MultiCutOutcome::Cutoff(beta);
        }
        let probe_depth = multicut_probe_depth(&self.params, depth);
        let mut cutoffs = 0;
        for &m in moves.iter().take(self.params.multicut_move_num as usize) {
            self.line[ply] = Some(m);
            let undo = self.pos.make_move(m);
            let value = -self.negamax(probe_depth, -beta, -beta + 1, ply + 1, false, ext_used);
            self.pos.unmake_move(undo);
            if self.meter.aborted {
                return MultiCutOutcome::Proceed;
            }
            if value >= beta {
                cutoffs += 1;
                if cutoffs >= required {
                    return MultiCutOutcome::Cutoff(beta);
                }
            }
        }
        MultiCutOutcome::Proceed
    }
}

/// One-shot search with a fresh instance and default options.
pub fn search_position(pos: &Position, params: &SearchParams, budget: SearchBudget) -> SearchResult {
    Searcher::default().search(pos, params, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::{find_uci_move, Position};

    #[test]
    fn quiet_position_quiescence_is_static_eval() {
        let p = Position::from_fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1").unwrap();
        assert_eq!(quiescence(&p, SearchWindow::full()), evaluate_static(&p));
    }

    #[test]
    fn quiescence_in_checkmate_is_mated() {
        let p = Position::from_fen("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3").unwrap();
        assert_eq!(quiescence(&p, SearchWindow::full()), Score::mated_in(0));
    }

    #[test]
    fn single_node_budget_aborts() {
        let p = Position::startpos();
        let r = search_position(&p, &SearchParams::default(), SearchBudget::nodes(1));
        assert!(r.aborted);
        assert_eq!(r.nodes, 1);
        assert_eq!(r.depth_completed, 0);
        let m = r.best_move.unwrap();
        assert!(generate_legal_moves(&p).contains(&m));
    }

    #[test]
    fn finds_back_rank_mate() {
        let p = Position::from_fen("6k1/5ppp/8/8/8/8/8/R5K1 w - - 0 1").unwrap();
        for params in [SearchParams::default(), SearchParams::disabled()] {
            let r = search_position(&p, &params, SearchBudget::depth(3));
            assert_eq!(r.best_move, find_uci_move(&p, "a1a8"));
            assert!(r.score.value() >= Score::MATE_BOUND - 2, "{}", r.score);
        }
    }

    #[test]
    fn zero_cut_multicut_keeps_a_root_move() {
        // A full-window child must not take the multi-cut exit with beta at infinity.
        let c = "1111110101011000011111000000111111011001110000111101000000110110010110";
        let params = crate::genome::decode(c.parse().unwrap());
        assert!(params.multicut_use && params.multicut_cut_num == 0);
        let p = Position::from_fen("7k/p7/1R5K/6r1/6p1/6P1/8/8 w - - 0 1").unwrap();
        let r = search_position(&p, &params, SearchBudget::nodes(20_000));
        assert!(r.depth_completed > 0);
        assert!(r.score.value().abs() < Score::INFINITE.value());
    }

    #[test]
    fn node_budget_is_respected() {
        let p = Position::from_fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1").unwrap();
        for budget in [10, 1_000, 20_000] {
            let r = search_position(&p, &SearchParams::default(), SearchBudget::nodes(budget));
            assert!(r.nodes <= budget);
            assert!(r.aborted);
        }
    }
}
