//! Decision rules of the four selective mechanisms, kept free of search
//! state so each can be tested in isolation. The searcher applies them.

use crate::chess::{Move, PieceKind, Position, Square};
use crate::eval::Score;

use super::params::SearchParams;
use super::ONE_PLY;

/// Per-node cap on summed extension units (one full ply).
pub const MAX_EXTENSION_UNITS: u8 = ONE_PLY as u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullMoveOutcome {
    /// Preconditions failed; the null move was not tried.
    Skipped,
    /// The null-move search failed high at `beta`.
    Cutoff(Score),
    /// No cutoff. `mate_threat` is set when passing gets the mover mated.
    Refuted { mate_threat: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FutilityOutcome {
    Prune(Score),
    Proceed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiCutOutcome {
    Cutoff(Score),
    Proceed,
}

/// May a null move be tried here? Requires the mechanism enabled, the mover
/// not in check, no null move on the previous ply, and a piece other than
/// king and pawns (zugzwang guard).
pub fn null_move_allowed(params: &SearchParams, pos: &Position, in_check: bool, previous_was_null: bool) -> bool {
    params.null_move_use && !in_check && !previous_was_null && pos.has_non_pawn_material(pos.side_to_move())
}

/// Effective reduction R': R, or R-1 when adaptivity is on and the remaining
/// depth is at or below the adaptivity depth.
pub fn effective_null_reduction(params: &SearchParams, remaining_plies: i32) -> u8 {
    let r = params.null_move_reduction;
    if params.null_move_adaptive && remaining_plies <= params.null_move_adaptivity_depth as i32 {
        r.saturating_sub(1)
    } else {
        r
    }
}

/// Depth, in units, of the null-move verification search: d - 1 - R' plies.
pub fn null_search_depth(params: &SearchParams, depth_units: i32) -> i32 {
    let r = effective_null_reduction(params, depth_units / ONE_PLY) as i32;
    depth_units - ONE_PLY * (1 + r)
}

/// Futility margin for a node `remaining_plies` from the horizon, or `None`
/// when futility pruning does not apply at that depth.
pub fn futility_margin(params: &SearchParams, remaining_plies: i32) -> Option<i32> {
    if (1..=3).contains(&remaining_plies) && remaining_plies <= params.futility_depth as i32 {
        Some(params.futility_thresholds[remaining_plies as usize - 1] as i32)
    } else {
        None
    }
}

/// True when static evaluation plus the depth's margin still falls short of
/// alpha.
pub fn futility_prunes(params: &SearchParams, remaining_plies: i32, in_check: bool, static_eval: Score, alpha: Score) -> bool {
    !in_check
        && futility_margin(params, remaining_plies)
            .is_some_and(|margin| static_eval.value() + margin < alpha.value())
}

/// Multi-cut applies at expected cut-nodes (a lower-bound hash entry) with
/// enough remaining depth.
pub fn multicut_applies(params: &SearchParams, remaining_plies: i32, tt_lower_bound: bool) -> bool {
    params.multicut_use && tt_lower_bound && remaining_plies >= params.multicut_depth as i32
}

/// Depth, in units, of the multi-cut probes: d - 1 - reduction plies.
pub fn multicut_probe_depth(params: &SearchParams, depth_units: i32) -> i32 {
    depth_units - ONE_PLY * (1 + params.multicut_reduction as i32)
}

/// Facts about the node a move is played from.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExtensionContext {
    /// Number of legal moves at the node.
    pub legal_moves: usize,
    /// Destination of the opponent's previous move, if it was a capture.
    pub previous_capture_square: Option<Square>,
    /// The node's null-move search returned a mate score.
    pub mate_threat: bool,
}

/// Sum of the units of every extension `m` triggers, capped at one ply.
pub fn compute_extension(pos: &Position, m: Move, ctx: &ExtensionContext, params: &SearchParams) -> u8 {
    let mut units = 0u8;
    if params.ext_check > 0 && pos.gives_check(m) {
        units += params.ext_check;
    }
    if params.ext_one_reply > 0 && ctx.legal_moves == 1 {
        units += params.ext_one_reply;
    }
    if params.ext_recapture > 0 && m.is_capture() && ctx.previous_capture_square == Some(m.to) {
        units += params.ext_recapture;
    }
    if params.ext_passed_pawn > 0 && m.piece == PieceKind::Pawn {
        let us = pos.side_to_move();
        if m.to.relative_rank(us) == 6 && pos.is_passed_pawn(us, m.to) {
            units += params.ext_passed_pawn;
        }
    }
    if params.ext_mate_threat > 0 && ctx.mate_threat {
        units += params.ext_mate_threat;
    }
    units.min(MAX_EXTENSION_UNITS)
}
