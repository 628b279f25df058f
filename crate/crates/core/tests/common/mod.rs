//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selsearch::chess::{self, generate_legal_moves, Position};
use selsearch::eval::Score;
use selsearch::harness::bundled_openings;
use selsearch::search::{quiescence, SearchWindow};

pub const KIWIPETE: &str = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";
pub const POSITION_3: &str = "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1";
pub const POSITION_4: &str = "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1";
pub const POSITION_5: &str = "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8";

/// Positions with at least one legal move, reached by seeded random
/// playouts of up to `max_plies` from several roots.
pub fn random_positions(count: usize, seed: u64, max_plies: usize) -> Vec<Position> {
    let roots = [chess::START_FEN, KIWIPETE, POSITION_3, POSITION_4, POSITION_5];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut pos = Position::from_fen(roots[rng.gen_range(0..roots.len())]).unwrap();
        let plies = rng.gen_range(0..=max_plies);
        for _ in 0..plies {
            let moves = generate_legal_moves(&pos);
            if moves.is_empty() {
                break;
            }
            let m = moves[rng.gen_range(0..moves.len())];
            let _ = pos.make_move(m);
        }
        if !generate_legal_moves(&pos).is_empty() {
            out.push(pos);
        }
    }
    out
}

/// Positions a few random plies past the start position or a bundled
/// opening: ordinary middlegames, cheaper to search exhaustively than
/// long random playouts.
pub fn opening_playouts(count: usize, seed: u64, max_plies: usize) -> Vec<Position> {
    let mut roots = vec![Position::startpos()];
    roots.extend(bundled_openings());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut pos = roots[rng.gen_range(0..roots.len())].clone();
        for _ in 0..rng.gen_range(0..=max_plies) {
            let moves = generate_legal_moves(&pos);
            if moves.is_empty() {
                break;
            }
            let _ = pos.make_move(moves[rng.gen_range(0..moves.len())]);
        }
        if !generate_legal_moves(&pos).is_empty() {
            out.push(pos);
        }
    }
    out
}

/// Oracle depth for the i-th equivalence position: mostly 1 to 3, every
/// twentieth at 4.
pub fn oracle_depth(i: usize) -> u32 {
    if i.is_multiple_of(20) {
        4
    } else {
        1 + (i % 3) as u32
    }
}

/// Plain full-width negamax with no pruning of any kind. Leaves take the
/// full-window quiescence value, mate distances counted from the root.
/// Quiescence does not depend on the path, so leaf values are cached by
/// position key.
pub fn negamax_oracle(pos: &mut Position, depth: u32) -> i32 {
    negamax(pos, depth, 0, &mut HashMap::new())
}

fn negamax(pos: &mut Position, depth: u32, ply: i32, leaves: &mut HashMap<u64, i32>) -> i32 {
    if depth == 0 {
        let q = *leaves.entry(pos.hash()).or_insert_with(|| quiescence(pos, SearchWindow::full()).value());
        return if q > Score::MATE_THRESHOLD {
            q - ply
        } else if q < -Score::MATE_THRESHOLD {
            q + ply
        } else {
            q
        };
    }
    if ply > 0 && (pos.halfmove_clock() >= 100 || pos.is_repetition()) {
        return 0;
    }
    let moves = generate_legal_moves(pos);
    if moves.is_empty() {
        return if pos.in_check() { -(Score::MATE_BOUND - ply) } else { 0 };
    }
    let mut best = i32::MIN;
    for m in moves {
        let undo = pos.make_move(m);
        best = best.max(-negamax(pos, depth - 1, ply + 1, leaves));
        pos.unmake_move(undo);
    }
    best
}
