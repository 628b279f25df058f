use super::movegen::{generate_legal_moves, MoveList};
use super::position::Position;

/// Leaf count of the full legal-move tree to `depth` plies.
pub fn perft(pos: &mut Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves: MoveList = generate_legal_moves(pos);
    if depth == 1 {
        return moves.len() as u64;
    }
    let mut total = 0;
    for m in moves {
        let undo = pos.make_move(m);
        total += perft(pos, depth - 1);
        pos.unmake_move(undo);
    }
    total
}

/// Per-root-move leaf counts, in generation order.
pub fn divide(pos: &mut Position, depth: u32) -> Vec<(String, u64)> {
    if depth == 0 {
        return Vec::new();
    }
    generate_legal_moves(pos)
        .into_iter()
        .map(|m| {
            let undo = pos.make_move(m);
            let n = perft(pos, depth - 1);
            pos.unmake_move(undo);
            (m.uci(), n)
        })
        .collect()
}
