//! Suite solving, games, matches and the Elo formula.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selsearch::chess::{generate_legal_moves, EpdRecord, Position};
use selsearch::harness::*;
use selsearch::search::SearchParams;

#[test]
fn forced_move_is_solved_at_depth_one() {
    // In check from the b1 rook; Ng1 is the only legal move.
    let rec = EpdRecord::parse("k7/8/8/8/8/7N/r7/1r5K w - - bm Ng1; id \"forced\";").unwrap();
    assert_eq!(generate_legal_moves(&rec.position).len(), 1);
    let o = solve_position(&rec, &SearchParams::default(), 500_000);
    assert!(o.solved);
    assert_eq!(o.depth, 1);
    assert!(o.nodes < 100, "{}", o.nodes);
}

#[test]
fn unsolvable_position_is_charged_the_cap() {
    let rec = EpdRecord::parse(
        "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - bm Qxf6; id \"blunder\";",
    )
    .unwrap();
    let o = solve_position(&rec, &SearchParams::default(), 500_000);
    assert_eq!((o.solved, o.nodes, o.depth), (false, 500_000, 0));
}

#[test]
fn bundled_mate_in_two_node_count_is_pinned() {
    let suite = bundled_suite();
    let rec = suite.iter().find(|r| r.id == "TS.50").unwrap();
    let o = solve_position(rec, &SearchParams::default(), 500_000);
    assert!(o.solved);
    assert_eq!((o.nodes, o.depth), (MATE_IN_TWO_NODES, MATE_IN_TWO_DEPTH));
    // Same count on a fresh thread.
    let again = std::thread::spawn({
        let rec = rec.clone();
        move || solve_position(&rec, &SearchParams::default(), 500_000)
    })
    .join()
    .unwrap();
    assert_eq!(again, o);
}

const MATE_IN_TWO_NODES: u64 = 1422;
const MATE_IN_TWO_DEPTH: u32 = 2;

#[test]
fn report_totals_are_row_sums_and_order_free() {
    let suite: Vec<_> = bundled_suite().into_iter().take(20).collect();
    let params = SearchParams::default();
    let report = run_suite(&suite, &params, 20_000);
    assert_eq!(report.total_nodes, report.rows.iter().map(|r| r.nodes).sum::<u64>());
    assert_eq!(report.solved, report.rows.iter().filter(|r| r.solved).count());
    for row in report.rows.iter().filter(|r| !r.solved) {
        assert_eq!((row.nodes, row.depth), (20_000, 0));
    }
    for row in report.rows.iter().filter(|r| r.solved) {
        assert!(row.nodes <= 20_000 && row.depth >= 1);
    }

    let mut shuffled = suite.clone();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(9));
    let other = run_suite_with(&shuffled, &params, SolveLimits::nodes(20_000), 3);
    assert_eq!((other.total_nodes, other.solved), (report.total_nodes, report.solved));
    let mut a = report.rows.clone();
    let mut b = other.rows.clone();
    a.sort_by(|x, y| x.id.cmp(&y.id));
    b.sort_by(|x, y| x.id.cmp(&y.id));
    assert_eq!(a, b);

    let csv = report.csv();
    assert_eq!(csv.lines().count(), 21);
    assert!(csv.starts_with("id,solved,nodes,depth\n"));
}

#[test]
fn one_node_cap() {
    let suite = bundled_suite();
    let report = run_suite(&suite, &SearchParams::default(), 1);
    assert_eq!(report.solved, 0);
    assert_eq!(report.total_nodes, suite.len() as u64);
}

#[test]
fn pruning_solves_at_least_as_many_as_plain_search() {
    let suite = bundled_suite();
    let pruned = run_suite(&suite, &SearchParams::default(), 100_000);
    let plain = run_suite(&suite, &SearchParams::disabled(), 100_000);
    assert!(pruned.solved >= plain.solved, "{} vs {}", pruned.solved, plain.solved);
}

fn replay_is_legal(game: &GameRecord) -> Position {
    let mut pos = game.opening.clone();
    for &m in &game.moves {
        assert!(generate_legal_moves(&pos).contains(&m), "illegal {m} in {}", pos.to_fen());
        let _ = pos.make_move(m);
    }
    pos
}

#[test]
fn games_are_legal_terminated_and_deterministic() {
    let config = GameConfig::nodes(3_000);
    let openings = bundled_openings();
    let a = SearchParams::default();
    let b = SearchParams::disabled();
    for opening in openings.iter().take(3) {
        let g = play_game(&a, &b, opening, &config);
        let end = replay_is_legal(&g);
        assert_eq!(end, g.final_position());
        assert_eq!(adjudicate(&end, g.moves.len(), config.max_plies), Some((g.result, g.termination)));
        assert!(g.moves.len() <= config.max_plies);
        assert_eq!(play_game(&a, &b, opening, &config), g);
    }
}

#[test]
fn checkmated_opening_ends_immediately() {
    let mated = Position::from_fen("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3").unwrap();
    let g = play_game(&SearchParams::default(), &SearchParams::default(), &mated, &GameConfig::nodes(1_000));
    assert!(g.moves.is_empty());
    assert_eq!((g.result, g.termination), (GameResult::BlackWin, Termination::Checkmate));
}

#[test]
fn fifty_move_rule_draws() {
    // Any white move is a quiet non-pawn move and none mates.
    let pos = Position::from_fen("8/8/4k3/8/8/3K4/8/7R w - - 99 80").unwrap();
    let g = play_game(&SearchParams::default(), &SearchParams::default(), &pos, &GameConfig::nodes(5_000));
    assert_eq!(g.moves.len(), 1);
    assert_eq!((g.result, g.termination), (GameResult::Draw, Termination::FiftyMove));
    assert_eq!(g.termination.name(), "fifty-move");
}

#[test]
fn self_match_is_even() {
    let openings: Vec<_> = bundled_openings().into_iter().take(6).collect();
    let p = SearchParams::default();
    let r = run_match(&p, &p, &openings, &GameConfig::nodes(3_000), 2);
    assert_eq!(r.wins + r.draws + r.losses, 12);
    assert_eq!(r.games.len(), 12);
    // Identical deterministic players: each colour-swapped pair mirrors.
    assert_eq!(r.wins, r.losses);
    assert_eq!(r.elo(), Elo::Finite(0));
    for pair in r.games.chunks(2) {
        assert_eq!(pair[0].record.moves, pair[1].record.moves);
        assert!(pair[0].a_is_white && !pair[1].a_is_white);
    }
}

#[test]
fn match_pgn_carries_termination() {
    let openings: Vec<_> = bundled_openings().into_iter().take(1).collect();
    let r = run_match(&SearchParams::default(), &SearchParams::disabled(), &openings, &GameConfig::nodes(2_000), 1);
    let g = &r.games[0];
    let tags = PgnTags { event: "test".into(), round: "1".into(), white: "A".into(), black: "B".into() };
    let pgn = to_pgn(&g.record, &tags);
    assert!(pgn.contains(&format!("[Termination \"{}\"]", g.record.termination.name())));
    assert!(pgn.contains(&format!("[Result \"{}\"]", g.record.result.pgn())));
    assert!(pgn.trim_end().ends_with(g.record.result.pgn()));
}

/// Direct evaluation of 400 log10(w / (1 - w)).
fn elo_oracle(w: f64) -> f64 {
    400.0 * (w / (1.0 - w)).log10()
}

#[test]
fn elo_table_rows_and_antisymmetry() {
    assert_eq!(elo_difference(0.5), Elo::Finite(0));
    for (w, expected) in [(0.595, 67), (0.714, 159)] {
        let Elo::Finite(rd) = elo_difference(w) else { panic!("finite") };
        assert!((rd - expected).abs() <= 1, "{w}: {rd}");
        assert_eq!(rd, elo_oracle(w).round() as i32);
    }
    // The standard formula gives +8 here, not +6.
    assert_eq!(elo_difference(0.511), Elo::Finite(8));
    for i in 1..1000 {
        let w = i as f64 / 1000.0;
        let (a, b) = (elo_difference(w), elo_difference(1.0 - w));
        assert_eq!(a.capped(), -b.capped(), "w = {w}");
    }
    assert_eq!(elo_difference(1.0), Elo::PlusInfinity);
    assert_eq!(elo_difference(0.0), Elo::MinusInfinity);
    assert_eq!(elo_difference(1.0).to_string(), "+1000");
    assert_eq!(elo_difference(0.0).to_string(), "-1000");
}
