//! Test-suite solving, engine-vs-engine matches and Elo arithmetic.

mod data;
mod elo;
mod game;
mod suite;

use std::cell::RefCell;

use crate::search::Searcher;

pub use data::{bundled_openings, bundled_suite, parse_openings, OpeningLineError, OPENINGS_FEN, TACTICAL_SUITE_EPD};
pub use elo::{elo_difference, Elo, ELO_DISPLAY_CAP};
pub use game::{
    adjudicate, play_game, run_match, to_pgn, GameConfig, GameRecord, GameResult, MatchGame, MatchResult,
    PgnTags, Termination, DEFAULT_MAX_PLIES, DEFAULT_NODES_PER_MOVE,
};
pub use suite::{run_suite, run_suite_with, solve_position, solve_with, SolveLimits, SolveOutcome, SuiteReport, SuiteRow};

thread_local! {
    static SEARCHER: RefCell<Option<Searcher>> = const { RefCell::new(None) };
}

/// Runs `f` with this thread's search instance, creating it on first use.
/// Every search resets the instance, so reuse never changes results.
pub(crate) fn with_searcher<R>(f: impl FnOnce(&mut Searcher) -> R) -> R {
    SEARCHER.with(|cell| {
        let mut slot = cell.borrow_mut();
        f(slot.get_or_insert_with(Searcher::default))
    })
}

/// A pool of `jobs` worker threads (at least one).
pub fn thread_pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("failed to start worker threads")
}
