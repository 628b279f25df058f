//! Solving test-suite positions under a node cap.

use std::fmt::Write as _;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::chess::EpdRecord;
use crate::search::{IterationControl, SearchBudget, SearchParams, Searcher};

use super::{thread_pool, with_searcher};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveLimits {
    pub node_cap: u64,
    /// Optional wall-clock limit per position. Results then depend on
    /// machine speed.
    pub max_time: Option<Duration>,
}

impl SolveLimits {
    pub fn nodes(node_cap: u64) -> Self {
        assert!(node_cap >= 1, "node cap must be positive");
        SolveLimits { node_cap, max_time: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SolveOutcome {
    pub solved: bool,
    /// Nodes visited up to the solving iteration, or the cap if unsolved.
    pub nodes: u64,
    /// Depth of the solving iteration; 0 if unsolved.
    pub depth: u32,
}

/// Iterative deepening until a completed iteration's best move is one of
/// the record's best moves. Unsolved positions are charged the full cap.
pub fn solve_position(rec: &EpdRecord, params: &SearchParams, node_cap: u64) -> SolveOutcome {
    with_searcher(|s| solve_with(s, rec, params, SolveLimits::nodes(node_cap)))
}

pub fn solve_with(searcher: &mut Searcher, rec: &EpdRecord, params: &SearchParams, limits: SolveLimits) -> SolveOutcome {
    let mut budget = SearchBudget::nodes(limits.node_cap);
    budget.max_time = limits.max_time;
    let mut outcome = SolveOutcome { solved: false, nodes: limits.node_cap, depth: 0 };
    searcher.search_with(&rec.position, params, budget, |info| {
        if rec.is_solution(&info.best_move) {
            outcome = SolveOutcome { solved: true, nodes: info.nodes, depth: info.depth };
            IterationControl::Stop
        } else {
            IterationControl::Continue
        }
    });
    outcome
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub id: String,
    pub solved: bool,
    pub nodes: u64,
    pub depth: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub rows: Vec<SuiteRow>,
    pub solved: usize,
    pub total_nodes: u64,
    pub node_cap: u64,
}

impl SuiteReport {
    pub fn from_rows(rows: Vec<SuiteRow>, node_cap: u64) -> SuiteReport {
        let solved = rows.iter().filter(|r| r.solved).count();
        let total_nodes = rows.iter().map(|r| r.nodes).sum();
        SuiteReport { rows, solved, total_nodes, node_cap }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("id,solved,nodes,depth\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", csv_field(&r.id), r.solved as u8, r.nodes, r.depth);
        }
        out
    }

    /// Totals without the per-position rows.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "positions": self.rows.len(),
            "solved": self.solved,
            "total_nodes": self.total_nodes,
            "node_cap": self.node_cap,
        })
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn run_suite(suite: &[EpdRecord], params: &SearchParams, node_cap: u64) -> SuiteReport {
    run_suite_with(suite, params, SolveLimits::nodes(node_cap), 1)
}

/// Solves every record on `jobs` threads. Rows keep suite order.
pub fn run_suite_with(suite: &[EpdRecord], params: &SearchParams, limits: SolveLimits, jobs: usize) -> SuiteReport {
    let solve = |rec: &EpdRecord| {
        let o = with_searcher(|s| solve_with(s, rec, params, limits));
        SuiteRow { id: rec.id.clone(), solved: o.solved, nodes: o.nodes, depth: o.depth }
    };
    let rows: Vec<SuiteRow> = if jobs <= 1 {
        suite.iter().map(solve).collect()
    } else {
        thread_pool(jobs).install(|| suite.par_iter().map(solve).collect())
    };
    SuiteReport::from_rows(rows, limits.node_cap)
}
