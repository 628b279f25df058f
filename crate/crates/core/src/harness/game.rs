//! Engine-vs-engine games and matches.

use std::fmt::{self, Write as _};
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::chess::{generate_legal_moves, to_san, Color, Move, Position};
use crate::search::{SearchBudget, SearchParams};

use super::elo::{elo_difference, Elo};
use super::{thread_pool, with_searcher};

pub const DEFAULT_NODES_PER_MOVE: u64 = 200_000;
pub const DEFAULT_MAX_PLIES: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GameResult {
    #[serde(rename = "1-0")]
    WhiteWin,
    #[serde(rename = "1/2-1/2")]
    Draw,
    #[serde(rename = "0-1")]
    BlackWin,
}

impl GameResult {
    pub fn pgn(self) -> &'static str {
        match self {
            GameResult::WhiteWin => "1-0",
            GameResult::Draw => "1/2-1/2",
            GameResult::BlackWin => "0-1",
        }
    }

    /// Points scored by `color`: 1, 0.5 or 0.
    pub fn points(self, color: Color) -> f64 {
        match (self, color) {
            (GameResult::Draw, _) => 0.5,
            (GameResult::WhiteWin, Color::White) | (GameResult::BlackWin, Color::Black) => 1.0,
            _ => 0.0,
        }
    }

    fn win_for(color: Color) -> GameResult {
        match color {
            Color::White => GameResult::WhiteWin,
            Color::Black => GameResult::BlackWin,
        }
    }
}

impl fmt::Display for GameResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.pgn())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Checkmate,
    Stalemate,
    FiftyMove,
    Threefold,
    InsufficientMaterial,
    PlyLimit,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Checkmate => "checkmate",
            Termination::Stalemate => "stalemate",
            Termination::FiftyMove => "fifty-move",
            Termination::Threefold => "threefold",
            Termination::InsufficientMaterial => "insufficient-material",
            Termination::PlyLimit => "ply-limit",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameConfig {
    pub nodes_per_move: u64,
    /// Plies played from the opening before the game is drawn.
    pub max_plies: usize,
    /// Optional wall-clock limit per move; makes games timing dependent.
    pub move_time: Option<Duration>,
}

impl GameConfig {
    pub fn nodes(nodes_per_move: u64) -> Self {
        assert!(nodes_per_move >= 1, "nodes per move must be positive");
        GameConfig { nodes_per_move, max_plies: DEFAULT_MAX_PLIES, move_time: None }
    }
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig::nodes(DEFAULT_NODES_PER_MOVE)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameRecord {
    pub opening: Position,
    pub moves: Vec<Move>,
    pub result: GameResult,
    pub termination: Termination,
}

impl GameRecord {
    pub fn san_moves(&self) -> Vec<String> {
        let mut pos = self.opening.clone();
        self.moves
            .iter()
            .map(|&m| {
                let s = to_san(&pos, m);
                let _ = pos.make_move(m);
                s
            })
            .collect()
    }

    pub fn final_position(&self) -> Position {
        let mut pos = self.opening.clone();
        for &m in &self.moves {
            let _ = pos.make_move(m);
        }
        pos
    }
}

/// The game's outcome if `pos` ends it, `plies` having been played.
pub fn adjudicate(pos: &Position, plies: usize, max_plies: usize) -> Option<(GameResult, Termination)> {
    if generate_legal_moves(pos).is_empty() {
        return Some(if pos.in_check() {
            (GameResult::win_for(!pos.side_to_move()), Termination::Checkmate)
        } else {
            (GameResult::Draw, Termination::Stalemate)
        });
    }
    let draw = if pos.is_insufficient_material() {
        Termination::InsufficientMaterial
    } else if pos.halfmove_clock() >= 100 {
        Termination::FiftyMove
    } else if pos.repetition_count() >= 3 {
        Termination::Threefold
    } else if plies >= max_plies {
        Termination::PlyLimit
    } else {
        return None;
    };
    Some((GameResult::Draw, draw))
}

pub fn play_game(white: &SearchParams, black: &SearchParams, opening: &Position, config: &GameConfig) -> GameRecord {
    let mut pos = opening.clone();
    let mut moves = Vec::new();
    let mut budget = SearchBudget::nodes(config.nodes_per_move);
    budget.max_time = config.move_time;
    loop {
        if let Some((result, termination)) = adjudicate(&pos, moves.len(), config.max_plies) {
            return GameRecord { opening: opening.clone(), moves, result, termination };
        }
        let params = match pos.side_to_move() {
            Color::White => white,
            Color::Black => black,
        };
        let r = with_searcher(|s| s.search(&pos, params, budget));
        let m = r.best_move.expect("side to move has a legal move");
        debug_assert!(generate_legal_moves(&pos).contains(&m));
        let _ = pos.make_move(m);
        moves.push(m);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchGame {
    pub opening_index: usize,
    pub a_is_white: bool,
    pub record: GameRecord,
}

impl MatchGame {
    pub fn a_points(&self) -> f64 {
        self.record.result.points(if self.a_is_white { Color::White } else { Color::Black })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult {
    pub wins: usize,
    pub draws: usize,
    pub losses: usize,
    pub games: Vec<MatchGame>,
}

impl MatchResult {
    pub fn from_games(games: Vec<MatchGame>) -> MatchResult {
        let (mut wins, mut draws, mut losses) = (0, 0, 0);
        for g in &games {
            let p = g.a_points();
            if p == 1.0 {
                wins += 1;
            } else if p == 0.0 {
                losses += 1;
            } else {
                draws += 1;
            }
        }
        MatchResult { wins, draws, losses, games }
    }

    pub fn games_played(&self) -> usize {
        self.wins + self.draws + self.losses
    }

    /// W% as a fraction: (wins + draws / 2) / games.
    pub fn score_fraction(&self) -> f64 {
        (self.wins as f64 + self.draws as f64 / 2.0) / self.games_played() as f64
    }

    pub fn elo(&self) -> Elo {
        elo_difference(self.score_fraction())
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("game,opening,a_color,result,termination,plies\n");
        for (i, g) in self.games.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                i + 1,
                g.opening_index + 1,
                if g.a_is_white { "white" } else { "black" },
                g.record.result,
                g.record.termination,
                g.record.moves.len()
            );
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "games": self.games_played(),
            "wins": self.wins,
            "draws": self.draws,
            "losses": self.losses,
            "score": self.score_fraction(),
            "elo": self.elo(),
        })
    }
}

/// Plays every opening twice, A taking white first. Games run on `jobs`
/// threads; the result lists them in schedule order.
pub fn run_match(
    a: &SearchParams,
    b: &SearchParams,
    openings: &[Position],
    config: &GameConfig,
    jobs: usize,
) -> MatchResult {
    assert!(!openings.is_empty(), "a match needs at least one opening");
    let schedule: Vec<(usize, bool)> = (0..openings.len()).flat_map(|i| [(i, true), (i, false)]).collect();
    let play = |&(i, a_is_white): &(usize, bool)| {
        let (w, bl) = if a_is_white { (a, b) } else { (b, a) };
        MatchGame { opening_index: i, a_is_white, record: play_game(w, bl, &openings[i], config) }
    };
    let games: Vec<MatchGame> = if jobs <= 1 {
        schedule.iter().map(play).collect()
    } else {
        thread_pool(jobs).install(|| schedule.par_iter().map(play).collect())
    };
    MatchResult::from_games(games)
}

#[derive(Clone, Debug, Default)]
pub struct PgnTags {
    pub event: String,
    pub round: String,
    pub white: String,
    pub black: String,
}

/// PGN text of one game, with the opening as a FEN setup and the
/// termination reason in its own tag.
pub fn to_pgn(game: &GameRecord, tags: &PgnTags) -> String {
    let quote = |s: &str| if s.is_empty() { "?".to_string() } else { s.replace('\\', "\\\\").replace('"', "\\\"") };
    let mut out = String::new();
    for (name, value) in [
        ("Event", quote(&tags.event)),
        ("Site", "?".to_string()),
        ("Date", "????.??.??".to_string()),
        ("Round", quote(&tags.round)),
        ("White", quote(&tags.white)),
        ("Black", quote(&tags.black)),
        ("Result", game.result.pgn().to_string()),
        ("SetUp", "1".to_string()),
        ("FEN", game.opening.to_fen()),
        ("PlyCount", game.moves.len().to_string()),
        ("Termination", game.termination.name().to_string()),
    ] {
        let _ = writeln!(out, "[{name} \"{value}\"]");
    }
    out.push('\n');

    let mut tokens = Vec::with_capacity(game.moves.len() * 2 + 1);
    let mut number = game.opening.fullmove_number();
    let mut side = game.opening.side_to_move();
    for (i, san) in game.san_moves().into_iter().enumerate() {
        match side {
            Color::White => tokens.push(format!("{number}.")),
            Color::Black if i == 0 => tokens.push(format!("{number}...")),
            Color::Black => {}
        }
        tokens.push(san);
        if side == Color::Black {
            number += 1;
        }
        side = !side;
    }
    tokens.push(game.result.pgn().to_string());

    let mut line_len = 0;
    for t in tokens {
        if line_len > 0 && line_len + 1 + t.len() > 79 {
            out.push('\n');
            line_len = 0;
        } else if line_len > 0 {
            out.push(' ');
            line_len += 1;
        }
        line_len += t.len();
        out.push_str(&t);
    }
    out.push_str("\n\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkmated_opening_ends_immediately() {
        let p = Position::from_fen("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3").unwrap();
        let g = play_game(&SearchParams::default(), &SearchParams::default(), &p, &GameConfig::nodes(1000));
        assert!(g.moves.is_empty());
        assert_eq!((g.result, g.termination), (GameResult::BlackWin, Termination::Checkmate));
    }

    #[test]
    fn adjudication_rules() {
        let stalemate = Position::from_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1").unwrap();
        assert_eq!(adjudicate(&stalemate, 0, 300), Some((GameResult::Draw, Termination::Stalemate)));
        let bare = Position::from_fen("8/8/4k3/8/8/3NK3/8/8 w - - 0 1").unwrap();
        assert_eq!(adjudicate(&bare, 0, 300), Some((GameResult::Draw, Termination::InsufficientMaterial)));
        let fifty = Position::from_fen("8/8/4k3/8/8/3RK3/8/8 w - - 100 80").unwrap();
        assert_eq!(adjudicate(&fifty, 0, 300), Some((GameResult::Draw, Termination::FiftyMove)));
        let normal = Position::from_fen("8/8/4k3/8/8/3RK3/8/8 w - - 99 80").unwrap();
        assert_eq!(adjudicate(&normal, 0, 300), None);
        assert_eq!(adjudicate(&normal, 300, 300), Some((GameResult::Draw, Termination::PlyLimit)));
    }

    #[test]
    fn pgn_numbering_from_black() {
        let p = Position::from_fen("4k3/8/8/8/8/8/4P3/4K3 b - - 0 12").unwrap();
        let mut q = p.clone();
        let m1 = crate::chess::find_uci_move(&q, "e8d7").unwrap();
        let _ = q.make_move(m1);
        let m2 = crate::chess::find_uci_move(&q, "e2e4").unwrap();
        let g = GameRecord { opening: p, moves: vec![m1, m2], result: GameResult::Draw, termination: Termination::PlyLimit };
        let pgn = to_pgn(&g, &PgnTags::default());
        assert!(pgn.contains("12... Kd7 13. e4 1/2-1/2"), "{pgn}");
        assert!(pgn.contains("[Termination \"ply-limit\"]"));
    }
}
