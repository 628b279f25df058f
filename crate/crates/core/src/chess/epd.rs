//! EPD test-suite records: four FEN fields followed by `;`-terminated
//! opcodes. Only `bm` and `id` are interpreted.

use std::fmt;

use thiserror::Error;

use super::fen::FenError;
use super::position::Position;
use super::san::{parse_san, SanError};
use super::types::Move;

#[derive(Clone, Debug)]
pub struct EpdRecord {
    pub position: Position,
    /// Non-empty; every entry is legal in `position`.
    pub best_moves: Vec<Move>,
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpdError {
    #[error(transparent)]
    Fen(#[from] FenError),
    #[error("missing bm opcode")]
    MissingBestMove,
    #[error("bm {token:?}: {source}")]
    BestMove { token: String, source: SanError },
    #[error("unterminated quoted operand")]
    UnterminatedQuote,
}

/// Splits the opcode section into `;`-terminated operations, honoring
/// double-quoted operands.
fn split_operations(text: &str) -> Result<Vec<Vec<String>>, EpdError> {
    let mut ops = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let mut token = String::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match c {
            '"' => {
                let mut quoted = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => quoted.push(ch),
                        None => return Err(EpdError::UnterminatedQuote),
                    }
                }
                current.push(quoted);
            }
            ';' => {
                if !token.is_empty() {
                    current.push(std::mem::take(&mut token));
                }
                if !current.is_empty() {
                    ops.push(std::mem::take(&mut current));
                }
            }
            c if c.is_whitespace() => {
                if !token.is_empty() {
                    current.push(std::mem::take(&mut token));
                }
            }
            c => token.push(c),
        }
    }
    if !token.is_empty() {
        current.push(token);
    }
    if !current.is_empty() {
        ops.push(current);
    }
    Ok(ops)
}

impl EpdRecord {
    pub fn parse(line: &str) -> Result<EpdRecord, EpdError> {
        let line = line.trim();
        let mut rest = line;
        let mut fields = Vec::with_capacity(4);
        for _ in 0..4 {
            rest = rest.trim_start();
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            if end == 0 {
                break;
            }
            fields.push(&rest[..end]);
            rest = &rest[end..];
        }
        let position = Position::from_fen_fields(&fields)?;

        let mut best_moves = Vec::new();
        let mut saw_bm = false;
        let mut id = String::new();
        for op in split_operations(rest)? {
            match op[0].as_str() {
                "bm" => {
                    saw_bm = true;
                    for token in &op[1..] {
                        let m = parse_san(&position, token)
                            .map_err(|source| EpdError::BestMove { token: token.clone(), source })?;
                        if !best_moves.contains(&m) {
                            best_moves.push(m);
                        }
                    }
                }
                "id" => id = op[1..].join(" "),
                _ => {}
            }
        }
        if !saw_bm || best_moves.is_empty() {
            return Err(EpdError::MissingBestMove);
        }
        Ok(EpdRecord { position, best_moves, id })
    }

    pub fn is_solution(&self, m: &Move) -> bool {
        self.best_moves.contains(m)
    }
}

impl fmt::Display for EpdRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bm", self.position.board_fen())?;
        for m in &self.best_moves {
            write!(f, " {}", super::san::to_san(&self.position, *m))?;
        }
        write!(f, "; id \"{}\";", self.id)
    }
}

/// Error for a multi-line EPD source, naming the 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {source}")]
pub struct EpdLineError {
    pub line: usize,
    pub source: EpdError,
}

/// Parses every non-blank, non-`#` line of an EPD file.
pub fn parse_epd_file(text: &str) -> Result<Vec<EpdRecord>, EpdLineError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| EpdRecord::parse(l).map_err(|source| EpdLineError { line: i + 1, source }))
        .collect()
}
