//! Bundled tactical suite and opening set.

use thiserror::Error;

use crate::chess::{parse_epd_file, EpdRecord, FenError, Position};

pub const TACTICAL_SUITE_EPD: &str = include_str!("../../data/tactical50.epd");
pub const OPENINGS_FEN: &str = include_str!("../../data/openings50.fen");

pub fn bundled_suite() -> Vec<EpdRecord> {
    parse_epd_file(TACTICAL_SUITE_EPD).expect("bundled suite parses")
}

pub fn bundled_openings() -> Vec<Position> {
    parse_openings(OPENINGS_FEN).expect("bundled openings parse")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {source}")]
pub struct OpeningLineError {
    pub line: usize,
    pub source: FenError,
}

/// One FEN per line; blank lines and `#` comments are skipped.
pub fn parse_openings(text: &str) -> Result<Vec<Position>, OpeningLineError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| Position::from_fen(l.trim()).map_err(|source| OpeningLineError { line: i + 1, source }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_assets_have_fifty_entries() {
        let suite = bundled_suite();
        assert_eq!(suite.len(), 50);
        let mut ids: Vec<&str> = suite.iter().map(|r| r.id.as_str()).collect();
        ids.dedup();
        assert_eq!(ids.len(), 50);
        assert_eq!(bundled_openings().len(), 50);
    }

    #[test]
    fn opening_errors_name_the_line() {
        let err = parse_openings("# c\nstartpos\n8/8/8/8/8/8/8/8 w - - 0 1\n").unwrap_err();
        assert_eq!(err.line, 3);
    }
}
