//! Standard Algebraic Notation: resolving tokens to moves and rendering
//! moves for PGN output.

use thiserror::Error;

use super::movegen::generate_legal_moves;
use super::position::Position;
use super::types::{Color, Move, MoveKind, PieceKind, Square};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SanError {
    #[error("malformed SAN {0:?}")]
    Syntax(String),
    #[error("illegal move {0:?}")]
    Illegal(String),
    #[error("ambiguous move {0:?}")]
    Ambiguous(String),
}

struct SanPattern {
    castle: Option<Square>,
    piece: PieceKind,
    from_file: Option<u8>,
    from_rank: Option<u8>,
    to: Square,
    promotion: Option<PieceKind>,
}

fn parse_pattern(token: &str, pos: &Position) -> Result<SanPattern, SanError> {
    let bad = || SanError::Syntax(token.to_string());
    let core = token.trim_end_matches(['+', '#', '!', '?']);
    let castle_rank = match pos.side_to_move() {
        Color::White => 0u8,
        Color::Black => 7u8,
    };
    match core {
        "O-O" | "0-0" => {
            return Ok(SanPattern {
                castle: Some(Square::from_coords(6, castle_rank)),
                piece: PieceKind::King,
                from_file: None,
                from_rank: None,
                to: Square::from_coords(6, castle_rank),
                promotion: None,
            })
        }
        "O-O-O" | "0-0-0" => {
            return Ok(SanPattern {
                castle: Some(Square::from_coords(2, castle_rank)),
                piece: PieceKind::King,
                from_file: None,
                from_rank: None,
                to: Square::from_coords(2, castle_rank),
                promotion: None,
            })
        }
        _ => {}
    }

    let mut chars: Vec<char> = core.chars().collect();
    let mut promotion = None;
    if let Some(&last) = chars.last() {
        if let Some(kind) = PieceKind::from_letter(last).filter(|k| *k != PieceKind::Pawn && *k != PieceKind::King) {
            if last.is_ascii_uppercase() && chars.len() >= 3 {
                promotion = Some(kind);
                chars.pop();
                if chars.last() == Some(&'=') {
                    chars.pop();
                }
            }
        }
    }
    if chars.len() < 2 {
        return Err(bad());
    }
    let (piece, rest) = match chars[0] {
        c @ ('N' | 'B' | 'R' | 'Q' | 'K') => (PieceKind::from_letter(c).ok_or_else(bad)?, &chars[1..]),
        _ => (PieceKind::Pawn, &chars[..]),
    };
    if rest.len() < 2 {
        return Err(bad());
    }
    let dest: String = rest[rest.len() - 2..].iter().collect();
    let to: Square = dest.parse().map_err(|_| bad())?;
    let mut from_file = None;
    let mut from_rank = None;
    for &c in &rest[..rest.len() - 2] {
        match c {
            'a'..='h' => from_file = Some(c as u8 - b'a'),
            '1'..='8' => from_rank = Some(c as u8 - b'1'),
            'x' | ':' | '-' => {}
            _ => return Err(bad()),
        }
    }
    if promotion.is_some() && piece != PieceKind::Pawn {
        return Err(bad());
    }
    Ok(SanPattern { castle: None, piece, from_file, from_rank, to, promotion })
}

/// Resolves a SAN token (check and annotation suffixes ignored) to the
/// unique matching legal move.
pub fn parse_san(pos: &Position, token: &str) -> Result<Move, SanError> {
    let pat = parse_pattern(token, pos)?;
    let mut found: Option<Move> = None;
    for m in generate_legal_moves(pos) {
        let matches = match pat.castle {
            Some(to) => m.kind == MoveKind::Castle && m.to == to,
            None => {
                m.kind != MoveKind::Castle
                    && m.piece == pat.piece
                    && m.to == pat.to
                    && m.promotion == pat.promotion
                    && pat.from_file.is_none_or(|f| m.from.file() == f)
                    && pat.from_rank.is_none_or(|r| m.from.rank() == r)
            }
        };
        if matches {
            if found.is_some() {
                return Err(SanError::Ambiguous(token.to_string()));
            }
            found = Some(m);
        }
    }
    found.ok_or_else(|| SanError::Illegal(token.to_string()))
}

/// Renders a legal move in SAN, with `+`/`#` suffix.
pub fn to_san(pos: &Position, m: Move) -> String {
    let mut s = String::new();
    if m.kind == MoveKind::Castle {
        s.push_str(if m.to.file() == 6 { "O-O" } else { "O-O-O" });
    } else if m.piece == PieceKind::Pawn {
        if m.is_capture() {
            s.push((b'a' + m.from.file()) as char);
            s.push('x');
        }
        s.push_str(&m.to.to_string());
        if let Some(p) = m.promotion {
            s.push('=');
            s.push_str(p.san_letter());
        }
    } else {
        s.push_str(m.piece.san_letter());
        let rivals: Vec<Move> = generate_legal_moves(pos)
            .into_iter()
            .filter(|o| o.piece == m.piece && o.to == m.to && o.from != m.from)
            .collect();
        if !rivals.is_empty() {
            let file_unique = rivals.iter().all(|o| o.from.file() != m.from.file());
            let rank_unique = rivals.iter().all(|o| o.from.rank() != m.from.rank());
            if file_unique {
                s.push((b'a' + m.from.file()) as char);
            } else if rank_unique {
                s.push((b'1' + m.from.rank()) as char);
            } else {
                s.push_str(&m.from.to_string());
            }
        }
        if m.is_capture() {
            s.push('x');
        }
        s.push_str(&m.to.to_string());
    }
    let mut after = pos.clone();
    let _ = after.make_move(m);
    if after.in_check() {
        s.push(if generate_legal_moves(&after).is_empty() { '#' } else { '+' });
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_common_forms() {
        let p = Position::startpos();
        assert_eq!(parse_san(&p, "e4").unwrap().uci(), "e2e4");
        assert_eq!(parse_san(&p, "Nf3").unwrap().uci(), "g1f3");
        assert_eq!(parse_san(&p, "Nf3+").unwrap().uci(), "g1f3");
        assert!(matches!(parse_san(&p, "e5"), Err(SanError::Illegal(_))));
        assert!(matches!(parse_san(&p, "Zz9"), Err(SanError::Syntax(_))));
    }

    #[test]
    fn disambiguation_and_ambiguity() {
        let p = Position::from_fen("4k3/8/8/8/8/8/8/R5RK w - - 0 1").unwrap();
        assert!(matches!(parse_san(&p, "Rd1"), Err(SanError::Ambiguous(_))));
        assert_eq!(parse_san(&p, "Rad1").unwrap().uci(), "a1d1");
        assert_eq!(to_san(&p, parse_san(&p, "Rgd1").unwrap()), "Rgd1");
    }

    #[test]
    fn castles_and_promotions() {
        let p = Position::from_fen("r3k2r/1P6/8/8/8/8/8/R3K2R w KQkq - 0 1").unwrap();
        assert_eq!(parse_san(&p, "O-O").unwrap().uci(), "e1g1");
        assert_eq!(parse_san(&p, "0-0-0").unwrap().uci(), "e1c1");
        assert_eq!(parse_san(&p, "bxa8=Q+").unwrap().uci(), "b7a8q");
        assert_eq!(parse_san(&p, "b8N").unwrap().uci(), "b7b8n");
    }

    #[test]
    fn san_suffixes() {
        let p = Position::from_fen("6k1/5ppp/8/8/8/8/8/R5K1 w - - 0 1").unwrap();
        let m = parse_san(&p, "Ra8").unwrap();
        assert_eq!(to_san(&p, m), "Ra8#");
    }
}
