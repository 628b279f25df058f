//! FEN reading and writing.

use thiserror::Error;

use super::position::Position;
use super::types::{CastlingRights, Color, Piece, PieceKind, Square};

pub const START_FEN: &str = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FenError {
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: &'static str, found: usize },
    #[error("piece placement: {0}")]
    Placement(String),
    #[error("side to move: invalid value {0:?}")]
    SideToMove(String),
    #[error("castling: invalid value {0:?}")]
    Castling(String),
    #[error("en passant: invalid value {0:?}")]
    EnPassant(String),
    #[error("halfmove clock: invalid value {0:?}")]
    Halfmove(String),
    #[error("fullmove number: invalid value {0:?}")]
    Fullmove(String),
    #[error("kings: {0}")]
    Kings(String),
    #[error("side not to move is in check")]
    OpponentInCheck,
}

impl Position {
    /// Parses a full 6-field FEN string. `startpos` is accepted as an alias
    /// for the initial position.
    pub fn from_fen(text: &str) -> Result<Position, FenError> {
        let text = text.trim();
        if text == "startpos" {
            return Position::from_fen(START_FEN);
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(FenError::FieldCount { expected: "6", found: fields.len() });
        }
        let mut pos = Position::from_fen_fields(&fields[..4])?;
        pos.halfmove = fields[4]
            .parse()
            .map_err(|_| FenError::Halfmove(fields[4].to_string()))?;
        pos.fullmove = fields[5]
            .parse()
            .ok()
            .filter(|&n: &u16| n >= 1)
            .ok_or_else(|| FenError::Fullmove(fields[5].to_string()))?;
        Ok(pos)
    }

    /// Parses the four board fields shared by FEN and EPD; clocks are set
    /// to `0 1`.
    pub fn from_fen_fields(fields: &[&str]) -> Result<Position, FenError> {
        if fields.len() != 4 {
            return Err(FenError::FieldCount { expected: "4", found: fields.len() });
        }
        let mut pos = Position::empty();
        parse_placement(&mut pos, fields[0])?;

        pos.side = match fields[1] {
            "w" => Color::White,
            "b" => Color::Black,
            other => return Err(FenError::SideToMove(other.to_string())),
        };

        pos.castling = parse_castling(&pos, fields[2])?;

        pos.ep = match fields[3] {
            "-" => None,
            s => {
                let sq: Square = s.parse().map_err(|_| FenError::EnPassant(s.to_string()))?;
                let expected_rank = if pos.side == Color::White { 5 } else { 2 };
                if sq.rank() != expected_rank {
                    return Err(FenError::EnPassant(s.to_string()));
                }
                Some(sq)
            }
        };

        for c in Color::ALL {
            let n = pos.pieces(c, PieceKind::King).count_ones();
            if n != 1 {
                return Err(FenError::Kings(format!("{c} has {n} kings, expected 1")));
            }
        }
        if pos.is_attacked(pos.king_square(!pos.side), pos.side, pos.occupied()) {
            return Err(FenError::OpponentInCheck);
        }
        pos.hash = pos.compute_hash();
        Ok(pos)
    }

    /// Board fields only (EPD prefix).
    pub fn board_fen(&self) -> String {
        let mut out = String::with_capacity(64);
        for rank in (0..8).rev() {
            let mut empty = 0;
            for file in 0..8 {
                match self.piece_at(Square::from_coords(file, rank)) {
                    Some(p) => {
                        if empty > 0 {
                            out.push(char::from(b'0' + empty));
                            empty = 0;
                        }
                        out.push(p.fen_char());
                    }
                    None => empty += 1,
                }
            }
            if empty > 0 {
                out.push(char::from(b'0' + empty));
            }
            if rank > 0 {
                out.push('/');
            }
        }
        out.push(' ');
        out.push(if self.side == Color::White { 'w' } else { 'b' });
        out.push(' ');
        let c = self.castling;
        if c.bits() == 0 {
            out.push('-');
        } else {
            for (flag, ch) in [
                (CastlingRights::WHITE_KING, 'K'),
                (CastlingRights::WHITE_QUEEN, 'Q'),
                (CastlingRights::BLACK_KING, 'k'),
                (CastlingRights::BLACK_QUEEN, 'q'),
            ] {
                if c.has(flag) {
                    out.push(ch);
                }
            }
        }
        out.push(' ');
        match self.ep {
            Some(sq) => out.push_str(&sq.to_string()),
            None => out.push('-'),
        }
        out
    }

    pub fn to_fen(&self) -> String {
        format!("{} {} {}", self.board_fen(), self.halfmove, self.fullmove)
    }
}

fn parse_placement(pos: &mut Position, text: &str) -> Result<(), FenError> {
    let ranks: Vec<&str> = text.split('/').collect();
    if ranks.len() != 8 {
        return Err(FenError::Placement(format!("expected 8 ranks, found {}", ranks.len())));
    }
    for (i, row) in ranks.iter().enumerate() {
        let rank = 7 - i as u8;
        let mut file = 0u8;
        for ch in row.chars() {
            if let Some(d) = ch.to_digit(10) {
                if !(1..=8).contains(&d) {
                    return Err(FenError::Placement(format!("bad digit {ch:?} in rank {}", rank + 1)));
                }
                file += d as u8;
            } else {
                let piece = Piece::from_fen_char(ch)
                    .ok_or_else(|| FenError::Placement(format!("unknown piece {ch:?}")))?;
                if file >= 8 {
                    return Err(FenError::Placement(format!("rank {} too long", rank + 1)));
                }
                if piece.kind == PieceKind::Pawn && (rank == 0 || rank == 7) {
                    return Err(FenError::Placement(format!("pawn on rank {}", rank + 1)));
                }
                pos.put(Square::from_coords(file, rank), piece);
                file += 1;
            }
            if file > 8 {
                return Err(FenError::Placement(format!("rank {} too long", rank + 1)));
            }
        }
        if file != 8 {
            return Err(FenError::Placement(format!("rank {} has {file} files", rank + 1)));
        }
    }
    Ok(())
}

fn parse_castling(pos: &Position, text: &str) -> Result<CastlingRights, FenError> {
    let mut rights = CastlingRights::NONE;
    if text == "-" {
        return Ok(rights);
    }
    for ch in text.chars() {
        let (flag, color, king_sq, rook_sq) = match ch {
            'K' => (CastlingRights::WHITE_KING, Color::White, Square::E1, Square::H1),
            'Q' => (CastlingRights::WHITE_QUEEN, Color::White, Square::E1, Square::A1),
            'k' => (CastlingRights::BLACK_KING, Color::Black, Square::E8, Square::H8),
            'q' => (CastlingRights::BLACK_QUEEN, Color::Black, Square::E8, Square::A8),
            _ => return Err(FenError::Castling(text.to_string())),
        };
        if rights.has(flag)
            || pos.piece_at(king_sq) != Some(Piece::new(color, PieceKind::King))
            || pos.piece_at(rook_sq) != Some(Piece::new(color, PieceKind::Rook))
        {
            return Err(FenError::Castling(text.to_string()));
        }
        rights.insert(flag);
    }
    Ok(rights)
}
