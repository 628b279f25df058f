//! Board state with incremental make/unmake and Zobrist hashing.

use super::bitboard::{self, squares};
use super::types::{CastlingRights, Color, Move, MoveKind, Piece, PieceKind, Square};
use super::zobrist::KEYS;

/// Complete game state.
///
/// `history` holds the hash of every position that preceded the current one
/// since construction; `rep_start` marks where the positions reachable by
/// repetition begin (the last irreversible move).
#[derive(Clone, Debug)]
pub struct Position {
    pub(crate) by_kind: [[u64; 6]; 2],
    pub(crate) by_color: [u64; 2],
    pub(crate) board: [Option<Piece>; 64],
    pub(crate) side: Color,
    pub(crate) castling: CastlingRights,
    pub(crate) ep: Option<Square>,
    pub(crate) halfmove: u16,
    pub(crate) fullmove: u16,
    pub(crate) hash: u64,
    pub(crate) history: Vec<u64>,
    pub(crate) rep_start: usize,
}

/// Everything needed to take a move back.
#[derive(Clone, Copy, Debug)]
#[must_use]
pub struct Undo {
    mv: Option<Move>,
    castling: CastlingRights,
    ep: Option<Square>,
    halfmove: u16,
    fullmove: u16,
    hash: u64,
    rep_start: usize,
}

impl Undo {
    /// The move this token reverts; `None` for a null move.
    pub fn mv(&self) -> Option<Move> {
        self.mv
    }
}

/// Castling-right bits cleared when a piece moves from or to each square.
const fn build_castle_masks() -> [u8; 64] {
    let mut m = [0u8; 64];
    m[0] = CastlingRights::WHITE_QUEEN;
    m[4] = CastlingRights::WHITE_KING | CastlingRights::WHITE_QUEEN;
    m[7] = CastlingRights::WHITE_KING;
    m[56] = CastlingRights::BLACK_QUEEN;
    m[60] = CastlingRights::BLACK_KING | CastlingRights::BLACK_QUEEN;
    m[63] = CastlingRights::BLACK_KING;
    m
}

static CASTLE_MASK: [u8; 64] = build_castle_masks();

impl PartialEq for Position {
    /// Bit-identical state, including clocks and repetition history.
    fn eq(&self, other: &Self) -> bool {
        self.board == other.board
            && self.side == other.side
            && self.castling == other.castling
            && self.ep == other.ep
            && self.halfmove == other.halfmove
            && self.fullmove == other.fullmove
            && self.hash == other.hash
            && self.repetition_stack() == other.repetition_stack()
            && self.by_kind == other.by_kind
            && self.by_color == other.by_color
    }
}

impl Eq for Position {}

impl Position {
    pub(crate) fn empty() -> Position {
        Position {
            by_kind: [[0; 6]; 2],
            by_color: [0; 2],
            board: [None; 64],
            side: Color::White,
            castling: CastlingRights::NONE,
            ep: None,
            halfmove: 0,
            fullmove: 1,
            hash: 0,
            history: Vec::new(),
            rep_start: 0,
        }
    }

    pub fn startpos() -> Position {
        Position::from_fen(super::fen::START_FEN).expect("start FEN is valid")
    }

    #[inline]
    pub fn side_to_move(&self) -> Color {
        self.side
    }

    #[inline]
    pub fn castling(&self) -> CastlingRights {
        self.castling
    }

    #[inline]
    pub fn en_passant(&self) -> Option<Square> {
        self.ep
    }

    #[inline]
    pub fn halfmove_clock(&self) -> u16 {
        self.halfmove
    }

    #[inline]
    pub fn fullmove_number(&self) -> u16 {
        self.fullmove
    }

    #[inline]
    pub fn hash(&self) -> u64 {
        self.hash
    }

    #[inline]
    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        self.board[sq.index()]
    }

    #[inline]
    pub fn pieces(&self, color: Color, kind: PieceKind) -> u64 {
        self.by_kind[color.index()][kind.index()]
    }

    #[inline]
    pub fn color_bb(&self, color: Color) -> u64 {
        self.by_color[color.index()]
    }

    #[inline]
    pub fn occupied(&self) -> u64 {
        self.by_color[0] | self.by_color[1]
    }

    #[inline]
    pub fn kind_bb(&self, kind: PieceKind) -> u64 {
        self.by_kind[0][kind.index()] | self.by_kind[1][kind.index()]
    }

    #[inline]
    pub fn king_square(&self, color: Color) -> Square {
        let kings = self.pieces(color, PieceKind::King);
        debug_assert!(kings != 0, "{color} king missing");
        Square::new(kings.trailing_zeros() as u8)
    }

    /// Hashes of the positions since the last irreversible move, oldest
    /// first. Its length equals the plies played since that move.
    pub fn repetition_stack(&self) -> &[u64] {
        &self.history[self.rep_start..]
    }

    /// True if the side to move has a piece other than king and pawns.
    pub fn has_non_pawn_material(&self, color: Color) -> bool {
        let c = color.index();
        (self.by_kind[c][1] | self.by_kind[c][2] | self.by_kind[c][3] | self.by_kind[c][4]) != 0
    }

    #[inline]
    pub(crate) fn put(&mut self, sq: Square, piece: Piece) {
        debug_assert!(self.board[sq.index()].is_none());
        let bb = sq.bb();
        self.by_kind[piece.color.index()][piece.kind.index()] |= bb;
        self.by_color[piece.color.index()] |= bb;
        self.board[sq.index()] = Some(piece);
        self.hash ^= KEYS.pieces[piece.index()][sq.index()];
    }

    #[inline]
    fn remove(&mut self, sq: Square) -> Piece {
        let piece = self.board[sq.index()].expect("remove from empty square");
        let bb = sq.bb();
        self.by_kind[piece.color.index()][piece.kind.index()] ^= bb;
        self.by_color[piece.color.index()] ^= bb;
        self.board[sq.index()] = None;
        self.hash ^= KEYS.pieces[piece.index()][sq.index()];
        piece
    }

    #[inline]
    fn shift(&mut self, from: Square, to: Square) {
        let piece = self.remove(from);
        self.put(to, piece);
    }

    /// Recomputes the Zobrist key from scratch.
    pub fn compute_hash(&self) -> u64 {
        let mut h = 0u64;
        for sq in Square::all() {
            if let Some(p) = self.board[sq.index()] {
                h ^= KEYS.pieces[p.index()][sq.index()];
            }
        }
        h ^= KEYS.castling[self.castling.bits() as usize];
        if let Some(ep) = self.ep {
            h ^= KEYS.ep_file[ep.file() as usize];
        }
        if self.side == Color::Black {
            h ^= KEYS.side;
        }
        h
    }

    /// All pieces of either color attacking `sq` given occupancy `occ`.
    #[inline]
    pub fn attackers_to(&self, sq: Square, occ: u64) -> u64 {
        use PieceKind::*;
        let knights = self.kind_bb(Knight);
        let kings = self.kind_bb(King);
        let diag = self.kind_bb(Bishop) | self.kind_bb(Queen);
        let orth = self.kind_bb(Rook) | self.kind_bb(Queen);
        (bitboard::pawn_attacks(Color::White, sq) & self.pieces(Color::Black, Pawn))
            | (bitboard::pawn_attacks(Color::Black, sq) & self.pieces(Color::White, Pawn))
            | (bitboard::knight_attacks(sq) & knights)
            | (bitboard::king_attacks(sq) & kings)
            | (bitboard::bishop_attacks(sq, occ) & diag)
            | (bitboard::rook_attacks(sq, occ) & orth)
    }

    /// Is `sq` attacked by any piece of `by`?
    #[inline]
    pub fn is_attacked(&self, sq: Square, by: Color, occ: u64) -> bool {
        self.attackers_to(sq, occ) & self.color_bb(by) != 0
    }

    /// Enemy pieces giving check to the side to move.
    #[inline]
    pub fn checkers(&self) -> u64 {
        let king = self.king_square(self.side);
        self.attackers_to(king, self.occupied()) & self.color_bb(!self.side)
    }

    #[inline]
    pub fn in_check(&self) -> bool {
        self.checkers() != 0
    }

    /// Does `m` (legal in this position) check the opponent?
    pub fn gives_check(&self, m: Move) -> bool {
        use PieceKind::*;
        let us = self.side;
        let them_king = self.king_square(!us);
        let mut occ = self.occupied() ^ m.from.bb() | m.to.bb();
        let mut ours = [0u64; 6];
        for k in PieceKind::ALL {
            ours[k.index()] = self.pieces(us, k);
        }
        ours[m.piece.index()] ^= m.from.bb();
        ours[m.promotion.unwrap_or(m.piece).index()] |= m.to.bb();
        match m.kind {
            MoveKind::EnPassant => {
                let cap = Square::from_coords(m.to.file(), m.from.rank());
                occ ^= cap.bb();
            }
            MoveKind::Castle => {
                let (rf, rt) = castle_rook_squares(m.to);
                occ ^= rf.bb() | rt.bb();
                ours[Rook.index()] ^= rf.bb() | rt.bb();
            }
            _ => {}
        }
        (bitboard::pawn_attacks(!us, them_king) & ours[Pawn.index()]) != 0
            || (bitboard::knight_attacks(them_king) & ours[Knight.index()]) != 0
            || (bitboard::bishop_attacks(them_king, occ) & (ours[Bishop.index()] | ours[Queen.index()])) != 0
            || (bitboard::rook_attacks(them_king, occ) & (ours[Rook.index()] | ours[Queen.index()])) != 0
    }

    /// Applies a legal move and returns the token that reverts it.
    pub fn make_move(&mut self, m: Move) -> Undo {
        debug_assert!(
            self.piece_at(m.from) == Some(Piece::new(self.side, m.piece)),
            "move {m} does not match the board"
        );
        let undo = Undo {
            mv: Some(m),
            castling: self.castling,
            ep: self.ep,
            halfmove: self.halfmove,
            fullmove: self.fullmove,
            hash: self.hash,
            rep_start: self.rep_start,
        };
        let us = self.side;
        self.history.push(self.hash);

        if let Some(ep) = self.ep.take() {
            self.hash ^= KEYS.ep_file[ep.file() as usize];
        }

        match m.kind {
            MoveKind::EnPassant => {
                let cap = Square::from_coords(m.to.file(), m.from.rank());
                self.remove(cap);
                self.shift(m.from, m.to);
            }
            MoveKind::Castle => {
                let (rf, rt) = castle_rook_squares(m.to);
                self.shift(m.from, m.to);
                self.shift(rf, rt);
            }
            MoveKind::DoublePush | MoveKind::Normal => {
                if m.captured.is_some() {
                    self.remove(m.to);
                }
                if let Some(promo) = m.promotion {
                    self.remove(m.from);
                    self.put(m.to, Piece::new(us, promo));
                } else {
                    self.shift(m.from, m.to);
                }
                if m.kind == MoveKind::DoublePush {
                    let ep = Square::from_coords(m.from.file(), (m.from.rank() + m.to.rank()) / 2);
                    self.ep = Some(ep);
                    self.hash ^= KEYS.ep_file[ep.file() as usize];
                }
            }
        }

        let mask = CASTLE_MASK[m.from.index()] | CASTLE_MASK[m.to.index()];
        if mask != 0 && self.castling.bits() & mask != 0 {
            self.hash ^= KEYS.castling[self.castling.bits() as usize];
            self.castling.remove(mask);
            self.hash ^= KEYS.castling[self.castling.bits() as usize];
        }

        if m.piece == PieceKind::Pawn || m.captured.is_some() {
            self.halfmove = 0;
            self.rep_start = self.history.len();
        } else {
            self.halfmove += 1;
        }
        if us == Color::Black {
            self.fullmove += 1;
        }
        self.side = !us;
        self.hash ^= KEYS.side;
        undo
    }

    /// Reverts the move recorded in `undo`, which must be the most recent
    /// move or null move made on this position.
    pub fn unmake_move(&mut self, undo: Undo) {
        self.side = !self.side;
        let us = self.side;
        if let Some(m) = undo.mv {
            match m.kind {
                MoveKind::EnPassant => {
                    self.shift(m.to, m.from);
                    let cap = Square::from_coords(m.to.file(), m.from.rank());
                    self.put(cap, Piece::new(!us, PieceKind::Pawn));
                }
                MoveKind::Castle => {
                    let (rf, rt) = castle_rook_squares(m.to);
                    self.shift(rt, rf);
                    self.shift(m.to, m.from);
                }
                MoveKind::DoublePush | MoveKind::Normal => {
                    if m.promotion.is_some() {
                        self.remove(m.to);
                        self.put(m.from, Piece::new(us, PieceKind::Pawn));
                    } else {
                        self.shift(m.to, m.from);
                    }
                    if let Some(cap) = m.captured {
                        self.put(m.to, Piece::new(!us, cap));
                    }
                }
            }
        }
        self.history.pop();
        self.castling = undo.castling;
        self.ep = undo.ep;
        self.halfmove = undo.halfmove;
        self.fullmove = undo.fullmove;
        self.hash = undo.hash;
        self.rep_start = undo.rep_start;
    }

    /// Passes the turn. Only valid when the side to move is not in check.
    pub fn make_null(&mut self) -> Undo {
        debug_assert!(!self.in_check(), "null move while in check");
        let undo = Undo {
            mv: None,
            castling: self.castling,
            ep: self.ep,
            halfmove: self.halfmove,
            fullmove: self.fullmove,
            hash: self.hash,
            rep_start: self.rep_start,
        };
        self.history.push(self.hash);
        if let Some(ep) = self.ep.take() {
            self.hash ^= KEYS.ep_file[ep.file() as usize];
        }
        // A null move breaks repetition chains.
        self.rep_start = self.history.len();
        self.halfmove += 1;
        self.side = !self.side;
        self.hash ^= KEYS.side;
        undo
    }

    /// True if the current position occurred before since the last
    /// irreversible move (twofold, used inside search).
    pub fn is_repetition(&self) -> bool {
        let stack = self.repetition_stack();
        // Only positions with the same side to move can match.
        stack.iter().rev().skip(1).step_by(2).any(|&h| h == self.hash)
    }

    /// Occurrences of the current position, counting itself.
    pub fn repetition_count(&self) -> usize {
        1 + self.repetition_stack().iter().rev().skip(1).step_by(2).filter(|&&h| h == self.hash).count()
    }

    /// Neither side can possibly mate: K v K, K+minor v K, or bishops only
    /// with all bishops on one square color.
    pub fn is_insufficient_material(&self) -> bool {
        use PieceKind::*;
        if self.kind_bb(Pawn) | self.kind_bb(Rook) | self.kind_bb(Queen) != 0 {
            return false;
        }
        let knights = self.kind_bb(Knight);
        let bishops = self.kind_bb(Bishop);
        let minors = (knights | bishops).count_ones();
        if minors <= 1 {
            return true;
        }
        knights == 0 && (bishops & bitboard::LIGHT_SQUARES == 0 || bishops & !bitboard::LIGHT_SQUARES == 0)
    }

    /// Vertical flip with colors swapped, including side to move, rights and
    /// en-passant square. History is not carried over.
    pub fn mirrored(&self) -> Position {
        let mut p = Position::empty();
        for sq in Square::all() {
            if let Some(piece) = self.board[sq.index()] {
                p.put(sq.flip_rank(), Piece::new(!piece.color, piece.kind));
            }
        }
        p.side = !self.side;
        p.castling = self.castling.swapped();
        p.ep = self.ep.map(Square::flip_rank);
        p.halfmove = self.halfmove;
        p.fullmove = self.fullmove;
        p.hash = p.compute_hash();
        p
    }

    /// Checks the structural invariants; used by tests and debug builds.
    pub fn validate(&self) -> Result<(), String> {
        for c in Color::ALL {
            if self.pieces(c, PieceKind::King).count_ones() != 1 {
                return Err(format!("{c} must have exactly one king"));
            }
        }
        if self.is_attacked(self.king_square(!self.side), self.side, self.occupied()) {
            return Err("side not to move is in check".into());
        }
        if let Some(ep) = self.ep {
            if ep.rank() != 2 && ep.rank() != 5 {
                return Err(format!("en-passant square {ep} not on rank 3 or 6"));
            }
        }
        if self.hash != self.compute_hash() {
            return Err("incremental hash out of sync".into());
        }
        let mut by_color = [0u64; 2];
        for sq in Square::all() {
            if let Some(p) = self.board[sq.index()] {
                if self.by_kind[p.color.index()][p.kind.index()] & sq.bb() == 0 {
                    return Err(format!("bitboards disagree with mailbox at {sq}"));
                }
                by_color[p.color.index()] |= sq.bb();
            }
        }
        if by_color != self.by_color {
            return Err("color bitboards disagree with mailbox".into());
        }
        if self.kind_bb(PieceKind::Pawn) & (bitboard::RANK_1 | bitboard::RANK_8) != 0 {
            return Err("pawn on first or last rank".into());
        }
        Ok(())
    }

    /// Number of occupied squares.
    pub fn piece_count(&self) -> u32 {
        self.occupied().count_ones()
    }

    /// Pawn of `color` on `sq` with no enemy pawn ahead on its own or an
    /// adjacent file.
    pub fn is_passed_pawn(&self, color: Color, sq: Square) -> bool {
        let files = bitboard::adjacent_files_inclusive(sq.file());
        let ahead = match color {
            Color::White => {
                if sq.rank() >= 7 {
                    0
                } else {
                    !0u64 << ((sq.rank() + 1) * 8)
                }
            }
            Color::Black => (1u64 << (sq.rank() * 8)) - 1,
        };
        self.pieces(!color, PieceKind::Pawn) & files & ahead == 0
    }

    /// Squares attacked by `color` (occupancy-aware).
    pub fn attacked_by(&self, color: Color) -> u64 {
        use PieceKind::*;
        let occ = self.occupied();
        let mut att = 0u64;
        for sq in squares(self.pieces(color, Pawn)) {
            att |= bitboard::pawn_attacks(color, sq);
        }
        for sq in squares(self.pieces(color, Knight)) {
            att |= bitboard::knight_attacks(sq);
        }
        for sq in squares(self.pieces(color, Bishop) | self.pieces(color, Queen)) {
            att |= bitboard::bishop_attacks(sq, occ);
        }
        for sq in squares(self.pieces(color, Rook) | self.pieces(color, Queen)) {
            att |= bitboard::rook_attacks(sq, occ);
        }
        att | bitboard::king_attacks(self.king_square(color))
    }
}

/// Rook origin and destination for a castling move landing the king on
/// `king_to`.
#[inline]
pub(crate) fn castle_rook_squares(king_to: Square) -> (Square, Square) {
    match king_to {
        Square::G1 => (Square::H1, Square::F1),
        Square::C1 => (Square::A1, Square::D1),
        Square::G8 => (Square::H8, Square::F8),
        Square::C8 => (Square::A8, Square::D8),
        _ => unreachable!("not a castling destination: {king_to}"),
    }
}
