//! Legal move generation.
//!
//! Moves are generated directly as legal using the check mask and pin rays
//! of the side to move. Order is fixed: pawns, knights, bishops, rooks,
//! queens, king, castling; origin squares ascending, then destinations
//! ascending, promotions as Q, R, B, N.

use arrayvec::ArrayVec;

use super::bitboard::{self, between, line, squares};
use super::position::Position;
use super::types::{CastlingRights, Color, Move, MoveKind, PieceKind, Square};

pub const MAX_MOVES: usize = 256;
pub type MoveList = ArrayVec<Move, MAX_MOVES>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    All,
    /// Captures (including en passant) and all promotions.
    Tactical,
}

pub fn generate_legal_moves(pos: &Position) -> MoveList {
    let mut list = MoveList::new();
    generate(pos, GenMode::All, &mut list);
    list
}

pub fn generate_tactical_moves(pos: &Position) -> MoveList {
    let mut list = MoveList::new();
    generate(pos, GenMode::Tactical, &mut list);
    list
}

/// True if the side to move has at least one legal move.
pub fn has_legal_move(pos: &Position) -> bool {
    !generate_legal_moves(pos).is_empty()
}

struct Ctx<'a> {
    pos: &'a Position,
    us: Color,
    king: Square,
    occ: u64,
    them_bb: u64,
    pinned: u64,
    /// Destinations that resolve a single check; all squares otherwise.
    check_mask: u64,
    mode: GenMode,
}

impl Ctx<'_> {
    #[inline]
    fn legal_dest(&self, from: Square, to_mask: u64) -> u64 {
        let mut m = to_mask & self.check_mask;
        if self.pinned & from.bb() != 0 {
            m &= line(self.king, from);
        }
        m
    }

    #[inline]
    fn push(&self, list: &mut MoveList, from: Square, to: Square, piece: PieceKind, kind: MoveKind) {
        let captured = self.pos.piece_at(to).map(|p| p.kind);
        list.push(Move { from, to, piece, captured, promotion: None, kind });
    }
}

fn pinned_pieces(pos: &Position, us: Color, king: Square) -> u64 {
    let them = !us;
    let occ = pos.occupied();
    let diag = pos.pieces(them, PieceKind::Bishop) | pos.pieces(them, PieceKind::Queen);
    let orth = pos.pieces(them, PieceKind::Rook) | pos.pieces(them, PieceKind::Queen);
    let snipers = (bitboard::bishop_attacks(king, 0) & diag) | (bitboard::rook_attacks(king, 0) & orth);
    let mut pinned = 0;
    for s in squares(snipers) {
        let blockers = between(king, s) & occ;
        if blockers.count_ones() == 1 {
            pinned |= blockers & pos.color_bb(us);
        }
    }
    pinned
}

pub fn generate(pos: &Position, mode: GenMode, list: &mut MoveList) {
    let us = pos.side_to_move();
    let king = pos.king_square(us);
    let occ = pos.occupied();
    let checkers = pos.attackers_to(king, occ) & pos.color_bb(!us);
    let check_mask = match checkers.count_ones() {
        0 => !0u64,
        1 => {
            let c = Square::new(checkers.trailing_zeros() as u8);
            between(king, c) | checkers
        }
        _ => 0,
    };
    let ctx = Ctx {
        pos,
        us,
        king,
        occ,
        them_bb: pos.color_bb(!us),
        pinned: pinned_pieces(pos, us, king),
        check_mask,
        mode,
    };

    if checkers.count_ones() < 2 {
        gen_pawns(&ctx, list);
        let targets = match mode {
            GenMode::All => !pos.color_bb(us),
            GenMode::Tactical => ctx.them_bb,
        };
        for from in squares(pos.pieces(us, PieceKind::Knight)) {
            // A pinned knight can never move.
            if ctx.pinned & from.bb() != 0 {
                continue;
            }
            for to in squares(ctx.legal_dest(from, bitboard::knight_attacks(from) & targets)) {
                ctx.push(list, from, to, PieceKind::Knight, MoveKind::Normal);
            }
        }
        for (kind, attacks) in [
            (PieceKind::Bishop, bitboard::bishop_attacks as fn(Square, u64) -> u64),
            (PieceKind::Rook, bitboard::rook_attacks),
            (PieceKind::Queen, bitboard::queen_attacks),
        ] {
            for from in squares(pos.pieces(us, kind)) {
                for to in squares(ctx.legal_dest(from, attacks(from, occ) & targets)) {
                    ctx.push(list, from, to, kind, MoveKind::Normal);
                }
            }
        }
    }

    gen_king(&ctx, list);
    if checkers == 0 && mode == GenMode::All {
        gen_castling(&ctx, list);
    }
}

fn gen_pawns(ctx: &Ctx, list: &mut MoveList) {
    let pos = ctx.pos;
    let us = ctx.us;
    let (push_dir, start_rank, promo_rank): (i8, u8, u8) = match us {
        Color::White => (8, 1, 7),
        Color::Black => (-8, 6, 0),
    };
    let empty = !ctx.occ;
    for from in squares(pos.pieces(us, PieceKind::Pawn)) {
        let mut dests: ArrayVec<(Square, MoveKind), 4> = ArrayVec::new();
        let one = Square::new((from.index() as i8 + push_dir) as u8);
        // Captures in ascending destination order, pushes slotted in order.
        let caps = bitboard::pawn_attacks(us, from) & ctx.them_bb;
        let mut candidates = caps;
        if one.bb() & empty != 0 {
            candidates |= one.bb();
            if from.rank() == start_rank {
                let two = Square::new((one.index() as i8 + push_dir) as u8);
                if two.bb() & empty != 0 {
                    candidates |= two.bb();
                }
            }
        }
        for to in squares(ctx.legal_dest(from, candidates)) {
            let kind = if to.index().abs_diff(from.index()) == 16 {
                MoveKind::DoublePush
            } else {
                MoveKind::Normal
            };
            dests.push((to, kind));
        }
        for (to, kind) in dests {
            let captured = pos.piece_at(to).map(|p| p.kind);
            if to.rank() == promo_rank {
                for promo in PieceKind::PROMOTIONS {
                    list.push(Move { from, to, piece: PieceKind::Pawn, captured, promotion: Some(promo), kind });
                }
            } else if captured.is_some() || ctx.mode == GenMode::All {
                list.push(Move { from, to, piece: PieceKind::Pawn, captured, promotion: None, kind });
            }
        }
        if let Some(ep) = pos.en_passant() {
            if bitboard::pawn_attacks(us, from) & ep.bb() != 0 && ep_is_legal(ctx, from, ep) {
                list.push(Move {
                    from,
                    to: ep,
                    piece: PieceKind::Pawn,
                    captured: Some(PieceKind::Pawn),
                    promotion: None,
                    kind: MoveKind::EnPassant,
                });
            }
        }
    }
}

/// En passant removes two pieces from one rank, so it is validated by
/// recomputing slider attacks on the king with the post-move occupancy.
fn ep_is_legal(ctx: &Ctx, from: Square, ep: Square) -> bool {
    let pos = ctx.pos;
    let them = !ctx.us;
    let captured = Square::from_coords(ep.file(), from.rank());
    if pos.piece_at(captured).map(|p| (p.color, p.kind)) != Some((them, PieceKind::Pawn)) {
        return false;
    }
    let occ = (ctx.occ ^ from.bb() ^ captured.bb()) | ep.bb();
    let diag = pos.pieces(them, PieceKind::Bishop) | pos.pieces(them, PieceKind::Queen);
    let orth = pos.pieces(them, PieceKind::Rook) | pos.pieces(them, PieceKind::Queen);
    let king = ctx.king;
    let remaining = pos.color_bb(them) & !captured.bb();
    let knights_pawns_ok = (bitboard::knight_attacks(king) & pos.pieces(them, PieceKind::Knight)) == 0
        && (bitboard::pawn_attacks(ctx.us, king) & pos.pieces(them, PieceKind::Pawn) & remaining) == 0;
    knights_pawns_ok
        && bitboard::bishop_attacks(king, occ) & diag == 0
        && bitboard::rook_attacks(king, occ) & orth == 0
}

fn gen_king(ctx: &Ctx, list: &mut MoveList) {
    let pos = ctx.pos;
    let from = ctx.king;
    let targets = match ctx.mode {
        GenMode::All => !pos.color_bb(ctx.us),
        GenMode::Tactical => ctx.them_bb,
    };
    let occ_without_king = ctx.occ ^ from.bb();
    for to in squares(bitboard::king_attacks(from) & targets) {
        if !pos.is_attacked(to, !ctx.us, occ_without_king) {
            ctx.push(list, from, to, PieceKind::King, MoveKind::Normal);
        }
    }
}

fn gen_castling(ctx: &Ctx, list: &mut MoveList) {
    let pos = ctx.pos;
    let us = ctx.us;
    let rights = pos.castling();
    let (king_from, rank) = match us {
        Color::White => (Square::E1, 0u8),
        Color::Black => (Square::E8, 7u8),
    };
    if ctx.king != king_from {
        return;
    }
    let sq = |f: u8| Square::from_coords(f, rank);
    if rights.has(CastlingRights::kingside(us)) {
        let path = sq(5).bb() | sq(6).bb();
        if ctx.occ & path == 0
            && !pos.is_attacked(sq(5), !us, ctx.occ)
            && !pos.is_attacked(sq(6), !us, ctx.occ)
        {
            list.push(Move {
                from: king_from,
                to: sq(6),
                piece: PieceKind::King,
                captured: None,
                promotion: None,
                kind: MoveKind::Castle,
            });
        }
    }
    if rights.has(CastlingRights::queenside(us)) {
        let path = sq(1).bb() | sq(2).bb() | sq(3).bb();
        if ctx.occ & path == 0
            && !pos.is_attacked(sq(3), !us, ctx.occ)
            && !pos.is_attacked(sq(2), !us, ctx.occ)
        {
            list.push(Move {
                from: king_from,
                to: sq(2),
                piece: PieceKind::King,
                captured: None,
                promotion: None,
                kind: MoveKind::Castle,
            });
        }
    }
}

/// Finds the legal move matching a UCI string such as `e2e4` or `e7e8q`.
pub fn find_uci_move(pos: &Position, uci: &str) -> Option<Move> {
    generate_legal_moves(pos).into_iter().find(|m| m.uci() == uci)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(fen: &str) -> Position {
        Position::from_fen(fen).unwrap()
    }

    #[test]
    fn start_position_has_twenty_moves() {
        assert_eq!(generate_legal_moves(&Position::startpos()).len(), 20);
    }

    #[test]
    fn checkmate_and_stalemate_have_no_moves() {
        // Fool's mate.
        let mated = pos("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3");
        assert!(mated.in_check());
        assert!(generate_legal_moves(&mated).is_empty());
        let stalemate = pos("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1");
        assert!(!stalemate.in_check());
        assert!(generate_legal_moves(&stalemate).is_empty());
    }

    #[test]
    fn pinned_piece_moves_along_pin_only() {
        // Bishop on e2 pinned by the rook on e8: no bishop moves at all.
        let p = pos("4r1k1/8/8/8/8/8/4B3/4K3 w - - 0 1");
        assert!(generate_legal_moves(&p).iter().all(|m| m.piece != PieceKind::Bishop));
        // Rook on e2 pinned on the file may slide along it.
        let p = pos("4r1k1/8/8/8/8/8/4R3/4K3 w - - 0 1");
        let rook: Vec<_> = generate_legal_moves(&p).into_iter().filter(|m| m.piece == PieceKind::Rook).collect();
        assert_eq!(rook.len(), 6);
        assert!(rook.iter().all(|m| m.to.file() == 4));
    }

    #[test]
    fn horizontal_en_passant_pin() {
        // exd6 would expose the king on a5 to the rook on h5.
        let p = pos("8/8/8/K2pP2r/8/8/8/7k w - d6 0 1");
        assert!(generate_legal_moves(&p).iter().all(|m| m.kind != MoveKind::EnPassant));
    }

    #[test]
    fn castling_blocked_through_attacked_square() {
        let p = pos("r3k2r/8/8/8/8/8/5r2/R3K2R w KQkq - 0 1");
        let castles: Vec<_> = generate_legal_moves(&p).into_iter().filter(|m| m.kind == MoveKind::Castle).collect();
        // f1 is attacked: only queen-side remains.
        assert_eq!(castles.len(), 1);
        assert_eq!(castles[0].to, Square::C1);
    }

    #[test]
    fn tactical_moves_are_captures_or_promotions() {
        let p = pos("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1");
        let tactical = generate_tactical_moves(&p);
        let all = generate_legal_moves(&p);
        assert!(tactical.iter().all(|m| m.is_tactical()));
        assert_eq!(tactical.len(), all.iter().filter(|m| m.is_tactical()).count());
    }

    #[test]
    fn order_is_deterministic() {
        let p = Position::startpos();
        let a: Vec<String> = generate_legal_moves(&p).iter().map(Move::uci).collect();
        let b: Vec<String> = generate_legal_moves(&p.clone()).iter().map(Move::uci).collect();
        assert_eq!(a, b);
        assert_eq!(a[0], "a2a3");
    }
}
