use super::attacks::{self, Squares};
use super::types::{CastlingRights, Color, Move, Piece, PieceKind, Square};

/// Why a placement is not an acceptable position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IllegalPosition {
    #[error("{color:?} has {count} kings, expected exactly one")]
    KingCount { color: Color, count: u32 },
    #[error("pawn on back rank at {0}")]
    PawnOnBackRank(Square),
    #[error("side not to move is in check")]
    OpponentInCheck,
    #[error("kings on adjacent squares")]
    KingsAdjacent,
    #[error("castling right without king and rook on their home squares")]
    InvalidCastling,
    #[error("en passant target {0} is not consistent with a double pawn push")]
    InvalidEnPassant(Square),
}

/// A full chess position. Values are immutable from the outside; every
/// publicly reachable `Position` satisfies the legality invariants checked
/// by [`Position::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    by_kind: [u64; 6],
    by_color: [u64; 2],
    side_to_move: Color,
    castling: CastlingRights,
    en_passant: Option<Square>,
    halfmove_clock: u32,
    fullmove_number: u32,
}

impl Position {
    pub(crate) fn empty(side_to_move: Color) -> Position {
        Position {
            by_kind: [0; 6],
            by_color: [0; 2],
            side_to_move,
            castling: CastlingRights::NONE,
            en_passant: None,
            halfmove_clock: 0,
            fullmove_number: 1,
        }
    }

    pub fn initial() -> Position {
        super::fen::parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1")
            .expect("initial position is valid")
    }

    /// Bare kings on the given squares, White to move.
    pub fn with_kings(white: Square, black: Square) -> Result<Position, IllegalPosition> {
        let mut p = Position::empty(Color::White);
        p.put(white, Piece::new(Color::White, PieceKind::King));
        p.put(black, Piece::new(Color::Black, PieceKind::King));
        p.validate()?;
        Ok(p)
    }

    #[inline]
    pub fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    #[inline]
    pub fn castling(&self) -> CastlingRights {
        self.castling
    }

    #[inline]
    pub fn en_passant(&self) -> Option<Square> {
        self.en_passant
    }

    pub fn halfmove_clock(&self) -> u32 {
        self.halfmove_clock
    }

    pub fn fullmove_number(&self) -> u32 {
        self.fullmove_number
    }

    #[inline]
    pub fn occupied(&self) -> u64 {
        self.by_color[0] | self.by_color[1]
    }

    #[inline]
    pub fn color_bb(&self, color: Color) -> u64 {
        self.by_color[color.index()]
    }

    #[inline]
    pub fn pieces_bb(&self, color: Color, kind: PieceKind) -> u64 {
        self.by_color[color.index()] & self.by_kind[kind.index()]
    }

    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        let bb = sq.bb();
        let color = if self.by_color[0] & bb != 0 {
            Color::White
        } else if self.by_color[1] & bb != 0 {
            Color::Black
        } else {
            return None;
        };
        let kind = PieceKind::ALL
            .into_iter()
            .find(|k| self.by_kind[k.index()] & bb != 0)?;
        Some(Piece { color, kind })
    }

    /// All pieces on the board in square order.
    pub fn pieces(&self) -> impl Iterator<Item = (Square, Piece)> + '_ {
        Squares(self.occupied()).map(move |sq| (sq, self.piece_at(sq).expect("occupied")))
    }

    pub fn piece_count(&self, color: Color) -> u32 {
        self.color_bb(color).count_ones()
    }

    pub fn count(&self, color: Color, kind: PieceKind) -> u32 {
        self.pieces_bb(color, kind).count_ones()
    }

    pub fn king_square(&self, color: Color) -> Option<Square> {
        let bb = self.pieces_bb(color, PieceKind::King);
        (bb != 0).then(|| Square::new(bb.trailing_zeros() as u8))
    }

    #[inline]
    pub(crate) fn put(&mut self, sq: Square, piece: Piece) {
        let bb = sq.bb();
        self.clear(sq);
        self.by_color[piece.color.index()] |= bb;
        self.by_kind[piece.kind.index()] |= bb;
    }

    #[inline]
    pub(crate) fn clear(&mut self, sq: Square) {
        let mask = !sq.bb();
        for b in self.by_color.iter_mut() {
            *b &= mask;
        }
        for b in self.by_kind.iter_mut() {
            *b &= mask;
        }
    }

    pub(crate) fn set_castling(&mut self, rights: CastlingRights) {
        self.castling = rights;
    }

    pub(crate) fn set_en_passant(&mut self, sq: Option<Square>) {
        self.en_passant = sq;
    }

    pub(crate) fn set_counters(&mut self, halfmove: u32, fullmove: u32) {
        self.halfmove_clock = halfmove;
        self.fullmove_number = fullmove;
    }

    /// Returns a copy with `piece` placed on `sq` (replacing whatever stood
    /// there), provided the result is still legal.
    pub fn with_piece(&self, sq: Square, piece: Piece) -> Result<Position, IllegalPosition> {
        let mut p = *self;
        p.put(sq, piece);
        p.drop_stale_rights();
        p.validate()?;
        Ok(p)
    }

    /// Returns a copy with `sq` emptied, provided the result is still legal.
    pub fn without_piece(&self, sq: Square) -> Result<Position, IllegalPosition> {
        let mut p = *self;
        p.clear(sq);
        p.drop_stale_rights();
        p.validate()?;
        Ok(p)
    }

    /// Returns a copy with the given castling rights, provided they are
    /// backed by king and rook placement.
    pub fn with_castling(&self, rights: CastlingRights) -> Result<Position, IllegalPosition> {
        let mut p = *self;
        p.castling = rights;
        p.validate()?;
        Ok(p)
    }

    /// Removes castling rights and en-passant targets no longer backed by
    /// the placement after an edit.
    fn drop_stale_rights(&mut self) {
        let c = self.castling;
        let ok = |color: Color, king: usize, rook: usize| {
            self.pieces_bb(color, PieceKind::King) & (1 << king) != 0
                && self.pieces_bb(color, PieceKind::Rook) & (1 << rook) != 0
        };
        self.castling = CastlingRights {
            white_king_side: c.white_king_side && ok(Color::White, 4, 7),
            white_queen_side: c.white_queen_side && ok(Color::White, 4, 0),
            black_king_side: c.black_king_side && ok(Color::Black, 60, 63),
            black_queen_side: c.black_queen_side && ok(Color::Black, 60, 56),
        };
        if let Some(ep) = self.en_passant {
            if self.check_en_passant(ep).is_err() {
                self.en_passant = None;
            }
        }
    }

    fn check_en_passant(&self, ep: Square) -> Result<(), IllegalPosition> {
        let us = self.side_to_move;
        let (target_rank, dir) = match us {
            Color::White => (5, -1),
            Color::Black => (2, 1),
        };
        let bad = IllegalPosition::InvalidEnPassant(ep);
        if ep.rank() != target_rank {
            return Err(bad);
        }
        let pawn_sq = ep.offset(0, dir).ok_or(bad.clone())?;
        let origin = ep.offset(0, -dir).ok_or(bad.clone())?;
        if self.pieces_bb(!us, PieceKind::Pawn) & pawn_sq.bb() == 0
            || self.occupied() & (ep.bb() | origin.bb()) != 0
        {
            return Err(bad);
        }
        Ok(())
    }

    /// Checks every structural invariant a position must satisfy.
    pub fn validate(&self) -> Result<(), IllegalPosition> {
        for color in Color::ALL {
            let count = self.count(color, PieceKind::King);
            if count != 1 {
                return Err(IllegalPosition::KingCount { color, count });
            }
        }
        let back_ranks = 0xFF00_0000_0000_00FFu64;
        let pawns = self.by_kind[PieceKind::Pawn.index()] & back_ranks;
        if pawns != 0 {
            return Err(IllegalPosition::PawnOnBackRank(Square::new(
                pawns.trailing_zeros() as u8,
            )));
        }
        let wk = self.king_square(Color::White).expect("one king");
        let bk = self.king_square(Color::Black).expect("one king");
        if attacks::king(wk) & bk.bb() != 0 {
            return Err(IllegalPosition::KingsAdjacent);
        }
        let them = !self.side_to_move;
        if self.is_attacked(self.king_square(them).expect("one king"), self.side_to_move) {
            return Err(IllegalPosition::OpponentInCheck);
        }
        let c = self.castling;
        let home = |color: Color, king: usize, rook: usize| {
            self.pieces_bb(color, PieceKind::King) & (1 << king) != 0
                && self.pieces_bb(color, PieceKind::Rook) & (1 << rook) != 0
        };
        if (c.white_king_side && !home(Color::White, 4, 7))
            || (c.white_queen_side && !home(Color::White, 4, 0))
            || (c.black_king_side && !home(Color::Black, 60, 63))
            || (c.black_queen_side && !home(Color::Black, 60, 56))
        {
            return Err(IllegalPosition::InvalidCastling);
        }
        if let Some(ep) = self.en_passant {
            self.check_en_passant(ep)?;
        }
        Ok(())
    }

    /// Is `sq` attacked by any piece of `by`?
    #[inline]
    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        self.is_attacked_with(sq, by, self.occupied())
    }

    #[inline]
    pub(crate) fn is_attacked_with(&self, sq: Square, by: Color, occupied: u64) -> bool {
        let them = self.by_color[by.index()];
        let k = &self.by_kind;
        if attacks::knight(sq) & them & k[PieceKind::Knight.index()] != 0 {
            return true;
        }
        if attacks::king(sq) & them & k[PieceKind::King.index()] != 0 {
            return true;
        }
        if attacks::pawn(!by, sq) & them & k[PieceKind::Pawn.index()] != 0 {
            return true;
        }
        let queens = k[PieceKind::Queen.index()];
        let diag = them & (k[PieceKind::Bishop.index()] | queens);
        if diag != 0 && attacks::bishop(sq, occupied) & diag != 0 {
            return true;
        }
        let straight = them & (k[PieceKind::Rook.index()] | queens);
        straight != 0 && attacks::rook(sq, occupied) & straight != 0
    }

    /// Is the side to move in check?
    #[inline]
    pub fn in_check(&self) -> bool {
        match self.king_square(self.side_to_move) {
            Some(k) => self.is_attacked(k, !self.side_to_move),
            None => false,
        }
    }

    /// Everything that affects future play, without the move counters.
    pub(crate) fn search_key(&self) -> [u64; 8] {
        let flags = self.side_to_move.index() as u64
            | (self.castling.white_king_side as u64) << 1
            | (self.castling.white_queen_side as u64) << 2
            | (self.castling.black_king_side as u64) << 3
            | (self.castling.black_queen_side as u64) << 4
            | self.en_passant.map_or(0, |s| (s.index() as u64 + 1) << 8);
        let k = &self.by_kind;
        [k[0], k[1], k[2], k[3], k[4], k[5], self.by_color[0], flags]
    }

    /// Applies a move without checking that it is legal. The move must come
    /// from this position's move generator.
    pub fn make_move(&self, m: &Move) -> Position {
        let mut p = *self;
        let us = self.side_to_move;
        let moving = self.piece_at(m.from).expect("move origin occupied");
        let captured = self.piece_at(m.to);

        p.clear(m.from);
        if m.en_passant {
            let victim = Square::from_coords(m.to.file(), m.from.rank());
            p.clear(victim);
        }
        let placed = match m.promotion {
            Some(kind) => Piece::new(us, kind),
            None => moving,
        };
        p.put(m.to, placed);

        if m.castle {
            let (rook_from, rook_to) = match m.to.index() {
                6 => (7, 5),
                2 => (0, 3),
                62 => (63, 61),
                58 => (56, 59),
                _ => unreachable!("castle destination"),
            };
            p.clear(Square::new(rook_from));
            p.put(Square::new(rook_to), Piece::new(us, PieceKind::Rook));
        }

        p.castling.touch(m.from);
        p.castling.touch(m.to);

        p.en_passant = None;
        if moving.kind == PieceKind::Pawn && m.from.rank().abs_diff(m.to.rank()) == 2 {
            p.en_passant = Some(Square::from_coords(m.from.file(), (m.from.rank() + m.to.rank()) / 2));
        }

        if moving.kind == PieceKind::Pawn || captured.is_some() || m.en_passant {
            p.halfmove_clock = 0;
        } else {
            p.halfmove_clock = self.halfmove_clock + 1;
        }
        if us == Color::Black {
            p.fullmove_number = self.fullmove_number + 1;
        }
        p.side_to_move = !us;
        p
    }

    /// Pseudo-legal moves for the side to move, without check flags.
    fn pseudo_moves(&self, out: &mut Vec<Move>) {
        let us = self.side_to_move;
        let own = self.color_bb(us);
        let them = self.color_bb(!us);
        let occ = own | them;

        let quiet = |from: Square, to: Square, out: &mut Vec<Move>| {
            out.push(Move {
                from,
                to,
                promotion: None,
                capture: them & to.bb() != 0,
                check: false,
                castle: false,
                en_passant: false,
            })
        };

        // Pawns
        let (push, start_rank, last_rank) = match us {
            Color::White => (8i8, 1u8, 7u8),
            Color::Black => (-8i8, 6u8, 0u8),
        };
        for from in Squares(self.pieces_bb(us, PieceKind::Pawn)) {
            let mut targets = Vec::with_capacity(4);
            let one = (from.index() as i8 + push) as u8;
            if occ & (1u64 << one) == 0 {
                targets.push((Square::new(one), false));
                if from.rank() == start_rank {
                    let two = (one as i8 + push) as u8;
                    if occ & (1u64 << two) == 0 {
                        targets.push((Square::new(two), false));
                    }
                }
            }
            for to in Squares(attacks::pawn(us, from) & them) {
                targets.push((to, false));
            }
            if let Some(ep) = self.en_passant {
                if attacks::pawn(us, from) & ep.bb() != 0 {
                    targets.push((ep, true));
                }
            }
            for (to, ep) in targets {
                let capture = ep || them & to.bb() != 0;
                if to.rank() == last_rank {
                    for promo in PieceKind::PROMOTIONS {
                        out.push(Move {
                            from,
                            to,
                            promotion: Some(promo),
                            capture,
                            check: false,
                            castle: false,
                            en_passant: false,
                        });
                    }
                } else {
                    out.push(Move {
                        from,
                        to,
                        promotion: None,
                        capture,
                        check: false,
                        castle: false,
                        en_passant: ep,
                    });
                }
            }
        }

        for from in Squares(self.pieces_bb(us, PieceKind::Knight)) {
            for to in Squares(attacks::knight(from) & !own) {
                quiet(from, to, out);
            }
        }
        for from in Squares(self.pieces_bb(us, PieceKind::Bishop)) {
            for to in Squares(attacks::bishop(from, occ) & !own) {
                quiet(from, to, out);
            }
        }
        for from in Squares(self.pieces_bb(us, PieceKind::Rook)) {
            for to in Squares(attacks::rook(from, occ) & !own) {
                quiet(from, to, out);
            }
        }
        for from in Squares(self.pieces_bb(us, PieceKind::Queen)) {
            for to in Squares(attacks::queen(from, occ) & !own) {
                quiet(from, to, out);
            }
        }
        if let Some(king) = self.king_square(us) {
            for to in Squares(attacks::king(king) & !own) {
                quiet(king, to, out);
            }
            self.castle_moves(us, king, occ, out);
        }
    }

    fn castle_moves(&self, us: Color, king: Square, occ: u64, out: &mut Vec<Move>) {
        let base = match us {
            Color::White => 0u8,
            Color::Black => 56u8,
        };
        if king.index() != base as usize + 4 {
            return;
        }
        let sq = |o: u8| Square::new(base + o);
        let castle = |to: Square| Move {
            from: king,
            to,
            promotion: None,
            capture: false,
            check: false,
            castle: true,
            en_passant: false,
        };
        let rooks = self.pieces_bb(us, PieceKind::Rook);
        if self.castling.king_side(us)
            && rooks & sq(7).bb() != 0
            && occ & (sq(5).bb() | sq(6).bb()) == 0
            && !self.is_attacked(sq(4), !us)
            && !self.is_attacked(sq(5), !us)
            && !self.is_attacked(sq(6), !us)
        {
            out.push(castle(sq(6)));
        }
        if self.castling.queen_side(us)
            && rooks & sq(0).bb() != 0
            && occ & (sq(1).bb() | sq(2).bb() | sq(3).bb()) == 0
            && !self.is_attacked(sq(4), !us)
            && !self.is_attacked(sq(3), !us)
            && !self.is_attacked(sq(2), !us)
        {
            out.push(castle(sq(2)));
        }
    }

    /// Legal moves paired with the positions they lead to. Check flags are
    /// filled in.
    pub fn legal_children(&self) -> Vec<(Move, Position)> {
        let mut pseudo = Vec::with_capacity(48);
        self.pseudo_moves(&mut pseudo);
        let us = self.side_to_move;
        let mut out = Vec::with_capacity(pseudo.len());
        for mut m in pseudo {
            let child = self.make_move(&m);
            let king = child.king_square(us).expect("king present");
            if child.is_attacked(king, !us) {
                continue;
            }
            m.check = child.in_check();
            out.push((m, child));
        }
        out
    }

    /// All legal moves, with capture/check/castle/en-passant flags.
    pub fn legal_moves(&self) -> Vec<Move> {
        self.legal_children().into_iter().map(|(m, _)| m).collect()
    }

    /// Does the side to move have at least one legal move?
    pub fn has_legal_move(&self) -> bool {
        let us = self.side_to_move;
        let king = match self.king_square(us) {
            Some(k) => k,
            None => return false,
        };
        // King steps are the cheapest refutation of mate, try them first.
        let own = self.color_bb(us);
        let occ_without_king = self.occupied() & !king.bb();
        for to in Squares(attacks::king(king) & !own) {
            let mut p = *self;
            p.clear(to);
            if !p.is_attacked_with(to, !us, occ_without_king) {
                return true;
            }
        }
        let mut pseudo = Vec::with_capacity(48);
        self.pseudo_moves(&mut pseudo);
        pseudo.iter().any(|m| {
            m.from != king && {
                let child = self.make_move(m);
                !child.is_attacked(child.king_square(us).expect("king"), !us)
            }
        })
    }

    pub fn is_checkmate(&self) -> bool {
        self.in_check() && !self.has_legal_move()
    }

    pub fn is_stalemate(&self) -> bool {
        !self.in_check() && !self.has_legal_move()
    }

    /// Finds the legal move matching `mv` by squares and promotion.
    pub fn find_move(&self, mv: &Move) -> Option<Move> {
        self.legal_moves().into_iter().find(|m| m.same_squares(mv))
    }

    /// Mirror the board top to bottom and swap colors.
    pub fn color_flipped(&self) -> Position {
        let mut p = Position::empty(!self.side_to_move);
        for (sq, piece) in self.pieces() {
            p.put(sq.flip_vertical(), Piece::new(!piece.color, piece.kind));
        }
        let c = self.castling;
        p.castling = CastlingRights {
            white_king_side: c.black_king_side,
            white_queen_side: c.black_queen_side,
            black_king_side: c.white_king_side,
            black_queen_side: c.white_queen_side,
        };
        p.en_passant = self.en_passant.map(Square::flip_vertical);
        p.halfmove_clock = self.halfmove_clock;
        p.fullmove_number = self.fullmove_number;
        p
    }
}

/// Counts leaf nodes of the legal move tree to `depth` plies.
pub fn perft(pos: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let children = pos.legal_children();
    if depth == 1 {
        return children.len() as u64;
    }
    children.iter().map(|(_, c)| perft(c, depth - 1)).sum()
}
