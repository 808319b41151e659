//! NoGo: Go placement rules where both capturing and suicide are illegal,
//! and the first player without a legal move loses.
//!
//! Stones are never removed, so groups only ever grow. The board keeps a
//! union-find over occupied cells with a liberty bitmask per group root,
//! which makes a legality check a few mask operations per neighbor.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, IllegalReason, Result};
use crate::games::{stone_glyph, Color, Move};

pub(crate) const MAX_SIZE: u8 = 11;
const MAX_CELLS: usize = (MAX_SIZE as usize) * (MAX_SIZE as usize);

#[derive(Clone)]
pub struct NogoBoard {
    size: u8,
    to_move: Color,
    move_count: u16,
    /// Occupancy bitboards indexed by `Color::index`.
    stones: [u128; 2],
    parent: [u8; MAX_CELLS],
    group_size: [u8; MAX_CELLS],
    /// Liberty mask, valid at group roots only.
    libs: [u128; MAX_CELLS],
}

impl NogoBoard {
    pub fn new(size: u8) -> Result<NogoBoard> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::UnsupportedBoard { game: "nogo".into(), size });
        }
        Ok(NogoBoard {
            size,
            to_move: Color::Black,
            move_count: 0,
            stones: [0, 0],
            parent: [0; MAX_CELLS],
            group_size: [0; MAX_CELLS],
            libs: [0; MAX_CELLS],
        })
    }

    pub fn from_stones(
        size: u8,
        black: &[Move],
        white: &[Move],
        to_move: Color,
    ) -> Result<NogoBoard> {
        let mut board = NogoBoard::new(size)?;
        for (color, list) in [(Color::Black, black), (Color::White, white)] {
            for &m in list {
                let idx = board.index_checked(m)?;
                if board.occupied() >> idx & 1 != 0 {
                    return Err(Error::IllegalMove { mv: m, reason: IllegalReason::Occupied });
                }
                board.place_stone(idx, color);
            }
        }
        board.to_move = to_move;
        board.move_count = (black.len() + white.len()) as u16;
        Ok(board)
    }

    pub fn size(&self) -> u8 {
        self.size
    }

    pub fn to_move(&self) -> Color {
        self.to_move
    }

    pub fn move_count(&self) -> u16 {
        self.move_count
    }

    pub(crate) fn cells(&self) -> u8 {
        self.size * self.size
    }

    fn occupied(&self) -> u128 {
        self.stones[0] | self.stones[1]
    }

    fn index_checked(&self, m: Move) -> Result<u8> {
        if m.row < self.size && m.col < self.size {
            Ok(m.row * self.size + m.col)
        } else {
            Err(Error::OffBoard { mv: m })
        }
    }

    fn cell_move(&self, idx: u8) -> Move {
        Move::new(idx / self.size, idx % self.size)
    }

    fn for_each_neighbor(&self, idx: u8, mut f: impl FnMut(u8)) {
        let s = self.size;
        let (r, c) = (idx / s, idx % s);
        if r > 0 {
            f(idx - s);
        }
        if r + 1 < s {
            f(idx + s);
        }
        if c > 0 {
            f(idx - 1);
        }
        if c + 1 < s {
            f(idx + 1);
        }
    }

    fn find(&self, mut x: u8) -> u8 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    /// Legality for `color`. On success returns the liberty mask the merged
    /// group would have. Capture outranks suicide in the report.
    fn check(&self, idx: u8, color: Color) -> std::result::Result<u128, IllegalReason> {
        let bit = 1u128 << idx;
        if self.occupied() & bit != 0 {
            return Err(IllegalReason::Occupied);
        }
        let own = self.stones[color.index()];
        let occupied = self.occupied();
        let mut new_libs = 0u128;
        let mut captures = false;
        self.for_each_neighbor(idx, |n| {
            let nbit = 1u128 << n;
            if occupied & nbit == 0 {
                new_libs |= nbit;
            } else {
                let root = self.find(n) as usize;
                if own & nbit != 0 {
                    new_libs |= self.libs[root];
                } else if self.libs[root] == bit {
                    captures = true;
                }
            }
        });
        if captures {
            return Err(IllegalReason::Capture);
        }
        new_libs &= !bit;
        if new_libs == 0 {
            return Err(IllegalReason::Suicide);
        }
        Ok(new_libs)
    }

    /// Places a stone with no legality check, keeping group structure exact.
    fn place_stone(&mut self, idx: u8, color: Color) {
        let bit = 1u128 << idx;
        let own_before = self.stones[color.index()];
        let occupied = self.occupied();

        // The filled cell stops being a liberty of every adjacent group; the
        // new group's liberties are its empty neighbors plus whatever the
        // merged friendly groups still have.
        let mut neighbors: [u8; 4] = [0; 4];
        let mut n_neighbors = 0;
        self.for_each_neighbor(idx, |n| {
            neighbors[n_neighbors] = n;
            n_neighbors += 1;
        });

        let mut new_libs = 0u128;
        let mut friends: [u8; 4] = [0; 4];
        let mut n_friends = 0;
        let mut roots_seen: [u8; 4] = [0; 4];
        let mut n_roots = 0;
        for &n in &neighbors[..n_neighbors] {
            let nbit = 1u128 << n;
            if occupied & nbit == 0 {
                new_libs |= nbit;
                continue;
            }
            let root = self.find(n);
            if roots_seen[..n_roots].contains(&root) {
                continue;
            }
            roots_seen[n_roots] = root;
            n_roots += 1;
            self.libs[root as usize] &= !bit;
            if own_before & nbit != 0 {
                new_libs |= self.libs[root as usize];
                friends[n_friends] = root;
                n_friends += 1;
            }
        }

        self.stones[color.index()] |= bit;
        self.parent[idx as usize] = idx;
        self.group_size[idx as usize] = 1;
        let mut root = idx;
        for &fr in &friends[..n_friends] {
            root = self.union(root, fr);
        }
        self.libs[root as usize] = new_libs;
    }

    /// Union by size; returns the surviving root.
    fn union(&mut self, a: u8, b: u8) -> u8 {
        let (big, small) = if self.group_size[a as usize] >= self.group_size[b as usize] {
            (a, b)
        } else {
            (b, a)
        };
        self.parent[small as usize] = big;
        self.group_size[big as usize] += self.group_size[small as usize];
        big
    }

    pub fn is_legal(&self, m: Move) -> Result<()> {
        let idx = self.index_checked(m)?;
        self.check(idx, self.to_move)
            .map(|_| ())
            .map_err(|reason| Error::IllegalMove { mv: m, reason })
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        (0..self.cells())
            .filter(|&idx| self.check(idx, self.to_move).is_ok())
            .map(|idx| self.cell_move(idx))
            .collect()
    }

    pub fn play(&self, m: Move) -> Result<NogoBoard> {
        let idx = self.index_checked(m)?;
        if let Err(reason) = self.check(idx, self.to_move) {
            return Err(Error::IllegalMove { mv: m, reason });
        }
        let mut next = self.clone();
        next.place_stone(idx, next.to_move);
        next.to_move = next.to_move.opponent();
        next.move_count += 1;
        Ok(next)
    }

    pub(crate) fn apply_unchecked(&mut self, m: Move) {
        debug_assert!(self.is_legal(m).is_ok(), "unchecked illegal move {m}");
        let idx = m.row * self.size + m.col;
        self.place_stone(idx, self.to_move);
        self.to_move = self.to_move.opponent();
        self.move_count += 1;
    }

    /// The side to move loses as soon as it has no legal placement.
    pub fn winner(&self) -> Option<Color> {
        for idx in 0..self.cells() {
            if self.check(idx, self.to_move).is_ok() {
                return None;
            }
        }
        Some(self.to_move.opponent())
    }

    pub fn stones(&self, color: Color) -> Vec<Move> {
        let mask = self.stones[color.index()];
        (0..self.cells())
            .filter(|&idx| mask >> idx & 1 != 0)
            .map(|idx| self.cell_move(idx))
            .collect()
    }

    /// Uniform choice among the legal cells of `empties` for the side to
    /// move; `None` means no legal move. Probes are i.i.d. uniform over the
    /// empty cells, so the first legal hit is already uniform over the legal
    /// subset; a reservoir pass over the exact subset takes over when probing
    /// keeps missing. Returns an index into `empties`.
    fn random_legal(&self, rng: &mut ChaCha8Rng, empties: &[u8]) -> Option<usize> {
        if empties.is_empty() {
            return None;
        }
        let color = self.to_move;
        for _ in 0..8 {
            let at = rng.random_range(0..empties.len());
            if self.check(empties[at], color).is_ok() {
                return Some(at);
            }
        }
        let mut legal = 0usize;
        let mut chosen = None;
        for (at, &idx) in empties.iter().enumerate() {
            if self.check(idx, color).is_ok() {
                legal += 1;
                if rng.random_range(0..legal) == 0 {
                    chosen = Some(at);
                }
            }
        }
        chosen
    }

    /// Uniform-random playout to the end; returns the winner. `empties` is a
    /// reusable scratch buffer.
    pub(crate) fn playout(&mut self, rng: &mut ChaCha8Rng, empties: &mut Vec<u8>) -> Color {
        empties.clear();
        let occupied = self.occupied();
        for idx in 0..self.cells() {
            if occupied >> idx & 1 == 0 {
                empties.push(idx);
            }
        }
        loop {
            match self.random_legal(rng, empties) {
                Some(at) => {
                    let idx = empties[at];
                    self.place_stone(idx, self.to_move);
                    self.to_move = self.to_move.opponent();
                    self.move_count += 1;
                    empties.swap_remove(at);
                }
                None => return self.to_move.opponent(),
            }
        }
    }
}

impl PartialEq for NogoBoard {
    /// Semantic equality: same stones and side to move. Union-find internals
    /// depend on insertion order and are excluded.
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.to_move == other.to_move
            && self.move_count == other.move_count
            && self.stones == other.stones
    }
}

impl Eq for NogoBoard {}

impl fmt::Debug for NogoBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NogoBoard({})", crate::games::Position::Nogo(self.clone()).compact())
    }
}

impl fmt::Display for NogoBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "  ")?;
        for c in 0..self.size {
            write!(f, " {}", (b'a' + c) as char)?;
        }
        writeln!(f)?;
        for r in 0..self.size {
            write!(f, "{:>2}", r + 1)?;
            for c in 0..self.size {
                let idx = r * self.size + c;
                let glyph = if self.stones[0] >> idx & 1 != 0 {
                    stone_glyph(true)
                } else if self.stones[1] >> idx & 1 != 0 {
                    stone_glyph(false)
                } else {
                    '.'
                };
                write!(f, " {glyph}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
