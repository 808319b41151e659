//! The game of Y on a triangular board: connect all three sides with one
//! group. Corners belong to both adjacent sides. Every empty cell is a legal
//! move and a full board always has a winner, so the game never draws.
//!
//! Connectivity is a union-find over cells whose roots carry a bitmask of
//! the sides their group touches; a color wins when some group's mask
//! covers all three. Virtual per-side nodes would be wrong here: two
//! disjoint groups touching the same side must not look connected, which is
//! exactly what a shared side node would claim.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, IllegalReason, Result};
use crate::games::{stone_glyph, Color, Move};

pub(crate) const MAX_SIZE: u8 = 10;
const MAX_CELLS: usize = (MAX_SIZE as usize * (MAX_SIZE as usize + 1)) / 2;

const ALL_SIDES: u8 = 0b111;

#[derive(Clone)]
pub struct YBoard {
    size: u8,
    to_move: Color,
    move_count: u16,
    /// Occupancy bitboards indexed by `Color::index`.
    stones: [u64; 2],
    /// One union-find serves both colors: only same-color neighbors are
    /// ever united, so groups stay monochrome.
    parent: [u8; MAX_CELLS],
    rank: [u8; MAX_CELLS],
    /// Side bitmask of each group, valid at root indices.
    sides: [u8; MAX_CELLS],
    winner: Option<Color>,
}

fn cell_index(row: u8, col: u8) -> u8 {
    (row as u16 * (row as u16 + 1) / 2 + col as u16) as u8
}

fn side_mask(size: u8, m: Move) -> u8 {
    u8::from(m.col == 0) | u8::from(m.col == m.row) << 1 | u8::from(m.row == size - 1) << 2
}

impl YBoard {
    pub fn new(size: u8) -> Result<YBoard> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::UnsupportedBoard { game: "y".into(), size });
        }
        let mut parent = [0u8; MAX_CELLS];
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        Ok(YBoard {
            size,
            to_move: Color::Black,
            move_count: 0,
            stones: [0, 0],
            parent,
            rank: [0; MAX_CELLS],
            sides: [0; MAX_CELLS],
            winner: None,
        })
    }

    pub fn from_stones(size: u8, black: &[Move], white: &[Move], to_move: Color) -> Result<YBoard> {
        let mut board = YBoard::new(size)?;
        for (color, list) in [(Color::Black, black), (Color::White, white)] {
            for &m in list {
                let idx = board.index_checked(m)?;
                if board.occupied() >> idx & 1 != 0 {
                    return Err(Error::IllegalMove { mv: m, reason: IllegalReason::Occupied });
                }
                board.place_stone(m, idx, color);
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
        cell_index(self.size, 0)
    }

    fn occupied(&self) -> u64 {
        self.stones[0] | self.stones[1]
    }

    fn index_checked(&self, m: Move) -> Result<u8> {
        if m.row < self.size && m.col <= m.row {
            Ok(cell_index(m.row, m.col))
        } else {
            Err(Error::OffBoard { mv: m })
        }
    }

    fn cell_move(&self, idx: u8) -> Move {
        let mut row = 0u8;
        let mut base = 0u8;
        while base + row < idx {
            base += row + 1;
            row += 1;
        }
        Move::new(row, idx - base)
    }

    /// Hexagonal adjacency on the triangle: left, right, two up, two down.
    fn for_each_neighbor(&self, m: Move, mut f: impl FnMut(Move)) {
        let (r, c) = (m.row, m.col);
        if c > 0 {
            f(Move::new(r, c - 1));
            if r > 0 {
                f(Move::new(r - 1, c - 1));
            }
        }
        if c < r {
            f(Move::new(r, c + 1));
            if r > 0 {
                f(Move::new(r - 1, c));
            }
        }
        if r + 1 < self.size {
            f(Move::new(r + 1, c));
            f(Move::new(r + 1, c + 1));
        }
    }

    fn find(&self, mut x: u8) -> u8 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    /// Unites two groups, OR-ing their side masks into the surviving root.
    fn union(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.find(a) as usize, self.find(b) as usize);
        if ra == rb {
            return;
        }
        let merged = self.sides[ra] | self.sides[rb];
        let root = if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb as u8;
            rb
        } else {
            if self.rank[ra] == self.rank[rb] {
                self.rank[ra] += 1;
            }
            self.parent[rb] = ra as u8;
            ra
        };
        self.sides[root] = merged;
    }

    fn place_stone(&mut self, m: Move, idx: u8, color: Color) {
        self.stones[color.index()] |= 1 << idx;
        self.sides[idx as usize] = side_mask(self.size, m);
        let own = self.stones[color.index()];
        let mut nbrs = [0u8; 6];
        let mut n_count = 0;
        self.for_each_neighbor(m, |n| {
            nbrs[n_count] = cell_index(n.row, n.col);
            n_count += 1;
        });
        for &nidx in &nbrs[..n_count] {
            if own >> nidx & 1 != 0 {
                self.union(idx, nidx);
            }
        }
        if self.sides[self.find(idx) as usize] == ALL_SIDES {
            // At most one color can connect all three sides, but rebuilding
            // a decided position stone by stone may extend the winning group
            // after the connection; the winner latches on first connection.
            debug_assert!(self.winner.is_none() || self.winner == Some(color));
            self.winner.get_or_insert(color);
        }
    }

    pub fn is_legal(&self, m: Move) -> Result<()> {
        let idx = self.index_checked(m)?;
        if self.winner.is_some() {
            return Err(Error::Terminal);
        }
        if self.occupied() >> idx & 1 != 0 {
            return Err(Error::IllegalMove { mv: m, reason: IllegalReason::Occupied });
        }
        Ok(())
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        if self.winner.is_some() {
            return Vec::new();
        }
        (0..self.cells())
            .filter(|&idx| self.occupied() >> idx & 1 == 0)
            .map(|idx| self.cell_move(idx))
            .collect()
    }

    pub fn play(&self, m: Move) -> Result<YBoard> {
        self.is_legal(m)?;
        let mut next = self.clone();
        let idx = next.index_checked(m)?;
        next.place_stone(m, idx, next.to_move);
        next.to_move = next.to_move.opponent();
        next.move_count += 1;
        Ok(next)
    }

    pub(crate) fn apply_unchecked(&mut self, m: Move) {
        debug_assert!(self.is_legal(m).is_ok(), "unchecked illegal move {m}");
        let idx = cell_index(m.row, m.col);
        self.place_stone(m, idx, self.to_move);
        self.to_move = self.to_move.opponent();
        self.move_count += 1;
    }

    pub fn winner(&self) -> Option<Color> {
        self.winner
    }

    pub fn stones(&self, color: Color) -> Vec<Move> {
        let mask = self.stones[color.index()];
        (0..self.cells())
            .filter(|&idx| mask >> idx & 1 != 0)
            .map(|idx| self.cell_move(idx))
            .collect()
    }

    /// Uniform-random playout to the first connection; every empty cell is
    /// legal, so this is a plain shuffle-free uniform fill.
    pub(crate) fn playout(&mut self, rng: &mut ChaCha8Rng) -> Color {
        let mut empties: [u8; MAX_CELLS] = [0; MAX_CELLS];
        let mut n = 0usize;
        let occupied = self.occupied();
        for idx in 0..self.cells() {
            if occupied >> idx & 1 == 0 {
                empties[n] = idx;
                n += 1;
            }
        }
        while self.winner.is_none() {
            debug_assert!(n > 0, "full Y board without a winner");
            let at = rng.random_range(0..n);
            let idx = empties[at];
            let m = self.cell_move(idx);
            self.place_stone(m, idx, self.to_move);
            self.to_move = self.to_move.opponent();
            self.move_count += 1;
            n -= 1;
            empties[at] = empties[n];
        }
        self.winner.unwrap()
    }
}

impl PartialEq for YBoard {
    /// Semantic equality: same stones and side to move. Union-find layout
    /// depends on insertion order and is excluded.
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.to_move == other.to_move
            && self.move_count == other.move_count
            && self.stones == other.stones
    }
}

impl Eq for YBoard {}

impl fmt::Debug for YBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YBoard({})", crate::games::Position::Y(self.clone()).compact())
    }
}

impl fmt::Display for YBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.size {
            write!(f, "{:>2} ", r + 1)?;
            for _ in 0..(self.size - 1 - r) {
                write!(f, " ")?;
            }
            for c in 0..=r {
                let idx = cell_index(r, c);
                let glyph = if self.stones[0] >> idx & 1 != 0 {
                    stone_glyph(true)
                } else if self.stones[1] >> idx & 1 != 0 {
                    stone_glyph(false)
                } else {
                    '.'
                };
                write!(f, "{glyph} ")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
