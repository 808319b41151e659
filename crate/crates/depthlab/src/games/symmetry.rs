//! Board symmetries and canonical opening moves.
//!
//! NoGo's square has the dihedral group of order eight; Y's triangle has the
//! six permutations of its side-distance triple. Each element is stored as a
//! plain cell permutation, so composing and applying them is table lookup.

use crate::error::{Error, Result};
use crate::games::{Color, GameId, Move, Position};

#[derive(Debug, Clone)]
pub struct Symmetry {
    game: GameId,
    size: u8,
    name: &'static str,
    /// Image cell index per cell index.
    map: Vec<u8>,
}

#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    pub game: GameId,
    pub size: u8,
    elements: Vec<Symmetry>,
}

fn cells_of(game: GameId, size: u8) -> Vec<Move> {
    match game {
        GameId::Nogo => (0..size).flat_map(|r| (0..size).map(move |c| Move::new(r, c))).collect(),
        GameId::Y => (0..size).flat_map(|r| (0..=r).map(move |c| Move::new(r, c))).collect(),
    }
}

fn cell_index(game: GameId, size: u8, m: Move) -> usize {
    match game {
        GameId::Nogo => m.row as usize * size as usize + m.col as usize,
        GameId::Y => m.row as usize * (m.row as usize + 1) / 2 + m.col as usize,
    }
}

impl Symmetry {
    pub fn name(&self) -> &str {
        self.name
    }

    pub fn apply_move(&self, m: Move) -> Result<Move> {
        let on_board = match self.game {
            GameId::Nogo => m.row < self.size && m.col < self.size,
            GameId::Y => m.row < self.size && m.col <= m.row,
        };
        if !on_board {
            return Err(Error::OffBoard { mv: m });
        }
        let idx = cell_index(self.game, self.size, m);
        let image = self.map[idx];
        Ok(index_move(self.game, self.size, image))
    }

    /// Maps every stone; side to move and move count carry over.
    pub fn apply_position(&self, pos: &Position) -> Result<Position> {
        if pos.game() != self.game || pos.size() != self.size {
            return Err(Error::Dimension(format!(
                "symmetry is for {}{}, position is {}{}",
                self.game,
                self.size,
                pos.game(),
                pos.size()
            )));
        }
        let map_all = |stones: Vec<Move>| -> Result<Vec<Move>> {
            stones.into_iter().map(|m| self.apply_move(m)).collect()
        };
        Position::from_stones(
            self.game,
            self.size,
            &map_all(pos.stones(Color::Black))?,
            &map_all(pos.stones(Color::White))?,
            pos.to_move(),
        )
    }

    /// `self` then `other`, as one permutation table.
    #[cfg(test)]
    fn composed_map(&self, other: &Symmetry) -> Vec<u8> {
        self.map.iter().map(|&mid| other.map[mid as usize]).collect()
    }
}

fn index_move(game: GameId, size: u8, idx: u8) -> Move {
    match game {
        GameId::Nogo => Move::new(idx / size, idx % size),
        GameId::Y => {
            let mut row = 0u8;
            let mut base = 0u8;
            while base + row < idx {
                base += row + 1;
                row += 1;
            }
            Move::new(row, idx - base)
        }
    }
}

impl SymmetryGroup {
    pub fn elements(&self) -> &[Symmetry] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[cfg(test)]
    fn contains_map(&self, map: &[u8]) -> bool {
        self.elements.iter().any(|e| e.map == map)
    }
}

/// The full symmetry group of the board: order 8 for NoGo, 6 for Y.
pub fn symmetry_group(game: GameId, size: u8) -> Result<SymmetryGroup> {
    Position::new(game, size)?; // validates the size range
    let cells = cells_of(game, size);
    let n = size as i16;

    let build = |name: &'static str, f: &dyn Fn(i16, i16) -> (i16, i16)| -> Symmetry {
        let mut map = vec![0u8; cells.len()];
        for m in &cells {
            let (r2, c2) = f(m.row as i16, m.col as i16);
            let image = Move::new(r2 as u8, c2 as u8);
            map[cell_index(game, size, *m)] = cell_index(game, size, image) as u8;
        }
        debug_assert!({
            let mut seen = vec![false; map.len()];
            map.iter().all(|&i| !std::mem::replace(&mut seen[i as usize], true))
        });
        Symmetry { game, size, name, map }
    };

    let elements = match game {
        GameId::Nogo => {
            #[allow(clippy::type_complexity)]
            let transforms: [(&'static str, &dyn Fn(i16, i16) -> (i16, i16)); 8] = [
                ("id", &|r, c| (r, c)),
                ("rot90", &move |r, c| (c, n - 1 - r)),
                ("rot180", &move |r, c| (n - 1 - r, n - 1 - c)),
                ("rot270", &move |r, c| (n - 1 - c, r)),
                ("flip-h", &move |r, c| (r, n - 1 - c)),
                ("flip-v", &move |r, c| (n - 1 - r, c)),
                ("flip-diag", &|r, c| (c, r)),
                ("flip-anti", &move |r, c| (n - 1 - c, n - 1 - r)),
            ];
            transforms.iter().map(|(name, f)| build(name, f)).collect()
        }
        GameId::Y => {
            // Side distances (left, right, bottom) of (r, c) are
            // (c, r - c, n - 1 - r); they sum to n - 1, and the group is all
            // six permutations of the triple.
            let perms: [(&'static str, [usize; 3]); 6] = [
                ("id", [0, 1, 2]),
                ("rot120", [1, 2, 0]),
                ("rot240", [2, 0, 1]),
                ("swap-left-right", [1, 0, 2]),
                ("swap-left-bottom", [2, 1, 0]),
                ("swap-right-bottom", [0, 2, 1]),
            ];
            perms
                .iter()
                .map(|&(name, p)| {
                    let f = move |r: i16, c: i16| -> (i16, i16) {
                        let t = [c, r - c, n - 1 - r];
                        let (dl, db) = (t[p[0]], t[p[2]]);
                        (n - 1 - db, dl)
                    };
                    build(name, &f)
                })
                .collect()
        }
    };
    Ok(SymmetryGroup { game, size, elements })
}

/// Opening moves worth distinguishing: one representative per symmetry orbit
/// for NoGo (the row-major least cell), every cell for Y, where the analysis
/// treats each first move as its own book entry.
pub fn canonical_openings(game: GameId, size: u8) -> Result<Vec<Move>> {
    let cells = cells_of(game, size);
    match game {
        GameId::Y => Ok(cells),
        GameId::Nogo => {
            let group = symmetry_group(game, size)?;
            let mut seen = vec![false; cells.len()];
            let mut reps = Vec::new();
            for (idx, &m) in cells.iter().enumerate() {
                if seen[idx] {
                    continue;
                }
                // First touch of an orbit happens at its least index.
                reps.push(m);
                for g in group.elements() {
                    seen[g.map[idx] as usize] = true;
                }
            }
            Ok(reps)
        }
    }
}
