//! Board games used as depth-measurement subjects: NoGo and Y.
//!
//! Both are two-player, draw-free placement games on small boards. The rest
//! of the crate only sees [`Position`]: create one, ask for legal moves,
//! play, and test for a winner.

mod nogo;
mod symmetry;
mod y;

pub use nogo::NogoBoard;
pub use symmetry::{canonical_openings, symmetry_group, Symmetry, SymmetryGroup};
pub use y::YBoard;

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opponent(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Color::Black => 0,
            Color::White => 1,
        }
    }

    fn letter(self) -> char {
        match self {
            Color::Black => 'B',
            Color::White => 'W',
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Black => "black",
            Color::White => "white",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameId {
    Nogo,
    Y,
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameId::Nogo => "nogo",
            GameId::Y => "y",
        })
    }
}

impl FromStr for GameId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nogo" => Ok(GameId::Nogo),
            "y" => Ok(GameId::Y),
            _ => Err(Error::Parse { what: "game id", text: s.to_string() }),
        }
    }
}

/// A stone placement. Row 0 is the top row; columns run left to right.
/// On the triangular Y board row `r` has `r + 1` cells, so `col <= row`.
///
/// The text form is column letter plus 1-based row number: `"c2"` is
/// row 1, column 2. Row-major `Ord` gives every deterministic tie-break
/// in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub row: u8,
    pub col: u8,
}

impl Move {
    pub fn new(row: u8, col: u8) -> Move {
        Move { row, col }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", (b'a' + self.col) as char, self.row as u16 + 1)
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "move", text: s.to_string() };
        let mut chars = s.chars();
        let c = chars.next().ok_or_else(bad)?;
        if !c.is_ascii_lowercase() {
            return Err(bad());
        }
        let row: u16 = chars.as_str().parse().map_err(|_| bad())?;
        if row == 0 || row > 128 {
            return Err(bad());
        }
        Ok(Move { row: (row - 1) as u8, col: c as u8 - b'a' })
    }
}

impl Serialize for Move {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Move {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A game state. Cheap to clone; all mutation goes through [`Position::play`],
/// which returns the successor and leaves `self` untouched.
// Boxing the wider variant would cost an allocation per playout step.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Position {
    Nogo(NogoBoard),
    Y(YBoard),
}

impl Position {
    /// Empty starting position, Black to move.
    pub fn new(game: GameId, size: u8) -> Result<Position> {
        match game {
            GameId::Nogo => Ok(Position::Nogo(NogoBoard::new(size)?)),
            GameId::Y => Ok(Position::Y(YBoard::new(size)?)),
        }
    }

    /// Builds a position from explicit stone sets. Placements must be on the
    /// board and pairwise distinct; reachability through legal play is not
    /// checked. The move count is the stone count.
    pub fn from_stones(
        game: GameId,
        size: u8,
        black: &[Move],
        white: &[Move],
        to_move: Color,
    ) -> Result<Position> {
        match game {
            GameId::Nogo => {
                Ok(Position::Nogo(NogoBoard::from_stones(size, black, white, to_move)?))
            }
            GameId::Y => Ok(Position::Y(YBoard::from_stones(size, black, white, to_move)?)),
        }
    }

    pub fn game(&self) -> GameId {
        match self {
            Position::Nogo(_) => GameId::Nogo,
            Position::Y(_) => GameId::Y,
        }
    }

    pub fn size(&self) -> u8 {
        match self {
            Position::Nogo(b) => b.size(),
            Position::Y(b) => b.size(),
        }
    }

    pub fn to_move(&self) -> Color {
        match self {
            Position::Nogo(b) => b.to_move(),
            Position::Y(b) => b.to_move(),
        }
    }

    pub fn move_count(&self) -> u16 {
        match self {
            Position::Nogo(b) => b.move_count(),
            Position::Y(b) => b.move_count(),
        }
    }

    /// Stones of one color, row-major.
    pub fn stones(&self, color: Color) -> Vec<Move> {
        match self {
            Position::Nogo(b) => b.stones(color),
            Position::Y(b) => b.stones(color),
        }
    }

    /// Checks `m` for the side to move. `Ok(())` means `play` will succeed.
    pub fn is_legal(&self, m: Move) -> Result<()> {
        match self {
            Position::Nogo(b) => b.is_legal(m),
            Position::Y(b) => b.is_legal(m),
        }
    }

    /// Legal moves in row-major order. Empty exactly when the game is over.
    pub fn legal_moves(&self) -> Vec<Move> {
        match self {
            Position::Nogo(b) => b.legal_moves(),
            Position::Y(b) => b.legal_moves(),
        }
    }

    /// Plays `m` for the side to move and returns the successor.
    pub fn play(&self, m: Move) -> Result<Position> {
        match self {
            Position::Nogo(b) => Ok(Position::Nogo(b.play(m)?)),
            Position::Y(b) => Ok(Position::Y(b.play(m)?)),
        }
    }

    /// `Some` once the game is decided. NoGo: the first player with no legal
    /// move loses. Y: the player whose group touches all three sides wins.
    /// Neither game draws.
    pub fn winner(&self) -> Option<Color> {
        match self {
            Position::Nogo(b) => b.winner(),
            Position::Y(b) => b.winner(),
        }
    }

    /// Plays a pre-validated move in place. Skips legality checks; callers
    /// must only pass moves obtained from `legal_moves`/`is_legal` on `self`.
    pub(crate) fn apply_unchecked(&mut self, m: Move) {
        match self {
            Position::Nogo(b) => b.apply_unchecked(m),
            Position::Y(b) => b.apply_unchecked(m),
        }
    }

    /// Plays uniformly random legal moves in place until the game is decided
    /// and returns the winner. `scratch` is a reusable empty-cell buffer.
    pub(crate) fn playout(&mut self, rng: &mut ChaCha8Rng, scratch: &mut Vec<u8>) -> Color {
        match self {
            Position::Nogo(b) => b.playout(rng, scratch),
            Position::Y(b) => b.playout(rng),
        }
    }

    /// Single-line state string, e.g. `nogo5:W:a1,c3:b2` (game+size, side to
    /// move, black stones, white stones). Inverse of [`Position::from_compact`].
    pub fn compact(&self) -> String {
        let fmt_stones =
            |stones: Vec<Move>| stones.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{}{}:{}:{}:{}",
            self.game(),
            self.size(),
            self.to_move().letter(),
            fmt_stones(self.stones(Color::Black)),
            fmt_stones(self.stones(Color::White)),
        )
    }

    pub fn from_compact(text: &str) -> Result<Position> {
        let bad = |t: &str| Error::Parse { what: "compact position", text: t.to_string() };
        let parts: Vec<&str> = text.split(':').collect();
        let [head, side, black, white] = parts[..] else {
            return Err(bad(text));
        };
        let split = head.find(|c: char| c.is_ascii_digit()).ok_or_else(|| bad(text))?;
        let game: GameId = head[..split].parse()?;
        let size: u8 = head[split..].parse().map_err(|_| bad(text))?;
        let to_move = match side {
            "B" => Color::Black,
            "W" => Color::White,
            _ => return Err(bad(text)),
        };
        let parse_stones = |s: &str| -> Result<Vec<Move>> {
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',').map(|m| m.parse()).collect()
        };
        Position::from_stones(game, size, &parse_stones(black)?, &parse_stones(white)?, to_move)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Nogo(b) => b.fmt(f),
            Position::Y(b) => b.fmt(f),
        }?;
        match self.winner() {
            Some(w) => writeln!(f, "{w} wins"),
            None => writeln!(f, "{} to move", self.to_move()),
        }
    }
}

pub(crate) fn stone_glyph(black: bool) -> char {
    if black {
        'X'
    } else {
        'O'
    }
}
