//! Crate-wide error type. The CLI maps these onto exit codes, so variants
//! distinguish rule violations, bad configuration, and I/O trouble.

use std::path::PathBuf;

use thiserror::Error;

use crate::games::Move;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported board: {game} size {size}")]
    UnsupportedBoard { game: String, size: u8 },

    #[error("move {mv} is off the board")]
    OffBoard { mv: Move },

    #[error("illegal move {mv}: {reason}")]
    IllegalMove { mv: Move, reason: IllegalReason },

    #[error("position is already decided")]
    Terminal,

    #[error("cannot parse {what}: {text:?}")]
    Parse { what: &'static str, text: String },

    #[error("invalid player spec {label:?}: {reason}")]
    InvalidSpec { label: String, reason: String },

    #[error("win probability {p} has no finite Elo gap")]
    EloDomain { p: f64 },

    #[error("{what} must not be empty")]
    Empty { what: &'static str },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid winrate table: {0}")]
    InvalidTable(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("corrupt match log {path}: {reason}")]
    CorruptLog { path: PathBuf, reason: String },

    #[error("match record {seed:#018x} does not replay: {reason}")]
    ReplayMismatch { seed: u64, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// Why a move is illegal. NoGo forbids both capture and suicide; occupied
/// applies to every game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IllegalReason {
    Occupied,
    Capture,
    Suicide,
}

impl std::fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            IllegalReason::Occupied => "occupied",
            IllegalReason::Capture => "capture",
            IllegalReason::Suicide => "suicide",
        };
        f.write_str(s)
    }
}

impl Error {
    /// Convenience for I/O errors that should carry the offending path.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json { path: path.into(), source }
    }
}
