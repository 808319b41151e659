//! Measuring how deep a game is. Strength gaps between players become Elo
//! differences, chains of beatable opponents become a playing-level
//! complexity (PLC), and first-move rules (fixed openings, random colors,
//! the pie rule) are scored by how much of that spread they preserve. Rules
//! are evaluated exactly on winrate tables and empirically with seeded MCTS
//! ladders on the games NoGo and Y.

pub mod agents;
pub mod elo;
pub mod error;
pub mod games;
pub mod harness;
pub mod pie;
pub mod rng;

pub use error::{Error, Result};
