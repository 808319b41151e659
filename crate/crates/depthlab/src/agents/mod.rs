//! Players: MCTS at a fixed playout budget, and a uniform-random baseline.
//!
//! A [`PlayerSpec`] is pure configuration (serializable, hashable into
//! experiment ids); an [`AgentInstance`] is a spec bound to a seeded RNG
//! stream. Tournament code creates a fresh instance per match, so nothing
//! leaks between games and any match can be replayed from its seed.

mod mcts;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{Move, Position};
use crate::rng::rng_from;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Mcts,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerSpec {
    pub kind: AgentKind,
    #[serde(default = "default_simulations")]
    pub simulations: u32,
    #[serde(default = "default_exploration")]
    pub exploration: f64,
    pub label: String,
}

fn default_simulations() -> u32 {
    1
}

fn default_exploration() -> f64 {
    1.0
}

impl PlayerSpec {
    /// MCTS at `simulations` playouts per move, exploration 1.0, labeled
    /// `mcts-<simulations>`.
    pub fn mcts(simulations: u32) -> PlayerSpec {
        PlayerSpec {
            kind: AgentKind::Mcts,
            simulations,
            exploration: 1.0,
            label: format!("mcts-{simulations}"),
        }
    }

    pub fn random() -> PlayerSpec {
        PlayerSpec {
            kind: AgentKind::Random,
            simulations: 1,
            exploration: 0.0,
            label: "random".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| {
            Err(Error::InvalidSpec { label: self.label.clone(), reason: reason.into() })
        };
        if self.label.is_empty() {
            return fail("label must not be empty");
        }
        if self.kind == AgentKind::Mcts {
            if self.simulations == 0 {
                return fail("simulations must be at least 1");
            }
            if !self.exploration.is_finite() || self.exploration < 0.0 {
                return fail("exploration must be finite and non-negative");
            }
        }
        Ok(())
    }
}

/// Budget ladders for strength pools.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderShape {
    /// `base, 2*base, ..., n*base`.
    Linear { base: u32 },
    /// `start, start*ratio, ..., start*ratio^(n-1)`.
    Geometric { start: u32, ratio: u32 },
}

/// A pool of MCTS players with strictly increasing budgets.
pub fn ladder(n: usize, shape: LadderShape) -> Result<Vec<PlayerSpec>> {
    if n == 0 {
        return Err(Error::Empty { what: "ladder" });
    }
    let budget = |i: usize| -> Option<u32> {
        match shape {
            LadderShape::Linear { base } => {
                if base == 0 {
                    None
                } else {
                    base.checked_mul(i as u32 + 1)
                }
            }
            LadderShape::Geometric { start, ratio } => {
                if start == 0 || ratio < 2 {
                    None
                } else {
                    ratio.checked_pow(i as u32).and_then(|r| start.checked_mul(r))
                }
            }
        }
    };
    (0..n)
        .map(|i| {
            budget(i).map(PlayerSpec::mcts).ok_or_else(|| {
                Error::InvalidConfig(format!("ladder {shape:?} has no valid budget at rung {i}"))
            })
        })
        .collect()
}

/// A spec bound to its own RNG stream, plus a playout odometer.
pub struct AgentInstance {
    spec: PlayerSpec,
    rng: ChaCha8Rng,
    playouts: u64,
    scratch: Vec<u8>,
}

impl AgentInstance {
    pub fn new(spec: &PlayerSpec, seed: u64) -> Result<AgentInstance> {
        spec.validate()?;
        Ok(AgentInstance {
            spec: spec.clone(),
            rng: rng_from(seed),
            playouts: 0,
            scratch: Vec::new(),
        })
    }

    pub fn spec(&self) -> &PlayerSpec {
        &self.spec
    }

    /// Playout iterations run so far, exactly `simulations` per MCTS decision.
    pub fn playouts_run(&self) -> u64 {
        self.playouts
    }

    /// Picks a move for the side to move. Deterministic given the seed and
    /// the position sequence this instance has seen.
    pub fn select_move(&mut self, pos: &Position) -> Result<Move> {
        if pos.winner().is_some() {
            return Err(Error::Terminal);
        }
        let legal = pos.legal_moves();
        debug_assert!(!legal.is_empty(), "undecided position without moves");
        match self.spec.kind {
            AgentKind::Random => Ok(legal[self.rng.random_range(0..legal.len())]),
            AgentKind::Mcts => Ok(mcts::search(
                pos,
                self.spec.simulations,
                self.spec.exploration,
                &mut self.rng,
                &mut self.scratch,
                &mut self.playouts,
            )),
        }
    }
}
