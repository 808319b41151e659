//! First-move rules evaluated exactly on winrate tables.
//!
//! A table describes one ordered pair of players over a set of opening
//! moves: `p_i` is the stronger player's win rate playing Black after
//! opening `i`, `q_i` the same playing White. Three rules decide who gets
//! Black and which opening is on the board:
//!
//! * fixed opening `i`, colors drawn at random: `w = (p_i + q_i) / 2`;
//! * random-draw with free choice (RDR): whoever is Black picks the opening
//!   that favors them, `w = (max_i p_i + min_i q_i) / 2`;
//! * RDR plus the pie rule (PR): the first mover places the opening stone,
//!   the responder may swap colors, both playing rationally,
//!   `w = (max_i min(p_i, q_i) + min_i max(p_i, q_i)) / 2`.
//!
//! The pie rule can never beat the best fixed opening for a single pair
//! (`w_pr <= max_i w_gfm_i`), yet a pool of three players can have a larger
//! Elo spread under PR than under any shared fixed opening; the search at
//! the bottom of this module rediscovers such pools.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elo::elo_gap;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from};

/// Slack for floating-point comparisons of exactly-computed winrates.
pub const W_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "rdr")]
    Rdr,
    #[serde(rename = "rdr+pr")]
    RdrPr,
    #[serde(rename = "rdr+gfm")]
    RdrGfm,
    #[serde(rename = "free")]
    Free,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::Rdr => "rdr",
            Rule::RdrPr => "rdr+pr",
            Rule::RdrGfm => "rdr+gfm",
            Rule::Free => "free",
        })
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rdr" => Ok(Rule::Rdr),
            "rdr+pr" | "pr" | "pie" => Ok(Rule::RdrPr),
            "rdr+gfm" | "gfm" => Ok(Rule::RdrGfm),
            "free" => Ok(Rule::Free),
            _ => Err(Error::Parse { what: "rule", text: s.to_string() }),
        }
    }
}

/// One opening's entry: the stronger player's win rates with each color and
/// the game counts behind them (zero for analytic values).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Opening {
    pub id: String,
    pub p: f64,
    pub q: f64,
    #[serde(default)]
    pub n_p: u64,
    #[serde(default)]
    pub n_q: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinrateTable {
    /// `[stronger, weaker]` labels.
    pub pair: [String; 2],
    pub openings: Vec<Opening>,
}

impl WinrateTable {
    pub fn validate(&self) -> Result<()> {
        if self.openings.is_empty() {
            return Err(Error::InvalidTable(format!(
                "table {}/{} has no openings",
                self.pair[0], self.pair[1]
            )));
        }
        let mut ids: Vec<&str> = self.openings.iter().map(|o| o.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != self.openings.len() {
            return Err(Error::InvalidTable("duplicate opening ids".into()));
        }
        for o in &self.openings {
            for v in [o.p, o.q] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidTable(format!(
                        "opening {}: winrate {v} outside [0,1]",
                        o.id
                    )));
                }
            }
        }
        Ok(())
    }

    /// Half-game clamp on every counted cell: with `n` games a rate of 0 or
    /// 1 moves to `1/(2n)` resp. `1 - 1/(2n)`. Returns the clamped table and
    /// how many cells moved. Analytic cells (count zero) stay put.
    pub fn clamped(&self) -> (WinrateTable, usize) {
        let mut out = self.clone();
        let mut moved = 0;
        for o in &mut out.openings {
            for (v, n) in [(&mut o.p, o.n_p), (&mut o.q, o.n_q)] {
                if n > 0 {
                    let lo = 1.0 / (2.0 * n as f64);
                    let new = v.clamp(lo, 1.0 - lo);
                    if new != *v {
                        moved += 1;
                        *v = new;
                    }
                }
            }
        }
        (out, moved)
    }
}

/// Who makes the opening move in a pie-rule scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mover {
    Stronger,
    Weaker,
}

/// One first-mover scenario under a rule: the opening on the board, the
/// responder's swap decision where the rule has one, and the stronger
/// player's win rate in that scenario.
#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub first_mover: Mover,
    pub opening: String,
    pub swap: Option<bool>,
    pub w: f64,
}

/// A rule evaluated on one table: `w` is the stronger player's overall win
/// rate, the average of the two equally likely first-mover scenarios.
#[derive(Debug, Clone, Serialize)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub w: f64,
    pub scenarios: [Scenario; 2],
}

fn argmax_by<F: Fn(&Opening) -> f64>(openings: &[Opening], f: F) -> usize {
    let mut best = 0;
    for (i, o) in openings.iter().enumerate().skip(1) {
        if f(o) > f(&openings[best]) {
            best = i;
        }
    }
    best
}

fn argmin_by<F: Fn(&Opening) -> f64>(openings: &[Opening], f: F) -> usize {
    let mut best = 0;
    for (i, o) in openings.iter().enumerate().skip(1) {
        if f(o) < f(&openings[best]) {
            best = i;
        }
    }
    best
}

/// Fixed opening `i`, random colors.
pub fn w_gfm(t: &WinrateTable, opening: usize) -> Result<f64> {
    t.validate()?;
    let o = t
        .openings
        .get(opening)
        .ok_or_else(|| Error::Dimension(format!("opening index {opening} out of range")))?;
    Ok((o.p + o.q) / 2.0)
}

/// Random colors, Black free to pick the opening.
pub fn w_rdr(t: &WinrateTable) -> Result<RuleOutcome> {
    t.validate()?;
    // Stronger as Black maximizes p; weaker as Black minimizes the
    // stronger's White rate q.
    let si = argmax_by(&t.openings, |o| o.p);
    let wi = argmin_by(&t.openings, |o| o.q);
    let scenarios = [
        Scenario {
            first_mover: Mover::Stronger,
            opening: t.openings[si].id.clone(),
            swap: None,
            w: t.openings[si].p,
        },
        Scenario {
            first_mover: Mover::Weaker,
            opening: t.openings[wi].id.clone(),
            swap: None,
            w: t.openings[wi].q,
        },
    ];
    Ok(RuleOutcome { rule: Rule::Rdr, w: (scenarios[0].w + scenarios[1].w) / 2.0, scenarios })
}

/// The rational pie-rule line for one first-mover scenario.
///
/// The opening mover knows the responder will take whichever color the
/// opening favors, so the stronger mover maximizes `min(p_i, q_i)` and the
/// weaker mover minimizes `max(p_i, q_i)`. Ties go to the lowest index; a
/// responder indifferent to swapping keeps their color.
pub fn pr_decision(t: &WinrateTable, first_mover: Mover) -> Result<Scenario> {
    t.validate()?;
    match first_mover {
        Mover::Stronger => {
            // Stronger opens as Black; the weaker responder swaps into Black
            // exactly when that leaves the stronger player the worse rate.
            let i = argmax_by(&t.openings, |o| o.p.min(o.q));
            let o = &t.openings[i];
            let swap = o.q < o.p;
            Ok(Scenario {
                first_mover,
                opening: o.id.clone(),
                swap: Some(swap),
                w: if swap { o.q } else { o.p },
            })
        }
        Mover::Weaker => {
            // Weaker opens as Black; the stronger responder swaps into Black
            // exactly when Black is the better side of this opening.
            let i = argmin_by(&t.openings, |o| o.p.max(o.q));
            let o = &t.openings[i];
            let swap = o.p > o.q;
            Ok(Scenario {
                first_mover,
                opening: o.id.clone(),
                swap: Some(swap),
                w: if swap { o.p } else { o.q },
            })
        }
    }
}

/// Random draw for first move, then the pie rule.
pub fn w_pr(t: &WinrateTable) -> Result<RuleOutcome> {
    let scenarios = [pr_decision(t, Mover::Stronger)?, pr_decision(t, Mover::Weaker)?];
    Ok(RuleOutcome { rule: Rule::RdrPr, w: (scenarios[0].w + scenarios[1].w) / 2.0, scenarios })
}

/// The pie rule never beats the best fixed opening on a single pair.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub holds: bool,
    pub w_pr: f64,
    pub max_w_gfm: f64,
    pub best_gfm_opening: String,
}

/// Checks `w_pr <= max_i w_gfm(i)` on one table, up to float slack.
pub fn verify_theorem1(t: &WinrateTable) -> Result<TheoremCheck> {
    let pr = w_pr(t)?;
    let best = argmax_by(&t.openings, |o| (o.p + o.q) / 2.0);
    let max_w_gfm = (t.openings[best].p + t.openings[best].q) / 2.0;
    Ok(TheoremCheck {
        holds: pr.w <= max_w_gfm + W_EPSILON,
        w_pr: pr.w,
        max_w_gfm,
        best_gfm_opening: t.openings[best].id.clone(),
    })
}

/// PLC of a pool of adjacent pairs under one rule. `pool[k]` must be the
/// table of player `k+1` (stronger) against player `k`.
#[derive(Debug, Clone, Serialize)]
pub struct PoolPlc {
    pub rule: Rule,
    /// The shared opening for fixed-opening pools, none otherwise.
    pub opening: Option<String>,
    /// Stronger-side win rate per adjacent pair.
    pub pair_w: Vec<f64>,
    pub gaps: Vec<f64>,
    pub plc: f64,
}

#[derive(Debug, Clone, Serialize)]
pub enum RulePlc {
    Single(PoolPlc),
    /// Fixed-opening pools: one PLC per shared opening, plus the envelope
    /// where every pair picks its own best opening (an upper bound no single
    /// rulebook achieves).
    PerOpening {
        openings: Vec<PoolPlc>,
        best: usize,
        worst: usize,
        per_pair_best_plc: f64,
    },
}

impl RulePlc {
    /// The headline PLC: the shared-opening maximum for fixed openings.
    pub fn plc(&self) -> f64 {
        match self {
            RulePlc::Single(p) => p.plc,
            RulePlc::PerOpening { openings, best, .. } => openings[*best].plc,
        }
    }
}

fn pool_plc_from_ws(rule: Rule, opening: Option<String>, pair_w: Vec<f64>) -> Result<PoolPlc> {
    let gaps: Vec<f64> = pair_w.iter().map(|&w| elo_gap(w)).collect::<Result<_>>()?;
    Ok(PoolPlc { rule, opening, plc: gaps.iter().sum(), pair_w, gaps })
}

pub fn plc_under_rule(pool: &[WinrateTable], rule: Rule) -> Result<RulePlc> {
    if pool.is_empty() {
        return Err(Error::Empty { what: "table pool" });
    }
    for t in pool {
        t.validate()?;
    }
    match rule {
        Rule::Rdr => {
            let ws = pool.iter().map(|t| w_rdr(t).map(|o| o.w)).collect::<Result<Vec<_>>>()?;
            Ok(RulePlc::Single(pool_plc_from_ws(rule, None, ws)?))
        }
        Rule::RdrPr => {
            let ws = pool.iter().map(|t| w_pr(t).map(|o| o.w)).collect::<Result<Vec<_>>>()?;
            Ok(RulePlc::Single(pool_plc_from_ws(rule, None, ws)?))
        }
        Rule::RdrGfm => {
            let ids: Vec<&str> = pool[0].openings.iter().map(|o| o.id.as_str()).collect();
            for t in &pool[1..] {
                let other: Vec<&str> = t.openings.iter().map(|o| o.id.as_str()).collect();
                if other != ids {
                    return Err(Error::InvalidTable(
                        "fixed-opening pools need identical opening lists across pairs".into(),
                    ));
                }
            }
            let mut per = Vec::with_capacity(ids.len());
            for (i, id) in ids.iter().enumerate() {
                let ws = pool.iter().map(|t| w_gfm(t, i)).collect::<Result<Vec<_>>>()?;
                per.push(pool_plc_from_ws(rule, Some(id.to_string()), ws)?);
            }
            let mut best = 0;
            let mut worst = 0;
            for (i, p) in per.iter().enumerate().skip(1) {
                if p.plc > per[best].plc {
                    best = i;
                }
                if p.plc < per[worst].plc {
                    worst = i;
                }
            }
            // Envelope: each pair free to use its own best opening.
            let mut per_pair_best_plc = 0.0;
            for t in pool {
                let mut g = f64::NEG_INFINITY;
                for i in 0..ids.len() {
                    g = g.max(elo_gap(w_gfm(t, i)?)?);
                }
                per_pair_best_plc += g;
            }
            Ok(RulePlc::PerOpening { openings: per, best, worst, per_pair_best_plc })
        }
        Rule::Free => Err(Error::InvalidConfig(
            "the free rule has no opening table; estimate its winrates directly".into(),
        )),
    }
}

/// A pool where the pie rule spreads the players further apart than the best
/// shared fixed opening does.
#[derive(Debug, Clone, Serialize)]
pub struct SuperiorityHit {
    pub trial: u64,
    pub pool: Vec<WinrateTable>,
    pub plc_pr: f64,
    pub plc_gfm_best: f64,
    pub margin: f64,
}

/// PR-vs-best-fixed-opening margin of one pool.
pub fn pr_superiority_margin(pool: &[WinrateTable]) -> Result<(f64, f64, f64)> {
    let pr = plc_under_rule(pool, Rule::RdrPr)?.plc();
    let gfm = plc_under_rule(pool, Rule::RdrGfm)?.plc();
    Ok((pr, gfm, pr - gfm))
}

/// Uniform random table: every rate i.i.d. uniform on [0, 1].
pub fn random_table(rng: &mut ChaCha8Rng, pair: [String; 2], openings: usize) -> WinrateTable {
    let ids = opening_ids(openings);
    WinrateTable {
        pair,
        openings: ids
            .into_iter()
            .map(|id| Opening { id, p: rng.random(), q: rng.random(), n_p: 0, n_q: 0 })
            .collect(),
    }
}

pub(crate) fn opening_ids(n: usize) -> Vec<String> {
    (0..n)
        .map(
            |i| {
                if i < 26 {
                    ((b'A' + i as u8) as char).to_string()
                } else {
                    format!("O{}", i + 1)
                }
            },
        )
        .collect()
}

/// Random search for pie-rule superiority over pools of `players` players
/// with per-pair uniform tables. Trials are seeded independently, so the
/// result is deterministic for a given master seed regardless of threads.
/// With two players Theorem-style domination makes hits impossible; with
/// three they appear at a small but steady rate.
pub fn search_pr_superiority(
    players: usize,
    openings: usize,
    trials: u64,
    master_seed: u64,
) -> Result<Vec<SuperiorityHit>> {
    if players < 2 {
        return Err(Error::InvalidConfig("superiority search needs at least 2 players".into()));
    }
    if openings == 0 {
        return Err(Error::Empty { what: "opening set" });
    }
    let mut hits: Vec<SuperiorityHit> = (0..trials)
        .into_par_iter()
        .filter_map(|trial| {
            let mut rng = rng_from(derive_seed(master_seed, &[trial]));
            let pool: Vec<WinrateTable> = (0..players - 1)
                .map(|k| {
                    random_table(&mut rng, [format!("{}", k + 2), format!("{}", k + 1)], openings)
                })
                .collect();
            match pr_superiority_margin(&pool) {
                Ok((plc_pr, plc_gfm_best, margin)) if margin > 1e-9 => {
                    Some(Ok(SuperiorityHit { trial, pool, plc_pr, plc_gfm_best, margin }))
                }
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect::<Result<_>>()?;
    hits.sort_by_key(|h| h.trial);
    Ok(hits)
}

/// Bundled example tables, also exposed through the CLI.
pub mod fixtures {
    use super::{Opening, WinrateTable};

    fn table(pair: [&str; 2], rows: &[(&str, f64, f64)]) -> WinrateTable {
        WinrateTable {
            pair: [pair[0].to_string(), pair[1].to_string()],
            openings: rows
                .iter()
                .map(|&(id, p, q)| Opening { id: id.into(), p, q, n_p: 0, n_q: 0 })
                .collect(),
        }
    }

    /// Two openings where the pie rule costs the stronger player five
    /// points of win rate against the better free choice.
    pub fn table3a() -> WinrateTable {
        table(["stronger", "weaker"], &[("A", 1.0, 0.9), ("B", 0.5, 0.9)])
    }

    /// Two openings where free choice collapses the game to a coin flip
    /// while the pie rule keeps the stronger player at 0.75.
    pub fn table3b() -> WinrateTable {
        table(["stronger", "weaker"], &[("A", 1.0, 0.5), ("B", 1.0, 0.0001)])
    }

    /// A three-player pool whose Elo spread is larger under the pie rule
    /// than under either shared fixed opening.
    pub fn table3c() -> [WinrateTable; 2] {
        [
            table(["2", "1"], &[("A", 0.96, 0.99), ("B", 0.71, 0.95)]),
            table(["3", "2"], &[("A", 0.37, 0.67), ("B", 0.68, 0.94)]),
        ]
    }

    pub fn names() -> [&'static str; 3] {
        ["table3a", "table3b", "table3c"]
    }

    /// Fixture by name; single tables come back as one-element pools.
    pub fn by_name(name: &str) -> Option<Vec<WinrateTable>> {
        match name {
            "table3a" => Some(vec![table3a()]),
            "table3b" => Some(vec![table3b()]),
            "table3c" => Some(table3c().to_vec()),
            _ => None,
        }
    }
}
