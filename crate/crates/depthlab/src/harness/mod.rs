//! Seeded tournaments between ladder agents, winrate-table estimation, and
//! rule-by-rule PLC scoring with bootstrap confidence intervals.
//!
//! Every match has a seed derived from the master seed and the match's slot
//! in the schedule (pair, opening, color, game index). Seeds identify
//! matches in the on-disk log, so an interrupted run resumes by replaying
//! nothing and playing only the missing slots, and results do not depend on
//! the number of worker threads.

mod io;

use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agents::{AgentInstance, PlayerSpec};
use crate::elo::{depth_fractional, depth_integer};
use crate::error::{Error, Result};
use crate::games::{canonical_openings, Color, GameId, Move, Position};
use crate::pie::{plc_under_rule, Opening, Rule, RulePlc, WinrateTable};
use crate::rng::{derive_seed, rng_from};

/// Which first moves the schedule forces on Black.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpeningChoice {
    /// One representative cell per symmetry orbit.
    Canonical,
    /// Every cell on the board.
    All,
    /// An explicit list of cells.
    Explicit(Vec<Move>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub game: GameId,
    pub size: u8,
    pub pool: Vec<PlayerSpec>,
    #[serde(default = "default_openings")]
    pub openings: OpeningChoice,
    #[serde(default = "default_games_per_cell")]
    pub games_per_cell: u32,
    pub master_seed: u64,
    pub rules: Vec<Rule>,
    #[serde(default = "default_resamples")]
    pub bootstrap_resamples: u32,
}

fn default_openings() -> OpeningChoice {
    OpeningChoice::Canonical
}

fn default_games_per_cell() -> u32 {
    100
}

fn default_resamples() -> u32 {
    1000
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        Position::new(self.game, self.size)?;
        if self.pool.len() < 2 {
            return Err(Error::InvalidConfig("pool needs at least two players".into()));
        }
        let mut labels: Vec<&str> = Vec::with_capacity(self.pool.len());
        for spec in &self.pool {
            spec.validate()?;
            if labels.contains(&spec.label.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate label {:?}", spec.label)));
            }
            labels.push(&spec.label);
        }
        if self.games_per_cell == 0 {
            return Err(Error::InvalidConfig("games_per_cell must be at least 1".into()));
        }
        if self.rules.is_empty() {
            return Err(Error::Empty { what: "rule list" });
        }
        for (i, r) in self.rules.iter().enumerate() {
            if self.rules[..i].contains(r) {
                return Err(Error::InvalidConfig(format!("rule {r} listed twice")));
            }
        }
        if self.bootstrap_resamples < 100 {
            return Err(Error::InvalidConfig(
                "fewer than 100 bootstrap resamples gives meaningless percentiles".into(),
            ));
        }
        self.resolved_openings().map(|_| ())
    }

    /// The concrete opening list the schedule will force.
    pub fn resolved_openings(&self) -> Result<Vec<Move>> {
        let empty = Position::new(self.game, self.size)?;
        match &self.openings {
            OpeningChoice::Canonical => canonical_openings(self.game, self.size),
            OpeningChoice::All => Ok(empty.legal_moves()),
            OpeningChoice::Explicit(moves) => {
                if moves.is_empty() {
                    return Err(Error::Empty { what: "opening list" });
                }
                for (i, m) in moves.iter().enumerate() {
                    empty.is_legal(*m)?;
                    if moves[..i].contains(m) {
                        return Err(Error::InvalidConfig(format!("opening {m} listed twice")));
                    }
                }
                Ok(moves.clone())
            }
        }
    }

    /// Pool sorted weakest first. Search budget is the strength proxy here;
    /// ties break on the label so the order is total.
    pub fn ordered_pool(&self) -> Vec<PlayerSpec> {
        let mut pool = self.pool.clone();
        pool.sort_by(|a, b| a.simulations.cmp(&b.simulations).then_with(|| a.label.cmp(&b.label)));
        pool
    }

    /// SHA-256 of the canonical JSON form; pins a match log to its config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        format!("{:x}", Sha256::digest(json.as_bytes()))
    }
}

/// One finished game. `moves` holds every stone in play order, including a
/// forced opening, so the record replays from the empty board.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    /// `[stronger, weaker]` as scheduled, independent of color assignment.
    pub pair: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opening: Option<Move>,
    pub colors: Colors,
    pub winner: Color,
    pub moves: Vec<Move>,
    pub seed: u64,
}

/// Which label held each color in one match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Colors {
    pub black: String,
    pub white: String,
}

/// Plays one game to the end. The opening, when given, is pre-placed as
/// Black's first move before either agent chooses anything; both agents are
/// fresh instances seeded from `seed`, so the record is reproducible. The
/// record's `pair` starts as `[black, white]`; schedulers that know which
/// side is stronger overwrite it.
pub fn play_match(
    game: GameId,
    size: u8,
    black: &PlayerSpec,
    white: &PlayerSpec,
    opening: Option<Move>,
    seed: u64,
) -> Result<MatchRecord> {
    let mut pos = Position::new(game, size)?;
    let mut moves = Vec::new();
    if let Some(m) = opening {
        pos = pos.play(m)?;
        moves.push(m);
    }
    let mut agents = [
        AgentInstance::new(black, derive_seed(seed, &[0]))?,
        AgentInstance::new(white, derive_seed(seed, &[1]))?,
    ];
    while pos.winner().is_none() {
        let idx = match pos.to_move() {
            Color::Black => 0,
            Color::White => 1,
        };
        let m = agents[idx].select_move(&pos)?;
        pos = pos.play(m)?;
        moves.push(m);
    }
    Ok(MatchRecord {
        pair: [black.label.clone(), white.label.clone()],
        opening,
        colors: Colors { black: black.label.clone(), white: white.label.clone() },
        winner: pos.winner().expect("loop ended on a decided position"),
        moves,
        seed,
    })
}

/// Replays a record from the empty board, checking every move's legality and
/// the stored winner. Logged data is trusted nowhere else.
pub fn verify_record(game: GameId, size: u8, record: &MatchRecord) -> Result<()> {
    let fail = |reason: String| Error::ReplayMismatch { seed: record.seed, reason };
    if record.opening.is_some() && record.moves.first() != record.opening.as_ref() {
        return Err(fail("first move does not match the recorded opening".into()));
    }
    let mut pos = Position::new(game, size)?;
    for (i, &m) in record.moves.iter().enumerate() {
        if pos.winner().is_some() {
            return Err(fail(format!("move {} played after the game was decided", i + 1)));
        }
        pos = pos.play(m).map_err(|e| fail(format!("move {} ({m}): {e}", i + 1)))?;
    }
    match pos.winner() {
        Some(w) if w == record.winner => Ok(()),
        Some(w) => Err(fail(format!("recorded winner {}, replay gives {w}", record.winner))),
        None => Err(fail("replay ends with the game still open".into())),
    }
}

/// Estimates one pair's per-opening table. Cell (opening, color) gets
/// `games_per_cell` games; `p` is the stronger player's win rate as Black,
/// `q` as White.
pub fn estimate_table(
    game: GameId,
    size: u8,
    stronger: &PlayerSpec,
    weaker: &PlayerSpec,
    openings: &[Move],
    games_per_cell: u32,
    seed: u64,
) -> Result<WinrateTable> {
    stronger.validate()?;
    weaker.validate()?;
    if openings.is_empty() {
        return Err(Error::Empty { what: "opening list" });
    }
    if games_per_cell == 0 {
        return Err(Error::InvalidConfig("games_per_cell must be at least 1".into()));
    }
    let mut slots = Vec::new();
    for oi in 0..openings.len() {
        for strong_black in [true, false] {
            for k in 0..games_per_cell as u64 {
                let color = u64::from(!strong_black);
                slots.push((oi, strong_black, derive_seed(seed, &[oi as u64, color, k])));
            }
        }
    }
    let outcomes: Vec<(usize, bool, bool)> = slots
        .par_iter()
        .map(|&(oi, strong_black, s)| {
            let (b, w) = if strong_black { (stronger, weaker) } else { (weaker, stronger) };
            let rec = play_match(game, size, b, w, Some(openings[oi]), s)?;
            Ok((oi, strong_black, (rec.winner == Color::Black) == strong_black))
        })
        .collect::<Result<_>>()?;
    let mut p_wins = vec![0u64; openings.len()];
    let mut q_wins = vec![0u64; openings.len()];
    for (oi, strong_black, won) in outcomes {
        if won {
            if strong_black {
                p_wins[oi] += 1;
            } else {
                q_wins[oi] += 1;
            }
        }
    }
    let g = games_per_cell as u64;
    Ok(WinrateTable {
        pair: [stronger.label.clone(), weaker.label.clone()],
        openings: openings
            .iter()
            .enumerate()
            .map(|(oi, m)| Opening {
                id: m.to_string(),
                p: p_wins[oi] as f64 / g as f64,
                q: q_wins[oi] as f64 / g as f64,
                n_p: g,
                n_q: g,
            })
            .collect(),
    })
}

/// Percentile bootstrap over table cells: each resample redraws every counted
/// cell from a binomial at the observed rate, then re-evaluates `stat`.
/// Returns the (2.5%, 97.5%) percentiles. Deterministic in `seed` regardless
/// of thread count.
pub fn bootstrap_ci<F>(
    tables: &[WinrateTable],
    resamples: u32,
    seed: u64,
    stat: F,
) -> Result<(f64, f64)>
where
    F: Fn(&[WinrateTable]) -> Result<f64> + Sync,
{
    if tables.is_empty() {
        return Err(Error::Empty { what: "bootstrap table list" });
    }
    if resamples < 100 {
        return Err(Error::InvalidConfig(
            "fewer than 100 bootstrap resamples gives meaningless percentiles".into(),
        ));
    }
    let mut vals: Vec<f64> = (0..resamples as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from(derive_seed(seed, &[r]));
            let redrawn: Vec<WinrateTable> =
                tables.iter().map(|t| resample_table(t, &mut rng)).collect();
            stat(&redrawn)
        })
        .collect::<Result<_>>()?;
    vals.sort_by(f64::total_cmp);
    Ok((percentile(&vals, 0.025), percentile(&vals, 0.975)))
}

fn resample_table(t: &WinrateTable, rng: &mut ChaCha8Rng) -> WinrateTable {
    let mut out = t.clone();
    for o in &mut out.openings {
        for (v, n) in [(&mut o.p, o.n_p), (&mut o.q, o.n_q)] {
            // Analytic cells (count zero) and degenerate rates stay put.
            if n > 0 && *v > 0.0 && *v < 1.0 {
                let bin = Binomial::new(n, *v).expect("rate is a probability");
                *v = bin.sample(rng) as f64 / n as f64;
            }
        }
    }
    out
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let idx = (q * (sorted.len() - 1) as f64).round() as usize;
    sorted[idx]
}

/// Pair kinds in a schedule: each adjacent rung pair, plus the extremes pair
/// (strongest vs weakest) when the pool has three or more players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Adjacent(usize),
    Extremes,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairTable {
    pub kind: PairKind,
    /// `[stronger, weaker]` labels.
    pub pair: [String; 2],
    /// Raw per-opening estimates, no clamp applied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub openings: Option<WinrateTable>,
    /// Raw free-game estimate as a one-row table with pseudo-opening "free".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<WinrateTable>,
}

/// One summary row. `plc_eq1` sums the adjacent-pair gaps under the rule,
/// `plc_eq2` is the strongest-vs-weakest gap under the same rule, and depth
/// is read off `plc_eq1`. The confidence interval is a percentile bootstrap
/// on `plc_eq1`.
#[derive(Debug, Clone, Serialize)]
pub struct RuleRow {
    pub name: String,
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opening: Option<String>,
    pub plc_eq1: f64,
    pub plc_eq2: f64,
    pub depth_fractional: f64,
    pub depth_integer: i64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlcReport {
    pub config: ExperimentConfig,
    pub config_hash: String,
    /// Pool labels ordered weakest to strongest.
    pub ordering: Vec<String>,
    /// Forced opening ids, empty for free-only runs.
    pub openings: Vec<String>,
    pub pair_tables: Vec<PairTable>,
    pub rows: Vec<RuleRow>,
    /// Cells moved off 0 or 1 by the half-game clamp before rule scoring.
    pub clamped_cells: usize,
    pub new_matches: usize,
    pub resumed_matches: usize,
    pub wall_clock_secs: f64,
}

const FREE_TAG: u64 = u64::MAX;
const WRITE_CHUNK: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct CellKey {
    pair: usize,
    /// Index into the opening list; `None` is the free (unforced) cell.
    opening: Option<usize>,
    strong_black: bool,
}

struct Task {
    cell: CellKey,
    opening_move: Option<Move>,
    seed: u64,
}

/// `[stronger, weaker]` index pairs: adjacent rungs, then extremes for n > 2.
fn pair_indices(n: usize) -> Vec<[usize; 2]> {
    let mut pairs: Vec<[usize; 2]> = (0..n - 1).map(|k| [k + 1, k]).collect();
    if n > 2 {
        pairs.push([n - 1, 0]);
    }
    pairs
}

fn schedule(
    master: u64,
    n_pairs: usize,
    openings: &[Move],
    want_free: bool,
    games_per_cell: u32,
) -> Vec<Task> {
    let mut tasks = Vec::new();
    for pi in 0..n_pairs {
        let mut cells: Vec<(Option<usize>, Option<Move>, u64)> =
            openings.iter().enumerate().map(|(oi, &m)| (Some(oi), Some(m), oi as u64)).collect();
        if want_free {
            cells.push((None, None, FREE_TAG));
        }
        for (opening, mv, otag) in cells {
            for color in 0..2u64 {
                for k in 0..games_per_cell as u64 {
                    tasks.push(Task {
                        cell: CellKey { pair: pi, opening, strong_black: color == 0 },
                        opening_move: mv,
                        seed: derive_seed(master, &[pi as u64, otag, color, k]),
                    });
                }
            }
        }
    }
    tasks
}

fn clamp_all(tables: &[WinrateTable]) -> (Vec<WinrateTable>, usize) {
    let mut moved = 0;
    let clamped = tables
        .iter()
        .map(|t| {
            let (c, m) = t.clamped();
            moved += m;
            c
        })
        .collect();
    (clamped, moved)
}

/// The full pipeline: schedule, play (resuming from `out/matches.jsonl` when
/// present), estimate tables, clamp, and score every requested rule. With an
/// output directory the log, `report.json`, and `summary.csv` are written;
/// the CSV is byte-identical across reruns of the same config.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<PlcReport> {
    let started = Instant::now();
    cfg.validate()?;
    let pool = cfg.ordered_pool();
    let labels: Vec<String> = pool.iter().map(|s| s.label.clone()).collect();
    let hash = cfg.hash();

    let want_free = cfg.rules.contains(&Rule::Free);
    let table_rules = cfg.rules.iter().any(|r| *r != Rule::Free);
    let openings: Vec<Move> = if table_rules { cfg.resolved_openings()? } else { Vec::new() };

    let pairs = pair_indices(pool.len());
    let tasks = schedule(cfg.master_seed, pairs.len(), &openings, want_free, cfg.games_per_cell);
    let mut by_seed: HashMap<u64, usize> = HashMap::with_capacity(tasks.len());
    for (i, t) in tasks.iter().enumerate() {
        if by_seed.insert(t.seed, i).is_some() {
            return Err(Error::InvalidConfig(
                "derived seeds collide; pick a different master seed".into(),
            ));
        }
    }

    // Resume: every logged record must belong to a scheduled slot, carry the
    // labels and opening that slot expects, and replay to its stored winner.
    let loaded = match out {
        Some(dir) => io::load_log(dir, &hash)?,
        None => None,
    };
    let mut done: HashMap<u64, MatchRecord> = HashMap::with_capacity(tasks.len());
    if let Some(records) = &loaded {
        let log_path = out.expect("loaded implies out").join(io::LOG_NAME);
        let corrupt = |reason: String| Error::CorruptLog { path: log_path.clone(), reason };
        for (seed, rec) in records {
            let Some(&ti) = by_seed.get(seed) else {
                return Err(corrupt(format!("record {seed:#018x} matches no scheduled game")));
            };
            let t = &tasks[ti];
            let [si, wi] = pairs[t.cell.pair];
            let (b, w) = if t.cell.strong_black { (si, wi) } else { (wi, si) };
            if rec.colors.black != labels[b]
                || rec.colors.white != labels[w]
                || rec.pair[0] != labels[si]
                || rec.pair[1] != labels[wi]
                || rec.opening != t.opening_move
            {
                return Err(corrupt(format!(
                    "record {seed:#018x} does not match its scheduled slot"
                )));
            }
            verify_record(cfg.game, cfg.size, rec).map_err(|e| corrupt(e.to_string()))?;
        }
        done.extend(records.iter().map(|(s, r)| (*s, r.clone())));
    }
    let resumed_matches = done.len();

    let mut writer = match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            Some(io::LogWriter::open(dir, &hash, loaded.is_none())?)
        }
        None => None,
    };

    // Play what the log does not cover, in fixed chunks so an interrupted
    // run loses at most one chunk.
    let todo: Vec<&Task> = tasks.iter().filter(|t| !done.contains_key(&t.seed)).collect();
    let new_matches = todo.len();
    for chunk in todo.chunks(WRITE_CHUNK) {
        let recs: Vec<MatchRecord> = chunk
            .par_iter()
            .map(|t| {
                let [si, wi] = pairs[t.cell.pair];
                let (b, w) = if t.cell.strong_black { (si, wi) } else { (wi, si) };
                let mut rec =
                    play_match(cfg.game, cfg.size, &pool[b], &pool[w], t.opening_move, t.seed)?;
                rec.pair = [labels[si].clone(), labels[wi].clone()];
                Ok(rec)
            })
            .collect::<Result<_>>()?;
        if let Some(writer) = writer.as_mut() {
            for r in &recs {
                writer.append(r)?;
            }
            writer.flush()?;
        }
        for r in recs {
            done.insert(r.seed, r);
        }
    }

    // Aggregate wins of the stronger player per cell.
    let mut wins: HashMap<CellKey, u64> = HashMap::new();
    for t in &tasks {
        let rec = &done[&t.seed];
        if (rec.winner == Color::Black) == t.cell.strong_black {
            *wins.entry(t.cell).or_default() += 1;
        }
    }
    let g = cfg.games_per_cell as u64;
    let rate = |cell: CellKey| wins.get(&cell).copied().unwrap_or(0) as f64 / g as f64;

    let ext_idx = (pool.len() > 2).then(|| pairs.len() - 1);
    let mut pair_tables = Vec::with_capacity(pairs.len());
    for (pi, &[si, wi]) in pairs.iter().enumerate() {
        let pair = [labels[si].clone(), labels[wi].clone()];
        let openings_table = (!openings.is_empty()).then(|| WinrateTable {
            pair: pair.clone(),
            openings: openings
                .iter()
                .enumerate()
                .map(|(oi, m)| Opening {
                    id: m.to_string(),
                    p: rate(CellKey { pair: pi, opening: Some(oi), strong_black: true }),
                    q: rate(CellKey { pair: pi, opening: Some(oi), strong_black: false }),
                    n_p: g,
                    n_q: g,
                })
                .collect(),
        });
        let free_table = want_free.then(|| WinrateTable {
            pair: pair.clone(),
            openings: vec![Opening {
                id: "free".into(),
                p: rate(CellKey { pair: pi, opening: None, strong_black: true }),
                q: rate(CellKey { pair: pi, opening: None, strong_black: false }),
                n_p: g,
                n_q: g,
            }],
        });
        pair_tables.push(PairTable {
            kind: if ext_idx == Some(pi) { PairKind::Extremes } else { PairKind::Adjacent(pi) },
            pair,
            openings: openings_table,
            free: free_table,
        });
    }

    // Clamped copies for scoring. With two players the extremes pair IS the
    // single adjacent pair, so its clamp is not counted twice.
    let adj_count = pool.len() - 1;
    let raw = |pt: &PairTable, free: bool| {
        if free {
            pt.free.clone()
        } else {
            pt.openings.clone()
        }
    };
    let mut clamped_cells = 0usize;
    let mut score_tables = |free: bool| -> (Vec<WinrateTable>, Option<WinrateTable>) {
        let raw_adj: Vec<WinrateTable> =
            pair_tables[..adj_count].iter().filter_map(|pt| raw(pt, free)).collect();
        if raw_adj.is_empty() {
            return (Vec::new(), None);
        }
        let (adj, moved) = clamp_all(&raw_adj);
        clamped_cells += moved;
        let ext = match ext_idx {
            Some(i) => {
                let (t, m) = raw(&pair_tables[i], free).expect("extremes table exists").clamped();
                clamped_cells += m;
                t
            }
            None => adj[0].clone(),
        };
        (adj, Some(ext))
    };
    let (adj_op, ext_op) = score_tables(false);
    let (adj_free, ext_free) = score_tables(true);

    let mut rows = Vec::new();
    for (ri, &rule) in cfg.rules.iter().enumerate() {
        let ci_seed = |variant: u64| derive_seed(cfg.master_seed, &[0xb007, ri as u64, variant]);
        match rule {
            Rule::Rdr | Rule::RdrPr => {
                let eq1 = plc_under_rule(&adj_op, rule)?.plc();
                let ext = ext_op.as_ref().expect("table rules imply opening tables");
                let eq2 = plc_under_rule(std::slice::from_ref(ext), rule)?.plc();
                let raw_adj: Vec<WinrateTable> =
                    pair_tables[..adj_count].iter().filter_map(|pt| pt.openings.clone()).collect();
                let (lo, hi) = bootstrap_ci(&raw_adj, cfg.bootstrap_resamples, ci_seed(0), |ts| {
                    let (c, _) = clamp_all(ts);
                    plc_under_rule(&c, rule).map(|r| r.plc())
                })?;
                rows.push(make_row(rule.to_string(), rule, None, eq1, eq2, lo, hi));
            }
            Rule::RdrGfm => {
                let RulePlc::PerOpening { openings: per, best, worst, .. } =
                    plc_under_rule(&adj_op, rule)?
                else {
                    unreachable!("fixed openings always score per opening")
                };
                let ext = ext_op.as_ref().expect("table rules imply opening tables");
                let RulePlc::PerOpening { openings: ext_per, .. } =
                    plc_under_rule(std::slice::from_ref(ext), rule)?
                else {
                    unreachable!("fixed openings always score per opening")
                };
                let raw_adj: Vec<WinrateTable> =
                    pair_tables[..adj_count].iter().filter_map(|pt| pt.openings.clone()).collect();
                for (name, idx, pick_max) in [("gfm-max", best, true), ("gfm-min", worst, false)] {
                    // Eq.2 reuses the opening the chain scoring picked, so
                    // both columns describe the same rulebook.
                    let eq1 = per[idx].plc;
                    let eq2 = ext_per[idx].plc;
                    let (lo, hi) = bootstrap_ci(
                        &raw_adj,
                        cfg.bootstrap_resamples,
                        ci_seed(u64::from(pick_max)),
                        |ts| {
                            let (c, _) = clamp_all(ts);
                            match plc_under_rule(&c, rule)? {
                                RulePlc::PerOpening { openings, best, worst, .. } => {
                                    Ok(openings[if pick_max { best } else { worst }].plc)
                                }
                                RulePlc::Single(p) => Ok(p.plc),
                            }
                        },
                    )?;
                    rows.push(make_row(
                        name.into(),
                        rule,
                        per[idx].opening.clone(),
                        eq1,
                        eq2,
                        lo,
                        hi,
                    ));
                }
            }
            Rule::Free => {
                // A free pair behaves like a fixed-opening table with the one
                // pseudo-opening "free": the stronger side's score is the
                // mean of its two per-color rates.
                let eq1 = plc_under_rule(&adj_free, Rule::RdrGfm)?.plc();
                let ext = ext_free.as_ref().expect("free rule implies free tables");
                let eq2 = plc_under_rule(std::slice::from_ref(ext), Rule::RdrGfm)?.plc();
                let raw_adj: Vec<WinrateTable> =
                    pair_tables[..adj_count].iter().filter_map(|pt| pt.free.clone()).collect();
                let (lo, hi) = bootstrap_ci(&raw_adj, cfg.bootstrap_resamples, ci_seed(0), |ts| {
                    let (c, _) = clamp_all(ts);
                    plc_under_rule(&c, Rule::RdrGfm).map(|r| r.plc())
                })?;
                rows.push(make_row("free".into(), rule, None, eq1, eq2, lo, hi));
            }
        }
    }

    let report = PlcReport {
        config: cfg.clone(),
        config_hash: hash,
        ordering: labels,
        openings: openings.iter().map(|m| m.to_string()).collect(),
        pair_tables,
        rows,
        clamped_cells,
        new_matches,
        resumed_matches,
        wall_clock_secs: started.elapsed().as_secs_f64(),
    };
    if let Some(dir) = out {
        io::write_report(dir, &report)?;
        io::write_csv(dir, &report)?;
    }
    Ok(report)
}

fn make_row(
    name: String,
    rule: Rule,
    opening: Option<String>,
    eq1: f64,
    eq2: f64,
    ci_low: f64,
    ci_high: f64,
) -> RuleRow {
    RuleRow {
        name,
        rule,
        opening,
        plc_eq1: eq1,
        plc_eq2: eq2,
        depth_fractional: depth_fractional(eq1),
        depth_integer: depth_integer(eq1),
        ci_low,
        ci_high,
    }
}

/// Convenience wrapper: the same pipeline restricted to unforced games.
pub fn free_opening_plc(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<PlcReport> {
    let mut c = cfg.clone();
    c.rules = vec![Rule::Free];
    run_experiment(&c, out)
}
