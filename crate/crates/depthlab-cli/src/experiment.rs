//! Experiment commands: build a config from file plus flag overrides, run
//! it, and print the summary rows next to where the artifacts landed.

use std::fs;
use std::path::Path;

use depthlab::agents::PlayerSpec;
use depthlab::harness::{
    free_opening_plc, run_experiment, ExperimentConfig, OpeningChoice, PlcReport,
};
use depthlab::pie::Rule;
use depthlab::{Error, Result};

use crate::{parse_openings, RunArgs, TournamentArgs};

pub fn tournament(args: &TournamentArgs) -> Result<u8> {
    let mut cfg = build_config(&args.run, &[Rule::Rdr, Rule::RdrPr, Rule::RdrGfm])?;
    if let Some(rules) = &args.rules {
        cfg.rules = rules.clone();
    }
    let report = run_experiment(&cfg, Some(&args.run.out))?;
    print_report(&report, &args.run.out);
    Ok(0)
}

pub fn free_opening(args: &RunArgs) -> Result<u8> {
    let cfg = build_config(args, &[Rule::Free])?;
    let report = free_opening_plc(&cfg, Some(&args.out))?;
    print_report(&report, &args.out);
    Ok(0)
}

/// Flags override the config file field by field; without a file the four
/// flags that have no sensible default become required.
fn build_config(args: &RunArgs, default_rules: &[Rule]) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            serde_json::from_str(&text).map_err(|e| Error::json(path, e))?
        }
        None => ExperimentConfig {
            game: args.game.ok_or_else(|| missing("--game"))?,
            size: args.size.ok_or_else(|| missing("--size"))?,
            pool: budget_pool(args.pool.as_deref().ok_or_else(|| missing("--pool"))?),
            openings: OpeningChoice::Canonical,
            games_per_cell: 100,
            master_seed: args.seed.ok_or_else(|| {
                Error::InvalidConfig("--seed is required; experiments are stochastic".into())
            })?,
            rules: default_rules.to_vec(),
            bootstrap_resamples: 1000,
        },
    };
    if let Some(g) = args.game {
        cfg.game = g;
    }
    if let Some(s) = args.size {
        cfg.size = s;
    }
    if let Some(b) = &args.pool {
        cfg.pool = budget_pool(b);
    }
    if let Some(g) = args.games_per_cell {
        cfg.games_per_cell = g;
    }
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    if let Some(tokens) = &args.openings {
        cfg.openings = parse_openings(tokens)?;
    }
    if let Some(r) = args.resamples {
        cfg.bootstrap_resamples = r;
    }
    Ok(cfg)
}

fn missing(flag: &str) -> Error {
    Error::InvalidConfig(format!("{flag} is required without --config"))
}

fn budget_pool(budgets: &[u32]) -> Vec<PlayerSpec> {
    budgets.iter().map(|&b| PlayerSpec::mcts(b)).collect()
}

fn print_report(r: &PlcReport, out: &Path) {
    let cfg = &r.config;
    println!(
        "config {}  {} size {}  pool {}",
        &r.config_hash[..12],
        cfg.game,
        cfg.size,
        r.ordering.join(" < ")
    );
    if !r.openings.is_empty() {
        println!("openings: {}", r.openings.join(" "));
    }
    println!(
        "matches: {} new, {} resumed  wall clock {:.1}s  clamped cells {}",
        r.new_matches, r.resumed_matches, r.wall_clock_secs, r.clamped_cells
    );
    println!();
    println!(
        "{:<8} {:>8} {:>10} {:>10} {:>11} {:>4}  95% ci on eq. 1",
        "rule", "opening", "plc(eq.1)", "plc(eq.2)", "depth(frac)", "int"
    );
    for row in &r.rows {
        println!(
            "{:<8} {:>8} {:>10.2} {:>10.2} {:>11.2} {:>4}  [{:.2}, {:.2}]",
            row.name,
            row.opening.as_deref().unwrap_or("-"),
            row.plc_eq1,
            row.plc_eq2,
            row.depth_fractional,
            row.depth_integer,
            row.ci_low,
            row.ci_high,
        );
    }
    println!();
    for file in ["report.json", "summary.csv", "matches.jsonl"] {
        println!("wrote {}", out.join(file).display());
    }
}
