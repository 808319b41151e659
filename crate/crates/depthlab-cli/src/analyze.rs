//! Exact analysis of winrate tables and win matrices: rule winrates with
//! their scenario breakdowns, level spreads, and depth.

use std::fs;
use std::path::Path;

use depthlab::elo::{depth_chain, depth_fractional, depth_integer, depth_report, Clamp, WinMatrix};
use depthlab::pie::{
    fixtures, plc_under_rule, pr_superiority_margin, verify_theorem1, w_gfm, w_pr, w_rdr, Mover,
    PoolPlc, Rule, RulePlc, WinrateTable,
};
use depthlab::{Error, Result};
use serde::Deserialize;

use crate::{fmt_gap, AnalyzeArgs, DepthArgs};

pub fn table(args: &AnalyzeArgs) -> Result<u8> {
    let pool = load_pool(args)?;
    let rules = args.rules.clone().unwrap_or_else(|| vec![Rule::Rdr, Rule::RdrPr, Rule::RdrGfm]);
    if rules.contains(&Rule::Free) {
        return Err(Error::InvalidConfig(
            "the free rule needs played games, not a table; use the free-opening command".into(),
        ));
    }
    for t in &pool {
        t.validate()?;
    }
    for t in &pool {
        print_table(t, &rules)?;
    }
    print_pool(&pool, &rules)
}

/// A pool is a JSON array of adjacent-pair tables; a single table is a pool
/// of one. Fixtures come back the same way.
fn load_pool(args: &AnalyzeArgs) -> Result<Vec<WinrateTable>> {
    let pool = match (&args.fixture, &args.input) {
        (Some(name), _) => fixtures::by_name(name).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown fixture {name:?}; known: {}",
                fixtures::names().join(", ")
            ))
        })?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
            if value.is_array() {
                serde_json::from_value(value).map_err(|e| Error::json(path, e))?
            } else {
                vec![serde_json::from_value(value).map_err(|e| Error::json(path, e))?]
            }
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    if pool.is_empty() {
        return Err(Error::Empty { what: "table pool" });
    }
    Ok(pool)
}

fn print_table(t: &WinrateTable, rules: &[Rule]) -> Result<()> {
    println!("table {} vs {}, {} openings", t.pair[0], t.pair[1], t.openings.len());
    println!("  {:<8} {:>8} {:>8} {:>8}", "opening", "p", "q", "w_gfm");
    for (i, o) in t.openings.iter().enumerate() {
        println!("  {:<8} {:>8.4} {:>8.4} {:>8.4}", o.id, o.p, o.q, w_gfm(t, i)?);
    }
    for rule in rules {
        let out = match rule {
            Rule::Rdr => w_rdr(t)?,
            Rule::RdrPr => w_pr(t)?,
            // per-opening w_gfm is already a table column
            Rule::RdrGfm | Rule::Free => continue,
        };
        println!("  {:<7} w = {:.6}  gap = {} Elo", out.rule.to_string(), out.w, fmt_gap(out.w));
        for s in &out.scenarios {
            let mover = match s.first_mover {
                Mover::Stronger => "stronger",
                Mover::Weaker => "weaker",
            };
            let swap = match s.swap {
                Some(true) => ", responder swaps",
                Some(false) => ", responder keeps",
                None => "",
            };
            println!("    {mover} opens {}{swap}: w = {:.6}", s.opening, s.w);
        }
    }
    if rules.contains(&Rule::RdrPr) {
        let c = verify_theorem1(t)?;
        let verdict = if c.holds { "ok" } else { "VIOLATION" };
        println!(
            "  pie rule vs best fixed opening: {:.6} <= {:.6} (opening {})  {verdict}",
            c.w_pr, c.max_w_gfm, c.best_gfm_opening
        );
    }
    Ok(())
}

fn print_pool(pool: &[WinrateTable], rules: &[Rule]) -> Result<u8> {
    println!("level spread over {} adjacent pair(s):", pool.len());
    for rule in rules {
        let plc = plc_under_rule(pool, *rule)?;
        match &plc {
            RulePlc::Single(p) => {
                println!("rule {rule}");
                print_pair_gaps(pool, p);
            }
            RulePlc::PerOpening { openings, best, worst, per_pair_best_plc } => {
                println!("rule {rule} (shared fixed opening)");
                for (i, p) in openings.iter().enumerate() {
                    let mark = match (i == *best, i == *worst) {
                        (true, true) => "  <- max, min",
                        (true, false) => "  <- max",
                        (false, true) => "  <- min",
                        (false, false) => "",
                    };
                    println!(
                        "  opening {:<8} plc = {:>8.2}{mark}",
                        p.opening.as_deref().unwrap_or("?"),
                        p.plc
                    );
                }
                println!("  per-pair best envelope: {per_pair_best_plc:.2}");
                print_pair_gaps(pool, &openings[*best]);
            }
        }
        let eq1 = plc.plc();
        println!(
            "  plc (eq. 1) = {:.2} Elo  depth {:.2} (integer {})",
            eq1,
            depth_fractional(eq1),
            depth_integer(eq1)
        );
    }
    if rules.contains(&Rule::RdrPr) && rules.contains(&Rule::RdrGfm) && pool.len() > 1 {
        let (_, _, margin) = pr_superiority_margin(pool)?;
        println!("pie rule minus best fixed opening: {margin:+.2} Elo");
    }
    if pool.len() == 1 {
        println!("plc (eq. 2) equals eq. 1 for a single pair");
    } else {
        println!(
            "plc (eq. 2) needs a strongest-vs-weakest table; not derivable from adjacent pairs"
        );
    }
    Ok(0)
}

fn print_pair_gaps(pool: &[WinrateTable], p: &PoolPlc) {
    for (k, (w, gap)) in p.pair_w.iter().zip(&p.gaps).enumerate() {
        println!("  {} vs {}: w = {:.6}  gap = {:+.2}", pool[k].pair[0], pool[k].pair[1], w, gap);
    }
}

pub fn depth(args: &DepthArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.input).map_err(|e| Error::io(&args.input, e))?;
    let m = parse_matrix(&args.input, &text)?;
    let clamp = if args.raw { Clamp::Raw } else { Clamp::HalfGame };
    let rep = depth_report(&m, clamp)?;
    let chain = depth_chain(&m, args.threshold)?;
    let names =
        |idx: &[usize]| -> Vec<&str> { idx.iter().map(|&i| m.labels[i].as_str()).collect() };

    println!("pool of {}: weakest to strongest {}", m.labels.len(), names(&rep.order).join(", "));
    let gaps: Vec<String> = rep.plc_chain.gaps.iter().map(|g| format!("{g:+.2}")).collect();
    println!(
        "plc (eq. 1) = {:.2} Elo  gaps {}  [{} clamped cells]",
        rep.plc_chain.plc,
        gaps.join(" "),
        rep.plc_chain.clamped_cells
    );
    println!("plc (eq. 2) = {:.2} Elo  strongest vs weakest", rep.plc_extremes.plc);
    if rep.plc_chain.degenerate || rep.plc_extremes.degenerate {
        println!("warning: a zero-count cell sits at 0 or 1; the spread is unbounded");
    }
    println!("depth = {:.2} fractional, {} integer", rep.depth_fractional, rep.depth_integer);
    println!(
        "chain at {:.2} (strongest first): {}  length {}",
        args.threshold,
        names(&chain).join(" > "),
        chain.len()
    );
    Ok(0)
}

/// Hand-written exact matrices may omit `counts`; absent means analytic.
fn parse_matrix(path: &Path, text: &str) -> Result<WinMatrix> {
    #[derive(Deserialize)]
    struct Input {
        labels: Vec<String>,
        p: Vec<Vec<f64>>,
        counts: Option<Vec<Vec<u64>>>,
    }
    let input: Input = serde_json::from_str(text).map_err(|e| Error::json(path, e))?;
    match input.counts {
        Some(counts) => Ok(WinMatrix { labels: input.labels, p: input.p, counts }),
        None => WinMatrix::analytic(input.labels, input.p),
    }
}
