//! Property suites behind `verify`. A violation prints its counterexample
//! and exits 1; errors that prevent the suite from running map as usual.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use depthlab::agents::PlayerSpec;
use depthlab::games::{canonical_openings, symmetry_group, GameId, Position};
use depthlab::harness::{estimate_table, verify_record, MatchRecord};
use depthlab::pie::{random_table, verify_theorem1};
use depthlab::rng::rng_from;
use depthlab::{Error, Result};
use rand::Rng;

/// On any single pair the pie rule can only shrink the stronger player's win
/// rate relative to the best fixed opening; random tables probe for a break.
pub fn theorem1(n: u64, max_openings: usize, seed: u64) -> Result<u8> {
    if n == 0 {
        return Err(Error::InvalidConfig("-n must be at least 1".into()));
    }
    if !(1..=32).contains(&max_openings) {
        return Err(Error::InvalidConfig("--max-openings must lie in 1..=32".into()));
    }
    let mut rng = rng_from(seed);
    for trial in 0..n {
        let k = rng.random_range(1..=max_openings);
        let t = random_table(&mut rng, ["stronger".into(), "weaker".into()], k);
        let c = verify_theorem1(&t)?;
        if !c.holds {
            println!(
                "violation at trial {trial}: w_pr {:.9} > max w_gfm {:.9} (opening {})",
                c.w_pr, c.max_w_gfm, c.best_gfm_opening
            );
            println!("{}", serde_json::to_string_pretty(&t).expect("table serializes"));
            return Ok(1);
        }
    }
    println!("theorem1: {n} random tables (1..={max_openings} openings), no violation");
    Ok(0)
}

/// Treating one opening per symmetry orbit as representative assumes orbit
/// mates are interchangeable; this plays a redundant mate and compares. The
/// bound is a two-proportion z at 99.9%, loose enough to pass on honest
/// noise and tight enough to catch a broken board mapping.
pub fn symmetry(game: GameId, size: u8, n: u32, seed: u64) -> Result<u8> {
    let group = symmetry_group(game, size)?;
    let mut picked = None;
    'reps: for &m in &canonical_openings(game, size)? {
        for g in group.elements() {
            let image = g.apply_move(m)?;
            if image != m {
                picked = Some((m, image, g.name().to_string()));
                break 'reps;
            }
        }
    }
    let Some((a, b, via)) = picked else {
        return Err(Error::InvalidConfig(format!(
            "every opening of {game} size {size} is a fixed point; nothing to compare"
        )));
    };

    let strong = PlayerSpec::mcts(32);
    let weak = PlayerSpec::mcts(8);
    let t = estimate_table(game, size, &strong, &weak, &[a, b], n, seed)?;
    let (o1, o2) = (&t.openings[0], &t.openings[1]);

    let mut code = 0;
    let cells = [("black", o1.p, o1.n_p, o2.p, o2.n_p), ("white", o1.q, o1.n_q, o2.q, o2.n_q)];
    for (color, x1, n1, x2, n2) in cells {
        let z = two_proportion_z(x1, n1, x2, n2);
        let ok = z.abs() <= 3.29;
        println!(
            "{a} vs {b} ({via}), stronger as {color}: {x1:.3} vs {x2:.3}  z = {z:+.2}  {}",
            if ok { "ok" } else { "VIOLATION" }
        );
        if !ok {
            code = 1;
        }
    }
    if code == 0 {
        println!("symmetry: orbit mates statistically indistinguishable over {n} games per cell");
    }
    Ok(code)
}

fn two_proportion_z(p1: f64, n1: u64, p2: f64, n2: u64) -> f64 {
    let (n1, n2) = (n1 as f64, n2 as f64);
    let pooled = (p1 * n1 + p2 * n2) / (n1 + n2);
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2)).sqrt();
    if se == 0.0 {
        // both rates pinned to the same boundary is agreement, not evidence
        if p1 == p2 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (p1 - p2) / se
    }
}

fn cell_count(game: GameId, size: u8) -> u16 {
    let s = size as u16;
    match game {
        GameId::Nogo => s * s,
        GameId::Y => s * (s + 1) / 2,
    }
}

/// Exhaustive walk by default, random playouts with `-n`. Either way a
/// reachable terminal without a winner is the counterexample.
pub fn nodraws(game: GameId, size: u8, n: Option<u64>, seed: Option<u64>) -> Result<u8> {
    let cells = cell_count(game, size);
    let Some(playouts) = n else {
        if cells > 10 {
            return Err(Error::InvalidConfig(format!(
                "{game} size {size} is too large to walk; pass -n and --seed to sample"
            )));
        }
        let mut seen = HashSet::new();
        let mut stack = vec![Position::new(game, size)?];
        let (mut positions, mut terminals) = (0u64, 0u64);
        while let Some(pos) = stack.pop() {
            positions += 1;
            if pos.winner().is_some() {
                terminals += 1;
                continue;
            }
            let moves = pos.legal_moves();
            if moves.is_empty() {
                println!("draw reached: {}", pos.compact());
                return Ok(1);
            }
            for m in moves {
                let next = pos.play(m)?;
                if seen.insert(next.compact()) {
                    stack.push(next);
                }
            }
        }
        println!(
            "nodraws: {game} size {size} exhaustive, {positions} positions, {terminals} terminals, every terminal decided"
        );
        return Ok(0);
    };

    if playouts == 0 {
        return Err(Error::InvalidConfig("-n must be at least 1".into()));
    }
    let seed = seed.ok_or_else(|| Error::InvalidConfig("--seed is required with -n".into()))?;
    let mut rng = rng_from(seed);
    for _ in 0..playouts {
        let mut pos = Position::new(game, size)?;
        while pos.winner().is_none() {
            let moves = pos.legal_moves();
            if moves.is_empty() {
                println!("draw reached: {}", pos.compact());
                return Ok(1);
            }
            pos = pos.play(moves[rng.random_range(0..moves.len())])?;
            if pos.move_count() > cells {
                println!("unterminated playout: {}", pos.compact());
                return Ok(1);
            }
        }
    }
    println!("nodraws: {playouts} random playouts on {game} size {size}, all decided");
    Ok(0)
}

/// Replays a match log: header line `{"config_hash": ...}`, then one record
/// per line. Unparsable content is corruption (exit 3); a record that parses
/// but does not reproduce its winner is a violation (exit 1).
pub fn replay(log: &Path, game: GameId, size: u8) -> Result<u8> {
    let corrupt = |reason: String| Error::CorruptLog { path: log.to_path_buf(), reason };
    let text = fs::read_to_string(log).map_err(|e| Error::io(log, e))?;
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or_else(|| corrupt("empty file".into()))?;
    let header: serde_json::Value =
        serde_json::from_str(header).map_err(|e| corrupt(format!("header: {e}")))?;
    if header.get("config_hash").and_then(serde_json::Value::as_str).is_none() {
        return Err(corrupt("header lacks config_hash".into()));
    }

    let mut count = 0u64;
    for (i, line) in lines {
        let rec: MatchRecord =
            serde_json::from_str(line).map_err(|e| corrupt(format!("line {}: {e}", i + 1)))?;
        if let Err(e) = verify_record(game, size, &rec) {
            println!("record at line {} does not replay: {e}", i + 1);
            return Ok(1);
        }
        count += 1;
    }
    println!("replay: {count} records verified against {game} size {size}");
    Ok(0)
}
