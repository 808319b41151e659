//! Command-line driver for the depth laboratory. Every command is
//! deterministic given its flags and seed; parallelism lives inside the
//! library, so this binary only parses arguments, dispatches, and maps
//! errors onto exit codes: 0 success, 1 property violation, 2 usage or
//! configuration, 3 I/O corruption.

mod analyze;
mod experiment;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use depthlab::games::{canonical_openings, GameId, Move};
use depthlab::pie::{fixtures, Rule};
use depthlab::{Error, Result};

#[derive(Parser)]
#[command(name = "depthlab", version, about = "Game depth and first-move-rule laboratory")]
struct Cli {
    /// Worker threads for experiments; falls back to DEPTHLAB_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate first-move rules exactly on a winrate table or pool
    AnalyzeTable(AnalyzeArgs),
    /// Run a property suite; nonzero exit on any violation
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Play a seeded ladder experiment and write report, CSV, and match log
    Tournament(TournamentArgs),
    /// Ladder experiment under the free rule only
    FreeOpening(RunArgs),
    /// Depth and level spread of a win matrix
    Depth(DepthArgs),
    /// List the opening moves worth distinguishing on a board
    Openings(BoardArgs),
    /// List or print the embedded winrate tables
    Fixtures(FixturesArgs),
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["fixture", "input"])))]
struct AnalyzeArgs {
    /// Embedded table name; see `depthlab fixtures`
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// JSON file: one winrate table or an array of adjacent-pair tables
    #[arg(long)]
    input: Option<PathBuf>,
    /// Only these rules (rdr, pr, gfm); default all three
    #[arg(long = "rules", alias = "rule", value_delimiter = ',', value_parser = parse_rule)]
    rules: Option<Vec<Rule>>,
}

#[derive(Subcommand)]
enum Suite {
    /// Random tables never let the pie rule beat the best fixed opening
    Theorem1 {
        /// Number of random tables
        #[arg(short, default_value_t = 100_000)]
        n: u64,
        /// Openings per table are drawn from 1..=this
        #[arg(long, default_value_t = 6)]
        max_openings: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Orbit-equivalent openings produce statistically equal winrates
    Symmetry {
        #[arg(long, default_value = "nogo", value_parser = parse_game)]
        game: GameId,
        #[arg(long, default_value_t = 5)]
        size: u8,
        /// Games per (opening, color) cell
        #[arg(short, default_value_t = 60)]
        n: u32,
        #[arg(long)]
        seed: u64,
    },
    /// Every finished game has a winner: exhaustive, or sampled with -n
    Nodraws {
        #[arg(long, value_parser = parse_game)]
        game: GameId,
        #[arg(long)]
        size: u8,
        /// Random playouts instead of the exhaustive walk
        #[arg(short)]
        n: Option<u64>,
        /// Required with -n
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Every record in a match log replays to its recorded winner
    Replay {
        #[arg(long)]
        log: PathBuf,
        #[arg(long, value_parser = parse_game)]
        game: GameId,
        #[arg(long)]
        size: u8,
    },
}

#[derive(Args)]
struct TournamentArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Rules to score (rdr, pr, gfm, free); default rdr,pr,gfm
    #[arg(long, alias = "rule", value_delimiter = ',', value_parser = parse_rule)]
    rules: Option<Vec<Rule>>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_game)]
    game: Option<GameId>,
    #[arg(long)]
    size: Option<u8>,
    /// Search budgets, one player per entry (e.g. 1000,250,64)
    #[arg(long, value_delimiter = ',')]
    pool: Option<Vec<u32>>,
    #[arg(long)]
    games_per_cell: Option<u32>,
    /// Master seed; required unless the config file provides one
    #[arg(long)]
    seed: Option<u64>,
    /// canonical, all, or an explicit move list like a1,b2
    #[arg(long, value_delimiter = ',')]
    openings: Option<Vec<String>>,
    /// Bootstrap resamples behind the confidence intervals
    #[arg(long)]
    resamples: Option<u32>,
    /// Directory for report.json, summary.csv, and matches.jsonl
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DepthArgs {
    /// JSON win matrix {labels, p, counts}
    #[arg(long)]
    input: PathBuf,
    /// Beat probability a chain rung must reach
    #[arg(long, default_value_t = 0.6)]
    threshold: f64,
    /// Score raw rates; default nudges 0 and 1 cells by half a game
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct BoardArgs {
    #[arg(long, value_parser = parse_game)]
    game: GameId,
    #[arg(long)]
    size: u8,
}

#[derive(Args)]
struct FixturesArgs {
    /// Print this fixture as JSON instead of listing all of them
    #[arg(long)]
    name: Option<String>,
}

fn parse_game(s: &str) -> Result<GameId> {
    GameId::from_str(s)
}

fn parse_rule(s: &str) -> Result<Rule> {
    Rule::from_str(s)
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE, turning `depthlab ... | head` into a print
    // panic; restore the default so the pipe closing ends the process.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Violations found by verify suites exit through `Ok(1)` after printing
/// their counterexample; this mapping covers errors that abort a command.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::CorruptLog { .. } => 3,
        Error::ReplayMismatch { .. } => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<u8> {
    init_threads(cli.threads)?;
    match cli.command {
        Command::AnalyzeTable(args) => analyze::table(&args),
        Command::Verify { suite } => match suite {
            Suite::Theorem1 { n, max_openings, seed } => suites::theorem1(n, max_openings, seed),
            Suite::Symmetry { game, size, n, seed } => suites::symmetry(game, size, n, seed),
            Suite::Nodraws { game, size, n, seed } => suites::nodraws(game, size, n, seed),
            Suite::Replay { log, game, size } => suites::replay(&log, game, size),
        },
        Command::Tournament(args) => experiment::tournament(&args),
        Command::FreeOpening(args) => experiment::free_opening(&args),
        Command::Depth(args) => analyze::depth(&args),
        Command::Openings(args) => openings(&args),
        Command::Fixtures(args) => list_fixtures(&args),
    }
}

/// --threads wins over DEPTHLAB_THREADS; unset means rayon's default.
fn init_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("DEPTHLAB_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                Error::InvalidConfig(format!("DEPTHLAB_THREADS {v:?} is not a thread count"))
            })?),
            Err(_) => None,
        },
    };
    match n {
        None => Ok(()),
        Some(0) => Err(Error::InvalidConfig("thread count must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}"))),
    }
}

fn openings(args: &BoardArgs) -> Result<u8> {
    let moves = canonical_openings(args.game, args.size)?;
    println!("{} size {}: {} openings", args.game, args.size, moves.len());
    for m in moves {
        println!("{m}");
    }
    Ok(0)
}

fn list_fixtures(args: &FixturesArgs) -> Result<u8> {
    match &args.name {
        Some(name) => {
            let pool = fixtures::by_name(name).ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown fixture {name:?}; known: {}",
                    fixtures::names().join(", ")
                ))
            })?;
            println!("{}", serde_json::to_string_pretty(&pool).expect("fixtures serialize"));
        }
        None => {
            for name in fixtures::names() {
                let pool = fixtures::by_name(name).expect("listed fixture exists");
                println!(
                    "{name}: {} adjacent pair(s), {} openings ({} vs {})",
                    pool.len(),
                    pool[0].openings.len(),
                    pool[0].pair[0],
                    pool[0].pair[1],
                );
            }
        }
    }
    Ok(0)
}

/// Parses the --openings tokens: a mode keyword or explicit moves.
fn parse_openings(tokens: &[String]) -> Result<depthlab::harness::OpeningChoice> {
    use depthlab::harness::OpeningChoice;
    match tokens {
        [one] if one == "canonical" => Ok(OpeningChoice::Canonical),
        [one] if one == "all" => Ok(OpeningChoice::All),
        _ => {
            let moves: Vec<Move> = tokens.iter().map(|t| t.parse()).collect::<Result<_>>()?;
            Ok(OpeningChoice::Explicit(moves))
        }
    }
}

/// "+511.33", "inf" past saturation; rule winrates print through this so
/// degenerate tables stay readable.
fn fmt_gap(w: f64) -> String {
    match depthlab::elo::elo_gap(w) {
        Ok(g) => format!("{g:+.2}"),
        Err(_) => if w >= 1.0 { "inf" } else { "-inf" }.to_string(),
    }
}
