//! End-to-end runs of the binary: exit codes, output shape, determinism,
//! and the replay suite against logs the tournament command just wrote.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn depthlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depthlab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn analyze_fixture_exact_values() {
    let out = depthlab(&["analyze-table", "--fixture", "table3a"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rdr     w = 0.950000"), "{text}");
    assert!(text.contains("rdr+pr  w = 0.900000"), "{text}");
    assert!(text.contains("ok"), "{text}");
}

#[test]
fn analyze_pool_with_rule_filter() {
    let out = depthlab(&["analyze-table", "--fixture", "table3c", "--rule", "pr"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("plc (eq. 1) = 657.6"), "{text}");
    assert!(!text.contains("rule rdr\n"), "filtered rule still printed: {text}");
}

#[test]
fn analyze_usage_errors_exit_2() {
    let unknown = depthlab(&["analyze-table", "--fixture", "nope"]);
    assert_eq!(code(&unknown), 2);
    assert!(stderr(&unknown).contains("table3a"), "should list known fixtures");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{oops").unwrap();
    assert_eq!(code(&depthlab(&["analyze-table", "--input", bad.to_str().unwrap()])), 2);

    let empty = dir.path().join("empty.json");
    fs::write(&empty, r#"{"pair":["a","b"],"openings":[]}"#).unwrap();
    assert_eq!(code(&depthlab(&["analyze-table", "--input", empty.to_str().unwrap()])), 2);
}

#[test]
fn analyze_reads_fixture_json_back() {
    let dumped = depthlab(&["fixtures", "--name", "table3c"]);
    assert_eq!(code(&dumped), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pool.json");
    fs::write(&path, stdout(&dumped)).unwrap();

    let out = depthlab(&["analyze-table", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("pie rule minus best fixed opening: +7.3"), "{text}");
}

#[test]
fn fixtures_lists_all_names() {
    let out = depthlab(&["fixtures"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in ["table3a", "table3b", "table3c"] {
        assert!(text.contains(name), "{text}");
    }
    let one = depthlab(&["fixtures", "--name", "table3b"]);
    assert!(stdout(&one).contains("0.0001"), "table3b q value missing");
}

#[test]
fn openings_lists_canonical_moves() {
    let out = depthlab(&["openings", "--game", "nogo", "--size", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("6 openings"), "{text}");
    assert!(text.lines().any(|l| l == "a1"), "{text}");
}

#[test]
fn verify_theorem1_holds_on_random_tables() {
    let out = depthlab(&["verify", "theorem1", "-n", "2000", "--seed", "7"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("no violation"));
}

#[test]
fn verify_nodraws_exhaustive_and_sampled() {
    for game in ["y", "nogo"] {
        let out = depthlab(&["verify", "nodraws", "--game", game, "--size", "3"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert!(stdout(&out).contains("every terminal decided"));
    }
    let sampled =
        depthlab(&["verify", "nodraws", "--game", "y", "--size", "5", "-n", "200", "--seed", "3"]);
    assert_eq!(code(&sampled), 0, "{}", stderr(&sampled));

    let unseeded = depthlab(&["verify", "nodraws", "--game", "y", "--size", "5", "-n", "200"]);
    assert_eq!(code(&unseeded), 2);

    let huge = depthlab(&["verify", "nodraws", "--game", "nogo", "--size", "9"]);
    assert_eq!(code(&huge), 2, "exhaustive walk of a large board must be refused");
}

#[test]
fn verify_symmetry_on_tiny_y() {
    // every 2-cell Y group of Black's two stones spans all sides, so both
    // orbit mates sit at rate 1 and the z statistic is exactly zero
    let out =
        depthlab(&["verify", "symmetry", "--game", "y", "--size", "2", "-n", "8", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{} {}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("indistinguishable"), "{}", stdout(&out));
}

fn run_tiny_tournament(out_dir: &Path, seed: &str) -> Output {
    depthlab(&[
        "tournament",
        "--game",
        "y",
        "--size",
        "3",
        "--pool",
        "8,2",
        "--games-per-cell",
        "2",
        "--seed",
        seed,
        "--openings",
        "a1,b2",
        "--resamples",
        "100",
        "--out",
        out_dir.to_str().unwrap(),
    ])
}

#[test]
fn tournament_writes_artifacts_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let out = run_tiny_tournament(&run, "11");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    for name in ["rdr", "rdr+pr", "gfm-max", "gfm-min"] {
        assert!(text.contains(name), "missing row {name}: {text}");
    }
    for file in ["report.json", "summary.csv", "matches.jsonl"] {
        assert!(run.join(file).exists(), "missing {file}");
    }

    let replay = depthlab(&[
        "verify",
        "replay",
        "--log",
        run.join("matches.jsonl").to_str().unwrap(),
        "--game",
        "y",
        "--size",
        "3",
    ]);
    assert_eq!(code(&replay), 0, "{}", stdout(&replay));
    assert!(stdout(&replay).contains("8 records verified"));

    // resuming re-reads the log, replays nothing, and rewrites the same CSV
    let csv = fs::read(run.join("summary.csv")).unwrap();
    let again = run_tiny_tournament(&run, "11");
    assert_eq!(code(&again), 0);
    assert!(stdout(&again).contains("8 resumed"), "{}", stdout(&again));
    assert_eq!(fs::read(run.join("summary.csv")).unwrap(), csv);

    // a fresh directory reproduces it byte for byte
    let run2 = dir.path().join("run2");
    assert_eq!(code(&run_tiny_tournament(&run2, "11")), 0);
    assert_eq!(fs::read(run2.join("summary.csv")).unwrap(), csv);
}

#[test]
fn tournament_usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out_flag = dir.path().join("x");
    let one = depthlab(&[
        "tournament",
        "--game",
        "y",
        "--size",
        "3",
        "--pool",
        "8",
        "--seed",
        "1",
        "--out",
        out_flag.to_str().unwrap(),
    ]);
    assert_eq!(code(&one), 2, "a pool of one has no pairs");

    let unseeded = depthlab(&[
        "tournament",
        "--game",
        "y",
        "--size",
        "3",
        "--pool",
        "8,2",
        "--out",
        out_flag.to_str().unwrap(),
    ]);
    assert_eq!(code(&unseeded), 2);
    assert!(stderr(&unseeded).contains("--seed"), "{}", stderr(&unseeded));
}

#[test]
fn tournament_reads_config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{
          "game": "y", "size": 3,
          "pool": [{"kind": "mcts", "simulations": 8, "label": "mcts-8"},
                   {"kind": "mcts", "simulations": 2, "label": "mcts-2"}],
          "openings": {"explicit": ["a1"]},
          "games_per_cell": 2, "master_seed": 9,
          "rules": ["rdr"], "bootstrap_resamples": 100
        }"#,
    )
    .unwrap();
    let run = dir.path().join("run");
    let out = depthlab(&[
        "tournament",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "12",
        "--out",
        run.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = fs::read_to_string(run.join("report.json")).unwrap();
    assert!(report.contains(r#""master_seed": 12"#), "--seed must override the file");
}

#[test]
fn replay_flags_tampering_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    assert_eq!(code(&run_tiny_tournament(&run, "11")), 0);
    let log = run.join("matches.jsonl");
    let pristine = fs::read_to_string(&log).unwrap();

    // flip one recorded winner: parses fine, fails the replay, exit 1
    let tampered = pristine.replacen("\"winner\":\"black\"", "\"winner\":\"white\"", 1);
    assert_ne!(tampered, pristine, "no black win to flip");
    fs::write(&log, &tampered).unwrap();
    let replay_args =
        ["verify", "replay", "--log", log.to_str().unwrap(), "--game", "y", "--size", "3"];
    let flipped = depthlab(&replay_args);
    assert_eq!(code(&flipped), 1, "{}", stdout(&flipped));
    assert!(stdout(&flipped).contains("does not replay"));

    // garbage on a line is corruption, not a violation: exit 3
    fs::write(&log, format!("{pristine}not json\n")).unwrap();
    assert_eq!(code(&depthlab(&replay_args)), 3);

    // resuming over the corrupt log is refused the same way
    let resumed = run_tiny_tournament(&run, "11");
    assert_eq!(code(&resumed), 3, "{}", stderr(&resumed));

    let missing = depthlab(&[
        "verify",
        "replay",
        "--log",
        run.join("nope.jsonl").to_str().unwrap(),
        "--game",
        "y",
        "--size",
        "3",
    ]);
    assert_eq!(code(&missing), 3);
}

#[test]
fn free_opening_reports_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("free");
    let out = depthlab(&[
        "free-opening",
        "--game",
        "y",
        "--size",
        "3",
        "--pool",
        "8,2",
        "--games-per-cell",
        "2",
        "--seed",
        "5",
        "--resamples",
        "100",
        "--out",
        run.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("free"), "{}", stdout(&out));
    let csv = fs::read_to_string(run.join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2, "header plus one row: {csv}");
}

#[test]
fn depth_reads_win_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(
        &path,
        r#"{"labels":["a","b","c"],
            "p":[[0.5,0.7,0.8],[0.3,0.5,0.7],[0.2,0.3,0.5]],
            "counts":[[0,0,0],[0,0,0],[0,0,0]]}"#,
    )
    .unwrap();
    let out = depthlab(&["depth", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("weakest to strongest c, b, a"), "{text}");
    assert!(text.contains("chain at 0.60 (strongest first): a > b > c"), "{text}");

    // Hand-written exact matrices may omit counts.
    let bare = dir.path().join("bare.json");
    fs::write(&bare, r#"{"labels":["a","b"],"p":[[0.5,0.75],[0.25,0.5]]}"#).unwrap();
    let out = depthlab(&["depth", "--input", bare.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("weakest to strongest b, a"), "{}", stdout(&out));
}

#[test]
fn thread_flag_and_env_are_validated() {
    let ok = Command::new(env!("CARGO_BIN_EXE_depthlab"))
        .env("DEPTHLAB_THREADS", "2")
        .args(["openings", "--game", "y", "--size", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));

    let bad = Command::new(env!("CARGO_BIN_EXE_depthlab"))
        .env("DEPTHLAB_THREADS", "abc")
        .args(["openings", "--game", "y", "--size", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);

    let zero = depthlab(&["--threads", "0", "openings", "--game", "y", "--size", "3"]);
    assert_eq!(code(&zero), 2);
}

#[test]
fn bare_invocation_is_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_depthlab")).output().unwrap();
    assert_eq!(code(&out), 2);
}
