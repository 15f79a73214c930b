//! End-to-end tests of the `bufsim` binary: subcommands, report lines,
//! file formats, and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

fn bufsim() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bufsim"));
    cmd.env_remove("BUFSIM_LOG");
    cmd
}

/// Runs the command and returns (exit code, stdout, stderr).
fn run(mut cmd: Command) -> (i32, String, String) {
    let out = cmd.output().expect("spawn bufsim");
    (
        out.status.code().expect("no exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Writes the named thm33 instance files via the fixture subcommand and
/// returns their paths (A, B, sigma).
fn thm33_files(dir: &Path, n: u32) -> (PathBuf, PathBuf, PathBuf) {
    for (name, param) in [("thm33_A", true), ("thm33_B", true), ("thm33_sigma", false)] {
        let mut cmd = bufsim();
        cmd.arg("fixture").arg(name);
        if param {
            cmd.args(["--param", &n.to_string()]);
        }
        cmd.arg("--out").arg(dir);
        let (code, stdout, stderr) = run(cmd);
        assert_eq!(code, 0, "fixture {name}: {stderr}");
        assert!(stdout.starts_with("wrote: "), "fixture {name}: {stdout}");
    }
    (
        dir.join(format!("thm33_A_{n}.nba")),
        dir.join(format!("thm33_B_{n}.nba")),
        dir.join("thm33_sigma.sigma"),
    )
}

#[test]
fn help_is_exit_zero_and_bad_usage_is_exit_two() {
    let (code, stdout, _) = run({
        let mut c = bufsim();
        c.arg("--help");
        c
    });
    assert_eq!(code, 0);
    assert!(stdout.contains("bufsim"));
    let (code, _, stderr) = run(bufsim());
    assert_eq!(code, 2, "bare invocation should fail usage: {stderr}");
}

#[test]
fn fixture_writes_files_and_rejects_bad_names() {
    let dir = TempDir::new().unwrap();
    let (a, _, sigma) = thm33_files(dir.path(), 2);
    let nba_text = std::fs::read_to_string(a).unwrap();
    assert!(nba_text.starts_with("nba thm33_A_2\n"), "{nba_text}");
    assert!(nba_text.contains("trans:"), "{nba_text}");
    let sigma_text = std::fs::read_to_string(sigma).unwrap();
    assert!(sigma_text.starts_with("sigma\n"), "{sigma_text}");

    // Unknown names fail and the error lists what exists.
    let (code, _, stderr) = run({
        let mut c = bufsim();
        c.args(["fixture", "nope"]).arg("--out").arg(dir.path());
        c
    });
    assert_eq!(code, 2);
    assert!(stderr.contains("ex21_sigma"), "{stderr}");

    // The family parameter is required exactly where it means something.
    let (code, _, stderr) = run({
        let mut c = bufsim();
        c.args(["fixture", "thm33_A"]).arg("--out").arg(dir.path());
        c
    });
    assert_eq!(code, 2, "{stderr}");
    let (code, _, stderr) = run({
        let mut c = bufsim();
        c.args(["fixture", "ex21_sigma", "--param", "3"])
            .arg("--out")
            .arg(dir.path());
        c
    });
    assert_eq!(code, 2, "{stderr}");
}

#[test]
fn simulate_reports_the_winner_through_the_exit_code() {
    let dir = TempDir::new().unwrap();
    let (a, b, sigma) = thm33_files(dir.path(), 1);
    let simulate = |kappa: &str| {
        let mut c = bufsim();
        c.arg("simulate")
            .arg("--A")
            .arg(&a)
            .arg("--B")
            .arg(&b)
            .arg("--sigma")
            .arg(&sigma)
            .args(["--kappa", kappa]);
        run(c)
    };

    let (code, stdout, stderr) = simulate("2,0");
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("winner: Duplicator"), "{stdout}");
    for key in ["vertices: ", "edges: ", "size_bound: "] {
        assert!(stdout.contains(key), "missing {key} in {stdout}");
    }

    let (code, stdout, _) = simulate("1,0");
    assert_eq!(code, 1);
    assert!(stdout.contains("winner: Spoiler"), "{stdout}");
}

#[test]
fn simulate_writes_dot_and_prints_strategies_on_request() {
    let dir = TempDir::new().unwrap();
    let (a, b, sigma) = thm33_files(dir.path(), 1);
    let dot = dir.path().join("arena.dot");
    let (code, stdout, stderr) = run({
        let mut c = bufsim();
        c.arg("simulate")
            .arg("--A")
            .arg(&a)
            .arg("--B")
            .arg(&b)
            .arg("--sigma")
            .arg(&sigma)
            .args(["--kappa", "2,0", "--strategy", "--dot"])
            .arg(&dot);
        c
    });
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("strategy:"), "{stdout}");
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.starts_with("digraph"), "{dot_text}");
}

#[test]
fn include_covers_all_three_verdicts() {
    let dir = TempDir::new().unwrap();
    let include = |a: &Path, b: &Path, sigma: &Path| {
        let mut c = bufsim();
        c.arg("include")
            .arg("--A")
            .arg(a)
            .arg("--B")
            .arg(b)
            .arg("--sigma")
            .arg(sigma);
        run(c)
    };

    // An automaton simulates itself without any buffering.
    let (a, _, sigma) = thm33_files(dir.path(), 1);
    let (code, stdout, stderr) = include(&a, &a, &sigma);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("verdict: INCLUDED kappa=0,0"), "{stdout}");

    // Disjoint one-letter languages are refuted by the shortest lasso.
    let only = |name: &str, letter: char| {
        format!(
            "nba {name}\nalphabet: a b\nstates: p\ninitial: p\naccepting: p\ntrans:\np {letter} p\n"
        )
    };
    let a = dir.path().join("onlyb.nba");
    let b = dir.path().join("onlya.nba");
    let joint = dir.path().join("joint.sigma");
    std::fs::write(&a, only("onlyb", 'b')).unwrap();
    std::fs::write(&b, only("onlya", 'a')).unwrap();
    std::fs::write(&joint, "sigma\n1: a b\n").unwrap();
    let (code, stdout, _) = include(&a, &b, &joint);
    assert_eq!(code, 1);
    assert!(stdout.contains("verdict: NOT_INCLUDED lasso=/b"), "{stdout}");

    // A pair needing unbounded buffers stays undecided.
    for name in ["ex54_A", "ex54_B", "ex54_sigma"] {
        let mut c = bufsim();
        c.args(["fixture", name]).arg("--out").arg(dir.path());
        assert_eq!(run(c).0, 0);
    }
    let (code, stdout, _) = include(
        &dir.path().join("ex54_A.nba"),
        &dir.path().join("ex54_B.nba"),
        &dir.path().join("ex54_sigma.sigma"),
    );
    assert_eq!(code, 3);
    assert!(stdout.contains("verdict: UNKNOWN"), "{stdout}");
}

#[test]
fn include_prints_the_strategy_on_request() {
    let dir = TempDir::new().unwrap();
    let (a, _, sigma) = thm33_files(dir.path(), 1);
    let (code, stdout, stderr) = run({
        let mut c = bufsim();
        c.arg("include")
            .arg("--A")
            .arg(&a)
            .arg("--B")
            .arg(&a)
            .arg("--sigma")
            .arg(&sigma)
            .arg("--strategy");
        c
    });
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("strategy:"), "{stdout}");
    assert!(stdout.contains("Duplicator"), "{stdout}");
}

#[test]
fn errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let (a, b, sigma) = thm33_files(dir.path(), 1);

    // Missing input file.
    let (code, _, stderr) = run({
        let mut c = bufsim();
        c.arg("simulate")
            .arg("--A")
            .arg(&a)
            .arg("--B")
            .arg(&b)
            .arg("--sigma")
            .arg(dir.path().join("missing.sigma"))
            .args(["--kappa", "2,0"]);
        c
    });
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error: "), "{stderr}");

    // Malformed capacity vector.
    let (code, _, stderr) = run({
        let mut c = bufsim();
        c.arg("simulate")
            .arg("--A")
            .arg(&a)
            .arg("--B")
            .arg(&b)
            .arg("--sigma")
            .arg(&sigma)
            .args(["--kappa", "two,0"]);
        c
    });
    assert_eq!(code, 2);
    assert!(stderr.contains("capacity"), "{stderr}");

    // Unusable log filter.
    let (code, _, stderr) = run({
        let mut c = bufsim();
        c.env("BUFSIM_LOG", "verbose").arg("--help");
        c
    });
    assert_eq!(code, 2);
    assert!(stderr.contains("BUFSIM_LOG"), "{stderr}");
}

#[test]
fn logging_can_be_enabled() {
    let dir = TempDir::new().unwrap();
    let (a, b, sigma) = thm33_files(dir.path(), 1);
    let (code, stdout, _) = run({
        let mut c = bufsim();
        c.env("BUFSIM_LOG", "info")
            .arg("simulate")
            .arg("--A")
            .arg(&a)
            .arg("--B")
            .arg(&b)
            .arg("--sigma")
            .arg(&sigma)
            .args(["--kappa", "2,0"]);
        c
    });
    assert_eq!(code, 0);
    assert!(stdout.contains("winner: Duplicator"), "{stdout}");
}

#[test]
fn random_check_reports_a_clean_sample() {
    let (code, stdout, stderr) = run({
        let mut c = bufsim();
        c.args(["random-check", "--seed", "1", "--count", "5"]);
        c
    });
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("instances: 5"), "{stdout}");
    assert!(stdout.contains("violations: 0"), "{stdout}");
}
