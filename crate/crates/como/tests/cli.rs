//! Binary contract: exit codes, diagnostics, stdout audit echo, and CSV
//! schema stability.

use std::path::Path;
use std::process::{Command, Output};

use como::config::{self, Overrides};

/// Single-user channel study: 4 arms, 4 actions, quick at any seed.
const TINY: &str = "\
[experiment]
name = tiny
horizon = 600
runs = 2
seed = 11
checkpoint_stride = 100

[env]
kind = comm
m = 1
q = 2
h = 2
snr = 1.0
lambda = 0.1 0.2
rate_schedule = explicit
rates = 0.5 1.0 0.4 0.8

[policies]
policy = como_ucb
policy = so_ucb1
";

fn write_tiny(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("tiny.cfg");
    std::fs::write(&path, TINY).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_como")).args(args).output().expect("binary runs")
}

fn stderr_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).trim_end().to_string()
}

#[test]
fn missing_config_flag_exits_2() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unreadable_config_exits_2_naming_the_file() {
    let out = run(&["--config", "/no/such/file.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_line(&out);
    assert!(err.contains("/no/such/file.cfg"), "diagnostic was: {err}");
    assert_eq!(err.lines().count(), 1, "diagnostic must be one line: {err}");
}

#[test]
fn unknown_key_exits_2_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, TINY.replace("snr = 1.0", "snr = 1.0\nbogus_knob = 3")).unwrap();
    let out = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_line(&out);
    assert!(err.contains("bogus_knob"), "diagnostic was: {err}");
    assert_eq!(err.lines().count(), 1, "diagnostic must be one line: {err}");
}

#[test]
fn empty_policy_list_exits_2_before_writing_anything() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.cfg");
    let idx = TINY.find("policy = ").unwrap();
    std::fs::write(&path, &TINY[..idx]).unwrap();
    let out_dir = dir.path().join("results");
    let out =
        run(&["--config", path.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists(), "no output may be created on config errors");
}

#[test]
fn unwritable_out_dir_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny(dir.path());
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "a file, not a directory").unwrap();
    let out_dir = blocker.join("sub");
    let out =
        run(&["--config", config.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_line(&out).lines().count(), 1);
}

#[test]
fn stdout_echoes_the_post_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny(dir.path());
    let out_dir = dir.path().join("results");
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--seed",
        "99",
        "--runs",
        "1",
        "--horizon",
        "400",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let mut expected = config::parse(TINY, dir.path()).unwrap();
    expected.apply(&Overrides { seed: Some(99), runs: Some(1), horizon: Some(400) });
    let echoed =
        config::parse(&String::from_utf8(out.stdout).unwrap(), dir.path()).unwrap();
    assert_eq!(echoed.name, expected.name);
    assert_eq!(echoed.spec, expected.spec);
}

#[test]
fn csv_headers_and_row_counts_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny(dir.path());
    let out_dir = dir.path().join("results");
    let out =
        run(&["--config", config.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let read = |name: &str| std::fs::read_to_string(out_dir.join(name)).unwrap();
    let regret = read("regret.csv");
    let fraction = read("spf_fraction.csv");
    let fairness = read("fairness.csv");
    assert_eq!(regret.lines().next().unwrap(), "t,policy,mean_regret,std_regret");
    assert_eq!(fraction.lines().next().unwrap(), "t,policy,mean_fraction,std_fraction");
    assert_eq!(fairness.lines().next().unwrap(), "policy,spf_action_index,fraction");

    // 600 steps at stride 100 → 6 checkpoints, for each of the 2 policies.
    assert_eq!(regret.lines().count(), 1 + 6 * 2);
    assert_eq!(fraction.lines().count(), 1 + 6 * 2);
    assert!(read("summary.txt").contains("tiny"));
    assert!(!out_dir.join("plots.gp").exists(), "plot script only written on request");

    let with_plots = dir.path().join("with_plots");
    let out = run(&[
        "--config",
        config.to_str().unwrap(),
        "--out-dir",
        with_plots.to_str().unwrap(),
        "--emit-plots",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(with_plots.join("plots.gp").exists());
}
