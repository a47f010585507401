//! Acceptance gate: every release requirement checked end to end, one
//! verdict line per criterion.
//!
//! The bundled communications study is run once at full scale and shared by
//! the fraction, ordering, fairness, and bound criteria; the remaining
//! criteria drive the library or the compiled binary directly.

use std::path::Path;
use std::process::Command;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use como::action::{Action, ActionSet};
use como::config::{self, Config};
use como::env::BernoulliEnv;
use como::pareto::{
    compute_pareto_front, compute_spf, hoeffding_violation_bound, psg, psg_oracle, theorem1_bound,
};
use como::policy::PolicySpec;
use como::sim::{derive_rng, run_experiment, run_single, ExperimentResult, PolicyResult, TrueGaps};
use como::Reward64;

const CONFIG_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/paper6.cfg");

fn bundled_config() -> Config {
    let text = std::fs::read_to_string(CONFIG_PATH).expect("bundled config readable");
    config::parse(&text, Path::new(env!("CARGO_MANIFEST_DIR"))).expect("bundled config parses")
}

struct FullRun {
    result: ExperimentResult,
    wall: Duration,
}

static FULL_RUN: OnceLock<FullRun> = OnceLock::new();

/// The bundled study at its configured scale, shared across criteria.
fn full_run() -> &'static FullRun {
    FULL_RUN.get_or_init(|| {
        let cfg = bundled_config();
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        let start = Instant::now();
        let result = run_experiment(&cfg.spec, workers).expect("bundled study runs");
        FullRun { result, wall: start.elapsed() }
    })
}

fn policy<'a>(result: &'a ExperimentResult, id: &str) -> &'a PolicyResult {
    result
        .policies
        .iter()
        .find(|p| p.spec.id() == id)
        .unwrap_or_else(|| panic!("policy {id} missing from result"))
}

fn final_fraction(result: &ExperimentResult, id: &str) -> f64 {
    policy(result, id).checkpoints.last().unwrap().mean_fraction
}

fn final_regret(result: &ExperimentResult, id: &str) -> f64 {
    policy(result, id).checkpoints.last().unwrap().mean_regret
}

/// Max/min ratio of the conditional front-selection profile.
fn fairness_ratio(result: &ExperimentResult, id: &str) -> f64 {
    let profile = &policy(result, id).fairness;
    assert!(!profile.is_empty(), "{id} never hit the front");
    let max = profile.iter().cloned().fold(f64::MIN, f64::max);
    let min = profile.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

/// Prints the criterion verdict line, then enforces it.
fn verdict(label: &str, ok: bool, detail: &str) {
    println!("{label}: {} [{detail}]", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{label} failed: {detail}");
}

#[test]
fn bundled_instance_structure() {
    let cfg = bundled_config();
    let start = Instant::now();
    let env = cfg.spec.env.build().expect("env builds");
    let gaps = TrueGaps::compute(env.as_ref()).expect("gaps computable");
    let elapsed = start.elapsed();
    let n_actions = env.action_set().len();
    let spf = &gaps.stats.fronts.spf;
    let pareto = &gaps.stats.fronts.pareto;
    let ok = n_actions == 108 && spf.len() == 9 && spf == pareto && elapsed < Duration::from_secs(1);
    verdict(
        "instance structure",
        ok,
        &format!(
            "|A|={n_actions}, |SPF|={}, fronts equal: {}, built in {elapsed:?}",
            spf.len(),
            spf == pareto
        ),
    );
}

#[test]
fn front_selection_fractions() {
    let run = full_run();
    let bands = [
        ("como_ucb", 0.69, 0.89),
        ("so_ucb1", 0.27, 0.47),
        ("pareto_ucb1", 0.38, 0.58),
        ("llr", 0.57, 0.77),
    ];
    let mut ok = run.wall < Duration::from_secs(600);
    let mut detail = Vec::new();
    for (id, lo, hi) in bands {
        let f = final_fraction(&run.result, id);
        ok &= (lo..=hi).contains(&f);
        detail.push(format!("{id} {f:.3} in [{lo}, {hi}]"));
    }
    detail.push(format!("wall {:?}", run.wall));
    verdict("front selection fractions", ok, &detail.join(", "));
}

#[test]
fn regret_ordering() {
    let run = full_run();
    let como = final_regret(&run.result, "como_ucb");
    let llr = final_regret(&run.result, "llr");
    let pareto = final_regret(&run.result, "pareto_ucb1");
    let so = final_regret(&run.result, "so_ucb1");
    let ok = como < llr && llr < pareto && pareto < so;
    verdict(
        "regret ordering",
        ok,
        &format!("como_ucb {como:.1} < llr {llr:.1} < pareto_ucb1 {pareto:.1} < so_ucb1 {so:.1}"),
    );
}

#[test]
fn fairness_ratios() {
    let run = full_run();
    let como = fairness_ratio(&run.result, "como_ucb");
    let llr = fairness_ratio(&run.result, "llr");
    let so = fairness_ratio(&run.result, "so_ucb1");
    let ok = como <= 3.0 && llr >= 5.0 && so >= 5.0;
    verdict(
        "fairness ratios",
        ok,
        &format!("como_ucb {como:.2} <= 3, llr {llr:.2} >= 5, so_ucb1 {so:.2} >= 5"),
    );
}

/// Random instance with at most 10 arms and 30 actions. Supports are drawn
/// from an arm pool and the used arms renumbered densely, since every arm
/// must belong to some action.
fn random_small_instance(rng: &mut ChaCha8Rng) -> BernoulliEnv {
    let pool = rng.random_range(2..=10usize);
    let n_actions = rng.random_range(2..=30usize);
    let dimension = rng.random_range(1..=3usize);
    let supports: Vec<Vec<(usize, f64)>> = (0..n_actions)
        .map(|_| {
            let support = rng.random_range(1..=pool.min(3));
            let mut arms: Vec<usize> = (0..pool).collect();
            arms.shuffle(rng);
            arms[..support].iter().map(|&arm| (arm, rng.random_range(0.2..=1.0))).collect()
        })
        .collect();
    let mut used: Vec<usize> = supports.iter().flatten().map(|&(arm, _)| arm).collect();
    used.sort_unstable();
    used.dedup();
    let actions: Vec<Action<f64>> = supports
        .into_iter()
        .map(|weights| {
            Action::new(
                weights
                    .into_iter()
                    .map(|(arm, w)| (used.binary_search(&arm).unwrap(), w))
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    let n_arms = used.len();
    let set = Arc::new(ActionSet::new(actions, n_arms, dimension).unwrap());
    let means = (0..n_arms)
        .map(|_| {
            Reward64::new((0..dimension).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap()
        })
        .collect();
    BernoulliEnv::new(set, means).unwrap()
}

/// Mean regret per checkpoint stays at or below the analytic bound.
fn bound_holds(env: &dyn como::env::Environment, horizon: u64, stride: u64, seed: u64) -> bool {
    let gaps = TrueGaps::compute(env).unwrap();
    let actions = env.action_set();
    let runs = 3u64;
    let spec = PolicySpec::como_ucb();
    let traces: Vec<_> = (0..runs)
        .map(|run| {
            run_single(
                env,
                &spec,
                horizon,
                stride,
                derive_rng(seed, run, spec.id(), "policy"),
                derive_rng(seed, run, spec.id(), "env"),
                &gaps,
            )
            .unwrap()
        })
        .collect();
    (0..traces[0].checkpoints.len()).all(|c| {
        let t = traces[0].checkpoints[c].t;
        let mean: f64 =
            traces.iter().map(|tr| tr.checkpoints[c].regret).sum::<f64>() / runs as f64;
        let bound = theorem1_bound(
            t as f64,
            actions.n_arms(),
            actions.max_support_size(),
            actions.dimension(),
            actions.max_weight(),
            gaps.stats.delta_min,
            gaps.stats.delta_max,
        )
        .unwrap();
        mean <= bound
    })
}

#[test]
fn regret_bound_soundness() {
    // Bundled study: every checkpoint of the shared full-scale run.
    let run = full_run();
    let cfg = bundled_config();
    let env = cfg.spec.env.build().unwrap();
    let actions = env.action_set();
    let s = &run.result.summary;
    let bundled_ok = policy(&run.result, "como_ucb").checkpoints.iter().all(|c| {
        let bound = theorem1_bound(
            c.t as f64,
            s.n_arms,
            s.max_support,
            s.dimension,
            actions.max_weight(),
            s.delta_min,
            s.delta_max,
        )
        .unwrap();
        c.mean_regret <= bound
    });

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b0d);
    let small_ok = (0..10).all(|i| {
        let env = random_small_instance(&mut rng);
        bound_holds(&env, 20_000, 1_000, 1000 + i)
    });

    verdict(
        "regret bound soundness",
        bundled_ok && small_ok,
        &format!("bundled study: {bundled_ok}, 10 random small instances: {small_ok}"),
    );
}

/// Raw-coordinate filter: keep `k` unless some other row is strictly larger
/// in every coordinate.
fn brute_spf(rows: &[Vec<f64>]) -> Vec<usize> {
    (0..rows.len())
        .filter(|&k| {
            !(0..rows.len())
                .any(|o| o != k && rows[o].iter().zip(&rows[k]).all(|(a, b)| a > b))
        })
        .collect()
}

/// Raw-coordinate filter: keep `k` unless some other row is at least as
/// large everywhere and strictly larger somewhere.
fn brute_pareto(rows: &[Vec<f64>]) -> Vec<usize> {
    (0..rows.len())
        .filter(|&k| {
            !(0..rows.len()).any(|o| {
                o != k
                    && rows[o].iter().zip(&rows[k]).all(|(a, b)| a >= b)
                    && rows[o].iter().zip(&rows[k]).any(|(a, b)| a > b)
            })
        })
        .collect()
}

#[test]
fn front_and_gap_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x04ac1e);
    let mut fronts_ok = true;
    for _ in 0..1000 {
        let n = rng.random_range(1..=12usize);
        let d = rng.random_range(1..=4usize);
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| (0..d).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let vectors: Vec<Reward64> =
            rows.iter().map(|r| Reward64::new(r.clone()).unwrap()).collect();
        fronts_ok &= compute_spf(&vectors).unwrap() == brute_spf(&rows);
        fronts_ok &= compute_pareto_front(&vectors).unwrap() == brute_pareto(&rows);
        if !fronts_ok {
            break;
        }
    }

    let mut gap_ok = true;
    let mut worst_gap_diff = 0.0f64;
    for _ in 0..1000 {
        let d = rng.random_range(1..=4usize);
        let front: Vec<Reward64> = (0..rng.random_range(1..=8usize))
            .map(|_| {
                Reward64::new((0..d).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap()
            })
            .collect();
        let point =
            Reward64::new((0..d).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap();
        let closed = psg(&point, &front).unwrap();
        let bisected = psg_oracle(&point, &front, 1e-12).unwrap();
        worst_gap_diff = worst_gap_diff.max((closed - bisected).abs());
        gap_ok &= (closed - bisected).abs() <= 1e-9;
    }

    verdict(
        "front and gap oracle equivalence",
        fronts_ok && gap_ok,
        &format!(
            "fronts exact on 1000 instances: {fronts_ok}, gap routes within 1e-9 on 1000 \
             (worst {worst_gap_diff:.2e})"
        ),
    );
}

#[test]
fn superdomination_tail_bound() {
    const TRIALS: u64 = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    let mut ok = true;
    let mut worst = String::from("all cells within bound");
    let mut worst_margin = f64::MAX;
    for dimension in [1usize, 2, 4] {
        for n in [4u64, 16, 64] {
            for k in [0.1f64, 0.25] {
                let mu = 0.5f64;
                let boosted =
                    Reward64::new(vec![mu + k; dimension]).unwrap();
                let mut violations = 0u64;
                for _ in 0..TRIALS {
                    let empirical: Vec<f64> = (0..dimension)
                        .map(|_| {
                            let hits =
                                (0..n).filter(|_| rng.random::<f64>() < mu).count();
                            hits as f64 / n as f64
                        })
                        .collect();
                    let empirical = Reward64::new(empirical).unwrap();
                    if !boosted.super_dominates(&empirical).unwrap() {
                        violations += 1;
                    }
                }
                let freq = violations as f64 / TRIALS as f64;
                let bound = hoeffding_violation_bound(n, k, dimension).unwrap();
                let p = bound.min(1.0);
                let allowance = 3.0 * (p * (1.0 - p) / TRIALS as f64).sqrt();
                let cell_ok = freq <= bound + allowance;
                ok &= cell_ok;
                let margin = bound + allowance - freq;
                if margin < worst_margin {
                    worst_margin = margin;
                    worst = format!(
                        "tightest cell D={dimension} n={n} k={k}: freq {freq:.5} vs bound \
                         {bound:.5} + {allowance:.5}"
                    );
                }
            }
        }
    }
    verdict("empirical-front tail bound", ok, &worst);
}

fn run_cli(out_dir: &Path, workers: &str) {
    let status = Command::new(env!("CARGO_BIN_EXE_como"))
        .args(["--config", CONFIG_PATH, "--out-dir"])
        .arg(out_dir)
        .args(["--workers", workers])
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .expect("binary runs");
    assert!(status.success(), "CLI exited with {status}");
}

fn csv_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    ["regret.csv", "spf_fraction.csv", "fairness.csv"]
        .iter()
        .map(|name| (name.to_string(), std::fs::read(dir.join(name)).expect("csv written")))
        .collect()
}

#[test]
fn deterministic_cli_output() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs = [tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c")];
    run_cli(&dirs[0], "2");
    run_cli(&dirs[1], "2");
    run_cli(&dirs[2], "4");
    let a = csv_bytes(&dirs[0]);
    let repeat_ok = a == csv_bytes(&dirs[1]);
    let workers_ok = a == csv_bytes(&dirs[2]);
    verdict(
        "deterministic output",
        repeat_ok && workers_ok,
        &format!("repeat run byte-identical: {repeat_ok}, worker-count independent: {workers_ok}"),
    );
}
