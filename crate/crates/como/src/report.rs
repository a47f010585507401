//! Result serialization: CSV tables, a human-readable summary, and an
//! optional gnuplot script.
//!
//! Three tables with fixed headers: `regret.csv`
//! (`t,policy,mean_regret,std_regret`), `spf_fraction.csv`
//! (`t,policy,mean_fraction,std_fraction`), and `fairness.csv`
//! (`policy,spf_action_index,fraction`). Rows are sorted by (policy id,
//! `t`), floats carry 9 significant digits, and the writers are pure
//! functions of the experiment result, which is what makes repeated runs
//! byte-comparable. `summary.txt` records the instance constants alongside
//! the regret bound at the horizon.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::sim::{ExperimentResult, PolicyResult};

/// A float with 9 significant digits, scientific notation.
fn sig9(value: f64) -> String {
    format!("{value:.8e}")
}

/// Policy results sorted by id (CSV row order; configuration order is kept
/// in the result itself).
fn by_id(result: &ExperimentResult) -> Vec<&PolicyResult> {
    let mut policies: Vec<&PolicyResult> = result.policies.iter().collect();
    policies.sort_by_key(|p| p.spec.id());
    policies
}

pub fn regret_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("t,policy,mean_regret,std_regret\n");
    for policy in by_id(result) {
        for c in &policy.checkpoints {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.t,
                policy.spec.id(),
                sig9(c.mean_regret),
                sig9(c.std_regret)
            );
        }
    }
    out
}

pub fn spf_fraction_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("t,policy,mean_fraction,std_fraction\n");
    for policy in by_id(result) {
        for c in &policy.checkpoints {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.t,
                policy.spec.id(),
                sig9(c.mean_fraction),
                sig9(c.std_fraction)
            );
        }
    }
    out
}

pub fn fairness_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("policy,spf_action_index,fraction\n");
    for policy in by_id(result) {
        for (action, fraction) in result.spf_actions.iter().zip(&policy.fairness) {
            let _ = writeln!(out, "{},{},{}", policy.spec.id(), action, sig9(*fraction));
        }
    }
    out
}

pub fn summary_text(name: &str, horizon: u64, result: &ExperimentResult) -> String {
    let s = &result.summary;
    let mut out = String::new();
    let _ = writeln!(out, "experiment:        {name}");
    let _ = writeln!(out, "actions |A|:       {}", s.n_actions);
    let _ = writeln!(out, "arms N:            {}", s.n_arms);
    let _ = writeln!(out, "max support L:     {}", s.max_support);
    let _ = writeln!(out, "objectives D:      {}", s.dimension);
    let _ = writeln!(out, "|SPF|:             {}", s.spf_size);
    let _ = writeln!(out, "|Pareto front|:    {}", s.pareto_size);
    let _ = writeln!(out, "delta_min:         {}", sig9(s.delta_min));
    let _ = writeln!(out, "delta_max:         {}", sig9(s.delta_max));
    match s.bound_at_horizon {
        Some(bound) => {
            let _ = writeln!(out, "regret bound at T={horizon}: {}", sig9(bound));
        }
        None => {
            let _ = writeln!(out, "regret bound at T={horizon}: undefined (horizon within initialization)");
        }
    }
    out
}

/// Gnuplot script plotting the three tables; written next to them, so all
/// paths are relative.
pub fn plot_script(result: &ExperimentResult) -> String {
    let ids: Vec<&str> = by_id(result).iter().map(|p| p.spec.id()).collect();
    let list = ids.join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set terminal pngcairo size 900,600");
    let _ = writeln!(out, "set key outside right");
    let _ = writeln!(out, "policies = \"{list}\"");
    let _ = writeln!(out);
    let _ = writeln!(out, "set output 'regret.png'");
    let _ = writeln!(out, "set xlabel 'steps'");
    let _ = writeln!(out, "set ylabel 'mean cumulative regret'");
    let _ = writeln!(
        out,
        "plot for [p in policies] 'regret.csv' using 1:(strcol(2) eq p ? column(3) : 1/0) with lines title p"
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "set output 'spf_fraction.png'");
    let _ = writeln!(out, "set ylabel 'front selection fraction'");
    let _ = writeln!(out, "set yrange [0:1]");
    let _ = writeln!(
        out,
        "plot for [p in policies] 'spf_fraction.csv' using 1:(strcol(2) eq p ? column(3) : 1/0) with lines title p"
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "set output 'fairness.png'");
    let _ = writeln!(out, "set xlabel 'front action index'");
    let _ = writeln!(out, "set ylabel 'conditional selection fraction'");
    let _ = writeln!(out, "set yrange [0:*]");
    let _ = writeln!(
        out,
        "plot for [p in policies] 'fairness.csv' using (strcol(1) eq p ? column(2) : 1/0):3 with linespoints title p"
    );
    out
}

/// Write all result files into `out_dir` (created if needed); returns the
/// paths written.
pub fn write_results(
    name: &str,
    horizon: u64,
    result: &ExperimentResult,
    out_dir: &Path,
    emit_plots: bool,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let mut emit = |file: &str, content: String| -> Result<()> {
        let path = out_dir.join(file);
        std::fs::write(&path, content)?;
        written.push(path);
        Ok(())
    };
    emit("regret.csv", regret_csv(result))?;
    emit("spf_fraction.csv", spf_fraction_csv(result))?;
    emit("fairness.csv", fairness_csv(result))?;
    emit("summary.txt", summary_text(name, horizon, result))?;
    if emit_plots {
        emit("plots.gp", plot_script(result))?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{DiversityMode, EnvConfig, RecConfig};
    use crate::policy::PolicySpec;
    use crate::sim::{run_experiment, ExperimentSpec};

    fn tiny_result() -> (ExperimentSpec, ExperimentResult) {
        let spec = ExperimentSpec {
            env: EnvConfig::Recommender(RecConfig {
                items: 2,
                slate_size: 1,
                users_per_step: 2,
                type_probs: vec![1.0],
                like_probs: vec![vec![0.9, 0.2]],
                diversity: DiversityMode::Variance,
            }),
            policies: vec![PolicySpec::so_ucb1(), PolicySpec::como_ucb()],
            horizon: 40,
            runs: 2,
            seed: 5,
            checkpoint_stride: 10,
        };
        let result = run_experiment(&spec, 2).unwrap();
        (spec, result)
    }

    #[test]
    fn csv_headers_and_shapes_are_stable() {
        let (spec, result) = tiny_result();
        let regret = regret_csv(&result);
        let fraction = spf_fraction_csv(&result);
        assert!(regret.starts_with("t,policy,mean_regret,std_regret\n"));
        assert!(fraction.starts_with("t,policy,mean_fraction,std_fraction\n"));
        // Row count: checkpoints × policies.
        let checkpoints = (spec.horizon / spec.checkpoint_stride) as usize;
        let rows = regret.lines().count() - 1;
        assert_eq!(rows, checkpoints * spec.policies.len());

        let fairness = fairness_csv(&result);
        assert!(fairness.starts_with("policy,spf_action_index,fraction\n"));
    }

    #[test]
    fn rows_are_sorted_by_policy_then_t() {
        let (_, result) = tiny_result();
        // como_ucb sorts before so_ucb1 even though the config order is
        // reversed.
        let regret = regret_csv(&result);
        let policies: Vec<&str> =
            regret.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        let mut sorted = policies.clone();
        sorted.sort();
        assert_eq!(policies, sorted);
        let ts: Vec<u64> = regret
            .lines()
            .skip(1)
            .take_while(|l| l.split(',').nth(1) == Some("como_ucb"))
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn floats_carry_nine_significant_digits() {
        assert_eq!(sig9(0.28055724), "2.80557240e-1");
        assert_eq!(sig9(0.0), "0.00000000e0");
        let (_, result) = tiny_result();
        for line in regret_csv(&result).lines().skip(1) {
            let mean = line.split(',').nth(2).unwrap();
            assert!(mean.contains('e'), "not scientific: {mean}");
        }
    }

    #[test]
    fn summary_names_the_instance_constants() {
        let (spec, result) = tiny_result();
        let text = summary_text("tiny", spec.horizon, &result);
        for needle in ["|A|", "arms N", "|SPF|", "|Pareto front|", "delta_min", "delta_max", "bound"] {
            assert!(text.contains(needle), "missing {needle} in:\n{text}");
        }
    }

    #[test]
    fn plot_script_references_the_tables() {
        let (_, result) = tiny_result();
        let script = plot_script(&result);
        for needle in ["regret.csv", "spf_fraction.csv", "fairness.csv", "como_ucb so_ucb1"] {
            assert!(script.contains(needle), "missing {needle}");
        }
    }

    #[test]
    fn write_results_creates_the_file_set() {
        let (spec, result) = tiny_result();
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("nested").join("out");
        let written = write_results("tiny", spec.horizon, &result, &out, true).unwrap();
        let names: Vec<_> = written
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(
            names,
            ["regret.csv", "spf_fraction.csv", "fairness.csv", "summary.txt", "plots.gp"]
        );
        for path in &written {
            assert!(path.exists());
        }
    }
}
