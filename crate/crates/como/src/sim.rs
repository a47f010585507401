//! Seeded, replicated policy-vs-environment simulation.
//!
//! An experiment runs `R` independent replications of each configured policy
//! against one environment for `T` steps (the policy's initialization phase
//! counts toward `T`), recording cumulative regret against the exact gap
//! table, front-hit counts, and per-front-action selection counts at
//! checkpoints.
//!
//! Determinism: every replication's generators are derived by hashing
//! `(master seed, run index, policy id)` plus a stream tag, so each
//! (policy, run) pair owns collision-free private streams. Replications can
//! execute on any number of workers in any order; results are slotted by
//! task index and aggregated in configuration order, which makes aggregates
//! bit-identical regardless of scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::env::{EnvConfig, Environment};
use crate::error::{Error, Result};
use crate::pareto::{gap_stats, theorem1_bound};
use crate::policy::PolicySpec;
use crate::GapStats64;

/// Full description of one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub env: EnvConfig,
    pub policies: Vec<PolicySpec>,
    /// Total steps per run, initialization included.
    pub horizon: u64,
    /// Independent replications per policy.
    pub runs: u64,
    pub seed: u64,
    /// Metrics are recorded every `checkpoint_stride` steps and at the horizon.
    pub checkpoint_stride: u64,
}

/// Deterministic generator for one `(master, run, policy, stream)` slot.
///
/// The policy id is length-prefixed so distinct `(id, stream)` pairs can
/// never collide; the result seeds an independent stream per purpose
/// (`"policy"` for the policy's own draws, `"env"` for reward sampling).
pub fn derive_rng(master_seed: u64, run: u64, policy_id: &str, stream: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update(run.to_le_bytes());
    hasher.update((policy_id.len() as u64).to_le_bytes());
    hasher.update(policy_id.as_bytes());
    hasher.update(stream.as_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Exact gap table of an environment, computed once per experiment.
pub struct TrueGaps {
    pub stats: GapStats64,
    /// Action index to position within the front list, if a front member.
    spf_position: Vec<Option<usize>>,
}

impl TrueGaps {
    pub fn compute(env: &dyn Environment) -> Result<Self> {
        let means = env.true_action_means()?;
        let stats = gap_stats(&means)?;
        let mut spf_position = vec![None; means.len()];
        for (pos, &action) in stats.fronts.spf.iter().enumerate() {
            spf_position[action] = Some(pos);
        }
        Ok(Self { stats, spf_position })
    }

    pub fn spf(&self) -> &[usize] {
        &self.stats.fronts.spf
    }
}

/// Metrics of one replication.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub checkpoints: Vec<Checkpoint>,
    /// Selection count per front action, aligned with `TrueGaps::spf`.
    pub spf_counts: Vec<u64>,
    pub total_steps: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint {
    pub t: u64,
    /// Cumulative Pareto regret after step `t`.
    pub regret: f64,
    /// Number of front selections among the first `t` steps.
    pub spf_count: u64,
}

impl RunTrace {
    /// Front-selection count over the whole run.
    pub fn total_spf_count(&self) -> u64 {
        self.checkpoints.last().map_or(0, |c| c.spf_count)
    }
}

/// Empirical selection distribution over front actions, conditioned on
/// front-hitting steps. `None` when the run never hit the front.
pub fn fairness_profile(trace: &RunTrace) -> Option<Vec<f64>> {
    let total: u64 = trace.spf_counts.iter().sum();
    if total == 0 {
        return None;
    }
    Some(
        trace
            .spf_counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect(),
    )
}

/// Executes one replication: `horizon` steps of select, sample, account,
/// update, with metrics recorded at every stride multiple and at the end.
pub fn run_single(
    env: &dyn Environment,
    policy_spec: &PolicySpec,
    horizon: u64,
    checkpoint_stride: u64,
    policy_rng: ChaCha8Rng,
    mut env_rng: ChaCha8Rng,
    gaps: &TrueGaps,
) -> Result<RunTrace> {
    let actions = env.action_set();
    let mut policy = policy_spec.build(actions.clone(), policy_rng)?;
    let mut regret = 0.0f64;
    let mut spf_count = 0u64;
    let mut spf_counts = vec![0u64; gaps.spf().len()];
    let mut checkpoints = Vec::with_capacity((horizon / checkpoint_stride + 1) as usize);
    for t in 1..=horizon {
        let chosen = policy.select(t)?;
        if chosen >= actions.len() {
            return Err(Error::Feedback(format!(
                "policy selected action {chosen} out of range ({})",
                actions.len()
            )));
        }
        let support: Vec<usize> = actions.action(chosen).support().collect();
        let observations = env.sample_support(&support, &mut env_rng);
        regret += gaps.stats.gaps[chosen];
        if let Some(pos) = gaps.spf_position[chosen] {
            spf_count += 1;
            spf_counts[pos] += 1;
        }
        policy.update(t, chosen, &observations)?;
        if t % checkpoint_stride == 0 || t == horizon {
            checkpoints.push(Checkpoint { t, regret, spf_count });
        }
    }
    Ok(RunTrace { checkpoints, spf_counts, total_steps: horizon })
}

/// One checkpoint aggregated across replications.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckpointAggregate {
    pub t: u64,
    pub mean_regret: f64,
    /// Sample standard deviation (zero for a single run).
    pub std_regret: f64,
    /// Mean of per-run front-selection fractions `spf_count/t`.
    pub mean_fraction: f64,
    pub std_fraction: f64,
}

/// All replications of one policy plus their aggregates.
#[derive(Clone, Debug)]
pub struct PolicyResult {
    pub spec: PolicySpec,
    pub runs: Vec<RunTrace>,
    pub checkpoints: Vec<CheckpointAggregate>,
    /// Mean of per-run fairness profiles over runs that hit the front;
    /// empty if none did.
    pub fairness: Vec<f64>,
}

/// Structural constants of the instance, for the summary report.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSummary {
    pub n_actions: usize,
    pub n_arms: usize,
    pub max_support: usize,
    pub dimension: usize,
    pub spf_size: usize,
    pub pareto_size: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    /// Expected-regret bound at the horizon; `None` when the horizon does
    /// not exceed the arm count (the bound needs a completed initialization).
    pub bound_at_horizon: Option<f64>,
}

pub struct ExperimentResult {
    pub summary: InstanceSummary,
    /// Action indices of the front, in ascending order.
    pub spf_actions: Vec<usize>,
    /// Per-policy results in configuration order.
    pub policies: Vec<PolicyResult>,
}

fn validate(spec: &ExperimentSpec, n_arms: usize) -> Result<()> {
    if spec.policies.is_empty() {
        return Err(Error::EmptyInput("policy list"));
    }
    if spec.runs == 0 {
        return Err(Error::Config("runs must be ≥ 1".into()));
    }
    if spec.checkpoint_stride == 0 {
        return Err(Error::Config("checkpoint_stride must be ≥ 1".into()));
    }
    if spec.horizon < n_arms as u64 {
        return Err(Error::Config(format!(
            "horizon {} is shorter than the initialization phase ({} arms)",
            spec.horizon, n_arms
        )));
    }
    Ok(())
}

/// Runs the full experiment, fanning replications out to `workers` threads.
pub fn run_experiment(spec: &ExperimentSpec, workers: usize) -> Result<ExperimentResult> {
    let env = spec.env.build()?;
    let actions = env.action_set().clone();
    validate(spec, actions.n_arms())?;
    let gaps = TrueGaps::compute(env.as_ref())?;

    let runs = spec.runs as usize;
    let n_tasks = spec.policies.len() * runs;
    let workers = workers.clamp(1, n_tasks);
    let next_task = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RunTrace>>>> =
        (0..n_tasks).map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let task = next_task.fetch_add(1, Ordering::Relaxed);
                if task >= n_tasks {
                    break;
                }
                let policy_spec = &spec.policies[task / runs];
                let run = (task % runs) as u64;
                let policy_rng = derive_rng(spec.seed, run, policy_spec.id(), "policy");
                let env_rng = derive_rng(spec.seed, run, policy_spec.id(), "env");
                let trace = run_single(
                    env.as_ref(),
                    policy_spec,
                    spec.horizon,
                    spec.checkpoint_stride,
                    policy_rng,
                    env_rng,
                    &gaps,
                );
                *slots[task].lock().unwrap() = Some(trace);
            });
        }
    });

    let mut traces: Vec<RunTrace> = Vec::with_capacity(n_tasks);
    for slot in slots {
        traces.push(slot.into_inner().unwrap().expect("worker filled every slot")?);
    }

    let policies: Vec<PolicyResult> = spec
        .policies
        .iter()
        .enumerate()
        .map(|(p, policy_spec)| {
            let run_traces: Vec<RunTrace> =
                traces[p * runs..(p + 1) * runs].to_vec();
            aggregate(policy_spec.clone(), run_traces)
        })
        .collect();

    let bound_at_horizon = if spec.horizon > actions.n_arms() as u64 {
        Some(theorem1_bound(
            spec.horizon as f64,
            actions.n_arms(),
            actions.max_support_size(),
            actions.dimension(),
            actions.max_weight(),
            gaps.stats.delta_min,
            gaps.stats.delta_max,
        )?)
    } else {
        None
    };
    let summary = InstanceSummary {
        n_actions: actions.len(),
        n_arms: actions.n_arms(),
        max_support: actions.max_support_size(),
        dimension: actions.dimension(),
        spf_size: gaps.stats.fronts.spf.len(),
        pareto_size: gaps.stats.fronts.pareto.len(),
        delta_min: gaps.stats.delta_min,
        delta_max: gaps.stats.delta_max,
        bound_at_horizon,
    };
    Ok(ExperimentResult {
        summary,
        spf_actions: gaps.stats.fronts.spf.clone(),
        policies,
    })
}

/// Pointwise mean and sample standard deviation across replications, in run
/// order (fixed summation order keeps aggregates bit-identical).
fn aggregate(spec: PolicySpec, runs: Vec<RunTrace>) -> PolicyResult {
    let n_checkpoints = runs[0].checkpoints.len();
    let mut checkpoints = Vec::with_capacity(n_checkpoints);
    for c in 0..n_checkpoints {
        let t = runs[0].checkpoints[c].t;
        let regrets: Vec<f64> = runs.iter().map(|run| run.checkpoints[c].regret).collect();
        let fractions: Vec<f64> = runs
            .iter()
            .map(|run| run.checkpoints[c].spf_count as f64 / t as f64)
            .collect();
        let (mean_regret, std_regret) = mean_std(&regrets);
        let (mean_fraction, std_fraction) = mean_std(&fractions);
        checkpoints.push(CheckpointAggregate {
            t,
            mean_regret,
            std_regret,
            mean_fraction,
            std_fraction,
        });
    }

    let profiles: Vec<Vec<f64>> = runs.iter().filter_map(fairness_profile).collect();
    let fairness = if profiles.is_empty() {
        Vec::new()
    } else {
        let k = profiles[0].len();
        (0..k)
            .map(|i| profiles.iter().map(|p| p[i]).sum::<f64>() / profiles.len() as f64)
            .collect()
    };

    PolicyResult { spec, runs, checkpoints, fairness }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
