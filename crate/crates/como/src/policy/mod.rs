//! Bandit policies behind one sequential contract.
//!
//! A policy interacts with an environment through two calls per step `t`
//! (1-based): [`Policy::select`] returns the index of the action to play,
//! then [`Policy::update`] receives the per-arm reward vectors observed for
//! the played action's support, in ascending arm order (semi-bandit
//! feedback). Policies see only the [`ActionSet64`] and the feedback stream;
//! true means, gaps, and front membership stay on the evaluation side.
//!
//! Randomized selections draw from a generator owned by the policy instance,
//! so a policy's action stream is a pure function of `(seed, observations)`
//! and adding or removing other policies cannot perturb it.

mod como_ucb;
mod llr;
mod pareto_ucb1;
mod so_ucb1;

pub use como_ucb::{confidence_radius, ComoUcb};
pub use llr::Llr;
pub use pareto_ucb1::ParetoUcb1;
pub use so_ucb1::SoUcb1;

/// Per-policy default `exploration_scale` values (squared-radius
/// multipliers). A scale of 1 gives each policy's canonical index constant;
/// the defaults are calibrated so the bundled communications study
/// concentrates within its horizon. See the policy modules for the indexed
/// forms.
pub mod default_scale {
    pub const COMO_UCB: f64 = super::como_ucb::DEFAULT_EXPLORATION_SCALE;
    pub const PARETO_UCB1: f64 = super::pareto_ucb1::DEFAULT_EXPLORATION_SCALE;
    pub const LLR: f64 = super::llr::DEFAULT_EXPLORATION_SCALE;
    pub const SO_UCB1: f64 = super::so_ucb1::DEFAULT_EXPLORATION_SCALE;
}

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::action::Action;
use crate::error::{Error, Result};
use crate::reward::RewardVector;
use crate::{ActionSet64, Reward64};

/// Sequential decision policy over a fixed action set.
///
/// Step indices are 1-based. The driver must call `select(t)` then
/// `update(t, chosen, observations)` with strictly increasing `t`.
pub trait Policy: Send {
    /// Configuration identifier (`como_ucb`, `pareto_ucb1`, `llr`, `so_ucb1`).
    fn id(&self) -> &'static str;

    /// Choose the action to play at step `t`.
    fn select(&mut self, t: u64) -> Result<usize>;

    /// Incorporate the feedback for step `t`: one reward vector per arm in
    /// the played action's support, in ascending arm order.
    fn update(&mut self, t: u64, action: usize, observations: &[Reward64]) -> Result<()>;
}

/// Buildable description of a policy, as named in experiment configs.
///
/// Every variant carries an `exploration_scale` multiplying its squared
/// confidence radius; the [`default_scale`] constants are used by the
/// convenience constructors and by configs that omit the key.
#[derive(Clone, Debug, PartialEq)]
pub enum PolicySpec {
    ComoUcb { exploration_scale: f64 },
    /// `k_star` is the front size the index formula takes as input.
    ParetoUcb1 { k_star: usize, exploration_scale: f64 },
    Llr { exploration_scale: f64 },
    SoUcb1 { exploration_scale: f64 },
}

impl PolicySpec {
    pub fn como_ucb() -> Self {
        PolicySpec::ComoUcb { exploration_scale: default_scale::COMO_UCB }
    }

    pub fn pareto_ucb1(k_star: usize) -> Self {
        PolicySpec::ParetoUcb1 { k_star, exploration_scale: default_scale::PARETO_UCB1 }
    }

    pub fn llr() -> Self {
        PolicySpec::Llr { exploration_scale: default_scale::LLR }
    }

    pub fn so_ucb1() -> Self {
        PolicySpec::SoUcb1 { exploration_scale: default_scale::SO_UCB1 }
    }

    pub fn id(&self) -> &'static str {
        match self {
            PolicySpec::ComoUcb { .. } => "como_ucb",
            PolicySpec::ParetoUcb1 { .. } => "pareto_ucb1",
            PolicySpec::Llr { .. } => "llr",
            PolicySpec::SoUcb1 { .. } => "so_ucb1",
        }
    }

    pub fn exploration_scale(&self) -> f64 {
        match *self {
            PolicySpec::ComoUcb { exploration_scale }
            | PolicySpec::ParetoUcb1 { exploration_scale, .. }
            | PolicySpec::Llr { exploration_scale }
            | PolicySpec::SoUcb1 { exploration_scale } => exploration_scale,
        }
    }

    /// `rng` is the policy's private stream; deterministic policies simply
    /// never draw from it.
    pub fn build(&self, actions: Arc<ActionSet64>, rng: ChaCha8Rng) -> Result<Box<dyn Policy>> {
        let scale = self.exploration_scale();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Config(format!(
                "exploration_scale must be a positive finite number, got {scale}"
            )));
        }
        Ok(match *self {
            PolicySpec::ComoUcb { .. } => Box::new(ComoUcb::new(actions, rng, scale)),
            PolicySpec::ParetoUcb1 { k_star, .. } => {
                Box::new(ParetoUcb1::new(actions, k_star, rng, scale)?)
            }
            PolicySpec::Llr { .. } => Box::new(Llr::new(actions, rng, scale)),
            PolicySpec::SoUcb1 { .. } => Box::new(SoUcb1::new(actions, scale)),
        })
    }
}

/// Per-arm running statistics: sample-mean vectors and selection counters.
#[derive(Clone, Debug)]
pub struct ArmStats {
    mu_hat: Vec<Reward64>,
    m: Vec<u64>,
}

impl ArmStats {
    pub fn new(n_arms: usize, dimension: usize) -> Result<Self> {
        let zero = RewardVector::zeros(dimension)?;
        Ok(Self {
            mu_hat: vec![zero; n_arms],
            m: vec![0; n_arms],
        })
    }

    pub fn mean(&self, arm: usize) -> &Reward64 {
        &self.mu_hat[arm]
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.m[arm]
    }

    pub fn min_count(&self) -> u64 {
        self.m.iter().copied().min().unwrap_or(0)
    }

    /// Running-mean update: `μ̂ ← (μ̂·m + x)/(m+1)`, `m ← m+1`.
    pub fn record(&mut self, arm: usize, observation: &Reward64) -> Result<()> {
        let m = self.m[arm] as f64;
        let mean = &mut self.mu_hat[arm];
        if mean.dim() != observation.dim() {
            return Err(Error::DimensionMismatch {
                left: mean.dim(),
                right: observation.dim(),
            });
        }
        for (mu, &x) in mean.values_mut().iter_mut().zip(observation.values()) {
            *mu = (*mu * m + x) / (m + 1.0);
        }
        self.m[arm] += 1;
        Ok(())
    }
}

/// Per-action running statistics for policies that treat each action as a
/// standalone arm.
#[derive(Clone, Debug)]
pub struct ActionStats {
    mean: Vec<Reward64>,
    n: Vec<u64>,
}

impl ActionStats {
    pub fn new(n_actions: usize, dimension: usize) -> Result<Self> {
        let zero = RewardVector::zeros(dimension)?;
        Ok(Self {
            mean: vec![zero; n_actions],
            n: vec![0; n_actions],
        })
    }

    pub fn mean(&self, action: usize) -> &Reward64 {
        &self.mean[action]
    }

    pub fn count(&self, action: usize) -> u64 {
        self.n[action]
    }

    pub fn min_count(&self) -> u64 {
        self.n.iter().copied().min().unwrap_or(0)
    }

    pub fn record(&mut self, action: usize, observation: &Reward64) -> Result<()> {
        let n = self.n[action] as f64;
        let mean = &mut self.mean[action];
        if mean.dim() != observation.dim() {
            return Err(Error::DimensionMismatch {
                left: mean.dim(),
                right: observation.dim(),
            });
        }
        for (mu, &x) in mean.values_mut().iter_mut().zip(observation.values()) {
            *mu = (*mu * n + x) / (n + 1.0);
        }
        self.n[action] += 1;
        Ok(())
    }
}

/// Validate a semi-bandit feedback batch against the played action.
pub(crate) fn check_feedback(
    actions: &ActionSet64,
    action: usize,
    observations: &[Reward64],
) -> Result<()> {
    if action >= actions.len() {
        return Err(Error::Feedback(format!(
            "action index {action} out of range ({} actions)",
            actions.len()
        )));
    }
    let support = actions.action(action).support_size();
    if observations.len() != support {
        return Err(Error::Feedback(format!(
            "expected {support} observations for action {action}, got {}",
            observations.len()
        )));
    }
    for obs in observations {
        if obs.dim() != actions.dimension() {
            return Err(Error::Feedback(format!(
                "observation dimension {} does not match environment dimension {}",
                obs.dim(),
                actions.dimension()
            )));
        }
    }
    Ok(())
}

/// Weighted action-level observation `Σ_i a_i·X_i` from per-arm feedback
/// given in support order.
pub(crate) fn action_observation(action: &Action<f64>, observations: &[Reward64]) -> Reward64 {
    let dim = observations[0].dim();
    let mut values = vec![0.0f64; dim];
    for ((_, w), obs) in action.weights().iter().zip(observations) {
        for (v, &x) in values.iter_mut().zip(obs.values()) {
            *v += w * x;
        }
    }
    RewardVector::new(values).expect("weighted sum of finite observations")
}

/// Uniform draw from a nonempty candidate list.
pub(crate) fn uniform_pick(rng: &mut ChaCha8Rng, candidates: &[usize]) -> usize {
    candidates[rng.random_range(0..candidates.len())]
}

/// Index of the maximal scalar, lowest index on ties.
pub(crate) fn argmax_lowest(scores: &[f64]) -> usize {
    let mut best = 0;
    for (idx, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = idx;
        }
    }
    best
}
