//! Optimistic front-sampling policy over arm-level statistics.
//!
//! The policy keeps per-arm sample means and counters. The first `N` steps
//! initialize: step `t ≤ N` plays a uniformly random action whose support
//! contains arm `t` (1-based), guaranteeing every arm at least one
//! observation. Afterwards each step inflates every arm mean by a scalar
//! confidence radius, forms per-action index vectors as the action-weighted
//! sums of inflated arm vectors, computes the set of index vectors not
//! super-dominated by any other, and plays a uniform random member of it.
//! The randomization spreads play across the whole estimated front instead
//! of collapsing onto one optimal action, which is what produces balanced
//! selection among tied optima.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use super::{check_feedback, uniform_pick, ArmStats, Policy};
use crate::error::Result;
use crate::pareto::compute_spf;
use crate::{ActionSet64, Reward64};

/// Default squared-radius multiplier, calibrated on the bundled
/// communications study so that front identification concentrates within
/// the study's horizon. A multiplier of 1 recovers the canonical radius
/// from the regret analysis, which explores far more than a moderate
/// horizon can amortize.
pub const DEFAULT_EXPLORATION_SCALE: f64 = 0.065;

/// Arm confidence radius at step `t` (1-based): with `L` the largest action
/// support size and `D` the reward dimension,
/// `C = √(scale·(L+1)·max(0, ln((t−1)·D^{1/4})) / m)`.
///
/// `m` is the arm's counter as of the end of step `t−1`. The logarithm is
/// clamped at zero: for `(t−1)·D^{1/4} < 1` the radius is undefined and a
/// zero radius is the conservative choice (affects at most the first
/// post-initialization step of degenerate configurations). `scale`
/// multiplies the squared radius; see [`DEFAULT_EXPLORATION_SCALE`].
///
/// # Panics
/// If `m = 0` or `t < 2`; initialization guarantees both before first use.
pub fn confidence_radius(scale: f64, t: u64, m: u64, max_support: usize, dimension: usize) -> f64 {
    assert!(m >= 1, "confidence radius needs m ≥ 1 (got {m})");
    assert!(t >= 2, "confidence radius needs t ≥ 2 (got {t})");
    let log_term = ((t - 1) as f64).ln() + 0.25 * (dimension as f64).ln();
    (scale * (max_support as f64 + 1.0) * log_term.max(0.0) / m as f64).sqrt()
}

pub struct ComoUcb {
    actions: Arc<ActionSet64>,
    stats: ArmStats,
    rng: ChaCha8Rng,
    scale: f64,
}

impl ComoUcb {
    pub fn new(actions: Arc<ActionSet64>, rng: ChaCha8Rng, exploration_scale: f64) -> Self {
        let stats = ArmStats::new(actions.n_arms(), actions.dimension())
            .expect("action set guarantees positive dimension");
        Self { actions, stats, rng, scale: exploration_scale }
    }

    /// The estimated front at step `t`: indices of actions whose inflated
    /// index vectors are not super-dominated. Diagnostic view of the
    /// selection rule; never empty.
    pub fn estimated_front(&self, t: u64) -> Result<Vec<usize>> {
        let l = self.actions.max_support_size();
        let d = self.actions.dimension();
        let inflated: Vec<Reward64> = (0..self.actions.n_arms())
            .map(|arm| {
                let radius = confidence_radius(self.scale, t, self.stats.count(arm), l, d);
                self.stats.mean(arm).shift(radius)
            })
            .collect();
        let indices = self.actions.action_means(&inflated)?;
        compute_spf(&indices)
    }
}

impl Policy for ComoUcb {
    fn id(&self) -> &'static str {
        "como_ucb"
    }

    fn select(&mut self, t: u64) -> Result<usize> {
        let n = self.actions.n_arms() as u64;
        if t <= n {
            let arm = (t - 1) as usize;
            let candidates = self.actions.actions_containing(arm);
            return Ok(uniform_pick(&mut self.rng, candidates));
        }
        let front = self.estimated_front(t)?;
        Ok(uniform_pick(&mut self.rng, &front))
    }

    fn update(&mut self, _t: u64, action: usize, observations: &[Reward64]) -> Result<()> {
        check_feedback(&self.actions, action, observations)?;
        let support: Vec<usize> = self.actions.action(action).support().collect();
        for (arm, obs) in support.into_iter().zip(observations) {
            self.stats.record(arm, obs)?;
        }
        Ok(())
    }
}
