//! Action-level optimistic front sampling.
//!
//! Treats every action as a standalone arm: only the played action's
//! statistics are updated, from the weighted sum of its arms' observed
//! vectors. The first `|A|` steps play each action once in index order;
//! afterwards each action's sample-mean vector is inflated by
//! `√(scale·2·ln(t·(D·K*)^{1/4})/n_a)` in every coordinate, where `K*` is
//! the externally supplied front size, and a uniform random member of the
//! non-super-dominated set of index vectors is played.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use super::{action_observation, check_feedback, uniform_pick, ActionStats, Policy};
use crate::error::{Error, Result};
use crate::pareto::compute_spf;
use crate::{ActionSet64, Reward64};

/// Default squared-bonus multiplier, calibrated on the bundled
/// communications study; 1 recovers the canonical constant.
pub const DEFAULT_EXPLORATION_SCALE: f64 = 0.1;

pub struct ParetoUcb1 {
    actions: Arc<ActionSet64>,
    stats: ActionStats,
    k_star: usize,
    rng: ChaCha8Rng,
    scale: f64,
}

impl ParetoUcb1 {
    /// `k_star` is the front size fed to the exploration term; it must be
    /// positive (the caller supplies the true front size when known).
    pub fn new(
        actions: Arc<ActionSet64>,
        k_star: usize,
        rng: ChaCha8Rng,
        exploration_scale: f64,
    ) -> Result<Self> {
        if k_star == 0 {
            return Err(Error::Config("pareto_ucb1 requires k_star ≥ 1".into()));
        }
        let stats = ActionStats::new(actions.len(), actions.dimension())
            .expect("action set guarantees positive dimension");
        Ok(Self { actions, stats, k_star, rng, scale: exploration_scale })
    }

    fn bonus(&self, t: u64, n: u64) -> f64 {
        let d = self.actions.dimension() as f64;
        let log_term = (t as f64).ln() + 0.25 * (d * self.k_star as f64).ln();
        (self.scale * 2.0 * log_term / n as f64).sqrt()
    }
}

impl Policy for ParetoUcb1 {
    fn id(&self) -> &'static str {
        "pareto_ucb1"
    }

    fn select(&mut self, t: u64) -> Result<usize> {
        let n_actions = self.actions.len() as u64;
        if t <= n_actions {
            return Ok((t - 1) as usize);
        }
        let indices: Vec<Reward64> = (0..self.actions.len())
            .map(|a| {
                let n = self.stats.count(a);
                self.stats.mean(a).shift(self.bonus(t, n))
            })
            .collect();
        let front = compute_spf(&indices)?;
        Ok(uniform_pick(&mut self.rng, &front))
    }

    fn update(&mut self, _t: u64, action: usize, observations: &[Reward64]) -> Result<()> {
        check_feedback(&self.actions, action, observations)?;
        let aggregate = action_observation(self.actions.action(action), observations);
        self.stats.record(action, &aggregate)
    }
}
