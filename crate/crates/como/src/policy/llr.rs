//! Combinatorial scalar-index baseline.
//!
//! Keeps arm-level semi-bandit statistics exactly like the front-sampling
//! policy (same initialization: step `t ≤ N` plays a uniform random action
//! containing arm `t`), but collapses selection to the first objective: each
//! arm gets the scalar index `μ̂_i^{(1)} + √(scale·(L+1)·ln t / m_i)` and the
//! action maximizing the weighted index sum is played, lowest action index
//! on ties. All `D` coordinates are tracked in the statistics; only
//! objective 1 ever drives selection, which is what makes this baseline
//! collapse onto a single corner of the front.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use super::{argmax_lowest, check_feedback, uniform_pick, ArmStats, Policy};
use crate::error::Result;
use crate::{ActionSet64, Reward64};

/// Default squared-bonus multiplier, calibrated on the bundled
/// communications study; 1 recovers the canonical constant.
pub const DEFAULT_EXPLORATION_SCALE: f64 = 0.167;

pub struct Llr {
    actions: Arc<ActionSet64>,
    stats: ArmStats,
    rng: ChaCha8Rng,
    scale: f64,
}

impl Llr {
    pub fn new(actions: Arc<ActionSet64>, rng: ChaCha8Rng, exploration_scale: f64) -> Self {
        let stats = ArmStats::new(actions.n_arms(), actions.dimension())
            .expect("action set guarantees positive dimension");
        Self { actions, stats, rng, scale: exploration_scale }
    }
}

impl Policy for Llr {
    fn id(&self) -> &'static str {
        "llr"
    }

    fn select(&mut self, t: u64) -> Result<usize> {
        let n = self.actions.n_arms() as u64;
        if t <= n {
            let arm = (t - 1) as usize;
            let candidates = self.actions.actions_containing(arm);
            return Ok(uniform_pick(&mut self.rng, candidates));
        }
        let l = self.actions.max_support_size() as f64;
        let log_t = (t as f64).ln();
        let index: Vec<f64> = (0..self.actions.n_arms())
            .map(|arm| {
                let m = self.stats.count(arm) as f64;
                self.stats.mean(arm).values()[0] + (self.scale * (l + 1.0) * log_t / m).sqrt()
            })
            .collect();
        let scores: Vec<f64> = self
            .actions
            .actions()
            .iter()
            .map(|a| a.weights().iter().map(|&(arm, w)| w * index[arm]).sum())
            .collect();
        Ok(argmax_lowest(&scores))
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
