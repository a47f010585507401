//! Single-objective action-level baseline.
//!
//! Treats every action as a standalone arm and optimizes only the first
//! objective: after a one-pass initialization sweep over the actions, plays
//! the argmax of `μ̂_a^{(1)} + √(scale·2·ln t / n_a)` with lowest action index on
//! ties, and updates only the played action's statistics.

use std::sync::Arc;

use super::{action_observation, argmax_lowest, check_feedback, ActionStats, Policy};
use crate::error::Result;
use crate::{ActionSet64, Reward64};

/// Default squared-bonus multiplier, calibrated on the bundled
/// communications study; 1 recovers the canonical constant.
pub const DEFAULT_EXPLORATION_SCALE: f64 = 0.25;

pub struct SoUcb1 {
    actions: Arc<ActionSet64>,
    stats: ActionStats,
    scale: f64,
}

impl SoUcb1 {
    pub fn new(actions: Arc<ActionSet64>, exploration_scale: f64) -> Self {
        let stats = ActionStats::new(actions.len(), actions.dimension())
            .expect("action set guarantees positive dimension");
        Self { actions, stats, scale: exploration_scale }
    }
}

impl Policy for SoUcb1 {
    fn id(&self) -> &'static str {
        "so_ucb1"
    }

    fn select(&mut self, t: u64) -> Result<usize> {
        let n_actions = self.actions.len() as u64;
        if t <= n_actions {
            return Ok((t - 1) as usize);
        }
        let log_t = (t as f64).ln();
        let scores: Vec<f64> = (0..self.actions.len())
            .map(|a| {
                let n = self.stats.count(a) as f64;
                self.stats.mean(a).values()[0] + (self.scale * 2.0 * log_t / n).sqrt()
            })
            .collect();
        Ok(argmax_lowest(&scores))
    }

    fn update(&mut self, _t: u64, action: usize, observations: &[Reward64]) -> Result<()> {
        check_feedback(&self.actions, action, observations)?;
        let aggregate = action_observation(self.actions.action(action), observations);
        self.stats.record(action, &aggregate)
    }
}
