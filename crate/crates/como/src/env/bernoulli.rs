//! Synthetic environment with independent Bernoulli coordinates.
//!
//! Used by tests and by randomly generated instances: each arm's reward
//! coordinates are independent Bernoulli draws with the given means, so the
//! true means are exact by construction and every observation lies in
//! `{0,1}^D ⊂ [0,1]^D`.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Environment;
use crate::error::{Error, Result};
use crate::reward::RewardVector;
use crate::{ActionSet64, Reward64};

pub struct BernoulliEnv {
    actions: Arc<ActionSet64>,
    arm_means: Vec<Reward64>,
}

impl BernoulliEnv {
    pub fn new(actions: Arc<ActionSet64>, arm_means: Vec<Reward64>) -> Result<Self> {
        if arm_means.len() != actions.n_arms() {
            return Err(Error::Config(format!(
                "need one mean per arm ({} arms, got {})",
                actions.n_arms(),
                arm_means.len()
            )));
        }
        for mean in &arm_means {
            if mean.dim() != actions.dimension() {
                return Err(Error::DimensionMismatch {
                    left: actions.dimension(),
                    right: mean.dim(),
                });
            }
            if mean.values().iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::Config(
                    "Bernoulli means must lie in [0,1]".into(),
                ));
            }
        }
        Ok(Self { actions, arm_means })
    }
}

impl Environment for BernoulliEnv {
    fn action_set(&self) -> &Arc<ActionSet64> {
        &self.actions
    }

    fn true_arm_means(&self) -> &[Reward64] {
        &self.arm_means
    }

    fn sample_support(&self, arms: &[usize], rng: &mut ChaCha8Rng) -> Vec<Reward64> {
        arms.iter()
            .map(|&arm| {
                let values = self.arm_means[arm]
                    .values()
                    .iter()
                    .map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
                    .collect();
                RewardVector::new(values).expect("binary sample")
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{Action, ActionSet};
    use rand::SeedableRng;

    fn make_env() -> BernoulliEnv {
        let actions = vec![
            Action::unit(&[0]).unwrap(),
            Action::unit(&[1]).unwrap(),
            Action::unit(&[0, 1]).unwrap(),
        ];
        let actions = Arc::new(ActionSet::new(actions, 2, 2).unwrap());
        let means = vec![
            RewardVector::new(vec![0.9, 0.1]).unwrap(),
            RewardVector::new(vec![0.3, 0.7]).unwrap(),
        ];
        BernoulliEnv::new(actions, means).unwrap()
    }

    #[test]
    fn rejects_out_of_range_means() {
        let actions = Arc::new(ActionSet::new(vec![Action::unit(&[0]).unwrap()], 1, 1).unwrap());
        let means = vec![RewardVector::new(vec![1.5]).unwrap()];
        assert!(BernoulliEnv::new(actions, means).is_err());
    }

    #[test]
    fn samples_are_binary_with_matching_means() {
        let env = make_env();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut sum = [[0.0f64; 2]; 2];
        for _ in 0..n {
            for (pos, obs) in env.sample_support(&[0, 1], &mut rng).iter().enumerate() {
                for (j, &v) in obs.values().iter().enumerate() {
                    assert!(v == 0.0 || v == 1.0);
                    sum[pos][j] += v;
                }
            }
        }
        let tol = 4.0 * 0.5 / (n as f64).sqrt();
        for arm in 0..2 {
            for j in 0..2 {
                let target = env.true_arm_means()[arm].values()[j];
                assert!((sum[arm][j] / n as f64 - target).abs() <= tol);
            }
        }
    }

    #[test]
    fn action_means_are_weighted_sums() {
        let env = make_env();
        let means = env.true_action_means().unwrap();
        for (got, want) in means[2].values().iter().zip([1.2, 0.8]) {
            assert!((got - want).abs() < 1e-15);
        }
    }
}
