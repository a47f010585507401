//! Stochastic environments: arm sampling plus exact mean oracles.
//!
//! An environment owns the problem definition — the action set and the
//! per-arm reward distributions — and exposes two strictly separated faces:
//!
//! * `sample_support` draws the reward vectors of the played arms for one
//!   step, using a generator owned by the calling run;
//! * `true_arm_means` / `true_action_means` are closed-form oracles used for
//!   regret accounting only and never shown to policies.
//!
//! Construction is pure and instances are immutable, so one environment is
//! shared read-only across concurrent replications; all randomness flows
//! through the caller-supplied generator.

mod bernoulli;
mod comm;
mod recommender;
mod routing;

pub use bernoulli::BernoulliEnv;
pub use comm::{outage_probability, CommConfig, CommEnv, RateSchedule};
pub use recommender::{DiversityMode, RecConfig, RecEnv};
pub use routing::{parse_edge_list, DiscreteDist, EdgeSpec, RoutingConfig, RoutingEnv};

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::{ActionSet64, Reward64};

/// A stochastic bandit problem instance.
pub trait Environment: Send + Sync {
    /// The finite action set the learner chooses from.
    fn action_set(&self) -> &Arc<ActionSet64>;

    /// Exact per-arm mean reward vectors (oracle access; regret accounting
    /// only, never given to policies).
    fn true_arm_means(&self) -> &[Reward64];

    /// Draws this step's reward vectors for the given arms (the support of
    /// the played action), in the same order as `arms`.
    fn sample_support(&self, arms: &[usize], rng: &mut ChaCha8Rng) -> Vec<Reward64>;

    /// Exact per-action mean reward vectors.
    ///
    /// Defaults to the weighted sum of arm means, which is exact whenever
    /// each arm's marginal distribution does not depend on the action played
    /// alongside it. Environments where that fails (the recommender's cosine
    /// diversity) override this with the exact slate-level expectation.
    fn true_action_means(&self) -> Result<Vec<Reward64>> {
        self.action_set().action_means(self.true_arm_means())
    }
}

/// Buildable description of an environment, as found in experiment configs.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvConfig {
    Comm(CommConfig),
    Recommender(RecConfig),
    Routing(RoutingConfig),
}

impl EnvConfig {
    /// The `kind` token used in config files.
    pub fn kind(&self) -> &'static str {
        match self {
            EnvConfig::Comm(_) => "comm",
            EnvConfig::Recommender(_) => "recommender",
            EnvConfig::Routing(_) => "routing",
        }
    }

    pub fn build(&self) -> Result<Arc<dyn Environment>> {
        match self {
            EnvConfig::Comm(cfg) => Ok(Arc::new(CommEnv::build(cfg.clone())?)),
            EnvConfig::Recommender(cfg) => Ok(Arc::new(RecEnv::build(cfg.clone())?)),
            EnvConfig::Routing(cfg) => Ok(Arc::new(RoutingEnv::build(cfg.clone())?)),
        }
    }
}
