//! Combinatorial multi-objective bandit simulation library.
//!
//! The setting: `N` arms each yield a `D`-dimensional reward vector in
//! `[0,1]^D` when played; an *action* plays a weighted subset of arms jointly
//! and collects the weighted sum of their vectors, observing each played
//! arm's vector individually (semi-bandit feedback). With vector rewards
//! there is no single best action; optimality is captured by the
//! *super-Pareto front* (SPF), the actions not strictly beaten in every
//! objective, and performance by *Pareto regret*: the accumulated
//! suboptimality gap of the actions played.
//!
//! The crate provides:
//!
//! * [`reward`], [`action`]: reward vectors, dominance relations, actions and
//!   action sets — generic over the scalar type via [`scalar::Scalar`];
//! * [`pareto`]: SPF/Pareto-front computation, suboptimality gaps (closed
//!   form and a bisection oracle), regret accounting, and the expected-regret
//!   bound evaluator;
//! * [`policy`]: the optimistic SPF-sampling policy `como_ucb` and the three
//!   baselines `pareto_ucb1`, `llr`, `so_ucb1` behind one contract;
//! * [`env`]: three stochastic environments — multi-user channel/rate
//!   allocation, slate recommendation, and source-to-destination routing —
//!   plus a synthetic Bernoulli environment for testing;
//! * [`sim`]: seeded, replicated experiment execution with regret, SPF-hit,
//!   and fairness metrics;
//! * [`config`], [`report`]: the experiment file format and CSV/summary
//!   output used by the `como` binary.
//!
//! Everything downstream of a seed is deterministic: replications derive
//! their generators from `(master seed, run index, policy id)`, so results
//! are byte-identical regardless of worker count or execution order.

#![forbid(unsafe_code)]

pub mod action;
pub mod config;
pub mod env;
pub mod error;
pub mod math;
pub mod pareto;
pub mod policy;
pub mod report;
pub mod reward;
pub mod scalar;
pub mod sim;

pub use error::{Error, Result};

/// Double-precision reward vector used by the environments and policies.
pub type Reward64 = reward::RewardVector<f64>;
/// Double-precision action.
pub type Action64 = action::Action<f64>;
/// Double-precision action set.
pub type ActionSet64 = action::ActionSet<f64>;
/// Double-precision gap statistics.
pub type GapStats64 = pareto::GapStats<f64>;
