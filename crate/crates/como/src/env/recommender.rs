//! Slate recommendation with a mixture-of-profiles user population.
//!
//! `N` items are the arms; an action recommends a slate of `K` distinct
//! items to `M` freshly drawn users per step. Each user independently draws
//! a hidden profile (type) from a finite mixture and then likes each
//! recommended item independently with the profile's per-item probability.
//!
//! Per played item, the first reward coordinate is the fraction of users who
//! liked it. The second measures how differently the users responded,
//! in one of two modes:
//!
//! * `cosine` — the slate-level quantity `Σ_{j≠l} c_{j,l}/(M(M−1))` over
//!   user pairs, where `c_{j,l}` is one minus the cosine similarity of the
//!   two users' like-vectors restricted to the slate and a zero-norm
//!   like-vector contributes `c = 1`. Every item in the slate receives the
//!   same value, and its distribution depends on the co-recommended items,
//!   so the *per-action* means are exact while a per-arm second-coordinate
//!   mean is only defined relative to a slate; see [`RecEnv::true_arm_means`].
//! * `variance` — the per-item population variance of the `M` binary
//!   ratings, which lies in `[0, 1/4]`, rescaled by 4. This is a genuine
//!   per-arm quantity with a closed-form mean.

use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::Environment;
use crate::action::{Action, ActionSet};
use crate::error::{Error, Result};
use crate::reward::RewardVector;
use crate::{ActionSet64, Reward64};

const MAX_ACTIONS: usize = 50_000;
/// Work ceiling for the exact cosine-mean summation (`|A|·T·2^K·K`).
const MAX_COSINE_WORK: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiversityMode {
    Cosine,
    Variance,
}

/// Parameters of the recommendation environment.
#[derive(Clone, Debug, PartialEq)]
pub struct RecConfig {
    /// Catalog size `N ≥ 1` (the arms).
    pub items: usize,
    /// Slate size `K`, `1 ≤ K ≤ N`.
    pub slate_size: usize,
    /// Users drawn per step, `M ≥ 2`.
    pub users_per_step: usize,
    /// Mixture weights over profiles; nonnegative, summing to 1.
    pub type_probs: Vec<f64>,
    /// `like_probs[profile][item]`: per-profile like probabilities in [0,1].
    pub like_probs: Vec<Vec<f64>>,
    pub diversity: DiversityMode,
}

pub struct RecEnv {
    cfg: RecConfig,
    actions: Arc<ActionSet64>,
    type_dist: WeightedIndex<f64>,
    arm_means: Vec<Reward64>,
    action_means: Vec<Reward64>,
    /// Marginal like probability per item, mixed over profiles.
    like_marginal: Vec<f64>,
}

impl RecEnv {
    pub fn build(cfg: RecConfig) -> Result<Self> {
        validate(&cfg)?;
        let slates = k_subsets(cfg.items, cfg.slate_size)?;
        let actions: Vec<Action<f64>> = slates
            .iter()
            .map(|s| Action::unit(s))
            .collect::<Result<_>>()?;
        let actions = Arc::new(ActionSet::new(actions, cfg.items, 2)?);

        let like_marginal: Vec<f64> = (0..cfg.items)
            .map(|i| {
                cfg.type_probs
                    .iter()
                    .zip(&cfg.like_probs)
                    .map(|(&p, q)| p * q[i])
                    .sum()
            })
            .collect();

        let (arm_means, action_means) = match cfg.diversity {
            DiversityMode::Variance => {
                let m = cfg.users_per_step as f64;
                let arm_means: Vec<Reward64> = like_marginal
                    .iter()
                    .map(|&r| {
                        RewardVector::new(vec![r, 4.0 * (m - 1.0) / m * r * (1.0 - r)])
                    })
                    .collect::<Result<_>>()?;
                let action_means = actions.action_means(&arm_means)?;
                (arm_means, action_means)
            }
            DiversityMode::Cosine => {
                let per_slate: Vec<f64> = slates
                    .iter()
                    .map(|s| expected_pair_diversity(&cfg, s))
                    .collect();
                let k = cfg.slate_size as f64;
                let action_means: Vec<Reward64> = slates
                    .iter()
                    .zip(&per_slate)
                    .map(|(s, &div)| {
                        let likes: f64 = s.iter().map(|&i| like_marginal[i]).sum();
                        RewardVector::new(vec![likes, k * div])
                    })
                    .collect::<Result<_>>()?;
                // Per-arm second coordinate: the expected diversity marginalized
                // over a uniformly chosen slate containing the item.
                let mut acc = vec![(0.0f64, 0u64); cfg.items];
                for (s, &div) in slates.iter().zip(&per_slate) {
                    for &i in s {
                        acc[i].0 += div;
                        acc[i].1 += 1;
                    }
                }
                let arm_means: Vec<Reward64> = like_marginal
                    .iter()
                    .zip(&acc)
                    .map(|(&r, &(sum, n))| RewardVector::new(vec![r, sum / n as f64]))
                    .collect::<Result<_>>()?;
                (arm_means, action_means)
            }
        };

        let type_dist = WeightedIndex::new(&cfg.type_probs)
            .map_err(|e| Error::Config(format!("invalid type_probs: {e}")))?;
        Ok(Self {
            cfg,
            actions,
            type_dist,
            arm_means,
            action_means,
            like_marginal,
        })
    }

    pub fn config(&self) -> &RecConfig {
        &self.cfg
    }

    /// Marginal like probability per item (first-coordinate arm means).
    pub fn like_marginal(&self) -> &[f64] {
        &self.like_marginal
    }
}

fn validate(cfg: &RecConfig) -> Result<()> {
    if cfg.items == 0 {
        return Err(Error::Config("recommender needs at least one item".into()));
    }
    if cfg.slate_size == 0 || cfg.slate_size > cfg.items {
        return Err(Error::Config(format!(
            "slate_size must satisfy 1 ≤ k ≤ items (got k = {}, items = {})",
            cfg.slate_size, cfg.items
        )));
    }
    if cfg.users_per_step < 2 {
        return Err(Error::Config(
            "users_per_step must be ≥ 2 (pair diversity needs two users)".into(),
        ));
    }
    if cfg.type_probs.is_empty() {
        return Err(Error::Config("type_probs must be nonempty".into()));
    }
    if cfg.type_probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::Config("type_probs entries must be ≥ 0".into()));
    }
    let total: f64 = cfg.type_probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("type_probs must sum to 1 (got {total})")));
    }
    if cfg.like_probs.len() != cfg.type_probs.len() {
        return Err(Error::Config(format!(
            "like_probs needs one row per profile ({} rows, got {})",
            cfg.type_probs.len(),
            cfg.like_probs.len()
        )));
    }
    for row in &cfg.like_probs {
        if row.len() != cfg.items {
            return Err(Error::Config(format!(
                "like_probs rows need one entry per item ({} items, got {})",
                cfg.items,
                row.len()
            )));
        }
        if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::Config("like_probs entries must lie in [0,1]".into()));
        }
    }
    if cfg.diversity == DiversityMode::Cosine {
        let count = binomial(cfg.items, cfg.slate_size);
        let work = count
            * cfg.type_probs.len() as f64
            * (1u64 << cfg.slate_size.min(60)) as f64
            * cfg.slate_size as f64;
        if cfg.slate_size > 20 || work > MAX_COSINE_WORK {
            return Err(Error::Config(format!(
                "cosine diversity means are computed by exact enumeration, which is \
                 infeasible for this size (k = {}); use the variance mode",
                cfg.slate_size
            )));
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut out = 1.0f64;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as f64 / (i + 1) as f64;
    }
    out
}

/// All K-subsets of `0..n` in lexicographic order.
fn k_subsets(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if binomial(n, k) > MAX_ACTIONS as f64 {
        return Err(Error::Config(format!(
            "recommender action set exceeds {MAX_ACTIONS} actions"
        )));
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance to the next combination.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if current[pos] < n - (k - pos) {
                current[pos] += 1;
                for later in pos + 1..k {
                    current[later] = current[later - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact expected pairwise diversity `E[c]` for one slate.
///
/// For independent users the cosine similarity splits across coordinates:
/// `cos(u,v) = Σ_j (u_j/‖u‖)(v_j/‖v‖)`, so with `α_j = E[u_j/‖u‖]` per
/// profile (zero-norm masks contributing 0, matching the `c = 1` convention)
/// the expectation is `E[c] = 1 − Σ_{a,b} π_a π_b ⟨α^a, α^b⟩`.
fn expected_pair_diversity(cfg: &RecConfig, slate: &[usize]) -> f64 {
    let k = slate.len();
    let alphas: Vec<Vec<f64>> = cfg
        .like_probs
        .iter()
        .map(|q| {
            let probs: Vec<f64> = slate.iter().map(|&i| q[i]).collect();
            let mut alpha = vec![0.0f64; k];
            for mask in 0u64..(1u64 << k) {
                let popcount = mask.count_ones();
                if popcount == 0 {
                    continue;
                }
                let mut p = 1.0;
                for (j, &q_j) in probs.iter().enumerate() {
                    p *= if mask >> j & 1 == 1 { q_j } else { 1.0 - q_j };
                }
                let inv_norm = 1.0 / (popcount as f64).sqrt();
                for (j, a) in alpha.iter_mut().enumerate() {
                    if mask >> j & 1 == 1 {
                        *a += p * inv_norm;
                    }
                }
            }
            alpha
        })
        .collect();

    let mut cos = 0.0;
    for (a, &pa) in alphas.iter().zip(&cfg.type_probs) {
        for (b, &pb) in alphas.iter().zip(&cfg.type_probs) {
            let dot: f64 = a.iter().zip(b).map(|(&x, &y)| x * y).sum();
            cos += pa * pb * dot;
        }
    }
    // The expectation of a [0,1] quantity; clamp away summation residue.
    (1.0 - cos).clamp(0.0, 1.0)
}

impl Environment for RecEnv {
    fn action_set(&self) -> &Arc<ActionSet64> {
        &self.actions
    }

    /// Per-arm means. The first coordinate (like fraction) is exact in both
    /// modes; in the cosine mode the second coordinate is the slate-marginal
    /// described in the module docs and per-arm convergence holds only
    /// conditionally on a slate.
    fn true_arm_means(&self) -> &[Reward64] {
        &self.arm_means
    }

    fn sample_support(&self, arms: &[usize], rng: &mut ChaCha8Rng) -> Vec<Reward64> {
        let k = arms.len();
        let m = self.cfg.users_per_step;
        // Like masks per user over the slate positions.
        let masks: Vec<u64> = (0..m)
            .map(|_| {
                let profile = self.type_dist.sample(rng);
                let mut mask = 0u64;
                for (pos, &item) in arms.iter().enumerate() {
                    if rng.random::<f64>() < self.cfg.like_probs[profile][item] {
                        mask |= 1 << pos;
                    }
                }
                mask
            })
            .collect();

        let like_fraction: Vec<f64> = (0..k)
            .map(|pos| {
                masks.iter().filter(|&&u| u >> pos & 1 == 1).count() as f64 / m as f64
            })
            .collect();

        match self.cfg.diversity {
            DiversityMode::Cosine => {
                let mut total = 0.0;
                for i in 0..m {
                    for j in i + 1..m {
                        total += 2.0 * pair_diversity(masks[i], masks[j]);
                    }
                }
                let diversity = total / (m as f64 * (m as f64 - 1.0));
                like_fraction
                    .into_iter()
                    .map(|f| RewardVector::new(vec![f, diversity]).expect("finite sample"))
                    .collect()
            }
            DiversityMode::Variance => like_fraction
                .into_iter()
                .map(|f| {
                    RewardVector::new(vec![f, 4.0 * f * (1.0 - f)]).expect("finite sample")
                })
                .collect(),
        }
    }

    fn true_action_means(&self) -> Result<Vec<Reward64>> {
        Ok(self.action_means.clone())
    }
}

/// `1 − cos(u, v)` of two like-masks; zero-norm masks give 1.
fn pair_diversity(u: u64, v: u64) -> f64 {
    let nu = u.count_ones() as u64;
    let nv = v.count_ones() as u64;
    if nu == 0 || nv == 0 {
        return 1.0;
    }
    let dot = (u & v).count_ones() as f64;
    1.0 - dot / ((nu * nv) as f64).sqrt()
}
