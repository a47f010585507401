//! Multi-user channel/rate allocation over fading channels.
//!
//! `M` users transmit over `Q ≥ M` orthogonal channels, each user picking a
//! channel and one of `H` transmission rates. An arm is a `(user, channel,
//! rate)` triple; an action assigns every user exactly one `(channel, rate)`
//! with no channel shared between users — an injective user-to-channel
//! matching. The channel power gain between user `i` and channel `j` is
//! exponentially distributed with parameter `λ_{i,j}`, redrawn independently
//! every step.
//!
//! A transmission at rate `R` succeeds when the instantaneous capacity
//! `ln(1 + g·SNR)` reaches `R`; the outage probability is
//! `1 − exp(−λ·(eᴿ − 1)/SNR)`. Rewards per arm are two-dimensional:
//! reliability (the success indicator, mean `1 − p_out`) and normalized
//! throughput (`success · R/R_max` for the user/channel pair's largest rate
//! `R_max`, mean `R·(1 − p_out)/R_max`). Both coordinates derive from the
//! same gain draw, so they are perfectly coupled within a step; only
//! independence across steps is required.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;

use super::Environment;
use crate::action::{Action, ActionSet};
use crate::error::{Error, Result};
use crate::math::lambert_w;
use crate::reward::RewardVector;
use crate::{ActionSet64, Reward64};

/// Guard against combinatorial blowup of the enumerated action set.
const MAX_ACTIONS: usize = 200_000;

/// How the `M×Q×H` rate table is produced.
#[derive(Clone, Debug, PartialEq)]
pub enum RateSchedule {
    /// The bundled experiment's schedule (config token `paper6`): per pair,
    /// the three rates `R/4`, `R/2`, `R` with `R = W(15·λ_{i,j})`, where `W`
    /// is the principal-branch Lambert function. Requires `H = 3`.
    ProductLog,
    /// Explicit `M×Q×H` row-major rate table; per pair, every rate must be
    /// positive and no larger than the pair's last (reference) rate.
    Explicit(Vec<f64>),
}

/// Parameters of the channel/rate allocation environment.
#[derive(Clone, Debug, PartialEq)]
pub struct CommConfig {
    /// Number of users `M ≥ 1`.
    pub users: usize,
    /// Number of channels `Q ≥ M`.
    pub channels: usize,
    /// Rates per user/channel pair, `H ≥ 1`.
    pub rates_per_pair: usize,
    /// Average signal-to-noise ratio, > 0.
    pub snr: f64,
    /// Row-major `M×Q` fading parameters, all > 0.
    pub lambda: Vec<f64>,
    pub schedule: RateSchedule,
}

/// Probability that capacity `ln(1 + g·snr)` with `g ~ Exp(lambda)` falls
/// below `rate`: `1 − exp(−lambda·(e^rate − 1)/snr)`.
pub fn outage_probability(lambda: f64, rate: f64, snr: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("fading parameter must be positive (got {lambda})")));
    }
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::Domain(format!("snr must be positive (got {snr})")));
    }
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::Domain(format!("rate must be ≥ 0 (got {rate})")));
    }
    Ok(-(-lambda * rate.exp_m1() / snr).exp_m1())
}

/// The built environment: enumerated matching actions plus closed-form means.
pub struct CommEnv {
    cfg: CommConfig,
    actions: Arc<ActionSet64>,
    /// `M×Q×H` rates, row-major.
    rates: Vec<f64>,
    /// Per-arm `rate / reference rate` (second-coordinate scale on success).
    ratio: Vec<f64>,
    /// Per-pair gain distributions, row-major `M×Q`.
    gains: Vec<Exp<f64>>,
    arm_means: Vec<Reward64>,
}

impl CommEnv {
    pub fn build(cfg: CommConfig) -> Result<Self> {
        let (m, q, h) = (cfg.users, cfg.channels, cfg.rates_per_pair);
        if m == 0 || h == 0 {
            return Err(Error::Config("comm needs m ≥ 1 and h ≥ 1".into()));
        }
        if q < m {
            return Err(Error::Config(format!(
                "comm needs at least as many channels as users (q = {q} < m = {m})"
            )));
        }
        if !(cfg.snr > 0.0) || !cfg.snr.is_finite() {
            return Err(Error::Config(format!("snr must be positive (got {})", cfg.snr)));
        }
        if cfg.lambda.len() != m * q {
            return Err(Error::Config(format!(
                "lambda needs m·q = {} entries, got {}",
                m * q,
                cfg.lambda.len()
            )));
        }
        if let Some(bad) = cfg.lambda.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(Error::Config(format!("lambda entries must be positive (got {bad})")));
        }

        let rates = rate_table(&cfg)?;
        let n_arms = m * q * h;
        let mut ratio = vec![0.0; n_arms];
        let mut arm_means = Vec::with_capacity(n_arms);
        for i in 0..m {
            for j in 0..q {
                let reference = rates[(i * q + j) * h + h - 1];
                for k in 0..h {
                    let arm = (i * q + j) * h + k;
                    let rate = rates[arm];
                    ratio[arm] = rate / reference;
                    let success = 1.0 - outage_probability(cfg.lambda[i * q + j], rate, cfg.snr)?;
                    arm_means.push(RewardVector::new(vec![success, ratio[arm] * success])?);
                }
            }
        }

        let gains = cfg
            .lambda
            .iter()
            .map(|&l| Exp::new(l).expect("lambda validated positive"))
            .collect();

        let actions = enumerate_actions(m, q, h)?;
        let actions = Arc::new(ActionSet::new(actions, n_arms, 2)?);
        Ok(Self {
            cfg,
            actions,
            rates,
            ratio,
            gains,
            arm_means,
        })
    }

    pub fn config(&self) -> &CommConfig {
        &self.cfg
    }

    /// The realized `M×Q×H` rate table, row-major.
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }
}

fn rate_table(cfg: &CommConfig) -> Result<Vec<f64>> {
    let (m, q, h) = (cfg.users, cfg.channels, cfg.rates_per_pair);
    match &cfg.schedule {
        RateSchedule::ProductLog => {
            if h != 3 {
                return Err(Error::Config(format!(
                    "the paper6 rate schedule defines exactly 3 rates per pair, got h = {h}"
                )));
            }
            let mut rates = Vec::with_capacity(m * q * h);
            for &lambda in &cfg.lambda {
                let full = lambert_w(15.0 * lambda)?;
                rates.extend_from_slice(&[full / 4.0, full / 2.0, full]);
            }
            Ok(rates)
        }
        RateSchedule::Explicit(rates) => {
            if rates.len() != m * q * h {
                return Err(Error::Config(format!(
                    "rates needs m·q·h = {} entries, got {}",
                    m * q * h,
                    rates.len()
                )));
            }
            for pair in rates.chunks_exact(h) {
                let reference = pair[h - 1];
                for &r in pair {
                    if !(r > 0.0) || !r.is_finite() {
                        return Err(Error::Config(format!("rates must be positive (got {r})")));
                    }
                    if r > reference {
                        return Err(Error::Config(format!(
                            "each pair's last rate is its reference and must be the largest \
                             (got {r} > {reference})"
                        )));
                    }
                }
            }
            Ok(rates.clone())
        }
    }
}

/// All injective user→channel assignments in lexicographic order.
fn injective_assignments(users: usize, channels: usize) -> Vec<Vec<usize>> {
    fn extend(
        users: usize,
        channels: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == users {
            out.push(current.clone());
            return;
        }
        for j in 0..channels {
            if !used[j] {
                used[j] = true;
                current.push(j);
                extend(users, channels, current, used, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(users, channels, &mut Vec::new(), &mut vec![false; channels], &mut out);
    out
}

/// Actions ordered lexicographically by (channel assignment, rate tuple).
fn enumerate_actions(m: usize, q: usize, h: usize) -> Result<Vec<Action<f64>>> {
    let mut count: usize = 1;
    for i in 0..m {
        count = count
            .checked_mul(q - i)
            .and_then(|c| c.checked_mul(h))
            .filter(|&c| c <= MAX_ACTIONS)
            .ok_or_else(|| {
                Error::Config(format!("comm action set exceeds {MAX_ACTIONS} actions"))
            })?;
    }

    let mut actions = Vec::with_capacity(count);
    for assignment in injective_assignments(m, q) {
        let mut rate_tuple = vec![0usize; m];
        loop {
            let arms: Vec<(usize, f64)> = (0..m)
                .map(|i| (((i * q) + assignment[i]) * h + rate_tuple[i], 1.0))
                .collect();
            actions.push(Action::new(arms)?);
            // Advance the rate tuple in lexicographic order (last user fastest).
            let mut pos = m;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                rate_tuple[pos] += 1;
                if rate_tuple[pos] < h {
                    break;
                }
                rate_tuple[pos] = 0;
            }
            if rate_tuple.iter().all(|&k| k == 0) {
                break;
            }
        }
    }
    Ok(actions)
}

impl Environment for CommEnv {
    fn action_set(&self) -> &Arc<ActionSet64> {
        &self.actions
    }

    fn true_arm_means(&self) -> &[Reward64] {
        &self.arm_means
    }

    fn sample_support(&self, arms: &[usize], rng: &mut ChaCha8Rng) -> Vec<Reward64> {
        let h = self.cfg.rates_per_pair;
        arms.iter()
            .map(|&arm| {
                let pair = arm / h;
                let gain = self.gains[pair].sample(rng);
                let success = (self.cfg.snr * gain).ln_1p() >= self.rates[arm];
                let s = if success { 1.0 } else { 0.0 };
                RewardVector::new(vec![s, s * self.ratio[arm]]).expect("finite sample")
            })
            .collect()
    }
}
