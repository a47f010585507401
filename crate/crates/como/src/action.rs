//! Actions (weighted arm combinations) and finite action sets.
//!
//! An action plays a subset of arms jointly: a sparse map from arm index to a
//! strictly positive weight. Playing action `a` yields the weighted sum of
//! the played arms' reward vectors, so the action's mean is the same weighted
//! sum of arm means. Support iteration order is ascending arm index, which
//! keeps every traversal in the crate deterministic.

use crate::error::{Error, Result};
use crate::reward::RewardVector;
use crate::scalar::Scalar;

/// A sparse nonnegative weight vector over arms with nonempty support.
#[derive(Clone, Debug, PartialEq)]
pub struct Action<S> {
    /// `(arm index, weight)` pairs, sorted by arm index, weights > 0.
    weights: Vec<(usize, S)>,
}

impl<S: Scalar> Action<S> {
    /// Builds an action from `(arm, weight)` pairs.
    ///
    /// Pairs are sorted by arm index; duplicates, empty supports, and
    /// non-positive or non-finite weights are rejected.
    pub fn new(mut weights: Vec<(usize, S)>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput("action support"));
        }
        for &(arm, w) in &weights {
            if !w.is_finite() || w <= S::zero() {
                return Err(Error::Domain(format!("weight {w} on arm {arm} must be finite and > 0")));
            }
        }
        weights.sort_by_key(|&(arm, _)| arm);
        if weights.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(Error::Domain("duplicate arm in action support".into()));
        }
        Ok(Self { weights })
    }

    /// Convenience constructor for unit-weight actions.
    pub fn unit(arms: &[usize]) -> Result<Self> {
        Self::new(arms.iter().map(|&a| (a, S::one())).collect())
    }

    /// Sorted `(arm, weight)` pairs.
    pub fn weights(&self) -> &[(usize, S)] {
        &self.weights
    }

    /// Arm indices in ascending order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.iter().map(|&(arm, _)| arm)
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    /// Weight on `arm`, zero when the arm is outside the support.
    pub fn weight_of(&self, arm: usize) -> S {
        match self.weights.binary_search_by_key(&arm, |&(a, _)| a) {
            Ok(pos) => self.weights[pos].1,
            Err(_) => S::zero(),
        }
    }

    pub fn max_weight(&self) -> S {
        self.weights
            .iter()
            .map(|&(_, w)| w)
            .fold(S::zero(), S::max)
    }

    fn max_arm(&self) -> usize {
        self.weights.last().expect("support is nonempty").0
    }

    /// The action's mean reward `Σ aᵢ·μᵢ` over its support.
    ///
    /// ```
    /// use como::{Action64, Reward64};
    /// let a = Action64::new(vec![(0, 1.0), (2, 0.5)]).unwrap();
    /// let means = vec![
    ///     Reward64::new(vec![1.0, 0.0]).unwrap(),
    ///     Reward64::new(vec![9.0, 9.0]).unwrap(),
    ///     Reward64::new(vec![2.0, 2.0]).unwrap(),
    /// ];
    /// assert_eq!(a.mean(&means).unwrap().values(), &[2.0, 1.0]);
    /// ```
    pub fn mean(&self, arm_means: &[RewardVector<S>]) -> Result<RewardVector<S>> {
        if self.max_arm() >= arm_means.len() {
            return Err(Error::ArmOutOfRange {
                arm: self.max_arm(),
                n_arms: arm_means.len(),
            });
        }
        let dim = arm_means[self.weights[0].0].dim();
        let mut out = vec![S::zero(); dim];
        for &(arm, w) in &self.weights {
            let mean = &arm_means[arm];
            if mean.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: mean.dim(),
                });
            }
            for (o, &x) in out.iter_mut().zip(mean.values()) {
                *o = *o + w * x;
            }
        }
        RewardVector::new(out)
    }
}

/// A finite action set over `N` arms with `D`-dimensional rewards.
///
/// Construction validates that every arm is in the support of at least one
/// action (required by arm-level initialization sweeps) and precomputes the
/// constants the policies and bounds need: `L`, the largest support size, and
/// `a_max`, the largest weight.
#[derive(Clone, Debug)]
pub struct ActionSet<S> {
    actions: Vec<Action<S>>,
    n_arms: usize,
    dimension: usize,
    max_support: usize,
    max_weight: S,
    /// For each arm, indices of the actions containing it, ascending.
    containing: Vec<Vec<usize>>,
}

impl<S: Scalar> ActionSet<S> {
    pub fn new(actions: Vec<Action<S>>, n_arms: usize, dimension: usize) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::EmptyInput("action set"));
        }
        if n_arms == 0 || dimension == 0 {
            return Err(Error::Config("action set needs n_arms ≥ 1 and dimension ≥ 1".into()));
        }
        let mut containing = vec![Vec::new(); n_arms];
        let mut max_support = 0;
        let mut max_weight = S::zero();
        for (idx, action) in actions.iter().enumerate() {
            if action.max_arm() >= n_arms {
                return Err(Error::ArmOutOfRange {
                    arm: action.max_arm(),
                    n_arms,
                });
            }
            max_support = max_support.max(action.support_size());
            max_weight = max_weight.max(action.max_weight());
            for arm in action.support() {
                containing[arm].push(idx);
            }
        }
        if let Some(arm) = containing.iter().position(Vec::is_empty) {
            return Err(Error::Config(format!(
                "arm {arm} is not in the support of any action"
            )));
        }
        Ok(Self {
            actions,
            n_arms,
            dimension,
            max_support,
            max_weight,
            containing,
        })
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sets
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn actions(&self) -> &[Action<S>] {
        &self.actions
    }

    pub fn action(&self, idx: usize) -> &Action<S> {
        &self.actions[idx]
    }

    /// `L`: the largest support size over all actions.
    pub fn max_support_size(&self) -> usize {
        self.max_support
    }

    /// `a_max`: the largest weight over all actions.
    pub fn max_weight(&self) -> S {
        self.max_weight
    }

    /// Indices of the actions whose support contains `arm`, ascending.
    pub fn actions_containing(&self, arm: usize) -> &[usize] {
        &self.containing[arm]
    }

    /// Mean reward vectors of all actions under the given arm means.
    pub fn action_means(&self, arm_means: &[RewardVector<S>]) -> Result<Vec<RewardVector<S>>> {
        if arm_means.len() != self.n_arms {
            return Err(Error::Config(format!(
                "expected {} arm means, got {}",
                self.n_arms,
                arm_means.len()
            )));
        }
        self.actions.iter().map(|a| a.mean(arm_means)).collect()
    }
}
