//! Reward vectors and the dominance relations between them.
//!
//! An arm play yields a `D`-dimensional reward vector; an action's value is a
//! weighted sum of arm vectors. Optimality among vectors comes in three
//! strengths, ordered by implication:
//!
//! * **weak dominance**: `u` weakly dominates `v` when no coordinate of `v`
//!   exceeds the matching coordinate of `u`;
//! * **dominance**: weak dominance plus at least one strictly larger
//!   coordinate;
//! * **super-dominance**: strictly larger in every coordinate.
//!
//! Two vectors are *incomparable* when neither super-dominates the other, so
//! incomparability is reflexive: a vector is incomparable with itself, and
//! equal vectors never super-dominate each other. All comparisons are exact
//! floating-point comparisons with no tolerance. Super-dominance exists
//! precisely to absorb tie pathologies, and an epsilon would silently change
//! which vectors count as optimal.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite `D`-dimensional reward (or mean-reward) vector, `D ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RewardVector<S> {
    values: Vec<S>,
}

impl<S: Scalar> RewardVector<S> {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("reward vector"));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite reward component {bad}")));
        }
        Ok(Self { values })
    }

    /// The all-zero vector of the given dimension.
    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![S::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [S] {
        &mut self.values
    }

    /// Returns `self` with the scalar `c` added to every coordinate.
    pub fn shift(&self, c: S) -> Self {
        Self {
            values: self.values.iter().map(|&v| v + c).collect(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// True iff `other ⪯ self`: every coordinate of `other` is ≤ ours.
    ///
    /// ```
    /// use como::Reward64;
    /// let u = Reward64::new(vec![1.0, 2.0]).unwrap();
    /// let v = Reward64::new(vec![1.0, 1.0]).unwrap();
    /// assert!(u.weakly_dominates(&v).unwrap());
    /// assert!(!v.weakly_dominates(&u).unwrap());
    /// ```
    pub fn weakly_dominates(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(weakly_dominates_raw(&self.values, &other.values))
    }

    /// True iff `other ≺ self`: weak dominance with at least one strict coordinate.
    pub fn dominates(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(dominates_raw(&self.values, &other.values))
    }

    /// True iff `other ≺* self`: every coordinate strictly larger.
    ///
    /// Ties block super-dominance, so equal vectors never super-dominate
    /// each other:
    ///
    /// ```
    /// use como::Reward64;
    /// let u = Reward64::new(vec![2.0, 1.0]).unwrap();
    /// let v = Reward64::new(vec![1.0, 1.0]).unwrap();
    /// assert!(!u.super_dominates(&v).unwrap()); // coordinate 2 ties
    /// assert!(u.dominates(&v).unwrap());
    /// ```
    pub fn super_dominates(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(super_dominates_raw(&self.values, &other.values))
    }

    /// True iff neither vector super-dominates the other.
    pub fn incomparable(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(!super_dominates_raw(&self.values, &other.values)
            && !super_dominates_raw(&other.values, &self.values))
    }
}

pub(crate) fn weakly_dominates_raw<S: Scalar>(u: &[S], v: &[S]) -> bool {
    u.iter().zip(v).all(|(&u_j, &v_j)| v_j <= u_j)
}

pub(crate) fn dominates_raw<S: Scalar>(u: &[S], v: &[S]) -> bool {
    weakly_dominates_raw(u, v) && u.iter().zip(v).any(|(&u_j, &v_j)| v_j < u_j)
}

pub(crate) fn super_dominates_raw<S: Scalar>(u: &[S], v: &[S]) -> bool {
    u.iter().zip(v).all(|(&u_j, &v_j)| v_j < u_j)
}
