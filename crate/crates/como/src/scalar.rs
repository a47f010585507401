//! Scalar abstraction for the numeric core.
//!
//! The dominance relations, front computations, and gap/bound formulas are
//! generic over any floating-point scalar. `f32` and `f64` both qualify; the
//! crate root exports `f64` aliases for the common case, and the simulation
//! layers (environments, policies, runner) work in `f64` throughout.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the core math is generic over.
///
/// A blanket implementation covers every type with the listed bounds, so
/// downstream code never implements this trait by hand.
pub trait Scalar:
    Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant, rounding if the target is narrower.
    ///
    /// Used for literals (π, tolerances) inside generic code; every float
    /// type can represent rounded versions of these, so this cannot fail.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must convert")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}
