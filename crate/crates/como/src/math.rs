//! Small numeric routines: the principal-branch Lambert W function.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Principal-branch Lambert W: the `w ≥ 0` with `w·eʷ = x`, for `x ≥ 0`.
///
/// Damped Halley iteration from the initial guess `ln(1 + x)`, which is
/// already within a factor of ~2 of the root on the whole domain. For `f64`
/// the absolute residual `|w·eʷ − x|` stays below 1e-12 for arguments up to
/// the ~1e3 range and below a few ULPs of `x` beyond that.
///
/// ```
/// use como::math::lambert_w;
/// let w = lambert_w(std::f64::consts::E).unwrap();
/// assert!((w - 1.0).abs() < 1e-14);
/// ```
pub fn lambert_w<S: Scalar>(x: S) -> Result<S> {
    if x < S::zero() {
        return Err(Error::Domain(format!(
            "lambert_w is restricted to the principal branch, x ≥ 0 (got {x})"
        )));
    }
    if x == S::zero() {
        return Ok(S::zero());
    }
    let one = S::one();
    let two = one + one;
    let mut w = (one + x).ln();
    let mut residual = w * w.exp() - x;
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + one;
        // Halley step for f(w) = w·eʷ − x.
        let denom = ew * wp1 - f * (w + two) / (two * wp1);
        let mut step = f / denom;
        let mut next = w - step;
        // Damping: never leave the principal branch, never grow the residual.
        for _ in 0..32 {
            if next > -one {
                let r = next * next.exp() - x;
                if r.abs() <= residual.abs() {
                    residual = r;
                    break;
                }
            }
            step = step / two;
            next = w - step;
        }
        if next == w {
            break;
        }
        w = next;
        if residual == S::zero() {
            break;
        }
    }
    Ok(w)
}
