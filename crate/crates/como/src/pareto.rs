//! Super-Pareto front, Pareto front, suboptimality gaps, and regret bounds.
//!
//! The *super-Pareto front* (SPF) of a set of mean vectors is the set of
//! vectors not super-dominated by any other; the classical Pareto front
//! filters with plain dominance instead. Since dominance implies weak but not
//! strict improvement everywhere, the Pareto front is always a subset of the
//! SPF: the SPF additionally retains tie-symmetric vectors.
//!
//! The *suboptimality gap* of a vector `μ_a` is the smallest uniform additive
//! boost `ε ≥ 0` such that `μ_a + ε` is no longer super-dominated by any SPF
//! member. Regret over a horizon is the sum of the gaps of the actions
//! played. Two independent routes compute the gap: [`psg`] in closed form and
//! [`psg_oracle`] by bisection on the defining predicate; they must agree and
//! are cross-checked in the test suite.
//!
//! Both fronts are computed by the direct `O(n²·D)` pairwise scan. At desk
//! scale (`n` up to a few thousand) this is faster in practice than
//! divide-and-conquer schemes and trivially deterministic.

use crate::error::{Error, Result};
use crate::reward::{dominates_raw, super_dominates_raw, RewardVector};
use crate::scalar::Scalar;

/// Indices of the super-Pareto front and the Pareto front of one input set.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontResult {
    /// Indices not super-dominated by any other entry, ascending.
    pub spf: Vec<usize>,
    /// Indices not dominated by any other entry, ascending.
    pub pareto: Vec<usize>,
}

/// Per-action gaps plus the extreme gaps the regret bound needs.
#[derive(Clone, Debug)]
pub struct GapStats<S> {
    /// `Δ_a` for every action, aligned with the input order.
    pub gaps: Vec<S>,
    /// Smallest positive gap; `+∞` when every action is on the SPF.
    pub delta_min: S,
    /// Largest gap (0 when every action is on the SPF).
    pub delta_max: S,
    /// The fronts of the same input.
    pub fronts: FrontResult,
}

fn check_equal_dims<S: Scalar>(means: &[RewardVector<S>]) -> Result<usize> {
    let dim = means[0].dim();
    for m in means {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: m.dim(),
            });
        }
    }
    Ok(dim)
}

fn surviving<S, F>(means: &[RewardVector<S>], beats: F) -> Result<Vec<usize>>
where
    S: Scalar,
    F: Fn(&[S], &[S]) -> bool,
{
    if means.is_empty() {
        return Err(Error::EmptyInput("mean vectors"));
    }
    check_equal_dims(means)?;
    Ok((0..means.len())
        .filter(|&k| {
            !means
                .iter()
                .enumerate()
                .any(|(other, m)| other != k && beats(m.values(), means[k].values()))
        })
        .collect())
}

/// Indices whose vectors no other vector super-dominates.
///
/// Duplicate vectors are all retained: ties block super-dominance.
pub fn compute_spf<S: Scalar>(means: &[RewardVector<S>]) -> Result<Vec<usize>> {
    surviving(means, super_dominates_raw)
}

/// Indices whose vectors no other vector dominates.
pub fn compute_pareto_front<S: Scalar>(means: &[RewardVector<S>]) -> Result<Vec<usize>> {
    surviving(means, dominates_raw)
}

/// Both fronts of one input set.
pub fn fronts<S: Scalar>(means: &[RewardVector<S>]) -> Result<FrontResult> {
    Ok(FrontResult {
        spf: compute_spf(means)?,
        pareto: compute_pareto_front(means)?,
    })
}

/// Closed-form suboptimality gap of `mean_a` against the front `spf_means`.
///
/// A front member `μ*` super-dominates `μ_a + ε` exactly when
/// `ε < min_j (μ*_j − μ_a_j)`, so the smallest safe boost is
/// `max(0, max_{μ*} min_j (μ*_j − μ_a_j))`.
///
/// ```
/// use como::pareto::psg;
/// use como::Reward64;
/// let front = vec![
///     Reward64::new(vec![2.0, 1.0]).unwrap(),
///     Reward64::new(vec![1.0, 2.0]).unwrap(),
/// ];
/// let a = Reward64::new(vec![0.5, 0.5]).unwrap();
/// assert_eq!(psg(&a, &front).unwrap(), 0.5);
/// ```
pub fn psg<S: Scalar>(mean_a: &RewardVector<S>, spf_means: &[RewardVector<S>]) -> Result<S> {
    if spf_means.is_empty() {
        return Err(Error::EmptyInput("front means"));
    }
    let dim = check_equal_dims(spf_means)?;
    if mean_a.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: mean_a.dim(),
            right: dim,
        });
    }
    let mut worst = S::zero();
    for member in spf_means {
        let mut closest = S::infinity();
        for (&f_j, &a_j) in member.values().iter().zip(mean_a.values()) {
            closest = closest.min(f_j - a_j);
        }
        worst = worst.max(closest);
    }
    Ok(worst.max(S::zero()))
}

/// Bisection route to the same gap as [`psg`], kept implementationally
/// independent as a verification oracle.
///
/// Searches `ε ∈ [0, D·(coordinate range)]` for the smallest value where the
/// predicate "no front member super-dominates `mean_a + ε`" flips to true;
/// the predicate is monotone in `ε`. Result is within `tol` of the exact gap.
pub fn psg_oracle<S: Scalar>(
    mean_a: &RewardVector<S>,
    spf_means: &[RewardVector<S>],
    tol: S,
) -> Result<S> {
    if tol <= S::zero() {
        return Err(Error::Domain(format!("bisection tolerance must be > 0 (got {tol})")));
    }
    if spf_means.is_empty() {
        return Err(Error::EmptyInput("front means"));
    }
    let dim = check_equal_dims(spf_means)?;
    if mean_a.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: mean_a.dim(),
            right: dim,
        });
    }

    let not_super_dominated = |eps: S| -> bool {
        let boosted = mean_a.shift(eps);
        spf_means
            .iter()
            .all(|m| !super_dominates_raw(m.values(), boosted.values()))
    };

    if not_super_dominated(S::zero()) {
        return Ok(S::zero());
    }
    let all_coords = spf_means
        .iter()
        .chain(std::iter::once(mean_a))
        .flat_map(|m| m.values().iter().copied());
    let hi_bound = all_coords.clone().fold(S::neg_infinity(), S::max);
    let lo_bound = all_coords.fold(S::infinity(), S::min);
    let mut hi = S::from_f64_lossy(dim as f64) * (hi_bound - lo_bound);
    while !not_super_dominated(hi) {
        hi = hi + hi + S::one();
    }
    let mut lo = S::zero();
    while hi - lo > tol {
        let mid = lo + (hi - lo) / S::from_f64_lossy(2.0);
        if mid <= lo || mid >= hi {
            break; // interval no longer splittable in this precision
        }
        if not_super_dominated(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Gaps of every action mean against the SPF of the same set.
///
/// `delta_min` is `+∞` when all actions are on the SPF; the regret bound then
/// reports 0 because `delta_max` is 0 in that regime.
pub fn gap_stats<S: Scalar>(means: &[RewardVector<S>]) -> Result<GapStats<S>> {
    let fronts = fronts(means)?;
    let spf_means: Vec<RewardVector<S>> =
        fronts.spf.iter().map(|&i| means[i].clone()).collect();
    let gaps: Vec<S> = means
        .iter()
        .map(|m| psg(m, &spf_means))
        .collect::<Result<_>>()?;
    let delta_min = gaps
        .iter()
        .filter(|&&g| g > S::zero())
        .fold(S::infinity(), |acc, &g| acc.min(g));
    let delta_max = gaps.iter().fold(S::zero(), |acc, &g| acc.max(g));
    Ok(GapStats {
        gaps,
        delta_min,
        delta_max,
        fronts,
    })
}

/// Prefix sums of per-step gaps: entry `t` is the regret after `t+1` steps.
pub fn cumulative_regret<S: Scalar>(selected_gaps: &[S]) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(selected_gaps.len());
    let mut acc = S::zero();
    for &g in selected_gaps {
        if g < S::zero() {
            return Err(Error::Domain(format!("negative gap {g}")));
        }
        acc = acc + g;
        out.push(acc);
    }
    Ok(out)
}

/// Expected-regret bound
/// `Δ_max·(4·a_max²·N·L²·(L+1)·ln(T·D^¼)/Δ_min² + N + (π²/3)·N·L)`.
///
/// `horizon` is accepted as a real so the bound can be evaluated at arbitrary
/// checkpoints. Degenerate gap inputs keep their conventional meanings:
/// `delta_max = 0` (every action optimal) yields 0, `delta_min = +∞` (no
/// suboptimal action exists) yields 0, and `delta_min = 0` yields `+∞`.
pub fn theorem1_bound<S: Scalar>(
    horizon: S,
    n_arms: usize,
    max_support: usize,
    dimension: usize,
    a_max: S,
    delta_min: S,
    delta_max: S,
) -> Result<S> {
    if n_arms == 0 || max_support == 0 || dimension == 0 {
        return Err(Error::Domain(
            "bound needs n_arms ≥ 1, max_support ≥ 1, dimension ≥ 1".into(),
        ));
    }
    let n = S::from_f64_lossy(n_arms as f64);
    if !(horizon > n) {
        return Err(Error::Domain(format!(
            "bound needs horizon > number of arms (got {horizon} vs {n_arms})"
        )));
    }
    if delta_max < S::zero() || delta_min < S::zero() {
        return Err(Error::Domain("gaps must be nonnegative".into()));
    }
    if delta_max == S::zero() {
        return Ok(S::zero());
    }
    if delta_min == S::infinity() {
        return Ok(S::zero());
    }
    if delta_min == S::zero() {
        return Ok(S::infinity());
    }
    let l = S::from_f64_lossy(max_support as f64);
    let d = S::from_f64_lossy(dimension as f64);
    let four = S::from_f64_lossy(4.0);
    let quarter = S::from_f64_lossy(0.25);
    let pi_sq_third = S::from_f64_lossy(std::f64::consts::PI * std::f64::consts::PI / 3.0);
    let log_term = (horizon * d.powf(quarter)).ln();
    let exploration =
        four * a_max * a_max * n * l * l * (l + S::one()) * log_term / (delta_min * delta_min);
    Ok(delta_max * (exploration + n + pi_sq_third * n * l))
}

/// Tail bound `D·e^(−2nk²)` on the probability that the empirical mean of
/// `n` i.i.d. unit-cube samples escapes a `k`-boost (or `k`-drop) in some
/// coordinate: `Pr(μ+k ⊁* μ̂_n)` and `Pr(μ−k ⊀* μ̂_n)` are both bounded by it.
pub fn hoeffding_violation_bound<S: Scalar>(n: u64, k: S, dimension: usize) -> Result<S> {
    if n == 0 {
        return Err(Error::Domain("sample count must be ≥ 1".into()));
    }
    if k <= S::zero() {
        return Err(Error::Domain(format!("boost k must be > 0 (got {k})")));
    }
    let two = S::from_f64_lossy(2.0);
    let exponent = -(two * S::from_f64_lossy(n as f64) * k * k);
    Ok(S::from_f64_lossy(dimension as f64) * exponent.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rv(values: &[f64]) -> RewardVector<f64> {
        RewardVector::new(values.to_vec()).unwrap()
    }

    /// Brute-force SPF: keep k iff no other vector beats it strictly everywhere.
    fn spf_oracle(means: &[RewardVector<f64>]) -> Vec<usize> {
        (0..means.len())
            .filter(|&k| {
                (0..means.len()).all(|o| {
                    o == k || !means[o].super_dominates(&means[k]).unwrap()
                })
            })
            .collect()
    }

    /// Brute-force Pareto front via the dominance relation.
    fn pareto_oracle(means: &[RewardVector<f64>]) -> Vec<usize> {
        (0..means.len())
            .filter(|&k| {
                (0..means.len()).all(|o| o == k || !means[o].dominates(&means[k]).unwrap())
            })
            .collect()
    }

    fn random_means(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<RewardVector<f64>> {
        (0..n)
            .map(|_| rv(&(0..d).map(|_| rng.random::<f64>()).collect::<Vec<_>>()))
            .collect()
    }

    #[test]
    fn tie_heavy_set_keeps_everything_in_spf() {
        let means = vec![rv(&[2.0, 1.0]), rv(&[1.0, 2.0]), rv(&[1.0, 1.0])];
        assert_eq!(compute_spf(&means).unwrap(), vec![0, 1, 2]);
        assert_eq!(compute_pareto_front(&means).unwrap(), vec![0, 1]);
    }

    #[test]
    fn plainly_beaten_vector_is_dropped() {
        let means = vec![rv(&[1.0, 1.0]), rv(&[2.0, 2.0])];
        assert_eq!(compute_spf(&means).unwrap(), vec![1]);
    }

    #[test]
    fn singleton_is_its_own_front() {
        let means = vec![rv(&[0.5, 0.5])];
        let f = fronts(&means).unwrap();
        assert_eq!(f.spf, vec![0]);
        assert_eq!(f.pareto, vec![0]);
    }

    #[test]
    fn duplicates_are_all_retained() {
        let means = vec![rv(&[1.0, 1.0]), rv(&[1.0, 1.0]), rv(&[0.5, 0.5])];
        assert_eq!(compute_spf(&means).unwrap(), vec![0, 1]);
        assert_eq!(compute_pareto_front(&means).unwrap(), vec![0, 1]);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(compute_spf::<f64>(&[]).is_err());
        assert!(compute_pareto_front::<f64>(&[]).is_err());
    }

    #[test]
    fn fronts_match_oracles_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.random_range(1..=12);
            let d = rng.random_range(1..=4);
            let mut means = random_means(&mut rng, n, d);
            // Quantize to provoke ties.
            for m in &mut means {
                for v in m.values_mut() {
                    *v = (*v * 4.0).round() / 4.0;
                }
            }
            assert_eq!(compute_spf(&means).unwrap(), spf_oracle(&means));
            assert_eq!(compute_pareto_front(&means).unwrap(), pareto_oracle(&means));
        }
    }

    #[test]
    fn psg_closed_form_cases() {
        let front = vec![rv(&[2.0, 1.0]), rv(&[1.0, 2.0])];
        assert_eq!(psg(&rv(&[2.0, 1.0]), &front).unwrap(), 0.0);
        assert_eq!(psg(&rv(&[0.5, 0.5]), &front).unwrap(), 0.5);
        let axis = vec![rv(&[1.0, 0.0]), rv(&[0.0, 1.0])];
        assert_eq!(psg(&rv(&[1.0, 0.0]), &axis).unwrap(), 0.0);
        // A single front point strictly above in all coordinates: uniform gap.
        assert_eq!(psg(&rv(&[1.0, 1.0]), &[rv(&[3.0, 3.0])]).unwrap(), 2.0);
    }

    #[test]
    fn psg_oracle_cases() {
        let front = vec![rv(&[2.0, 1.0]), rv(&[1.0, 2.0])];
        let tol = 1e-9;
        assert!(psg_oracle(&rv(&[2.0, 1.0]), &front, tol).unwrap() <= tol);
        assert!((psg_oracle(&rv(&[0.5, 0.5]), &front, tol).unwrap() - 0.5).abs() <= tol);
        assert!(
            (psg_oracle(&rv(&[1.0, 1.0]), &[rv(&[3.0, 3.0])], tol).unwrap() - 2.0).abs() <= tol
        );
        // Incomparable with every member: already safe at ε = 0.
        assert_eq!(
            psg_oracle(&rv(&[5.0, 0.0]), &front, tol).unwrap(),
            0.0
        );
        assert!(psg_oracle(&rv(&[0.0]), &[rv(&[1.0])], 0.0).is_err());
    }

    #[test]
    fn psg_routes_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(1..=20);
            let d = rng.random_range(1..=4);
            let means = random_means(&mut rng, n, d);
            let spf: Vec<_> = compute_spf(&means)
                .unwrap()
                .into_iter()
                .map(|i| means[i].clone())
                .collect();
            for m in &means {
                let exact = psg(m, &spf).unwrap();
                let bisect = psg_oracle(m, &spf, 1e-10).unwrap();
                assert!(
                    (exact - bisect).abs() <= 1e-9,
                    "closed form {exact} vs bisection {bisect}"
                );
            }
        }
    }

    #[test]
    fn gap_stats_examples() {
        let all_optimal = vec![rv(&[2.0, 1.0]), rv(&[1.0, 2.0]), rv(&[1.0, 1.0])];
        let stats = gap_stats(&all_optimal).unwrap();
        assert!(stats.gaps.iter().all(|&g| g == 0.0));
        assert_eq!(stats.delta_min, f64::INFINITY);
        assert_eq!(stats.delta_max, 0.0);

        let simple = vec![rv(&[1.0, 1.0]), rv(&[3.0, 3.0])];
        let stats = gap_stats(&simple).unwrap();
        assert_eq!(stats.gaps, vec![2.0, 0.0]);
        assert_eq!(stats.delta_min, 2.0);
        assert_eq!(stats.delta_max, 2.0);
    }

    #[test]
    fn gap_sign_characterizes_spf_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let n = rng.random_range(1..=15);
            let d = rng.random_range(1..=3);
            let means = random_means(&mut rng, n, d);
            let stats = gap_stats(&means).unwrap();
            for (i, &g) in stats.gaps.iter().enumerate() {
                let on_front = stats.fronts.spf.contains(&i);
                assert_eq!(on_front, g == 0.0, "gap/front disagreement at {i}");
            }
            for &p in &stats.fronts.pareto {
                assert!(stats.fronts.spf.contains(&p), "pareto ⊄ spf");
            }
        }
    }

    #[test]
    fn cumulative_regret_prefix_sums() {
        assert_eq!(cumulative_regret(&[0.0, 0.0, 0.0]).unwrap(), vec![0.0; 3]);
        assert_eq!(
            cumulative_regret(&[0.5, 0.0, 0.5]).unwrap(),
            vec![0.5, 0.5, 1.0]
        );
        assert!(cumulative_regret(&[-0.1]).is_err());
    }

    #[test]
    fn bound_direct_substitution() {
        // N=1, L=1, D=1, a_max=1, gaps 1, horizon e: ln(e) = 1, so the bound
        // is 1·(4·1·1·2·1/1 + 1 + π²/3) = 9 + π²/3.
        let b = theorem1_bound(std::f64::consts::E, 1, 1, 1, 1.0, 1.0, 1.0).unwrap();
        let expect = 8.0 + 1.0 + std::f64::consts::PI.powi(2) / 3.0;
        assert!((b - expect).abs() < 1e-12);
    }

    #[test]
    fn bound_degenerate_gaps() {
        assert_eq!(theorem1_bound(10.0, 2, 1, 1, 1.0, 1.0, 0.0).unwrap(), 0.0);
        assert_eq!(
            theorem1_bound(10.0, 2, 1, 1, 1.0, f64::INFINITY, 0.5).unwrap(),
            0.0
        );
        assert_eq!(
            theorem1_bound(10.0, 2, 1, 1, 1.0, 0.0, 0.5).unwrap(),
            f64::INFINITY
        );
        assert!(theorem1_bound(1.0, 2, 1, 1, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn bound_monotonicity_on_grid() {
        let base = theorem1_bound(100.0, 4, 2, 2, 1.0, 0.2, 0.5).unwrap();
        for t in [150.0, 400.0, 1e4] {
            assert!(theorem1_bound(t, 4, 2, 2, 1.0, 0.2, 0.5).unwrap() >= base);
        }
        for n in [5, 9, 30] {
            assert!(theorem1_bound(100.0, n, 2, 2, 1.0, 0.2, 0.5).unwrap() >= base);
        }
        for l in [3, 5] {
            assert!(theorem1_bound(100.0, 4, l, 2, 1.0, 0.2, 0.5).unwrap() >= base);
        }
        for a in [1.5, 2.0, 8.0] {
            assert!(theorem1_bound(100.0, 4, 2, 2, a, 0.2, 0.5).unwrap() >= base);
        }
        for dmin in [0.1, 0.05, 0.01] {
            assert!(theorem1_bound(100.0, 4, 2, 2, 1.0, dmin, 0.5).unwrap() >= base);
        }
    }

    #[test]
    fn hoeffding_bound_values() {
        let b = hoeffding_violation_bound(8, 0.5f64, 2).unwrap();
        assert!((b - 2.0 * (-4.0f64).exp()).abs() < 1e-15);
        assert!(hoeffding_violation_bound(1, 100.0f64, 1).unwrap() < 1e-300);
        assert!(hoeffding_violation_bound(0, 0.5f64, 1).is_err());
        assert!(hoeffding_violation_bound(1, 0.0f64, 1).is_err());
    }

    proptest! {
        #[test]
        fn pareto_front_is_subset_of_spf(coords in proptest::collection::vec(0.0f64..1.0, 2..40)) {
            let d = 2;
            let means: Vec<_> = coords.chunks_exact(d).map(|c| rv(c)).collect();
            if means.is_empty() { return Ok(()); }
            let f = fronts(&means).unwrap();
            prop_assert!(!f.spf.is_empty());
            for p in &f.pareto {
                prop_assert!(f.spf.contains(p));
            }
        }

        #[test]
        fn zero_gap_iff_not_super_dominated(
            coords in proptest::collection::vec(0.0f64..1.0, 6..30),
            probe in proptest::collection::vec(0.0f64..1.0, 3),
        ) {
            let means: Vec<_> = coords.chunks_exact(3).map(|c| rv(c)).collect();
            let spf: Vec<_> = compute_spf(&means).unwrap().into_iter().map(|i| means[i].clone()).collect();
            let probe = rv(&probe);
            let gap = psg(&probe, &spf).unwrap();
            let free = spf.iter().all(|m| !m.super_dominates(&probe).unwrap());
            prop_assert_eq!(gap == 0.0, free);
        }
    }
}
