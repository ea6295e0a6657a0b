//! Classical random-search baseline: drawing balls from an urn without
//! replacement until the first marked one.
//!
//! The number of draws T satisfies P(T = j) = C(n-l, j-1)/C(n, j-1) * l/(n-j+1)
//! on j in 1..=n-l+1 with mean (n+1)/(l+1). The module computes the
//! distribution exactly, checks the expectation by direct summation, samples
//! it by Monte Carlo, and carries the with-replacement variant (geometric,
//! mean n/l) for comparison.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Largest ball count for which the distribution is summed exactly.
pub const EXACT_SUMMATION_CAP: u64 = 10_000;

/// Fixed shard count for the default Monte Carlo entry points. Fixing it
/// keeps results bit-identical across machines regardless of core count.
pub const MONTE_CARLO_SHARDS: u64 = 16;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("ball counts must satisfy 1 <= ell <= n, got ell = {ell}, n = {n}")]
    InvalidUrn { n: u64, ell: u64 },
    #[error("draw index {j} outside the support 1..={hi}")]
    OutsideSupport { j: u64, hi: u64 },
    #[error("n = {n} exceeds the exact-summation cap {cap}")]
    SummationCap { n: u64, cap: u64 },
    #[error("at least one trial is required")]
    ZeroTrials,
    #[error("at least one shard is required")]
    ZeroShards,
    #[error("binomial range requires m <= n_top, got m = {m}, n_top = {n_top}")]
    InvalidRange { m: u64, n_top: u64 },
    #[error("binomial coefficient C({n}, {k}) overflows 128-bit arithmetic")]
    Overflow { n: u64, k: u64 },
}

/// An urn with n balls of which ell are marked. Unlike a search instance,
/// ell = n is allowed: every draw succeeds immediately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrnModel {
    n: u64,
    ell: u64,
}

impl UrnModel {
    pub fn new(n: u64, ell: u64) -> Result<Self, ClassicalError> {
        if ell < 1 || ell > n {
            return Err(ClassicalError::InvalidUrn { n, ell });
        }
        Ok(Self { n, ell })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// Number of points in the support of the draw count: n - ell + 1.
    pub fn support_size(&self) -> u64 {
        self.n - self.ell + 1
    }
}

/// The full distribution of the draw count, with probabilities indexed
/// j = 1..=support_size (stored at j-1) and the mean from direct summation.
#[derive(Debug, Clone, PartialEq)]
pub struct UrnDistribution {
    pmf: Vec<f64>,
    mean: f64,
}

impl UrnDistribution {
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn probability(&self, j: u64) -> Option<f64> {
        if j >= 1 {
            self.pmf.get(j as usize - 1).copied()
        } else {
            None
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn total(&self) -> f64 {
        kahan_sum(self.pmf.iter().copied())
    }
}

/// Compensated summation; the direct expectation route needs it to hold
/// 1e-10 agreement at n = 10^4.
fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for value in values {
        let y = value - compensation;
        let t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }
    sum
}

/// P(T = j): the first j-1 draws all miss, the j-th hits. Computed as the
/// running product of (n-ell-i)/(n-i) miss ratios times ell/(n-j+1), which
/// stays in range for any n instead of overflowing factorials.
pub fn pmf(urn: &UrnModel, j: u64) -> Result<f64, ClassicalError> {
    let hi = urn.support_size();
    if j < 1 || j > hi {
        return Err(ClassicalError::OutsideSupport { j, hi });
    }
    let (n, ell) = (urn.n as f64, urn.ell as f64);
    let mut miss_prefix = 1.0;
    for i in 0..(j - 1) {
        miss_prefix *= (n - ell - i as f64) / (n - i as f64);
    }
    Ok(miss_prefix * ell / (n - (j - 1) as f64))
}

/// The whole pmf in one incremental pass, plus its mean.
pub fn distribution(urn: &UrnModel) -> Result<UrnDistribution, ClassicalError> {
    if urn.n > EXACT_SUMMATION_CAP {
        return Err(ClassicalError::SummationCap {
            n: urn.n,
            cap: EXACT_SUMMATION_CAP,
        });
    }
    let (n, ell) = (urn.n as f64, urn.ell as f64);
    let mut pmf = Vec::with_capacity(urn.support_size() as usize);
    let mut miss_prefix = 1.0;
    for j in 1..=urn.support_size() {
        pmf.push(miss_prefix * ell / (n - (j - 1) as f64));
        miss_prefix *= (n - ell - (j - 1) as f64) / (n - (j - 1) as f64);
    }
    let mean = kahan_sum(pmf.iter().enumerate().map(|(i, p)| (i + 1) as f64 * p));
    Ok(UrnDistribution { pmf, mean })
}

/// Closed-form expected draw count (n+1)/(ell+1).
pub fn expectation(urn: &UrnModel) -> f64 {
    (urn.n as f64 + 1.0) / (urn.ell as f64 + 1.0)
}

/// Expected draw count by direct summation of j * pmf(j); agrees with the
/// closed form to 1e-10 for n up to the summation cap.
pub fn expectation_from_pmf(urn: &UrnModel) -> Result<f64, ClassicalError> {
    Ok(distribution(urn)?.mean())
}

/// Expected draw count when every ball is returned to the urn: geometric
/// with success probability ell/n, mean n/ell.
pub fn with_replacement_expectation(urn: &UrnModel) -> f64 {
    urn.n as f64 / urn.ell as f64
}

/// Monte Carlo estimate: sample mean, its standard error, and the trial
/// count that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub trials: u64,
}

/// Integer accumulators merged across shards; exact, so the merge order
/// cannot perturb the result.
#[derive(Debug, Clone, Copy, Default)]
struct ShardTally {
    trials: u64,
    sum: u128,
    sum_sq: u128,
}

impl ShardTally {
    fn record(&mut self, draws: u64) {
        self.trials += 1;
        self.sum += draws as u128;
        self.sum_sq += (draws as u128) * (draws as u128);
    }

    fn merge(mut self, other: ShardTally) -> ShardTally {
        self.trials += other.trials;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    fn estimate(&self) -> MonteCarloEstimate {
        let trials = self.trials as f64;
        let mean = self.sum as f64 / trials;
        let standard_error = if self.trials > 1 {
            let variance = (self.sum_sq as f64 - trials * mean * mean) / (trials - 1.0);
            (variance.max(0.0) / trials).sqrt()
        } else {
            0.0
        };
        MonteCarloEstimate {
            mean,
            standard_error,
            trials: self.trials,
        }
    }
}

/// One without-replacement trial: a partial Fisher-Yates shuffle over ball
/// indices, stopping at the first marked hit. Balls 0..ell are the marked
/// ones; `displaced` holds only the entries the shuffle has moved, so a
/// trial costs O(draws) time and space, not O(n).
fn draws_without_replacement<R: Rng>(
    urn: &UrnModel,
    rng: &mut R,
    displaced: &mut HashMap<u64, u64>,
) -> u64 {
    displaced.clear();
    for t in 0..urn.n {
        let p = rng.gen_range(t..urn.n);
        let drawn = displaced.get(&p).copied().unwrap_or(p);
        let at_t = displaced.get(&t).copied().unwrap_or(t);
        displaced.insert(p, at_t);
        if drawn < urn.ell {
            return t + 1;
        }
    }
    unreachable!("every ball is drawn after n steps and ell >= 1")
}

/// One with-replacement trial: geometric waiting time for a hit.
fn draws_with_replacement<R: Rng>(urn: &UrnModel, rng: &mut R) -> u64 {
    let mut draws = 1;
    while rng.gen_range(0..urn.n) >= urn.ell {
        draws += 1;
    }
    draws
}

fn run_shards(
    urn: &UrnModel,
    trials: u64,
    seed: u64,
    shards: u64,
    with_replacement: bool,
) -> Result<MonteCarloEstimate, ClassicalError> {
    if trials < 1 {
        return Err(ClassicalError::ZeroTrials);
    }
    if shards < 1 {
        return Err(ClassicalError::ZeroShards);
    }
    let base = trials / shards;
    let remainder = trials % shards;
    let tally = (0..shards)
        .into_par_iter()
        .map(|s| {
            let shard_trials = base + u64::from(s < remainder);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s));
            let mut displaced = HashMap::new();
            let mut tally = ShardTally::default();
            for _ in 0..shard_trials {
                let draws = if with_replacement {
                    draws_with_replacement(urn, &mut rng)
                } else {
                    draws_without_replacement(urn, &mut rng, &mut displaced)
                };
                tally.record(draws);
            }
            tally
        })
        .reduce(ShardTally::default, ShardTally::merge);
    Ok(tally.estimate())
}

/// Samples the without-replacement draw count. Deterministic per
/// (seed, trials): work is split over a fixed shard count, shard s seeds its
/// own generator with seed + s, and shards merge by exact integer sums.
pub fn monte_carlo(
    urn: &UrnModel,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, ClassicalError> {
    run_shards(urn, trials, seed, MONTE_CARLO_SHARDS, false)
}

/// Same contract as `monte_carlo` with an explicit shard count; the result
/// is a function of (seed, shards, trials) only.
pub fn monte_carlo_sharded(
    urn: &UrnModel,
    trials: u64,
    seed: u64,
    shards: u64,
) -> Result<MonteCarloEstimate, ClassicalError> {
    run_shards(urn, trials, seed, shards, false)
}

/// Samples the with-replacement (geometric) variant.
pub fn monte_carlo_with_replacement(
    urn: &UrnModel,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, ClassicalError> {
    run_shards(urn, trials, seed, MONTE_CARLO_SHARDS, true)
}

/// C(n, k) in checked 128-bit arithmetic; 0 when k > n.
pub fn binomial(n: u64, k: u64) -> Result<u128, ClassicalError> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        // Multiply before dividing: C(n-k+i, i) is an integer, so the
        // division is exact; only the product can overflow.
        result = result
            .checked_mul((n - k + i) as u128)
            .ok_or(ClassicalError::Overflow { n, k })?
            / i as u128;
    }
    Ok(result)
}

/// Sum of C(j, m) for j in m..=n_top, verified on the spot against the
/// closed form C(n_top+1, m+1) that the running-sum recurrence telescopes to.
pub fn hockey_stick(m: u64, n_top: u64) -> Result<u128, ClassicalError> {
    if m > n_top {
        return Err(ClassicalError::InvalidRange { m, n_top });
    }
    let mut term: u128 = 1;
    let mut sum: u128 = 1;
    for j in m..n_top {
        // C(j+1, m) = C(j, m) * (j+1) / (j+1-m), exact in this order.
        term = term
            .checked_mul((j + 1) as u128)
            .ok_or(ClassicalError::Overflow { n: j + 1, k: m })?
            / (j + 1 - m) as u128;
        sum = sum.checked_add(term).ok_or(ClassicalError::Overflow {
            n: n_top + 1,
            k: m + 1,
        })?;
    }
    let closed = binomial(n_top + 1, m + 1)?;
    assert_eq!(sum, closed, "running sum must telescope to C(n_top+1, m+1)");
    Ok(sum)
}

/// The two partial-sum identities that reduce the direct expectation sum to
/// the closed form: sum of C(k+ell-1, ell-1) over k in 0..=n-ell equals
/// C(n, ell), and sum of C(k+ell, ell) over k in 0..=n-ell-1 equals
/// C(n, ell+1).
pub fn proof_identities_hold(n: u64, ell: u64) -> Result<bool, ClassicalError> {
    if ell < 1 || ell > n {
        return Err(ClassicalError::InvalidUrn { n, ell });
    }
    // k in 0..=n-ell with j = k+ell-1 is j in ell-1..=n-1.
    let first = hockey_stick(ell - 1, n - 1)? == binomial(n, ell)?;
    // k in 0..=n-ell-1 with j = k+ell is j in ell..=n-1; empty when ell = n.
    let second = if ell == n {
        binomial(n, ell + 1)? == 0
    } else {
        hockey_stick(ell, n - 1)? == binomial(n, ell + 1)?
    };
    Ok(first && second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{PMF_SUM_TOL, URN_EXPECTATION_TOL};
    use approx::assert_abs_diff_eq;

    #[test]
    fn urn_construction_bounds() {
        assert!(UrnModel::new(10, 1).is_ok());
        assert!(UrnModel::new(10, 10).is_ok());
        assert!(matches!(
            UrnModel::new(10, 0),
            Err(ClassicalError::InvalidUrn { .. })
        ));
        assert!(matches!(
            UrnModel::new(10, 11),
            Err(ClassicalError::InvalidUrn { .. })
        ));
    }

    #[test]
    fn pmf_first_draw_and_support() {
        let urn = UrnModel::new(10, 3).unwrap();
        assert_abs_diff_eq!(pmf(&urn, 1).unwrap(), 0.3, epsilon = 1e-15);
        assert!(matches!(
            pmf(&urn, 0),
            Err(ClassicalError::OutsideSupport { .. })
        ));
        assert!(matches!(
            pmf(&urn, 9),
            Err(ClassicalError::OutsideSupport { .. })
        ));

        let total = kahan_sum((1..=8).map(|j| pmf(&urn, j).unwrap()));
        assert_abs_diff_eq!(total, 1.0, epsilon = PMF_SUM_TOL);

        let saturated = UrnModel::new(5, 5).unwrap();
        assert_abs_diff_eq!(pmf(&saturated, 1).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(saturated.support_size(), 1);
    }

    #[test]
    fn single_marked_ball_pmf_is_uniform() {
        // With one marked ball every draw position is equally likely.
        let urn = UrnModel::new(4, 1).unwrap();
        let dist = distribution(&urn).unwrap();
        for &p in dist.pmf() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(dist.mean(), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_expectation_examples() {
        assert_abs_diff_eq!(
            expectation(&UrnModel::new(4, 1).unwrap()),
            2.5,
            epsilon = 1e-15
        );
        for n in [2u64, 17, 100, 9999] {
            assert_abs_diff_eq!(
                expectation(&UrnModel::new(n, 1).unwrap()),
                (n as f64 + 1.0) / 2.0,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                expectation(&UrnModel::new(n, n).unwrap()),
                1.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn summation_route_matches_closed_form() {
        let cases = [(4u64, 1u64, 2.5), (200, 7, 25.125), (2, 1, 1.5)];
        for (n, ell, expected) in cases {
            let urn = UrnModel::new(n, ell).unwrap();
            assert_abs_diff_eq!(
                expectation_from_pmf(&urn).unwrap(),
                expected,
                epsilon = URN_EXPECTATION_TOL
            );
        }
    }

    #[test]
    fn summation_route_at_the_cap() {
        let urn = UrnModel::new(EXACT_SUMMATION_CAP, 3).unwrap();
        assert_abs_diff_eq!(
            expectation_from_pmf(&urn).unwrap(),
            expectation(&urn),
            epsilon = URN_EXPECTATION_TOL
        );
        assert!(matches!(
            expectation_from_pmf(&UrnModel::new(EXACT_SUMMATION_CAP + 1, 3).unwrap()),
            Err(ClassicalError::SummationCap { .. })
        ));
    }

    #[test]
    fn normalization_and_two_route_agreement_sweep() {
        // Full sweep over every urn with n <= 500.
        for n in 1..=500u64 {
            for ell in 1..=n {
                let urn = UrnModel::new(n, ell).unwrap();
                let dist = distribution(&urn).unwrap();
                let total = dist.total();
                assert!(
                    (total - 1.0).abs() < PMF_SUM_TOL,
                    "pmf sum off at n = {n}, ell = {ell}: {total}"
                );
                let gap = (dist.mean() - expectation(&urn)).abs();
                assert!(
                    gap < URN_EXPECTATION_TOL,
                    "expectation routes disagree at n = {n}, ell = {ell}: {gap}"
                );
            }
        }
    }

    #[test]
    fn monte_carlo_matches_expectation() {
        let urn = UrnModel::new(100, 9).unwrap();
        let estimate = monte_carlo(&urn, 1_000_000, 7).unwrap();
        assert!((estimate.mean - 10.1).abs() / 10.1 < 0.01);
        assert!((estimate.mean - 10.1).abs() < 4.0 * estimate.standard_error);
        assert_eq!(estimate.trials, 1_000_000);
    }

    #[test]
    fn monte_carlo_saturated_urn_is_exact() {
        let urn = UrnModel::new(37, 37).unwrap();
        let estimate = monte_carlo(&urn, 1000, 3).unwrap();
        assert_eq!(estimate.mean, 1.0);
        assert_eq!(estimate.standard_error, 0.0);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let urn = UrnModel::new(64, 4).unwrap();
        let a = monte_carlo(&urn, 20_000, 42).unwrap();
        let b = monte_carlo(&urn, 20_000, 42).unwrap();
        assert_eq!(a, b);

        let c = monte_carlo_sharded(&urn, 20_000, 42, 4).unwrap();
        let d = monte_carlo_sharded(&urn, 20_000, 42, 4).unwrap();
        assert_eq!(c, d);

        let other_seed = monte_carlo(&urn, 20_000, 43).unwrap();
        assert_ne!(a.mean, other_seed.mean);

        assert!(matches!(
            monte_carlo(&urn, 0, 1),
            Err(ClassicalError::ZeroTrials)
        ));
        assert!(matches!(
            monte_carlo_sharded(&urn, 100, 1, 0),
            Err(ClassicalError::ZeroShards)
        ));
    }

    #[test]
    fn monte_carlo_within_four_standard_errors() {
        for (n, ell) in [(50u64, 5u64), (128, 2), (30, 11)] {
            let urn = UrnModel::new(n, ell).unwrap();
            let estimate = monte_carlo(&urn, 200_000, 11).unwrap();
            let gap = (estimate.mean - expectation(&urn)).abs();
            assert!(
                gap < 4.0 * estimate.standard_error,
                "n = {n}, ell = {ell}: gap {gap}, se {}",
                estimate.standard_error
            );
        }
    }

    #[test]
    fn with_replacement_examples() {
        assert_abs_diff_eq!(
            with_replacement_expectation(&UrnModel::new(4, 1).unwrap()),
            4.0,
            epsilon = 1e-15
        );
        // Returning balls never helps: n/ell >= (n+1)/(ell+1).
        for n in 1..=60u64 {
            for ell in 1..=n {
                let urn = UrnModel::new(n, ell).unwrap();
                assert!(with_replacement_expectation(&urn) >= expectation(&urn) - 1e-12);
            }
        }
        let urn = UrnModel::new(20, 4).unwrap();
        let estimate = monte_carlo_with_replacement(&urn, 1_000_000, 5).unwrap();
        assert!((estimate.mean - 5.0).abs() / 5.0 < 0.01);
    }

    #[test]
    fn binomial_values_and_overflow() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(10, 0).unwrap(), 1);
        assert_eq!(binomial(10, 10).unwrap(), 1);
        assert_eq!(binomial(3, 7).unwrap(), 0);
        assert_eq!(binomial(61, 30).unwrap(), binomial(61, 31).unwrap());
        assert!(matches!(
            binomial(200, 100),
            Err(ClassicalError::Overflow { .. })
        ));
    }

    #[test]
    fn hockey_stick_examples() {
        assert_eq!(hockey_stick(2, 5).unwrap(), 20);
        assert_eq!(hockey_stick(2, 5).unwrap(), binomial(6, 3).unwrap());
        for k in 0..20u64 {
            assert_eq!(hockey_stick(0, k).unwrap(), (k + 1) as u128);
            assert_eq!(hockey_stick(k, k).unwrap(), 1);
        }
        assert!(matches!(
            hockey_stick(6, 5),
            Err(ClassicalError::InvalidRange { .. })
        ));
    }

    #[test]
    fn proof_identities_exact_to_sixty() {
        for n in 1..=60u64 {
            for ell in 1..=n {
                assert!(
                    proof_identities_hold(n, ell).unwrap(),
                    "identity failed at n = {n}, ell = {ell}"
                );
            }
        }
    }

    #[test]
    fn quadratic_speedup_ratio_grows() {
        // Classical-to-quantum cost ratio across a geometric sweep of n/ell;
        // the quantum iteration count grows like sqrt(n), the classical
        // expectation like n, so the ratio must climb.
        use crate::discrete::optimal_iterations;
        use crate::state::SearchInstance;

        let mut previous = 0.0;
        for n in [4u64, 16, 64, 256] {
            let urn = UrnModel::new(n, 1).unwrap();
            let instance = SearchInstance::first_marked(n as usize, 1).unwrap();
            let (m_star, _) = optimal_iterations(&instance);
            let ratio = expectation(&urn) / m_star.max(1) as f64;
            assert!(
                ratio > previous,
                "ratio failed to grow at n = {n}: {ratio} <= {previous}"
            );
            previous = ratio;
        }
    }
}
