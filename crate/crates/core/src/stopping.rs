//! Optimal restart schedule for the amplification iteration.
//!
//! Running j steps and measuring succeeds with probability
//! `p(j) = cos^2(j*theta - alpha)`; restarting on failure costs
//! `E(j) = j / cos^2(j*theta - alpha)` expected steps in total. The
//! stationarity condition `2*j*theta = -cot(j*theta - alpha)` is solved by a
//! first-order closed form, refined by fixed-point iteration, and always
//! cross-checked against an exhaustive integer scan.

use thiserror::Error;

use crate::discrete::GroverAngles;
use crate::state::C64;
use crate::tolerances::{FIXED_POINT_TOL, ROOT_RESIDUAL_TOL};

#[derive(Debug, Error)]
pub enum StoppingError {
    #[error("theta must be positive and finite, got {0}")]
    InvalidTheta(f64),
    #[error("alpha must lie in (0, pi/2), got {0}")]
    InvalidAlpha(f64),
    #[error("iteration count must be positive and finite, got {0}")]
    InvalidIterate(f64),
    #[error("success probability vanishes at j = {j} (cos = {cosine:.3e}); expected cost is unbounded there")]
    InfiniteCost { j: f64, cosine: f64 },
    #[error(
        "fixed-point iteration did not converge within {max_iter} steps; history tail {tail:?}"
    )]
    Divergence { max_iter: usize, tail: Vec<f64> },
    #[error("fixed-point iterate left the positive domain at step {step}; history tail {tail:?}")]
    LeftDomain { step: usize, tail: Vec<f64> },
    #[error(
        "converged iterate j = {j} fails the stationarity residual: {residual:.3e} >= {tol:.0e}"
    )]
    ResidualTooLarge { j: f64, residual: f64, tol: f64 },
    #[error("no integer in the window [1, {window}] has finite expected cost")]
    EmptyWindow { window: u64 },
    #[error("scan window [1, {window}] exceeds the cap {cap}; theta is too small to scan")]
    WindowTooLarge { window: u64, cap: u64 },
}

/// Largest integer window the exhaustive scan will walk. The residual
/// tolerance is only meaningful for theta >= 1e-6, whose windows stay well
/// below this.
const MAX_WINDOW: u64 = 100_000_000;

/// A restart problem: rotation angle per step and initial angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingProblem {
    theta: f64,
    alpha: f64,
}

impl StoppingProblem {
    pub fn new(theta: f64, alpha: f64) -> Result<Self, StoppingError> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(StoppingError::InvalidTheta(theta));
        }
        if !(alpha.is_finite() && alpha > 0.0 && alpha < std::f64::consts::FRAC_PI_2) {
            return Err(StoppingError::InvalidAlpha(alpha));
        }
        Ok(Self { theta, alpha })
    }

    /// Problem induced by a search instance's step angles.
    pub fn from_angles(angles: &GroverAngles) -> Result<Self, StoppingError> {
        Self::new(angles.theta(), angles.alpha())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Exhaustive-scan horizon: past `j*theta = alpha` the per-run success
    /// probability has passed its first maximum.
    pub fn window(&self) -> u64 {
        (self.alpha / self.theta).ceil() as u64
    }
}

/// Solution report: the real stationary point when the analytic route
/// converged, the first-order seed when it exists, and the integer optimum
/// from the exhaustive scan (always present).
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingSolution {
    pub j_real: Option<f64>,
    pub j_first_order: Option<f64>,
    pub j_int: u64,
    pub e_at_j_int: f64,
    pub residual: Option<f64>,
}

/// Expected total iterations when restarting after j steps per run:
/// `j / cos^2(j*theta - alpha)`.
pub fn expected_cost(j: f64, problem: &StoppingProblem) -> Result<f64, StoppingError> {
    if !(j.is_finite() && j > 0.0) {
        return Err(StoppingError::InvalidIterate(j));
    }
    let cosine = (j * problem.theta - problem.alpha).cos();
    if cosine.abs() < 1e-15 {
        return Err(StoppingError::InfiniteCost { j, cosine });
    }
    Ok(j / (cosine * cosine))
}

/// First-order stationary point `(alpha + sqrt(alpha^2 - 2)) / (2*theta)`,
/// or `None` when the discriminant is negative and no real first-order
/// solution exists.
pub fn solve_first_order(problem: &StoppingProblem) -> Option<f64> {
    let disc = problem.alpha * problem.alpha - 2.0;
    if disc < 0.0 {
        return None;
    }
    Some((problem.alpha + disc.sqrt()) / (2.0 * problem.theta))
}

/// Stationarity defect `|2*j*theta + cot(j*theta - alpha)|`.
pub fn stationarity_residual(j: f64, problem: &StoppingProblem) -> f64 {
    let phase = j * problem.theta - problem.alpha;
    (2.0 * j * problem.theta + phase.cos() / phase.sin()).abs()
}

/// Exponential-form certificate of the stationarity condition:
/// `|e^{2i(theta*j - alpha)} - (2i*theta*j + 1) / (2i*theta*j - 1)|`,
/// which vanishes exactly at a root.
pub fn root_certificate(j: f64, problem: &StoppingProblem) -> f64 {
    let phase = 2.0 * (problem.theta * j - problem.alpha);
    let lhs = C64::new(0.0, phase).exp();
    let two_i_tj = C64::new(0.0, 2.0 * problem.theta * j);
    let one = C64::new(1.0, 0.0);
    let rhs = (two_i_tj + one) / (two_i_tj - one);
    (lhs - rhs).norm()
}

/// Refines the stationary point by iterating
/// `j <- (alpha - atan(1 / (2*theta*j))) / theta` from the first-order seed
/// (or `alpha / (2*theta)` when no real seed exists), then cross-checks with
/// the exhaustive integer scan.
pub fn solve_fixed_point(
    problem: &StoppingProblem,
    tol: f64,
    max_iter: usize,
) -> Result<StoppingSolution, StoppingError> {
    let j_first_order = solve_first_order(problem);
    let seed = j_first_order.unwrap_or(problem.alpha / (2.0 * problem.theta));

    let mut history = Vec::with_capacity(max_iter.min(64));
    let mut j = seed;
    history.push(j);
    let mut converged = false;
    for step in 0..max_iter {
        let next = (problem.alpha - (1.0 / (2.0 * problem.theta * j)).atan()) / problem.theta;
        if !next.is_finite() || next <= 0.0 {
            history.push(next);
            return Err(StoppingError::LeftDomain {
                step,
                tail: history_tail(&history),
            });
        }
        let delta = (next - j).abs();
        j = next;
        history.push(j);
        if delta < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(StoppingError::Divergence {
            max_iter,
            tail: history_tail(&history),
        });
    }

    let residual = stationarity_residual(j, problem);
    if residual >= ROOT_RESIDUAL_TOL {
        return Err(StoppingError::ResidualTooLarge {
            j,
            residual,
            tol: ROOT_RESIDUAL_TOL,
        });
    }

    let (j_int, e_at_j_int) = brute_force_optimum(problem)?;
    Ok(StoppingSolution {
        j_real: Some(j),
        j_first_order,
        j_int,
        e_at_j_int,
        residual: Some(residual),
    })
}

fn history_tail(history: &[f64]) -> Vec<f64> {
    let keep = 8.min(history.len());
    history[history.len() - keep..].to_vec()
}

/// Exact integer argmin of the expected cost over `[1, ceil(alpha/theta)]`.
/// Makes no unimodality assumption: every integer in the window is visited.
pub fn brute_force_optimum(problem: &StoppingProblem) -> Result<(u64, f64), StoppingError> {
    let window = problem.window();
    if window < 1 {
        return Err(StoppingError::EmptyWindow { window });
    }
    if window > MAX_WINDOW {
        return Err(StoppingError::WindowTooLarge {
            window,
            cap: MAX_WINDOW,
        });
    }
    let mut best: Option<(u64, f64)> = None;
    for j in 1..=window {
        let cost = match expected_cost(j as f64, problem) {
            Ok(value) => value,
            Err(StoppingError::InfiniteCost { .. }) => continue,
            Err(other) => return Err(other),
        };
        if best.is_none_or(|(_, e)| cost < e) {
            best = Some((j, cost));
        }
    }
    best.ok_or(StoppingError::EmptyWindow { window })
}

/// Full pipeline: first-order seed, fixed-point refinement, exhaustive scan.
/// When the analytic route diverges or fails its residual gate, the scan
/// alone answers and `j_real`/`residual` are absent.
pub fn solve(problem: &StoppingProblem) -> Result<StoppingSolution, StoppingError> {
    match solve_fixed_point(problem, FIXED_POINT_TOL, 200) {
        Ok(solution) => Ok(solution),
        Err(
            StoppingError::Divergence { .. }
            | StoppingError::LeftDomain { .. }
            | StoppingError::ResidualTooLarge { .. },
        ) => {
            let (j_int, e_at_j_int) = brute_force_optimum(problem)?;
            Ok(StoppingSolution {
                j_real: None,
                j_first_order: solve_first_order(problem),
                j_int,
                e_at_j_int,
                residual: None,
            })
        }
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::SearchInstance;
    use approx::assert_abs_diff_eq;

    /// Angles of a search instance with marked fraction matching the given
    /// step angle: theta and alpha move together as the database grows.
    fn coupled_problem(theta: f64) -> StoppingProblem {
        let y = (theta / 2.0).sin();
        let alpha = y.acos();
        StoppingProblem::new(theta, alpha).unwrap()
    }

    #[test]
    fn construction_validates_angles() {
        assert!(StoppingProblem::new(0.1, 1.0).is_ok());
        assert!(matches!(
            StoppingProblem::new(0.0, 1.0),
            Err(StoppingError::InvalidTheta(_))
        ));
        assert!(matches!(
            StoppingProblem::new(-0.5, 1.0),
            Err(StoppingError::InvalidTheta(_))
        ));
        assert!(matches!(
            StoppingProblem::new(0.1, 0.0),
            Err(StoppingError::InvalidAlpha(_))
        ));
        assert!(matches!(
            StoppingProblem::new(0.1, std::f64::consts::FRAC_PI_2),
            Err(StoppingError::InvalidAlpha(_))
        ));
    }

    #[test]
    fn expected_cost_equals_j_at_certain_success() {
        // j*theta = alpha makes each run succeed with probability one.
        let problem = StoppingProblem::new(0.1, 1.0).unwrap();
        assert_abs_diff_eq!(
            expected_cost(10.0, &problem).unwrap(),
            10.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn geometric_trials_identity() {
        // Restarting with fixed success probability p takes 1/p runs on
        // average; the truncated series at K = 200 is converged to 1e-10.
        let p: f64 = 0.25;
        let mut expectation = 0.0;
        for k in 1..=200u32 {
            expectation += k as f64 * p * (1.0 - p).powi(k as i32 - 1);
        }
        assert_abs_diff_eq!(expectation, 1.0 / p, epsilon = 1e-10);
    }

    #[test]
    fn expected_cost_is_unimodal_around_the_optimum() {
        let problem = StoppingProblem::new(0.002, 1.5698).unwrap();
        let at_500 = expected_cost(500.0, &problem).unwrap();
        assert!(at_500.is_finite() && at_500 > 0.0);

        let (j_int, _) = brute_force_optimum(&problem).unwrap();
        let window = problem.window();
        let mut previous = expected_cost(1.0, &problem).unwrap();
        for j in 2..=window {
            let cost = expected_cost(j as f64, &problem).unwrap();
            if j <= j_int {
                assert!(cost <= previous, "cost rose before the optimum at j = {j}");
            } else {
                assert!(cost >= previous, "cost fell past the optimum at j = {j}");
            }
            previous = cost;
        }
    }

    #[test]
    fn expected_cost_rejects_vanishing_success() {
        // alpha - theta = -pi/2 up to roundoff: the first run never succeeds.
        let problem = StoppingProblem::new(std::f64::consts::FRAC_PI_2 + 0.5, 0.5).unwrap();
        assert!(matches!(
            expected_cost(1.0, &problem),
            Err(StoppingError::InfiniteCost { .. })
        ));
    }

    #[test]
    fn first_order_examples() {
        let problem = StoppingProblem::new(0.002, 1.5698).unwrap();
        let j1 = solve_first_order(&problem).unwrap();
        assert_abs_diff_eq!(j1, 562.794, epsilon = 1e-2);

        let degenerate = StoppingProblem::new(0.5, 1.0).unwrap();
        assert!(solve_first_order(&degenerate).is_none());

        // At the critical alpha the discriminant is zero only up to
        // roundoff, so the seed carries a sqrt(epsilon)-sized artifact.
        let critical = StoppingProblem::new(0.01, 2f64.sqrt()).unwrap();
        assert_abs_diff_eq!(
            solve_first_order(&critical).unwrap(),
            2f64.sqrt() / 0.02,
            epsilon = 1e-5
        );
    }

    #[test]
    fn fixed_point_converges_with_small_residual() {
        let problem = StoppingProblem::new(0.002, 1.5698).unwrap();
        let solution = solve_fixed_point(&problem, 1e-12, 200).unwrap();
        let j_real = solution.j_real.unwrap();
        let residual = solution.residual.unwrap();
        assert!(residual < 1e-10, "residual {residual}");

        let j1 = solution.j_first_order.unwrap();
        assert!((j_real - j1).abs() / j_real < 0.05);

        // The integer optimum brackets the real root.
        assert!((solution.j_int as f64 - j_real.round()).abs() <= 1.0);
        let floor_cost = expected_cost(j_real.floor(), &problem).unwrap();
        let ceil_cost = expected_cost(j_real.ceil(), &problem).unwrap();
        assert!(solution.e_at_j_int <= floor_cost + 1e-9);
        assert!(solution.e_at_j_int <= ceil_cost + 1e-9);
    }

    #[test]
    fn root_certificate_holds_at_converged_roots() {
        for theta in [0.02, 0.002, 0.0002] {
            let problem = coupled_problem(theta);
            let solution = solve_fixed_point(&problem, 1e-12, 200).unwrap();
            let j_real = solution.j_real.unwrap();
            let certificate = root_certificate(j_real, &problem);
            assert!(
                certificate < 1e-9,
                "theta = {theta}: certificate {certificate}"
            );
        }
    }

    #[test]
    fn arctangent_series_agreement_at_root() {
        // The fixed-point map replaces atan(x) by x (one term) or x - x^3/3
        // (two terms) at x = 1/(2*theta*j). Alternating-series bounds give
        // |atan x - x| <= x^3/3 and |atan x - (x - x^3/3)| <= x^5/5 for
        // 0 < x < 1; the root sits near x ~ 0.43 where both apply.
        for theta in [0.02, 0.002, 0.0002] {
            let problem = coupled_problem(theta);
            let solution = solve_fixed_point(&problem, 1e-12, 200).unwrap();
            let x = 1.0 / (2.0 * theta * solution.j_real.unwrap());
            assert!(x < 1.0);
            let atan = x.atan();
            assert!((atan - x).abs() <= x.powi(3) / 3.0 * (1.0 + 1e-12));
            assert!((atan - (x - x.powi(3) / 3.0)).abs() <= x.powi(5) / 5.0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn first_order_seed_improves_as_theta_shrinks() {
        // theta and alpha are coupled through the marked fraction; the seed's
        // relative error shrinks with the fraction.
        let mut errors = Vec::new();
        for theta in [0.02, 0.002, 0.0002] {
            let problem = coupled_problem(theta);
            let solution = solve_fixed_point(&problem, 1e-13, 200).unwrap();
            let j_real = solution.j_real.unwrap();
            let j1 = solution.j_first_order.unwrap();
            errors.push((j1 - j_real).abs() / j_real);
        }
        assert!(
            errors[0] > errors[1] && errors[1] > errors[2],
            "relative errors {errors:?}"
        );
    }

    #[test]
    fn brute_force_window_edge_cases() {
        // alpha/theta <= 1 gives the single-candidate window.
        let problem = StoppingProblem::new(2.0, 1.0).unwrap();
        let (j_int, cost) = brute_force_optimum(&problem).unwrap();
        assert_eq!(j_int, 1);
        assert!(cost > 0.0);

        let tiny = StoppingProblem::new(1e-12, 1.5).unwrap();
        assert!(matches!(
            brute_force_optimum(&tiny),
            Err(StoppingError::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn degenerate_problem_falls_back_to_scan() {
        // theta = 0.5, alpha = 1.0: no first-order seed, and the fixed-point
        // map leaves the positive axis. The pipeline must still answer.
        let problem = StoppingProblem::new(0.5, 1.0).unwrap();
        assert!(matches!(
            solve_fixed_point(&problem, 1e-12, 200),
            Err(StoppingError::LeftDomain { .. } | StoppingError::Divergence { .. })
        ));

        let solution = solve(&problem).unwrap();
        assert!(solution.j_real.is_none());
        assert!(solution.residual.is_none());
        assert_eq!(solution.j_int, 1);

        // Exhaustive confirmation over a wider range than the window.
        let mut best = (0u64, f64::INFINITY);
        for j in 1..=4u64 {
            if let Ok(cost) = expected_cost(j as f64, &problem) {
                if cost < best.1 {
                    best = (j, cost);
                }
            }
        }
        assert_eq!(best.0, solution.j_int);
        assert_abs_diff_eq!(best.1, solution.e_at_j_int, epsilon = 1e-12);
    }

    #[test]
    fn pipeline_solves_search_instance_angles() {
        let instance = SearchInstance::first_marked(1_000_000, 1).unwrap();
        let angles = GroverAngles::new(&instance);
        let problem = StoppingProblem::from_angles(&angles).unwrap();
        let solution = solve(&problem).unwrap();
        let j_real = solution.j_real.expect("fixed point converges here");
        assert!(solution.residual.unwrap() < 1e-10);
        assert!((solution.j_int as f64 - j_real.round()).abs() <= 1.0);
        // Scaling sanity: the optimum costs fewer expected iterations than
        // always running to the probability peak.
        let (m_star, p_star) = crate::discrete::optimal_iterations(&instance);
        assert!(solution.e_at_j_int <= m_star as f64 / p_star + 1.0);
    }
}
