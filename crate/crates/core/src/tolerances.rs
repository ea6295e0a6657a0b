//! Centralized numerical tolerances and size caps.
//!
//! All quantities in this crate are O(1) angles and amplitudes handled in
//! double precision, so roundoff across at most 2^14 dimensions and 10^4
//! sequential operations stays orders of magnitude below these gates. Each
//! constant is used by at least one constructor, invariant check, or test;
//! keeping them in one place makes the acceptance thresholds auditable.

/// Unit-norm acceptance for full state vectors and reduced coefficient pairs.
pub const NORM_TOL: f64 = 1e-12;

/// Orthonormality of the derived basis pair (marked-uniform, unmarked-uniform).
pub const ORTHO_TOL: f64 = 1e-14;

/// Residual allowed when a toolkit-generated state is projected onto the
/// two-dimensional invariant subspace, and for round-trip reduce/lift checks.
pub const SUBSPACE_TOL: f64 = 1e-12;

/// Agreement between the closed-form success curve and full-dimensional
/// continuous-time simulation.
pub const CONTINUOUS_CURVE_TOL: f64 = 1e-8;

/// Agreement between the closed-form success probability and full-dimensional
/// discrete iteration.
pub const DISCRETE_CURVE_TOL: f64 = 1e-9;

/// Entrywise agreement for small dense operators rebuilt two independent ways.
pub const MATRIX_ENTRY_TOL: f64 = 1e-12;

/// Deviation from certainty allowed at the continuous optimal measurement
/// time.
pub const OPTIMAL_PEAK_TOL: f64 = 1e-9;

/// Norm drift allowed over a long unitary run (10^4 iterations).
pub const LONG_RUN_NORM_TOL: f64 = 1e-9;

/// Norm drift allowed for continuous evolution out to ten optimal times.
pub const CONTINUOUS_NORM_TOL: f64 = 1e-10;

/// Residual of the stationarity equation at a reported stopping root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;

/// Certificate tolerance for the exponential form of the stationarity
/// condition.
pub const ROOT_CERTIFICATE_TOL: f64 = 1e-9;

/// Convergence gate for fixed-point iteration on the stopping root.
pub const FIXED_POINT_TOL: f64 = 1e-12;

/// Slack when asserting the two-sided energy-time sandwich inequality.
pub const SANDWICH_TOL: f64 = 1e-8;

/// Two-route agreement for urn expectations (closed form vs pmf summation).
pub const URN_EXPECTATION_TOL: f64 = 1e-10;

/// Probability-mass normalization for the urn distribution.
pub const PMF_SUM_TOL: f64 = 1e-12;

/// Largest dimension accepted by full-state workloads (vector storage).
pub const MAX_FULL_DIM: usize = 1 << 14;

/// Largest dimension accepted by dense operator construction (n x n storage).
pub const MAX_DENSE_DIM: usize = 1 << 10;
