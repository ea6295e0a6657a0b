//! Matrix exponential for small dense complex matrices via Taylor series
//! with scaling and squaring.
//!
//! The exponentials needed here act on reduced blocks of dimension ell + 1,
//! so a plain truncated Taylor sum after scaling the 1-norm below 1/2 is both
//! simple and accurate: the k-th scaled term is bounded by (1/2)^k / k!,
//! which drops under 1e-19 by k = 17.

use ndarray::Array2;
use num_complex::Complex64;

/// Terms beyond this never matter at the 0.5 scaling threshold.
const MAX_TERMS: usize = 40;

/// Stop once a term's 1-norm falls below this times the running sum's.
const TERM_TOL: f64 = 1e-19;

/// Maximum absolute column sum.
pub fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for col in a.columns() {
        let sum: f64 = col.iter().map(|z| z.norm()).sum();
        max = max.max(sum);
    }
    max
}

/// Computes `exp(a)` for a square complex matrix.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let dim = a.nrows();
    assert_eq!(dim, a.ncols(), "expm requires a square matrix");

    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let factor = Complex64::new(1.0 / 2f64.powi(squarings as i32), 0.0);
    let scaled = a.mapv(|z| z * factor);

    let mut result = Array2::eye(dim);
    let mut term: Array2<Complex64> = Array2::eye(dim);
    for k in 1..=MAX_TERMS {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        result += &term;
        if one_norm(&term) < TERM_TOL * one_norm(&result) {
            break;
        }
    }

    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}
