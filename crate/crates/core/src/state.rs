//! State vectors, the marked set, the oracle, and the projection/lifting
//! machinery between the full n-dimensional space and the two-dimensional
//! invariant subspace spanned by the marked-uniform and unmarked-uniform
//! states.

use ndarray::Array1;
use num_complex::Complex64;
use thiserror::Error;

use crate::tolerances::{NORM_TOL, SUBSPACE_TOL};

/// Double-precision complex amplitude.
pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("database size must satisfy n >= 2, got n = {0}")]
    DimensionTooSmall(usize),
    #[error("marked count must satisfy 1 <= ell < n, got ell = {ell} with n = {n}")]
    MarkedCountOutOfRange { ell: usize, n: usize },
    #[error("marked index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("duplicate marked index {0}")]
    DuplicateIndex(usize),
    #[error("state vector must be empty of NaN/inf entries")]
    NonFiniteAmplitude,
    #[error("state norm is {norm}, more than {tol} away from 1")]
    NotNormalized { norm: f64, tol: f64 },
    #[error("state has dimension {got}, instance expects {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("reduced coefficients have squared norm {norm_sqr}, more than {tol} away from 1")]
    ReducedNotNormalized { norm_sqr: f64, tol: f64 },
}

/// A search problem: a database of size `n` with a distinguished set of
/// marked indices. Indices are 1-based in every interface.
///
/// The marked set is private; everything outside this type interrogates it
/// through [`SearchInstance::oracle_eval`], preserving the black-box oracle
/// discipline. The sole exception is [`SearchInstance::marked`], which exists
/// so configuration echoes can report what was searched for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInstance {
    n: usize,
    marked: Vec<usize>,
}

impl SearchInstance {
    /// Validates `1 <= ell < n`, distinctness, and the 1-based index range.
    pub fn new(n: usize, marked: &[usize]) -> Result<Self, StateError> {
        if n < 2 {
            return Err(StateError::DimensionTooSmall(n));
        }
        let ell = marked.len();
        if ell == 0 || ell >= n {
            return Err(StateError::MarkedCountOutOfRange { ell, n });
        }
        let mut sorted = marked.to_vec();
        sorted.sort_unstable();
        for window in sorted.windows(2) {
            if window[0] == window[1] {
                return Err(StateError::DuplicateIndex(window[0]));
            }
        }
        for &index in &sorted {
            if index == 0 || index > n {
                return Err(StateError::IndexOutOfRange { index, n });
            }
        }
        Ok(Self { n, marked: sorted })
    }

    /// Instance marking the first `ell` items, `{1, ..., ell}`.
    pub fn first_marked(n: usize, ell: usize) -> Result<Self, StateError> {
        if n < 2 {
            return Err(StateError::DimensionTooSmall(n));
        }
        if ell == 0 || ell >= n {
            return Err(StateError::MarkedCountOutOfRange { ell, n });
        }
        Ok(Self {
            n,
            marked: (1..=ell).collect(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    /// Marked fraction ell/n, the squared overlap between the uniform start
    /// and the marked-uniform state.
    pub fn marked_fraction(&self) -> f64 {
        self.marked.len() as f64 / self.n as f64
    }

    /// Sorted marked indices (1-based). For configuration echoes only; the
    /// search operations themselves go through `oracle_eval`.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// The oracle: answers whether item `j` (1-based) is marked.
    pub fn oracle_eval(&self, j: usize) -> Result<bool, StateError> {
        if j == 0 || j > self.n {
            return Err(StateError::IndexOutOfRange {
                index: j,
                n: self.n,
            });
        }
        Ok(self.marked.binary_search(&j).is_ok())
    }

    /// Marked-membership mask over 1..=n, built by querying the oracle once
    /// per index. Convenience for operations that sweep the whole database.
    pub(crate) fn oracle_mask(&self) -> Vec<bool> {
        (1..=self.n)
            .map(|j| self.oracle_eval(j).expect("index within 1..=n"))
            .collect()
    }
}

/// A normalized state vector. Entry `k` (0-based) is the amplitude on basis
/// item `k + 1` in the 1-based index convention.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Array1<C64>,
}

impl QuantumState {
    /// Accepts a vector whose norm is within [`NORM_TOL`] of 1.
    pub fn new(amplitudes: Array1<C64>) -> Result<Self, StateError> {
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(StateError::NonFiniteAmplitude);
        }
        let norm = l2_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Internal constructor for outputs of norm-preserving maps.
    pub(crate) fn from_normalized(amplitudes: Array1<C64>) -> Self {
        debug_assert!((l2_norm(&amplitudes) - 1.0).abs() < 1e-9);
        Self { amplitudes }
    }

    /// Basis state concentrated on item `index` (1-based).
    pub fn basis_state(n: usize, index: usize) -> Result<Self, StateError> {
        if index == 0 || index > n {
            return Err(StateError::IndexOutOfRange { index, n });
        }
        let mut amplitudes = Array1::zeros(n);
        amplitudes[index - 1] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &QuantumState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }
}

pub(crate) fn l2_norm(v: &Array1<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Coefficients of a state on the orthonormal pair {marked-uniform,
/// unmarked-uniform}. `a` multiplies the marked-uniform state, so `|a|^2` is
/// the success probability; `b` multiplies the unmarked-uniform state.
///
/// States evolved inside the invariant subspace satisfy
/// `|a|^2 + |b|^2 = 1` within [`NORM_TOL`]; [`reduce`] of an arbitrary state
/// reports whatever projection it finds, together with the leftover residual,
/// so the pair is only normalized when the residual vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub a: C64,
    pub b: C64,
}

impl ReducedState {
    pub fn new(a: C64, b: C64) -> Self {
        Self { a, b }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    /// Probability of observing a marked item, `|a|^2`.
    pub fn success_probability(&self) -> f64 {
        self.a.norm_sqr()
    }
}

/// The uniform superposition: every amplitude exactly `1/sqrt(n)`.
pub fn uniform_superposition(instance: &SearchInstance) -> QuantumState {
    let n = instance.dimension();
    let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    QuantumState::from_normalized(Array1::from_elem(n, amp))
}

/// Equal-weight superposition of the marked items, amplitude `1/sqrt(ell)`
/// on each. One of the two basis vectors of the invariant subspace.
pub fn marked_uniform(instance: &SearchInstance) -> QuantumState {
    let n = instance.dimension();
    let amp = C64::new(1.0 / (instance.marked_count() as f64).sqrt(), 0.0);
    let mask = instance.oracle_mask();
    let amplitudes = Array1::from_iter((0..n).map(|k| if mask[k] { amp } else { C64::default() }));
    QuantumState::from_normalized(amplitudes)
}

/// Equal-weight superposition of the unmarked items, amplitude
/// `1/sqrt(n - ell)` on each: the normalized component of the uniform start
/// orthogonal to the marked span. The positive real combination is chosen;
/// no observable depends on this phase.
pub fn unmarked_uniform(instance: &SearchInstance) -> QuantumState {
    let n = instance.dimension();
    let unmarked = n - instance.marked_count();
    let amp = C64::new(1.0 / (unmarked as f64).sqrt(), 0.0);
    let mask = instance.oracle_mask();
    let amplitudes = Array1::from_iter((0..n).map(|k| if mask[k] { C64::default() } else { amp }));
    QuantumState::from_normalized(amplitudes)
}

/// Projects a state onto the invariant subspace.
///
/// Returns the coefficient pair on {marked-uniform, unmarked-uniform} and the
/// norm of the component outside their span. States generated by this
/// toolkit from the uniform start stay within [`SUBSPACE_TOL`] of the span.
pub fn reduce(
    state: &QuantumState,
    instance: &SearchInstance,
) -> Result<(ReducedState, f64), StateError> {
    check_dimension(state, instance)?;
    let mask = instance.oracle_mask();
    let ell = instance.marked_count();
    let n = instance.dimension();

    let mut marked_sum = C64::default();
    let mut unmarked_sum = C64::default();
    for (k, amp) in state.amplitudes().iter().enumerate() {
        if mask[k] {
            marked_sum += amp;
        } else {
            unmarked_sum += amp;
        }
    }
    let a = marked_sum / (ell as f64).sqrt();
    let b = unmarked_sum / ((n - ell) as f64).sqrt();

    // Norm of the leftover component, taken pointwise: subtracting |a|^2 and
    // |b|^2 from the total norm instead would lose half the significant
    // digits to cancellation.
    let marked_component = a / (ell as f64).sqrt();
    let unmarked_component = b / ((n - ell) as f64).sqrt();
    let residual_sqr: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let span = if mask[k] {
                marked_component
            } else {
                unmarked_component
            };
            (z - span).norm_sqr()
        })
        .sum();
    Ok((ReducedState::new(a, b), residual_sqr.sqrt()))
}

/// Rebuilds the full state `a * marked_uniform + b * unmarked_uniform`.
/// Inverse of [`reduce`] on the invariant subspace.
pub fn lift(reduced: &ReducedState, instance: &SearchInstance) -> Result<QuantumState, StateError> {
    let norm_sqr = reduced.norm_sqr();
    if (norm_sqr - 1.0).abs() > SUBSPACE_TOL {
        return Err(StateError::ReducedNotNormalized {
            norm_sqr,
            tol: SUBSPACE_TOL,
        });
    }
    let n = instance.dimension();
    let ell = instance.marked_count();
    let marked_amp = reduced.a / (ell as f64).sqrt();
    let unmarked_amp = reduced.b / ((n - ell) as f64).sqrt();
    let mask = instance.oracle_mask();
    let amplitudes =
        Array1::from_iter((0..n).map(|k| if mask[k] { marked_amp } else { unmarked_amp }));
    Ok(QuantumState::from_normalized(amplitudes))
}

/// Probability that measuring the state yields a marked item: the summed
/// squared amplitude over the marked set.
pub fn success_probability(
    state: &QuantumState,
    instance: &SearchInstance,
) -> Result<f64, StateError> {
    check_dimension(state, instance)?;
    let mask = instance.oracle_mask();
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(k, _)| mask[*k])
        .map(|(_, z)| z.norm_sqr())
        .sum())
}

fn check_dimension(state: &QuantumState, instance: &SearchInstance) -> Result<(), StateError> {
    if state.dimension() != instance.dimension() {
        return Err(StateError::DimensionMismatch {
            got: state.dimension(),
            expected: instance.dimension(),
        });
    }
    Ok(())
}
