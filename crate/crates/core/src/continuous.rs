//! Continuous-time search dynamics.
//!
//! The Hamiltonian is `H = E * sum_{j marked} |w_j><w_j| + E |s><s|` where
//! `|s>` is the start state. `H` vanishes outside the span of the marked
//! items and the start, so the propagator `exp(-iHt)` is computed exactly on
//! that (ell+1)-dimensional block and passes the orthogonal complement
//! through untouched. This makes full-dimension evolution tractable up to
//! the vector cap while remaining an independent check on the closed forms.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::expm::expm;
use crate::state::{
    inner, l2_norm, uniform_superposition, QuantumState, ReducedState, SearchInstance, StateError,
    C64,
};
use crate::tolerances::{MAX_DENSE_DIM, MAX_FULL_DIM, SANDWICH_TOL};

#[derive(Debug, Error)]
pub enum ContinuousError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("energy must be positive and finite, got {0}")]
    InvalidEnergy(f64),
    #[error("time must be nonnegative and finite, got {0}")]
    InvalidTime(f64),
    #[error("start state lies in the span of the marked items (orthogonal weight {c_r_sqr:.3e}); the reduced block is degenerate")]
    DegenerateStart { c_r_sqr: f64 },
    #[error("operation requires the uniform superposition start")]
    NonUniformStart,
    #[error("dimension {n} exceeds the full-evolution cap {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("dense operator construction supports n <= {cap}, got n = {n}")]
    DenseCap { n: usize, cap: usize },
    #[error("block partition requires 1 <= ell <= n, got ell = {ell}, n = {n}")]
    PartitionRange { ell: usize, n: usize },
    #[error("block partition requires ell to divide n, got n = {n}, ell = {ell}")]
    PartitionMismatch { n: usize, ell: usize },
}

/// Orthogonal weight below which the reduced block is treated as degenerate:
/// the start is numerically inside the marked span and no meaningful
/// remainder direction exists.
const DEGENERATE_C_R_SQR: f64 = 1e-12;

/// A search Hamiltonian: instance, coupling energy, and start state.
///
/// Built with [`HamiltonianSpec::new`] the start is the uniform
/// superposition, which every closed-form operation requires;
/// [`HamiltonianSpec::with_start`] admits any normalized start outside the
/// marked span for the general reduced-matrix machinery.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    instance: SearchInstance,
    energy: f64,
    start: QuantumState,
    uniform_start: bool,
}

impl HamiltonianSpec {
    pub fn new(instance: SearchInstance, energy: f64) -> Result<Self, ContinuousError> {
        check_energy(energy)?;
        let start = uniform_superposition(&instance);
        Ok(Self {
            instance,
            energy,
            start,
            uniform_start: true,
        })
    }

    /// Spec with an arbitrary normalized start. Rejects starts entirely
    /// inside the marked span, for which no search dynamics exist.
    pub fn with_start(
        instance: SearchInstance,
        energy: f64,
        start: QuantumState,
    ) -> Result<Self, ContinuousError> {
        check_energy(energy)?;
        if start.dimension() != instance.dimension() {
            return Err(ContinuousError::State(StateError::DimensionMismatch {
                got: start.dimension(),
                expected: instance.dimension(),
            }));
        }
        let mask = instance.oracle_mask();
        let marked_weight: f64 = start
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(k, _)| mask[*k])
            .map(|(_, z)| z.norm_sqr())
            .sum();
        let c_r_sqr = 1.0 - marked_weight;
        if c_r_sqr <= 0.0 {
            return Err(ContinuousError::DegenerateStart { c_r_sqr });
        }
        let uniform_start = is_uniform(&start);
        Ok(Self {
            instance,
            energy,
            start,
            uniform_start,
        })
    }

    pub fn instance(&self) -> &SearchInstance {
        &self.instance
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn start(&self) -> &QuantumState {
        &self.start
    }

    pub fn has_uniform_start(&self) -> bool {
        self.uniform_start
    }

    /// The overlap y = sqrt(ell/n) between the uniform start and the
    /// marked-uniform state.
    pub fn overlap(&self) -> f64 {
        self.instance.marked_fraction().sqrt()
    }

    fn require_uniform(&self) -> Result<(), ContinuousError> {
        if self.uniform_start {
            Ok(())
        } else {
            Err(ContinuousError::NonUniformStart)
        }
    }
}

fn check_energy(energy: f64) -> Result<(), ContinuousError> {
    if !(energy.is_finite() && energy > 0.0) {
        return Err(ContinuousError::InvalidEnergy(energy));
    }
    Ok(())
}

fn check_time(t: f64) -> Result<(), ContinuousError> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(ContinuousError::InvalidTime(t));
    }
    Ok(())
}

fn is_uniform(state: &QuantumState) -> bool {
    let expected = 1.0 / (state.dimension() as f64).sqrt();
    state
        .amplitudes()
        .iter()
        .all(|z| (z.re - expected).abs() < 1e-15 && z.im.abs() < 1e-15)
}

/// One point of an evolution: the time, the coordinates on the invariant
/// subspace, and the success probability `|a|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSample {
    pub t: f64,
    pub reduced: ReducedState,
    pub probability: f64,
}

/// The Hamiltonian restricted to the orthonormal basis
/// `{|w_1>, ..., |w_ell>, |r>}`, where `|r>` is the normalized remainder of
/// the start outside the marked span.
///
/// Entries: `E*(delta_ij + conj(x_i)*x_j)` on the marked block,
/// `E*conj(x_i)*c_r` in the last column, `E*x_j*c_r` in the last row, and
/// `E*c_r^2` in the corner, with `x_i = <s|w_i>` and
/// `c_r = sqrt(1 - sum |x_i|^2)`.
#[derive(Debug, Clone)]
pub struct GeneralReducedMatrix {
    entries: Array2<C64>,
    overlaps: Vec<C64>,
    c_r: f64,
}

impl GeneralReducedMatrix {
    /// Block dimension ell + 1.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    /// The start overlaps `x_i = <s|w_i>`, ordered by marked index.
    pub fn overlaps(&self) -> &[C64] {
        &self.overlaps
    }

    /// Weight of the start outside the marked span.
    pub fn c_r(&self) -> f64 {
        self.c_r
    }
}

/// Dense n x n matrix of the Hamiltonian, assembled through the oracle.
/// Verification aid for small n; the propagator never materializes this.
pub fn build_full_hamiltonian(spec: &HamiltonianSpec) -> Result<Array2<C64>, ContinuousError> {
    let n = spec.instance().dimension();
    if n > MAX_DENSE_DIM {
        return Err(ContinuousError::DenseCap {
            n,
            cap: MAX_DENSE_DIM,
        });
    }
    let e = spec.energy();
    let mask = spec.instance().oracle_mask();
    let s = spec.start().amplitudes();
    let mut h = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut entry = s[i] * s[j].conj() * e;
            if i == j && mask[i] {
                entry += C64::new(e, 0.0);
            }
            h[(i, j)] = entry;
        }
    }
    Ok(h)
}

/// Restriction of the Hamiltonian to `{|w_1>, ..., |w_ell>, |r>}` for an
/// arbitrary start. Errors when the start has no weight outside the marked
/// span, since `|r>` is then undefined.
pub fn general_reduced_matrix(
    spec: &HamiltonianSpec,
) -> Result<GeneralReducedMatrix, ContinuousError> {
    let mask = spec.instance().oracle_mask();
    let marked_positions: Vec<usize> = (0..mask.len()).filter(|&k| mask[k]).collect();
    let s = spec.start().amplitudes();
    // x_i = <s|w_i> = conj(amplitude of the start on the marked item).
    let overlaps: Vec<C64> = marked_positions.iter().map(|&k| s[k].conj()).collect();
    let c_r_sqr: f64 = 1.0 - overlaps.iter().map(|x| x.norm_sqr()).sum::<f64>();
    if c_r_sqr <= DEGENERATE_C_R_SQR {
        return Err(ContinuousError::DegenerateStart { c_r_sqr });
    }
    let c_r = c_r_sqr.sqrt();
    let e = spec.energy();

    let ell = overlaps.len();
    let dim = ell + 1;
    let mut entries = Array2::zeros((dim, dim));
    for i in 0..ell {
        for j in 0..ell {
            let mut entry = overlaps[i].conj() * overlaps[j] * e;
            if i == j {
                entry += C64::new(e, 0.0);
            }
            entries[(i, j)] = entry;
        }
    }
    for i in 0..ell {
        entries[(i, ell)] = overlaps[i].conj() * (e * c_r);
        entries[(ell, i)] = overlaps[i] * (e * c_r);
    }
    entries[(ell, ell)] = C64::new(e * c_r_sqr, 0.0);

    Ok(GeneralReducedMatrix {
        entries,
        overlaps,
        c_r,
    })
}

/// The 2x2 restriction to `{marked-uniform, unmarked-uniform}` for the
/// uniform start: `E * [[1 + l/n, sqrt(l(n-l))/n], [sqrt(l(n-l))/n, 1 - l/n]]`.
pub fn reduced_hamiltonian(spec: &HamiltonianSpec) -> Result<Array2<f64>, ContinuousError> {
    spec.require_uniform()?;
    let n = spec.instance().dimension() as f64;
    let ell = spec.instance().marked_count() as f64;
    let e = spec.energy();
    let off = (ell * (n - ell)).sqrt() / n;
    let mut h = Array2::zeros((2, 2));
    h[(0, 0)] = e * (1.0 + ell / n);
    h[(0, 1)] = e * off;
    h[(1, 0)] = e * off;
    h[(1, 1)] = e * (1.0 - ell / n);
    Ok(h)
}

/// Closed-form propagator `exp(-i H2 t)` on the invariant subspace:
/// `e^{-iEt} [[cos(Eyt) - i y sin(Eyt), -i c sin(Eyt)],
///            [-i c sin(Eyt), cos(Eyt) + i y sin(Eyt)]]`
/// with `y = sqrt(ell/n)` and `c = sqrt(1 - y^2)`.
pub fn reduced_propagator(spec: &HamiltonianSpec, t: f64) -> Result<Array2<C64>, ContinuousError> {
    spec.require_uniform()?;
    check_time(t)?;
    let e = spec.energy();
    let y = spec.overlap();
    let c = (1.0 - y * y).sqrt();
    let phase = (C64::new(0.0, -e * t)).exp();
    let (sin, cos) = (e * y * t).sin_cos();
    let i = C64::new(0.0, 1.0);
    let mut u = Array2::zeros((2, 2));
    u[(0, 0)] = phase * (cos - i * (y * sin));
    u[(0, 1)] = phase * (-i) * (c * sin);
    u[(1, 0)] = phase * (-i) * (c * sin);
    u[(1, 1)] = phase * (cos + i * (y * sin));
    Ok(u)
}

/// Closed-form state at time `t` from the uniform start, global phase
/// included: `a = e^{-iEt}(y cos(Eyt) - i sin(Eyt))`,
/// `b = e^{-iEt} sqrt(1-y^2) cos(Eyt)`.
pub fn evolve_reduced(spec: &HamiltonianSpec, t: f64) -> Result<ReducedState, ContinuousError> {
    spec.require_uniform()?;
    check_time(t)?;
    let e = spec.energy();
    let y = spec.overlap();
    let c = (1.0 - y * y).sqrt();
    let phase = (C64::new(0.0, -e * t)).exp();
    let (sin, cos) = (e * y * t).sin_cos();
    let a = phase * C64::new(y * cos, -sin);
    let b = phase * C64::new(c * cos, 0.0);
    Ok(ReducedState::new(a, b))
}

/// Exact propagator for a fixed Hamiltonian, applicable to arbitrary states.
///
/// Precomputes the orthonormal block basis (marked items plus the start's
/// normalized remainder) and the restricted Hamiltonian; `apply` exponentiates
/// the block and leaves the orthogonal complement fixed, which is exact
/// because the Hamiltonian annihilates that complement.
pub struct Propagator {
    n: usize,
    marked_positions: Vec<usize>,
    remainder: Option<Array1<C64>>,
    block: Array2<C64>,
}

impl Propagator {
    pub fn new(spec: &HamiltonianSpec) -> Result<Self, ContinuousError> {
        let n = spec.instance().dimension();
        if n > MAX_FULL_DIM {
            return Err(ContinuousError::DimensionCap {
                n,
                cap: MAX_FULL_DIM,
            });
        }
        let mask = spec.instance().oracle_mask();
        let marked_positions: Vec<usize> = (0..n).filter(|&k| mask[k]).collect();
        Self::from_parts(
            n,
            marked_positions,
            spec.start().amplitudes(),
            spec.energy(),
        )
    }

    /// Builds the block machinery directly from marked positions (0-based).
    /// Used internally for block partitions where the marked set may cover
    /// the whole database or be empty (pure driving dynamics).
    pub(crate) fn from_parts(
        n: usize,
        marked_positions: Vec<usize>,
        start: &Array1<C64>,
        energy: f64,
    ) -> Result<Self, ContinuousError> {
        check_energy(energy)?;
        let overlaps: Vec<C64> = marked_positions.iter().map(|&k| start[k].conj()).collect();
        let c_r_sqr: f64 = 1.0 - overlaps.iter().map(|x| x.norm_sqr()).sum::<f64>();

        let mut remainder_vec = start.clone();
        for &k in &marked_positions {
            remainder_vec[k] = C64::default();
        }
        let remainder_norm = l2_norm(&remainder_vec);

        // With the whole start inside the marked span the block is just the
        // marked projectors plus the start projector restricted to them.
        let remainder = if c_r_sqr <= DEGENERATE_C_R_SQR || remainder_norm == 0.0 {
            None
        } else {
            let scale = C64::new(1.0 / remainder_norm, 0.0);
            Some(remainder_vec.mapv(|z| z * scale))
        };

        let ell = marked_positions.len();
        let dim = ell + usize::from(remainder.is_some());
        let c_r = if remainder.is_some() {
            remainder_norm
        } else {
            0.0
        };
        let mut block = Array2::zeros((dim, dim));
        for i in 0..ell {
            for j in 0..ell {
                let mut entry = overlaps[i].conj() * overlaps[j] * energy;
                if i == j {
                    entry += C64::new(energy, 0.0);
                }
                block[(i, j)] = entry;
            }
        }
        if remainder.is_some() {
            for i in 0..ell {
                block[(i, ell)] = overlaps[i].conj() * (energy * c_r);
                block[(ell, i)] = overlaps[i] * (energy * c_r);
            }
            block[(ell, ell)] = C64::new(energy * c_r * c_r, 0.0);
        }

        Ok(Self {
            n,
            marked_positions,
            remainder,
            block,
        })
    }

    /// Applies `exp(-iHt)` to an arbitrary state of matching dimension.
    pub fn apply(&self, state: &QuantumState, t: f64) -> Result<QuantumState, ContinuousError> {
        if state.dimension() != self.n {
            return Err(ContinuousError::State(StateError::DimensionMismatch {
                got: state.dimension(),
                expected: self.n,
            }));
        }
        check_time(t)?;
        let amplitudes = self.apply_raw(state.amplitudes(), t);
        Ok(QuantumState::from_normalized(amplitudes))
    }

    pub(crate) fn apply_raw(&self, state: &Array1<C64>, t: f64) -> Array1<C64> {
        let ell = self.marked_positions.len();
        let dim = self.block.nrows();

        let mut coords = Array1::zeros(dim);
        for (i, &k) in self.marked_positions.iter().enumerate() {
            coords[i] = state[k];
        }
        if let Some(r) = &self.remainder {
            coords[ell] = inner(r, state);
        }

        let generator = self.block.mapv(|z| z * C64::new(0.0, -t));
        let evolved = expm(&generator).dot(&coords);

        let mut out = state.clone();
        for (i, &k) in self.marked_positions.iter().enumerate() {
            out[k] += evolved[i] - coords[i];
        }
        if let Some(r) = &self.remainder {
            let delta = evolved[ell] - coords[ell];
            out.zip_mut_with(r, |o, rk| *o += delta * rk);
        }
        out
    }
}

/// Full-dimension evolution of the spec's start state.
pub fn evolve_full(spec: &HamiltonianSpec, t: f64) -> Result<QuantumState, ContinuousError> {
    Propagator::new(spec)?.apply(spec.start(), t)
}

/// Closed-form success curve `P(t) = sin^2(Eyt) + y^2 cos^2(Eyt)` sampled on
/// a time grid, with the reduced coordinates at each point.
pub fn probability_curve(
    spec: &HamiltonianSpec,
    t_grid: &[f64],
) -> Result<Vec<EvolutionSample>, ContinuousError> {
    spec.require_uniform()?;
    let e = spec.energy();
    let y = spec.overlap();
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        check_time(t)?;
        let reduced = evolve_reduced(spec, t)?;
        let (sin, cos) = (e * y * t).sin_cos();
        let probability = sin * sin + y * y * cos * cos;
        samples.push(EvolutionSample {
            t,
            reduced,
            probability,
        });
    }
    Ok(samples)
}

/// First time the success probability reaches 1: `T = (pi / 2E) sqrt(n/ell)`.
pub fn optimal_time(spec: &HamiltonianSpec) -> Result<f64, ContinuousError> {
    spec.require_uniform()?;
    let ratio = spec.instance().dimension() as f64 / spec.instance().marked_count() as f64;
    Ok(std::f64::consts::FRAC_PI_2 / spec.energy() * ratio.sqrt())
}

/// Minimum evolution time needed by any driving dynamics to reach a marked
/// block: `(sqrt(n/ell) - 1) / energy`.
pub fn lower_bound(n: usize, ell: usize, energy: f64) -> Result<f64, ContinuousError> {
    check_energy(energy)?;
    if ell == 0 || ell > n {
        return Err(ContinuousError::PartitionRange { ell, n });
    }
    let ratio = n as f64 / ell as f64;
    Ok((ratio.sqrt() - 1.0) / energy)
}

/// Two-sided sandwich certificate behind the time lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FgInequalityReport {
    /// Analytic lower side `2*n_tilde - 2*sqrt(n_tilde)`.
    pub lhs: f64,
    /// Simulated displacement sum over all blocks.
    pub middle: f64,
    /// Analytic upper side `2*E*sqrt(n_tilde)*t_final`.
    pub rhs: f64,
    pub holds: bool,
}

/// Partitions the database into `n_tilde = n/ell` contiguous blocks, evolves
/// the uniform start under each block Hamiltonian and under the pure driving
/// term `E|s><s|`, and checks
/// `2*n_tilde - 2*sqrt(n_tilde) <= sum_k ||psi_k(t) - psi_D(t)||^2
///  <= 2*E*sqrt(n_tilde)*t`.
///
/// Meaningful at `t_final = optimal_time`, where each block evolution has
/// fully rotated into its block. Requires `ell` to divide `n`; `ell = n`
/// gives the single-block degenerate case with a vanishing lower side.
pub fn verify_fg_inequality(
    n: usize,
    ell: usize,
    energy: f64,
    t_final: f64,
) -> Result<FgInequalityReport, ContinuousError> {
    check_energy(energy)?;
    check_time(t_final)?;
    if ell == 0 || ell > n {
        return Err(ContinuousError::PartitionRange { ell, n });
    }
    if !n.is_multiple_of(ell) {
        return Err(ContinuousError::PartitionMismatch { n, ell });
    }
    if n > MAX_FULL_DIM {
        return Err(ContinuousError::DimensionCap {
            n,
            cap: MAX_FULL_DIM,
        });
    }

    let n_tilde = n / ell;
    let amp = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let start = Array1::from_elem(n, amp);

    // Pure driving dynamics: a rank-1 block on the start alone.
    let driver = Propagator::from_parts(n, Vec::new(), &start, energy)?;
    let driven = driver.apply_raw(&start, t_final);

    let mut middle = 0.0;
    for k in 0..n_tilde {
        let block_positions: Vec<usize> = (k * ell..(k + 1) * ell).collect();
        let block = Propagator::from_parts(n, block_positions, &start, energy)?;
        let evolved = block.apply_raw(&start, t_final);
        let displacement: f64 = evolved
            .iter()
            .zip(driven.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        middle += displacement;
    }

    let root = (n_tilde as f64).sqrt();
    let lhs = 2.0 * n_tilde as f64 - 2.0 * root;
    let rhs = 2.0 * energy * root * t_final;
    let holds = lhs <= middle + SANDWICH_TOL && middle <= rhs + SANDWICH_TOL;
    Ok(FgInequalityReport {
        lhs,
        middle,
        rhs,
        holds,
    })
}
