//! Discrete amplitude-amplification iteration.
//!
//! One step is `U = -(I_s)(I_L)`: the oracle reflection `I_L` flips the sign
//! of every marked amplitude, the diffusion `I_s` inverts about the average,
//! and the product carries a global sign. On the invariant subspace spanned
//! by the marked-uniform and unmarked-uniform states, `U` is the plane
//! rotation `[[cos t, sin t], [-sin t, cos t]]` with `cos t = (n - 2l)/n`;
//! everything orthogonal to that plane is multiplied by -1.

use thiserror::Error;

use crate::state::{
    success_probability, uniform_superposition, QuantumState, SearchInstance, StateError,
};
use crate::tolerances::MAX_FULL_DIM;

#[derive(Debug, Error)]
pub enum DiscreteError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("dimension {n} exceeds the full-iteration cap {cap}")]
    DimensionCap { n: usize, cap: usize },
}

/// The rotation angle per step and the start state's initial angle.
///
/// `theta` is read off the step operator's invariant-plane matrix via
/// `atan2(2 sqrt(l(n-l))/n, (n-2l)/n)`, which keeps both matrix entries
/// consistent for every `1 <= l < n`; it lies in (0, pi/2] when `l <= n/2`
/// (where it coincides with the arcsine of the off-diagonal entry) and in
/// (pi/2, pi) beyond. `alpha = arccos(sqrt(l/n))` is the angle of the
/// uniform start against the marked-uniform axis, so the success probability
/// after `m` steps is `cos^2(m*theta - alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverAngles {
    theta: f64,
    alpha: f64,
}

impl GroverAngles {
    pub fn new(instance: &SearchInstance) -> Self {
        let n = instance.dimension() as f64;
        let ell = instance.marked_count() as f64;
        let sin = 2.0 * (ell * (n - ell)).sqrt() / n;
        let cos = (n - 2.0 * ell) / n;
        let theta = sin.atan2(cos);
        let alpha = (ell / n).sqrt().acos();
        Self { theta, alpha }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Success probabilities along an iteration, by full-space simulation and by
/// the rotation closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub m: usize,
    pub p_full: f64,
    pub p_closed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    rows: Vec<TraceRow>,
}

impl IterationTrace {
    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    /// Largest disagreement between the two routes across the trace.
    pub fn max_abs_err(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| (row.p_full - row.p_closed).abs())
            .fold(0.0, f64::max)
    }
}

/// Oracle reflection: flips the sign of every marked amplitude, querying the
/// oracle once per component. An involution.
pub fn apply_oracle_reflection(
    state: &QuantumState,
    instance: &SearchInstance,
) -> Result<QuantumState, DiscreteError> {
    check_dimension(state, instance)?;
    let amplitudes = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let marked = instance.oracle_eval(k + 1).expect("index within 1..=n");
            if marked {
                -z
            } else {
                *z
            }
        })
        .collect();
    Ok(QuantumState::from_normalized(amplitudes))
}

/// Inversion about the average: `a_j -> a_j - 2*mean(a)`, the reflection
/// `I - 2|s><s|` with `|s>` uniform. Unitary and an involution.
pub fn apply_diffusion(
    state: &QuantumState,
    instance: &SearchInstance,
) -> Result<QuantumState, DiscreteError> {
    check_dimension(state, instance)?;
    let n = state.dimension() as f64;
    let mean = state.amplitudes().sum() / n;
    let shift = mean * 2.0;
    let amplitudes = state.amplitudes().mapv(|z| z - shift);
    Ok(QuantumState::from_normalized(amplitudes))
}

/// One amplification step: oracle reflection, diffusion, global sign flip.
pub fn grover_step(
    state: &QuantumState,
    instance: &SearchInstance,
) -> Result<QuantumState, DiscreteError> {
    let reflected = apply_oracle_reflection(state, instance)?;
    let diffused = apply_diffusion(&reflected, instance)?;
    let amplitudes = diffused.amplitudes().mapv(|z| -z);
    Ok(QuantumState::from_normalized(amplitudes))
}

/// Runs `m_max` full-space steps from the uniform superposition, recording
/// the simulated and closed-form success probabilities after each count
/// `m = 0..=m_max`.
pub fn iterate(instance: &SearchInstance, m_max: usize) -> Result<IterationTrace, DiscreteError> {
    let n = instance.dimension();
    if n > MAX_FULL_DIM {
        return Err(DiscreteError::DimensionCap {
            n,
            cap: MAX_FULL_DIM,
        });
    }
    let mut state = uniform_superposition(instance);
    let mut rows = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        if m > 0 {
            state = grover_step(&state, instance)?;
        }
        let p_full = success_probability(&state, instance)?;
        let p_closed = closed_form_probability(instance, m as u64);
        rows.push(TraceRow {
            m,
            p_full,
            p_closed,
        });
    }
    Ok(IterationTrace { rows })
}

/// Rotation closed form for the success probability after `m` steps:
/// `cos^2(m*theta - alpha)`.
pub fn closed_form_probability(instance: &SearchInstance, m: u64) -> f64 {
    let angles = GroverAngles::new(instance);
    let c = (m as f64 * angles.theta() - angles.alpha()).cos();
    c * c
}

/// Exact integer argmax of the closed-form success probability over one
/// rotation period `m in [0, ceil(pi/theta)]`, with the probability reached
/// there. Ties keep the smallest count.
pub fn optimal_iterations(instance: &SearchInstance) -> (u64, f64) {
    let angles = GroverAngles::new(instance);
    let window = (std::f64::consts::PI / angles.theta()).ceil() as u64;
    let mut best_m = 0;
    let mut best_p = closed_form_probability(instance, 0);
    for m in 1..=window {
        let p = closed_form_probability(instance, m);
        if p > best_p {
            best_p = p;
            best_m = m;
        }
    }
    (best_m, best_p)
}

fn check_dimension(state: &QuantumState, instance: &SearchInstance) -> Result<(), DiscreteError> {
    if state.dimension() != instance.dimension() {
        return Err(DiscreteError::State(StateError::DimensionMismatch {
            got: state.dimension(),
            expected: instance.dimension(),
        }));
    }
    Ok(())
}
