//! Simulation and cross-verification toolkit for quantum search with
//! multiple marked items.
//!
//! The crate pairs every closed-form prediction with an independent
//! full-dimensional simulation:
//!
//! - [`state`]: state vectors, the marked-set oracle, and projection onto
//!   the two-dimensional invariant subspace.
//! - [`continuous`]: the continuous-time search Hamiltonian, exact
//!   propagation, the optimal measurement time, and the two-sided
//!   evolution-time sandwich certificate.
//! - [`discrete`]: the amplitude-amplification iteration built from the
//!   oracle reflection and the mean-inversion diffusion, with its rotation
//!   closed form.
//! - [`stopping`]: the optimal number of iterations to run before restarting
//!   when the success probability per round is known.
//! - [`classical`]: the classical urn baseline (draws without replacement)
//!   that the quantum schemes are measured against.
//! - [`verify`]: named property suites that re-check every module invariant
//!   at runtime, surfaced by the command-line tool.
//!
//! Numerical gates live in [`tolerances`]; the matrix exponential used by
//! the full-dimension propagator lives in [`expm`].

pub mod classical;
pub mod continuous;
pub mod discrete;
pub mod expm;
pub mod state;
pub mod stopping;
pub mod tolerances;
pub mod verify;
