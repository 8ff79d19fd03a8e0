//! Driven spin-1/2 on a planar field loop.
//!
//! A spin evolves under `d|ψ⟩/dt = i Ω(t)·σ |ψ⟩` with
//! `Ω(t) = (ω₁ - ω₀ cos ωt, ω₀ sin ωt, 0)` over one period. The crate
//! integrates that equation with an exactly unitary midpoint exponential,
//! measures the Zener transition probability in both labelling conventions,
//! splits the final phase into dynamical and geometric (Berry) parts, and
//! sweeps the detuning `Δ = (ω₁ - ω₀)/ω₀` across the loop's passage through
//! the degeneracy point `Ω = 0`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod integrator;
pub mod observables;
pub mod oracles;
pub mod plot;
pub mod protocol;
mod quadrature;
pub mod spin;
pub mod sweep;
pub mod validation;

pub use error::{Error, Result};
pub use integrator::{evolve, Branch, IntegratorConfig, Method, TrajectoryRecord};
pub use observables::{phase_decomposition, PhaseDecomposition};
pub use protocol::{FieldParams, FieldVector};
pub use spin::{BlochVector, SpinState};
pub use sweep::{run_sweep, SweepResult, SweepSpec};
