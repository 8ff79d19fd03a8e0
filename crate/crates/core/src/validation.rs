//! Integrator-versus-oracle checks and step-doubling convergence ladders.

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::Result;
use crate::integrator::{
    default_steps_per_period, evolve_from, self_convergence, Branch, ConvergenceEstimate, IntegratorConfig, Method,
};
use crate::oracles::{lz_probability, rotating_frame_exact, static_exact};
use crate::protocol::FieldParams;
use crate::spin::{fidelity, SpinState};
use crate::sweep::{run_sweep, SweepResult, SweepSpec};

pub const STATIC_THRESHOLD: f64 = 1e-12;
pub const ROTATING_FRAME_THRESHOLD: f64 = 1e-8;
pub const LZ_THRESHOLD: f64 = 0.02;
pub const LZ_SYMMETRY_THRESHOLD: f64 = 0.01;
pub const LZ_WINDOW: f64 = 0.05;
pub const DEFAULT_DRAWS: usize = 24;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// A constant field is integrated exactly at any step size; only roundoff
/// grows with the step count, so the static check uses a short march.
pub const STATIC_STEPS: usize = 1000;

pub const ORDER_WINDOW: (f64, f64) = (1.7, 2.3);
/// Below this the ladder is at roundoff and the order is not meaningful.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: &'static str,
    pub draws: usize,
    pub max_error: f64,
    pub threshold: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.max_error < self.threshold
    }
}

fn random_state(rng: &mut StdRng) -> SpinState {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let phi: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let gamma: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    SpinState::new(C64::from_polar((0.5 * theta).cos(), gamma), C64::from_polar((0.5 * theta).sin(), gamma + phi))
}

fn config_for(params: &FieldParams, steps: Option<usize>) -> IntegratorConfig {
    let n = steps.unwrap_or_else(|| default_steps_per_period(params.ratio()));
    IntegratorConfig { method: Method::ExpMidpoint, steps_per_period: n, record_stride: n }
}

/// Worst `1 - fidelity` between the integrator and the constant-field
/// solution over random `ω`, `ω₁` and initial states.
pub fn check_static(draws: usize, seed: u64, steps: Option<usize>) -> Result<OracleCheck> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let omega = rng.random_range(0.5..2.0);
        let omega1 = rng.random_range(-5.0..5.0);
        let params = FieldParams::static_field(omega, omega1)?;
        let initial = random_state(&mut rng);
        let numeric = evolve_from(&params, &config_for(&params, steps.or(Some(STATIC_STEPS))), initial)?.final_state;
        let exact = static_exact(&params, params.t_end(), &initial)?;
        worst = worst.max(1.0 - fidelity(&numeric, &exact));
    }
    Ok(OracleCheck { name: "static", draws, max_error: worst, threshold: STATIC_THRESHOLD })
}

/// Same against the rotating-frame solution for `ω₁ = 0`, `ω₀/ω ∈ [1, 10]`.
pub fn check_rotating_frame(draws: usize, seed: u64, steps: Option<usize>) -> Result<OracleCheck> {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let omega = rng.random_range(0.5..2.0);
        let ratio = rng.random_range(1.0..10.0);
        let params = FieldParams::new(omega, ratio * omega, 0.0)?;
        let initial = random_state(&mut rng);
        let numeric = evolve_from(&params, &config_for(&params, steps), initial)?.final_state;
        let exact = rotating_frame_exact(&params, params.t_end(), &initial)?;
        worst = worst.max(1.0 - fidelity(&numeric, &exact));
    }
    Ok(OracleCheck { name: "rotating_frame", draws, max_error: worst, threshold: ROTATING_FRAME_THRESHOLD })
}

#[derive(Debug, Clone)]
pub struct LandauZenerCheck {
    pub agreement: OracleCheck,
    /// Largest `|P(Δ) - P(-Δ)|` over mirrored grid points.
    pub asymmetry: f64,
    pub sweep: SweepResult,
}

impl LandauZenerCheck {
    pub fn passed(&self) -> bool {
        self.agreement.passed() && self.asymmetry < LZ_SYMMETRY_THRESHOLD
    }
}

/// Largest deviation of the swept fixed-label probability from the
/// Landau–Zener formula over `|Δ| ≤ 0.05`.
pub fn lz_deviation(spec: &SweepSpec, result: &SweepResult) -> f64 {
    result
        .rows
        .iter()
        .filter(|r| r.delta.abs() <= LZ_WINDOW + 1e-15)
        .map(|r| {
            let params = FieldParams::from_ratio(spec.omega0_over_omega, r.delta).expect("grid params");
            let diff = (r.p_zener_fixed_label - lz_probability(&params)).abs();
            if diff.is_nan() {
                f64::INFINITY
            } else {
                diff
            }
        })
        .fold(0.0, f64::max)
}

/// Largest `|P(Δ_i) - P(Δ_{n-1-i})|`; meaningful for symmetric grids.
pub fn mirror_asymmetry(result: &SweepResult) -> f64 {
    let rows = &result.rows;
    let n = rows.len();
    (0..n / 2)
        .map(|i| {
            let d = (rows[i].p_zener_fixed_label - rows[n - 1 - i].p_zener_fixed_label).abs();
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        })
        .fold(0.0, f64::max)
}

pub fn check_landau_zener(spec: &SweepSpec) -> Result<LandauZenerCheck> {
    let sweep = run_sweep(spec)?;
    let deviation = lz_deviation(spec, &sweep);
    let asymmetry = mirror_asymmetry(&sweep);
    Ok(LandauZenerCheck {
        agreement: OracleCheck {
            name: "landau_zener",
            draws: sweep.rows.len(),
            max_error: deviation,
            threshold: LZ_THRESHOLD,
        },
        asymmetry,
        sweep,
    })
}

/// `self_convergence` at `base, 2·base, 4·base, …` (`levels` rungs).
pub fn convergence_ladder(
    params: &FieldParams,
    base_steps: usize,
    levels: usize,
    branch: Branch,
) -> Result<Vec<ConvergenceEstimate>> {
    (0..levels)
        .map(|k| {
            let n = base_steps << k;
            self_convergence(
                params,
                &IntegratorConfig { method: Method::ExpMidpoint, steps_per_period: n, record_stride: n },
                branch,
            )
        })
        .collect()
}

/// `log₂(e_{k}/e_{k+1})` from the last two rungs, on the state distance.
pub fn observed_order(ladder: &[ConvergenceEstimate]) -> Option<f64> {
    match ladder {
        [.., a, b] if b.state_distance > 0.0 => Some((a.state_distance / b.state_distance).log2()),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceVerdict {
    pub ladder: Vec<ConvergenceEstimate>,
    pub order: Option<f64>,
    pub final_phase_error: f64,
    pub at_roundoff: bool,
    pub passed: bool,
}

pub fn assess_convergence(ladder: Vec<ConvergenceEstimate>, tol: f64) -> ConvergenceVerdict {
    let order = observed_order(&ladder);
    let last = ladder.last();
    let final_phase_error = last.map_or(f64::NAN, |e| e.phase_difference);
    let at_roundoff = last.is_some_and(|e| e.state_distance < ROUNDOFF_FLOOR);
    let order_ok = at_roundoff || order.is_some_and(|o| (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&o));
    let passed = !ladder.is_empty() && order_ok && final_phase_error < tol;
    ConvergenceVerdict { ladder, order, final_phase_error, at_roundoff, passed }
}
