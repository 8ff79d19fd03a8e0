//! Closed-form solutions used as ground truth for the integrator.
//!
//! * constant field (`ω₀ = 0`): a single rotation about x;
//! * centred circle (`ω₁ = 0`): the field rotates uniformly with azimuth
//!   `φ(t) = π - ωt`. Writing `|ψ⟩ = R(φ)|χ⟩` with `R(φ) = exp(-iφσ_z/2)`
//!   gives `d|χ⟩/dt = i(ω₀σ_x - (ω/2)σ_z)|χ⟩`, a time-independent generator
//!   of magnitude `√(ω₀² + ω²/4)`;
//! * Landau–Zener: near `t = 0`, `Ω ≈ ω₀(Δ, ωt)`, a linear sweep with
//!   minimum gap `2ω₀|Δ|` and level-slope difference `2ω₀ω`, so the
//!   diabatic passage probability is `exp(-πω₀Δ²/ω)`.

use crate::error::{Error, Result};
use crate::protocol::FieldParams;
use crate::spin::{pauli_rotation, Mat2, SpinState};

const X: [f64; 3] = [1.0, 0.0, 0.0];
const Z: [f64; 3] = [0.0, 0.0, 1.0];

/// `exp(iω₁(t - t₀)σ_x)|initial⟩`.
pub fn static_exact(params: &FieldParams, t: f64, initial: &SpinState) -> Result<SpinState> {
    if params.omega0() != 0.0 {
        return Err(Error::NotStaticField);
    }
    let angle = params.omega1() * (t - params.t_start());
    Ok(pauli_rotation(angle, X)?.apply(initial))
}

fn frame_rotation(phi: f64) -> Result<Mat2> {
    pauli_rotation(-0.5 * phi, Z)
}

/// Exact state at `t` for the centred circle `ω₁ = 0`.
pub fn rotating_frame_exact(params: &FieldParams, t: f64, initial: &SpinState) -> Result<SpinState> {
    if params.omega1() != 0.0 {
        return Err(Error::NotCenteredCircle);
    }
    let (w, w0) = (params.omega(), params.omega0());
    let t0 = params.t_start();
    let azimuth = |t: f64| std::f64::consts::PI - w * t;

    let generator = [w0, 0.0, -0.5 * w];
    let magnitude = (w0 * w0 + 0.25 * w * w).sqrt();
    let axis = generator.map(|g| g / magnitude);

    let into_frame = frame_rotation(azimuth(t0))?.adjoint();
    let evolve = pauli_rotation(magnitude * (t - t0), axis)?;
    let out_of_frame = frame_rotation(azimuth(t))?;
    Ok((out_of_frame * evolve * into_frame).apply(initial))
}

/// `exp(-πω₀Δ²/ω)`; NaN when `Δ` is undefined (`ω₀ = 0`).
pub fn lz_probability(params: &FieldParams) -> f64 {
    match params.delta() {
        Some(delta) => (-std::f64::consts::PI * params.omega0() * delta * delta / params.omega()).exp(),
        None => f64::NAN,
    }
}

/// `|Δ|` at which [`lz_probability`] equals 1/2.
pub fn lz_half_point(omega0_over_omega: f64) -> f64 {
    (std::f64::consts::LN_2 / (std::f64::consts::PI * omega0_over_omega)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{evolve_from, gauge_eigenvector, Branch, IntegratorConfig, Method};
    use crate::observables::{eigenframe_at, transition_probability_fixed_label};
    use crate::spin::{fidelity, overlap};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;

    #[test]
    fn static_eigenstate_only_picks_up_phase() {
        let p = FieldParams::static_field(1.0, 1.7).unwrap();
        let n_plus = gauge_eigenvector(0.0, Branch::Plus);
        let out = static_exact(&p, 0.4, &n_plus).unwrap();
        let expected = n_plus.scale(C64::from_polar(1.0, 1.7 * (0.4 - p.t_start())));
        assert!(out.distance(&expected) < 1e-14);
        let same = static_exact(&p, p.t_start(), &n_plus).unwrap();
        assert_eq!(same, n_plus);
    }

    #[test]
    fn oracle_preconditions() {
        let moving = FieldParams::new(1.0, 1.0, 0.5).unwrap();
        assert_eq!(static_exact(&moving, 0.0, &SpinState::UP).unwrap_err(), Error::NotStaticField);
        assert_eq!(rotating_frame_exact(&moving, 0.0, &SpinState::UP).unwrap_err(), Error::NotCenteredCircle);
    }

    #[test]
    fn rotating_frame_at_start_is_identity() {
        let p = FieldParams::new(1.3, 4.0, 0.0).unwrap();
        let psi = SpinState::new(C64::new(0.6, 0.0), C64::new(0.0, -0.8));
        assert!(rotating_frame_exact(&p, p.t_start(), &psi).unwrap().distance(&psi) < 1e-14);
    }

    #[test]
    fn rotating_frame_solves_the_equation_of_motion() {
        // central difference of the oracle against i Ω·σ ψ
        let p = FieldParams::new(0.8, 3.0, 0.0).unwrap();
        let psi0 = SpinState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8));
        let h = 1e-5;
        for t in [-3.0, -1.0, 0.2, 2.5] {
            let ahead = rotating_frame_exact(&p, t + h, &psi0).unwrap();
            let behind = rotating_frame_exact(&p, t - h, &psi0).unwrap();
            let here = rotating_frame_exact(&p, t, &psi0).unwrap();
            let f = crate::protocol::field_at(&p, t);
            let rhs = Mat2::pauli_dot(f.as_array()).apply(&here).scale(C64::new(0.0, 1.0));
            let du = (ahead.c_up - behind.c_up) / (2.0 * h);
            let dd = (ahead.c_down - behind.c_down) / (2.0 * h);
            assert!((du - rhs.c_up).norm() < 1e-8);
            assert!((dd - rhs.c_down).norm() < 1e-8);
        }
    }

    #[test]
    fn rotating_frame_matches_brute_force_rk4() {
        // validated against the independent RK4 march before use as an oracle
        let p = FieldParams::new(1.0, 5.0, 0.0).unwrap();
        let psi0 = gauge_eigenvector(0.0, Branch::Plus);
        let cfg = IntegratorConfig::new(Method::Rk4Reference, 200_000, 200_000).unwrap();
        let brute = evolve_from(&p, &cfg, psi0).unwrap().final_state;
        let exact = rotating_frame_exact(&p, p.t_end(), &psi0).unwrap();
        assert!(1.0 - fidelity(&brute, &exact) < 1e-12);
        assert!(brute.distance(&exact) < 1e-9);
    }

    #[test]
    fn quasi_static_limit_follows_adiabatically() {
        let p = FieldParams::new(1e-3, 10.0, 0.0).unwrap();
        let psi0 = gauge_eigenvector(0.0, Branch::Plus);
        let out = rotating_frame_exact(&p, p.t_end(), &psi0).unwrap();
        let frame = eigenframe_at(&p, p.t_end(), 0.0).unwrap();
        assert!(overlap(&frame.n_minus, &out).norm_sqr() < 1e-8);

        // at finite ω the same quantity is visibly non-zero
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let cfg = IntegratorConfig::new(Method::ExpMidpoint, 20_000, 20_000).unwrap();
        let mut traj = evolve_from(&p, &cfg, psi0).unwrap();
        traj.branch = Some(Branch::Plus);
        assert!(transition_probability_fixed_label(&traj).unwrap() > 1e-3);
    }

    #[test]
    fn lz_values() {
        assert_eq!(lz_probability(&FieldParams::from_ratio(1000.0, 0.0).unwrap()), 1.0);
        let p = FieldParams::from_ratio(1000.0, 0.0015).unwrap();
        assert_abs_diff_eq!(lz_probability(&p), (-0.00225 * std::f64::consts::PI).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(lz_probability(&p), 0.99296, epsilon = 1e-5);
        assert_abs_diff_eq!(lz_half_point(1000.0), 0.014_853_8, epsilon = 1e-7);
        let half = FieldParams::from_ratio(1000.0, lz_half_point(1000.0)).unwrap();
        assert_abs_diff_eq!(lz_probability(&half), 0.5, epsilon = 1e-12);
        assert!(lz_probability(&FieldParams::static_field(1.0, 1.0).unwrap()).is_nan());
    }

    #[test]
    fn lz_is_even_in_delta() {
        for d in [0.001, 0.01, 0.03] {
            let a = lz_probability(&FieldParams::from_ratio(1000.0, d).unwrap());
            let b = lz_probability(&FieldParams::from_ratio(1000.0, -d).unwrap());
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }
}
