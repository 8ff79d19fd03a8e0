//! Instantaneous eigenframe, transition probabilities, and the split of the
//! final phase into dynamical and geometric parts.
//!
//! Gauge: `n_± = (1, ±e^{iφ})/√2` with `φ` the azimuth of `Ω`, continued
//! from `t₀`. The vectors are 2π-periodic in `φ`, so the gauge is single
//! valued on the loop and the geometric phase is well defined mod 2π. When
//! the loop passes through `Ω = 0`, `φ` jumps by π and the labels `n_+` and
//! `n_-` swap.

use crate::error::{Error, Result};
use crate::integrator::{gauge_eigenvector, Branch, TrajectoryRecord};
use crate::protocol::{field_at, field_magnitude, unwrap_near, winding_number, wrap_to_pi, FieldParams};
use crate::quadrature;
use crate::spin::{overlap, SpinState};

/// Minimum excess of the dominant population over 1/2.
pub const BRANCH_MARGIN: f64 = 1e-6;

/// Absolute tolerance of the dynamical-phase quadrature, in radians.
pub const DYNAMICAL_PHASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFrame {
    pub phi: f64,
    pub n_plus: SpinState,
    pub n_minus: SpinState,
    pub magnitude: f64,
}

impl EigenFrame {
    pub fn vector(&self, branch: Branch) -> &SpinState {
        match branch {
            Branch::Plus => &self.n_plus,
            Branch::Minus => &self.n_minus,
        }
    }
}

pub fn eigenframe_at(params: &FieldParams, t: f64, phi_reference: f64) -> Result<EigenFrame> {
    let f = field_at(params, t);
    let magnitude = f.norm();
    if magnitude <= params.degeneracy_epsilon() || magnitude == 0.0 {
        return Err(Error::DegeneracyEncountered { t, magnitude });
    }
    let phi = unwrap_near(f.y.atan2(f.x), phi_reference);
    Ok(EigenFrame {
        phi,
        n_plus: gauge_eigenvector(phi, Branch::Plus),
        n_minus: gauge_eigenvector(phi, Branch::Minus),
        magnitude,
    })
}

fn starting_branch(traj: &TrajectoryRecord) -> Result<Branch> {
    traj.branch.ok_or_else(|| Error::InvalidParams("trajectory was not started on an eigenstate".into()))
}

/// `(|⟨n_+(t₁)|ψ(t₁)⟩|², |⟨n_-(t₁)|ψ(t₁)⟩|²)`.
pub fn final_populations(traj: &TrajectoryRecord) -> Result<(f64, f64)> {
    let frame = eigenframe_at(&traj.params, traj.params.t_end(), 0.0)?;
    Ok((overlap(&frame.n_plus, &traj.final_state).norm_sqr(), overlap(&frame.n_minus, &traj.final_state).norm_sqr()))
}

/// Population of the eigenvector carrying the opposite label to the start:
/// the probability of a Zener transition.
pub fn transition_probability_fixed_label(traj: &TrajectoryRecord) -> Result<f64> {
    let start = starting_branch(traj)?;
    let (plus, minus) = final_populations(traj)?;
    Ok(match start {
        Branch::Plus => minus,
        Branch::Minus => plus,
    })
}

/// `1 - P_fixed`: the population that keeps its starting label, which is
/// what the LG-style `P₊₋` measures once the labels swap at the origin.
pub fn transition_probability_lg_convention(traj: &TrajectoryRecord) -> Result<f64> {
    Ok(1.0 - transition_probability_fixed_label(traj)?)
}

/// `s·∫|Ω(t)| dt` over `[t₀, t₁]`, with `s = ±1` for the branch.
pub fn dynamical_phase(params: &FieldParams, branch: Branch) -> Result<f64> {
    let magnitude = |t| field_magnitude(params, t);
    // |Ω| is even in t and may have a kink at t = 0 (loop through the origin)
    let half_tol = 0.5 * DYNAMICAL_PHASE_TOLERANCE;
    let (left, _) = quadrature::integrate(magnitude, params.t_start(), 0.0, half_tol)?;
    let (right, _) = quadrature::integrate(magnitude, 0.0, params.t_end(), half_tol)?;
    Ok(branch.sign() * (left + right))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub total_phase: f64,
    pub dynamical_phase: f64,
    pub berry_phase: f64,
    /// `None` when the loop touches the degeneracy point.
    pub winding: Option<i32>,
    pub dominant_branch: Branch,
    pub dominant_population: f64,
}

impl PhaseDecomposition {
    pub fn is_ambiguous(&self) -> bool {
        self.dominant_population < 0.5 + BRANCH_MARGIN
    }
}

/// Decomposition in the gauge anchored at `t₀`; fails with
/// [`Error::AmbiguousBranch`] if neither final branch clearly dominates.
pub fn phase_decomposition(traj: &TrajectoryRecord) -> Result<PhaseDecomposition> {
    let phi0 = eigenframe_at(&traj.params, traj.params.t_start(), 0.0)?.phi;
    phase_decomposition_in_gauge(traj, phi0)
}

pub fn phase_decomposition_in_gauge(traj: &TrajectoryRecord, phi_reference: f64) -> Result<PhaseDecomposition> {
    let d = decompose(traj, phi_reference)?;
    if d.is_ambiguous() {
        return Err(Error::AmbiguousBranch { population: d.dominant_population });
    }
    Ok(d)
}

/// As [`phase_decomposition`] but reports ambiguous rows instead of failing;
/// the caller inspects [`PhaseDecomposition::is_ambiguous`].
pub fn decompose(traj: &TrajectoryRecord, phi_reference: f64) -> Result<PhaseDecomposition> {
    let params = &traj.params;
    let start = eigenframe_at(params, params.t_start(), phi_reference)?;
    let winding = winding_number(params).ok();
    let phi_end = match winding {
        Some(w) => start.phi + std::f64::consts::TAU * f64::from(w),
        None => start.phi,
    };
    let end = eigenframe_at(params, params.t_end(), phi_end)?;

    let a_plus = overlap(&end.n_plus, &traj.final_state);
    let a_minus = overlap(&end.n_minus, &traj.final_state);
    let (dominant_branch, amplitude) =
        if a_plus.norm_sqr() >= a_minus.norm_sqr() { (Branch::Plus, a_plus) } else { (Branch::Minus, a_minus) };
    let total_phase = amplitude.arg();
    let dynamical = dynamical_phase(params, dominant_branch)?;
    // the reference phase of the initial state in the same gauge
    let initial = overlap(start.vector(traj.branch.unwrap_or(dominant_branch)), &traj.initial_state()).arg();
    Ok(PhaseDecomposition {
        total_phase,
        dynamical_phase: dynamical,
        berry_phase: wrap_to_pi(total_phase - initial - dynamical),
        winding,
        dominant_branch,
        dominant_population: amplitude.norm_sqr(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{evolve, IntegratorConfig, Method};
    use crate::spin::Mat2;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};

    fn endpoints(steps: usize) -> IntegratorConfig {
        IntegratorConfig::new(Method::ExpMidpoint, steps, steps).unwrap()
    }

    #[test]
    fn eigenframe_on_axes() {
        let p = FieldParams::static_field(1.0, 3.0).unwrap();
        let f = eigenframe_at(&p, 0.0, 0.0).unwrap();
        assert_eq!(f.phi, 0.0);
        assert_abs_diff_eq!(f.n_plus.c_down.re, FRAC_1_SQRT_2, epsilon = 1e-16);

        // (ω₁ - ω₀ cos ωt, ω₀ sin ωt) = (0, 1) at ωt = π/2 with ω₁ = 0
        let p = FieldParams::new(1.0, 1.0, 0.0).unwrap();
        let f = eigenframe_at(&p, FRAC_PI_2, 0.0).unwrap();
        assert_abs_diff_eq!(f.phi, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(f.n_plus.c_down.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.n_plus.c_down.im, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn eigenframe_unwraps_toward_reference() {
        let p = FieldParams::static_field(1.0, 3.0).unwrap();
        assert_abs_diff_eq!(eigenframe_at(&p, 0.0, 6.0).unwrap().phi, TAU, epsilon = 1e-15);
        let p = FieldParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(eigenframe_at(&p, 0.0, 0.0).unwrap_err(), Error::DegeneracyEncountered { .. }));
    }

    proptest! {
        #[test]
        fn eigenframe_residuals(w0 in 0.0f64..50.0, w1 in -50.0f64..50.0, t in -3.1f64..3.1) {
            let p = FieldParams::new(1.0, w0, w1).unwrap();
            prop_assume!(field_at(&p, t).norm() > 1e-6);
            let frame = eigenframe_at(&p, t, 0.0).unwrap();
            let h = Mat2::pauli_dot(field_at(&p, t).as_array());
            let m = frame.magnitude;
            let plus = h.apply(&frame.n_plus).distance(&frame.n_plus.scale(C64::new(m, 0.0)));
            let minus = h.apply(&frame.n_minus).distance(&frame.n_minus.scale(C64::new(-m, 0.0)));
            prop_assert!(plus < 1e-12 * m.max(1.0));
            prop_assert!(minus < 1e-12 * m.max(1.0));
            prop_assert!(overlap(&frame.n_plus, &frame.n_minus).norm() < 1e-13);
        }
    }

    #[test]
    fn static_field_has_no_mixing_and_no_geometry() {
        let p = FieldParams::static_field(1.0, 2.5).unwrap();
        for branch in [Branch::Plus, Branch::Minus] {
            let traj = evolve(&p, &endpoints(1000), branch).unwrap();
            assert!(transition_probability_fixed_label(&traj).unwrap() < 1e-24);
            assert_abs_diff_eq!(transition_probability_lg_convention(&traj).unwrap(), 1.0, epsilon = 1e-15);
            let d = phase_decomposition(&traj).unwrap();
            assert_abs_diff_eq!(d.berry_phase, 0.0, epsilon = 1e-9);
            assert_eq!(d.winding, Some(0));
            assert_eq!(d.dominant_branch, branch);
        }
    }

    #[test]
    fn negative_static_field() {
        let p = FieldParams::static_field(1.0, -2.5).unwrap();
        let traj = evolve(&p, &endpoints(1000), Branch::Plus).unwrap();
        let d = phase_decomposition(&traj).unwrap();
        assert_abs_diff_eq!(d.berry_phase, 0.0, epsilon = 1e-9);
        assert!(transition_probability_fixed_label(&traj).unwrap() < 1e-24);
    }

    #[test]
    fn dynamical_phase_closed_cases() {
        let p = FieldParams::static_field(0.5, -3.0).unwrap();
        assert_abs_diff_eq!(dynamical_phase(&p, Branch::Plus).unwrap(), 3.0 * TAU / 0.5, epsilon = 1e-9);
        let p = FieldParams::new(2.0, 7.0, 0.0).unwrap();
        assert_abs_diff_eq!(dynamical_phase(&p, Branch::Minus).unwrap(), -7.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn dynamical_phase_against_trapezoid() {
        let p = FieldParams::new(1.0, 1.0, 2.0).unwrap();
        let n = 10_000_000usize;
        let (a, b) = (p.t_start(), p.t_end());
        let h = (b - a) / n as f64;
        let g = |t: f64| field_at(&p, t).norm();
        let mut sum = 0.5 * (g(a) + g(b));
        for k in 1..n {
            sum += g(a + k as f64 * h);
        }
        let trapezoid = sum * h;
        assert_abs_diff_eq!(dynamical_phase(&p, Branch::Plus).unwrap(), trapezoid, epsilon = 1e-6);
    }

    #[test]
    fn dynamical_phase_through_the_origin() {
        // Δ = 0: |Ω| = 2ω₀|sin(ωt/2)|, integral 8ω₀/ω
        let p = FieldParams::new(1.0, 3.0, 3.0).unwrap();
        assert_abs_diff_eq!(dynamical_phase(&p, Branch::Plus).unwrap(), 24.0, epsilon = 1e-9);
    }

    #[test]
    fn conventions_are_complementary() {
        for delta in [-0.3, -0.02, 0.0, 0.004, 0.1] {
            let p = FieldParams::from_ratio(20.0, delta).unwrap();
            let traj = evolve(&p, &endpoints(20_000), Branch::Plus).unwrap();
            let sum = transition_probability_fixed_label(&traj).unwrap()
                + transition_probability_lg_convention(&traj).unwrap();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gauge_shift_by_full_turn() {
        let p = FieldParams::from_ratio(50.0, -0.15).unwrap();
        let traj = evolve(&p, &endpoints(20_000), Branch::Plus).unwrap();
        let a = decompose(&traj, 0.0).unwrap();
        let b = decompose(&traj, TAU).unwrap();
        let c = decompose(&traj, -2.0 * TAU).unwrap();
        assert!((a.berry_phase - b.berry_phase).abs() < 1e-10);
        assert!((a.berry_phase - c.berry_phase).abs() < 1e-10);
    }

    #[test]
    fn deep_adiabatic_berry_phase() {
        let cfg = IntegratorConfig::default().with_stride(200_000);
        let p = FieldParams::from_ratio(1000.0, -0.2).unwrap();
        let d = phase_decomposition(&evolve(&p, &cfg, Branch::Plus).unwrap()).unwrap();
        assert_abs_diff_eq!(d.berry_phase.abs(), PI, epsilon = 1e-2);
        assert_eq!(d.winding, Some(-1));
        let p = FieldParams::from_ratio(1000.0, 0.2).unwrap();
        let d = phase_decomposition(&evolve(&p, &cfg, Branch::Plus).unwrap()).unwrap();
        assert_abs_diff_eq!(d.berry_phase, 0.0, epsilon = 1e-2);
        assert_eq!(d.winding, Some(0));
    }

    #[test]
    fn ambiguous_branch_is_reported() {
        // a state with equal weight on both final eigenvectors
        let p = FieldParams::static_field(1.0, 1.0).unwrap();
        let cfg = endpoints(200);
        let traj = crate::integrator::evolve_from(&p, &cfg, SpinState::UP).unwrap();
        let d = decompose(&traj, 0.0).unwrap();
        assert!(d.is_ambiguous());
        assert!(matches!(phase_decomposition(&traj).unwrap_err(), Error::AmbiguousBranch { .. }));
        // no starting branch to compare against
        assert!(transition_probability_fixed_label(&traj).is_err());
    }
}
