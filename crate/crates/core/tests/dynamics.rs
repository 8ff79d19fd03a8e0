use spinloop::evolve;
use spinloop::integrator::{
    evolve_from, exp_midpoint_propagator, initial_eigenstate, self_convergence, Branch, IntegratorConfig, Method,
};
use spinloop::observables::transition_probability_fixed_label;
use spinloop::oracles::rotating_frame_exact;
use spinloop::protocol::{field_at, FieldParams};
use spinloop::spin::{fidelity, overlap, polarization, Mat2};

fn endpoints_only(method: Method, steps: usize) -> IntegratorConfig {
    IntegratorConfig::new(method, steps, steps).unwrap()
}

#[test]
fn headline_run_ends_nearly_orthogonal() {
    let p = FieldParams::from_ratio(1000.0, 0.0015).unwrap();
    let traj = evolve(&p, &IntegratorConfig::for_params(&p), Branch::Plus).unwrap();
    let survival = overlap(&traj.initial_state(), &traj.final_state).norm_sqr();
    assert!(survival < 0.05, "{survival}");
    assert!(traj.max_norm_deviation() < 1e-10);
    assert_eq!(traj.times.first().copied(), Some(p.t_start()));
    assert_eq!(traj.times.last().copied(), Some(p.t_end()));
    assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn time_reversal_recovers_initial_state() {
    for (ratio, delta) in [(10.0, 0.1), (1000.0, 0.0015), (50.0, -0.3)] {
        let p = FieldParams::from_ratio(ratio, delta).unwrap();
        let n = 20_000;
        let dt = (p.t_end() - p.t_start()) / n as f64;
        let steps: Vec<Mat2> = (0..n).map(|k| exp_midpoint_propagator(&p, p.t_start() + k as f64 * dt, dt)).collect();
        let psi0 = initial_eigenstate(&p, Branch::Plus).unwrap();
        let forward = steps.iter().fold(psi0, |psi, u| u.apply(&psi));
        let back = steps.iter().rev().fold(forward, |psi, u| u.adjoint().apply(&psi));
        assert!(1.0 - fidelity(&back, &psi0) < 1e-9, "ratio {ratio} delta {delta}");
    }
}

#[test]
fn centred_circle_matches_rotating_frame() {
    let p = FieldParams::new(1.0, 5.0, 0.0).unwrap();
    let psi0 = initial_eigenstate(&p, Branch::Plus).unwrap();
    let traj = evolve_from(&p, &IntegratorConfig::for_params(&p).with_stride(1000), psi0).unwrap();
    for (t, psi) in traj.times.iter().zip(&traj.states) {
        let exact = rotating_frame_exact(&p, *t, &psi0).unwrap();
        assert!(1.0 - fidelity(psi, &exact) < 1e-8, "t = {t}");
    }
}

#[test]
fn rk4_and_midpoint_agree_when_converged() {
    for delta in [0.05, 0.2, -0.1] {
        let p = FieldParams::from_ratio(10.0, delta).unwrap();
        let mut a = evolve(&p, &endpoints_only(Method::ExpMidpoint, 200_000), Branch::Plus).unwrap();
        let mut b = evolve(&p, &endpoints_only(Method::Rk4Reference, 200_000), Branch::Plus).unwrap();
        a.branch = Some(Branch::Plus);
        b.branch = Some(Branch::Plus);
        let pa = transition_probability_fixed_label(&a).unwrap();
        let pb = transition_probability_fixed_label(&b).unwrap();
        assert!((pa - pb).abs() < 1e-6, "delta {delta}: {pa} vs {pb}");
    }
}

#[test]
fn default_budget_certifies_phase_at_ratio_1000() {
    let p = FieldParams::from_ratio(1000.0, 0.0015).unwrap();
    let est = self_convergence(&p, &IntegratorConfig::for_params(&p), Branch::Plus).unwrap();
    assert!(est.phase_difference < 1e-3, "{est:?}");
}

#[test]
fn doubling_quarters_the_error() {
    let p = FieldParams::from_ratio(10.0, 0.1).unwrap();
    let coarse = self_convergence(&p, &endpoints_only(Method::ExpMidpoint, 4000), Branch::Plus).unwrap();
    let fine = self_convergence(&p, &endpoints_only(Method::ExpMidpoint, 8000), Branch::Plus).unwrap();
    let order = (coarse.state_distance / fine.state_distance).log2();
    assert!((1.7..=2.3).contains(&order), "{order}");
}

#[test]
fn polarization_tracks_the_field_deep_adiabatically() {
    for (delta, branch) in [(0.2, Branch::Plus), (-0.2, Branch::Plus), (0.2, Branch::Minus), (-0.2, Branch::Minus)] {
        let p = FieldParams::from_ratio(1000.0, delta).unwrap();
        let traj = evolve(&p, &IntegratorConfig::for_params(&p), branch).unwrap();
        let worst = traj
            .times
            .iter()
            .zip(&traj.states)
            .map(|(t, psi)| {
                let f = field_at(&p, *t);
                let axis = f.as_array().map(|c| branch.sign() * c / f.norm());
                polarization(psi).dot(axis).clamp(-1.0, 1.0).acos()
            })
            .fold(0.0, f64::max);
        assert!(worst < 0.1, "delta {delta} {branch:?}: {worst}");
    }
}
