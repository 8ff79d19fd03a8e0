use std::f64::consts::PI;

use spinloop::integrator::{Branch, IntegratorConfig};
use spinloop::observables::{phase_decomposition, transition_probability_fixed_label};
use spinloop::protocol::FieldParams;
use spinloop::sweep::{run_sweep_with_workers, sweep_row, RowFlag};
use spinloop::{evolve, SweepSpec};

fn spec(delta_min: f64, delta_max: f64, n_points: usize) -> SweepSpec {
    SweepSpec { delta_min, delta_max, n_points, ..SweepSpec::default() }
}

#[test]
fn probability_decreases_away_from_the_crossing() {
    let result = run_sweep_with_workers(&spec(0.0, 0.05, 101), 4).unwrap();
    let p: Vec<f64> = result.rows.iter().map(|r| r.p_zener_fixed_label).collect();
    assert!(p.windows(2).all(|w| w[1] < w[0]), "{p:?}");
    assert!(p[0] > 0.95 && *p.last().unwrap() < 0.05);
}

#[test]
fn maximum_sits_at_the_grid_point_nearest_zero() {
    let result = run_sweep_with_workers(&spec(-0.05, 0.05, 41), 4).unwrap();
    let best = result.rows.iter().max_by(|a, b| a.p_zener_fixed_label.total_cmp(&b.p_zener_fixed_label)).unwrap();
    assert_eq!(best.delta, result.row_nearest(0.0).unwrap().delta);
    for row in &result.rows {
        assert!((row.p_zener_fixed_label + row.p_lg_convention - 1.0).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&row.p_zener_fixed_label));
    }
}

#[test]
fn probabilities_do_not_depend_on_the_starting_branch() {
    for delta in [-0.03, -0.01, 0.0015, 0.02] {
        let p = FieldParams::from_ratio(1000.0, delta).unwrap();
        let config = IntegratorConfig::for_params(&p);
        let plus = transition_probability_fixed_label(&evolve(&p, &config, Branch::Plus).unwrap()).unwrap();
        let minus = transition_probability_fixed_label(&evolve(&p, &config, Branch::Minus).unwrap()).unwrap();
        assert!((plus - minus).abs() < 1e-6, "delta {delta}: {plus} vs {minus}");
    }
}

#[test]
fn deep_adiabatic_berry_phase_follows_winding() {
    for delta in [-0.5, -0.2, 0.2, 0.5] {
        for branch in [Branch::Plus, Branch::Minus] {
            let p = FieldParams::from_ratio(1000.0, delta).unwrap();
            let d = phase_decomposition(&evolve(&p, &IntegratorConfig::for_params(&p), branch).unwrap()).unwrap();
            let w = d.winding.unwrap();
            assert!((d.berry_phase.abs() - PI * f64::from(w.abs())).abs() < 1e-2, "delta {delta}: {d:?}");
            assert_eq!(d.dominant_branch, branch);
        }
    }
}

#[test]
fn row_on_the_degeneracy_circle_is_flagged_not_fatal() {
    let spec = SweepSpec::default();
    let row = sweep_row(1000.0, 0.0, spec.branch, &spec.config);
    assert!(row.has_flag(RowFlag::OnDegeneracyCircle), "{row:?}");
    assert!(!row.has_flag(RowFlag::Failed));
    assert!(row.winding.is_none());
    assert!(row.p_zener_fixed_label > 0.99);
}
