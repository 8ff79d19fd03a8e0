use std::fmt::Display;

use spinloop::integrator::{default_steps_per_period, evolve, IntegratorConfig, Method};
use spinloop::observables::{decompose, transition_probability_fixed_label, transition_probability_lg_convention};
use spinloop::plot::{emit_plot, PlotInput, PlotKind};
use spinloop::spin::overlap;
use spinloop::sweep::{default_workers, emit_csv, emit_trajectory_csv, run_sweep_with_workers, RowFlag};
use spinloop::validation::{
    assess_convergence, check_landau_zener, check_rotating_frame, check_static, convergence_ladder, OracleCheck,
};
use spinloop::SweepSpec;

use crate::{config_for, ConvergenceArgs, Failure, OracleArgs, OracleKind, SweepArgs, TraceArgs};

fn kv(key: &str, value: impl Display) {
    println!("{key}={value}");
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T: Display>(value: Option<T>) -> String {
    value.map_or_else(|| "none".to_string(), |v| v.to_string())
}

pub fn trace(args: &TraceArgs) -> Result<bool, Failure> {
    let params = args.field.resolve(1000.0, 0.0015)?;
    let config = config_for(&params, args.steps_per_period, Some(args.stride))?;
    let traj = evolve(&params, &config, args.branch.into())?;
    let d = decompose(&traj, 0.0)?;

    emit_trajectory_csv(&traj, &args.csv)?;
    emit_plot(PlotInput::Trajectory(&traj), PlotKind::FieldPath, &args.field_plot)?;
    emit_plot(PlotInput::Trajectory(&traj), PlotKind::Polarization, &args.polarization_plot)?;

    kv("omega", num(params.omega()));
    kv("omega0", num(params.omega0()));
    kv("omega1", num(params.omega1()));
    kv("omega0_over_omega", num(params.ratio()));
    kv("delta", opt(params.delta().map(num)));
    kv("branch", traj.branch.map_or(0, |b| b.as_i32()));
    kv("steps_per_period", config.steps_per_period);
    kv("winding", opt(d.winding));
    kv("p_zener_fixed_label", num(transition_probability_fixed_label(&traj)?));
    kv("p_lg_convention", num(transition_probability_lg_convention(&traj)?));
    kv("survival", num(overlap(&traj.initial_state(), &traj.final_state).norm_sqr()));
    kv("total_phase", num(d.total_phase));
    kv("dynamical_phase", num(d.dynamical_phase));
    kv("berry_phase", num(d.berry_phase));
    kv("dominant_branch", d.dominant_branch.as_i32());
    kv("dominant_population", num(d.dominant_population));
    kv("ambiguous_branch", d.is_ambiguous());
    kv("norm_deviation", num(traj.max_norm_deviation()));
    kv("csv", args.csv.display());
    kv("field_plot", args.field_plot.display());
    kv("polarization_plot", args.polarization_plot.display());
    Ok(true)
}

pub fn sweep(args: &SweepArgs) -> Result<bool, Failure> {
    let steps = args.steps_per_period.unwrap_or_else(|| default_steps_per_period(args.omega0_over_omega));
    let spec = SweepSpec {
        omega0_over_omega: args.omega0_over_omega,
        delta_min: args.delta_min,
        delta_max: args.delta_max,
        n_points: args.points,
        branch: args.branch.into(),
        config: IntegratorConfig { method: Method::ExpMidpoint, steps_per_period: steps, record_stride: steps },
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let result = run_sweep_with_workers(&spec, args.workers.unwrap_or_else(default_workers))?;

    emit_csv(&result, &args.out)?;
    if let Some(path) = &args.plot {
        emit_plot(PlotInput::Sweep(&result), PlotKind::Sweep, path)?;
    }

    let count = |flag| result.rows.iter().filter(|r| r.has_flag(flag)).count();
    kv("rows", result.rows.len());
    kv("steps_per_period", steps);
    kv("ambiguous_rows", count(RowFlag::AmbiguousBranch));
    kv("degenerate_rows", count(RowFlag::OnDegeneracyCircle));
    kv("failed_rows", count(RowFlag::Failed));
    kv("out", args.out.display());
    kv("plot", opt(args.plot.as_ref().map(|p| p.display())));
    Ok(count(RowFlag::Failed) == 0)
}

fn report(check: &OracleCheck) -> bool {
    kv(&format!("{}.draws", check.name), check.draws);
    kv(&format!("{}.max_error", check.name), num(check.max_error));
    kv(&format!("{}.threshold", check.name), num(check.threshold));
    kv(&format!("{}.pass", check.name), check.passed());
    check.passed()
}

pub fn oracle_check(args: &OracleArgs) -> Result<bool, Failure> {
    if let Some(n) = args.steps_per_period {
        IntegratorConfig::new(Method::ExpMidpoint, n, n).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let wanted = |kind| args.only.is_none_or(|only| only == kind);
    let mut all = true;
    if wanted(OracleKind::Static) {
        all &= report(&check_static(args.draws, args.seed, args.steps_per_period)?);
    }
    if wanted(OracleKind::Rotating) {
        all &= report(&check_rotating_frame(args.draws, args.seed, args.steps_per_period)?);
    }
    if wanted(OracleKind::Lz) {
        let mut spec = SweepSpec::default();
        if let Some(n) = args.steps_per_period {
            spec.config = spec.config.with_steps(n).with_stride(n);
        }
        let lz = check_landau_zener(&spec)?;
        all &= report(&lz.agreement);
        kv("landau_zener.asymmetry", num(lz.asymmetry));
        kv("landau_zener.asymmetry_pass", lz.passed());
        all &= lz.passed();
    }
    kv("pass", all);
    Ok(all)
}

pub fn convergence(args: &ConvergenceArgs) -> Result<bool, Failure> {
    let params = args.field.resolve(10.0, 0.1)?;
    if args.levels < 2 {
        return Err(Failure::Usage(format!("need at least 2 levels to estimate an order, got {}", args.levels)));
    }
    config_for(&params, Some(args.base), None)?;
    let verdict =
        assess_convergence(convergence_ladder(&params, args.base, args.levels, args.branch.into())?, args.tol);
    for rung in &verdict.ladder {
        println!(
            "steps={} state_distance={} infidelity={} phase_difference={}",
            rung.steps,
            num(rung.state_distance),
            num(rung.infidelity),
            num(rung.phase_difference)
        );
    }
    kv("order", opt(verdict.order.map(num)));
    kv("final_phase_error", num(verdict.final_phase_error));
    kv("tol", num(args.tol));
    kv("at_roundoff", verdict.at_roundoff);
    kv("pass", verdict.passed);
    Ok(verdict.passed)
}
