//! Browser bindings: one trajectory, one Δ-sweep, and the Landau–Zener
//! formula. Results cross the boundary as JSON strings so the page needs no
//! generated type glue.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use spinloop::integrator::{default_steps_per_period, evolve, Branch, IntegratorConfig, Method};
use spinloop::observables::{decompose, transition_probability_fixed_label};
use spinloop::oracles;
use spinloop::plot::{render_svg, PlotInput, PlotKind};
use spinloop::sweep::{run_sweep_with_workers, SweepRow};
use spinloop::{FieldParams, SweepSpec};

/// The browser has no threads here and a page should answer in seconds,
/// so the demo caps the step budget.
const MAX_STEPS: usize = 400_000;

#[derive(Serialize)]
struct Trace {
    steps_per_period: usize,
    p_zener_fixed_label: f64,
    p_lz: f64,
    berry_phase: f64,
    dynamical_phase: f64,
    winding: Option<i32>,
    dominant_population: f64,
    field_svg: String,
    polarization_svg: String,
}

#[derive(Serialize)]
struct Row {
    delta: f64,
    p: f64,
    p_lz: f64,
    berry_phase: f64,
    flags: Vec<&'static str>,
}

#[derive(Serialize)]
struct Sweep {
    steps_per_period: usize,
    rows: Vec<Row>,
    svg: String,
}

fn branch(sign: i32) -> Result<Branch, String> {
    Branch::from_sign(sign).ok_or_else(|| format!("branch must be +1 or -1, got {sign}"))
}

fn steps(ratio: f64, requested: usize) -> usize {
    let n = if requested == 0 { default_steps_per_period(ratio) } else { requested };
    n.min(MAX_STEPS)
}

pub fn trace_json(ratio: f64, delta: f64, sign: i32, requested_steps: usize) -> Result<String, String> {
    let params = FieldParams::from_ratio(ratio, delta).map_err(|e| e.to_string())?;
    let n = steps(ratio, requested_steps);
    let config = IntegratorConfig::new(Method::ExpMidpoint, n, (n / 2000).max(1)).map_err(|e| e.to_string())?;
    let traj = evolve(&params, &config, branch(sign)?).map_err(|e| e.to_string())?;
    let d = decompose(&traj, 0.0).map_err(|e| e.to_string())?;
    let svg = |kind| render_svg(PlotInput::Trajectory(&traj), kind).map_err(|e| e.to_string());
    let out = Trace {
        steps_per_period: n,
        p_zener_fixed_label: transition_probability_fixed_label(&traj).map_err(|e| e.to_string())?,
        p_lz: oracles::lz_probability(&params),
        berry_phase: d.berry_phase,
        dynamical_phase: d.dynamical_phase,
        winding: d.winding,
        dominant_population: d.dominant_population,
        field_svg: svg(PlotKind::FieldPath)?,
        polarization_svg: svg(PlotKind::Polarization)?,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

fn row(ratio: f64, r: &SweepRow) -> Row {
    let p_lz = FieldParams::from_ratio(ratio, r.delta).map_or(f64::NAN, |p| oracles::lz_probability(&p));
    Row {
        delta: r.delta,
        p: r.p_zener_fixed_label,
        p_lz,
        berry_phase: r.berry_phase,
        flags: r.flags.iter().map(|f| f.as_str()).collect(),
    }
}

pub fn sweep_json(
    ratio: f64,
    delta_min: f64,
    delta_max: f64,
    points: usize,
    sign: i32,
    requested_steps: usize,
) -> Result<String, String> {
    let n = steps(ratio, requested_steps);
    let spec = SweepSpec {
        omega0_over_omega: ratio,
        delta_min,
        delta_max,
        n_points: points,
        branch: branch(sign)?,
        config: IntegratorConfig { method: Method::ExpMidpoint, steps_per_period: n, record_stride: n },
    };
    let result = run_sweep_with_workers(&spec, 1).map_err(|e| e.to_string())?;
    let out = Sweep {
        steps_per_period: n,
        rows: result.rows.iter().map(|r| row(ratio, r)).collect(),
        svg: render_svg(PlotInput::Sweep(&result), PlotKind::Sweep).map_err(|e| e.to_string())?,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// One period at `ω₀/ω = ratio` and detuning `delta`; `steps = 0` picks the
/// default budget. Returns JSON with the summary and both trajectory SVGs.
#[wasm_bindgen]
pub fn trace(ratio: f64, delta: f64, branch: i32, steps: usize) -> Result<String, JsError> {
    trace_json(ratio, delta, branch, steps).map_err(|e| JsError::new(&e))
}

/// Δ-sweep; returns JSON with per-row values and the sweep SVG.
#[wasm_bindgen]
pub fn sweep(
    ratio: f64,
    delta_min: f64,
    delta_max: f64,
    points: usize,
    branch: i32,
    steps: usize,
) -> Result<String, JsError> {
    sweep_json(ratio, delta_min, delta_max, points, branch, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lz_probability(ratio: f64, delta: f64) -> f64 {
    FieldParams::from_ratio(ratio, delta).map_or(f64::NAN, |p| oracles::lz_probability(&p))
}

#[wasm_bindgen]
pub fn lz_half_point(ratio: f64) -> f64 {
    oracles::lz_half_point(ratio)
}
