//! Δ-sweeps: one independent trajectory per grid point, collected into an
//! index-ordered table and written out as CSV.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::num::NonZeroUsize;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrator::{evolve, Branch, IntegratorConfig, TrajectoryRecord};
use crate::observables::{decompose, transition_probability_fixed_label};
use crate::protocol::{field_at, FieldParams};
use crate::spin::polarization;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub omega0_over_omega: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub n_points: usize,
    pub branch: Branch,
    pub config: IntegratorConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        let config = IntegratorConfig::default();
        Self {
            omega0_over_omega: 1000.0,
            delta_min: -0.05,
            delta_max: 0.05,
            n_points: 201,
            branch: Branch::Plus,
            config: config.with_stride(config.steps_per_period),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega0_over_omega > 0.0) || !self.omega0_over_omega.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "omega0/omega must be > 0 (delta is undefined otherwise), got {}",
                self.omega0_over_omega
            )));
        }
        if !(self.delta_min < self.delta_max) || !self.delta_min.is_finite() || !self.delta_max.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "need delta_min < delta_max, got [{}, {}]",
                self.delta_min, self.delta_max
            )));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidSpec(format!("need at least 2 points, got {}", self.n_points)));
        }
        self.config.validate().map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    /// Uniform grid with both endpoints included exactly; symmetric ranges
    /// give exactly mirrored points.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.n_points - 1;
        (0..self.n_points)
            .map(|i| match i {
                0 => self.delta_min,
                i if i == last => self.delta_max,
                i => ((last - i) as f64 * self.delta_min + i as f64 * self.delta_max) / last as f64,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowFlag {
    /// Dominant final population within the branch margin of 1/2.
    AmbiguousBranch,
    /// The loop touches `Ω = 0`; no winding number.
    OnDegeneracyCircle,
    /// Integration or observable extraction failed; numeric fields are NaN.
    Failed,
}

impl RowFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowFlag::AmbiguousBranch => "ambiguous_branch",
            RowFlag::OnDegeneracyCircle => "on_degeneracy_circle",
            RowFlag::Failed => "failed",
        }
    }

    pub fn parse(s: &str) -> Option<RowFlag> {
        match s {
            "ambiguous_branch" => Some(RowFlag::AmbiguousBranch),
            "on_degeneracy_circle" => Some(RowFlag::OnDegeneracyCircle),
            "failed" => Some(RowFlag::Failed),
            _ => None,
        }
    }
}

impl fmt::Display for RowFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub p_zener_fixed_label: f64,
    pub p_lg_convention: f64,
    pub berry_phase: f64,
    pub total_phase: f64,
    pub dynamical_phase: f64,
    pub winding: Option<i32>,
    pub dominant_population: f64,
    pub flags: Vec<RowFlag>,
}

impl SweepRow {
    fn failed(delta: f64) -> Self {
        Self {
            delta,
            p_zener_fixed_label: f64::NAN,
            p_lg_convention: f64::NAN,
            berry_phase: f64::NAN,
            total_phase: f64::NAN,
            dynamical_phase: f64::NAN,
            winding: None,
            dominant_population: f64::NAN,
            flags: vec![RowFlag::Failed],
        }
    }

    pub fn has_flag(&self, flag: RowFlag) -> bool {
        self.flags.contains(&flag)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn deltas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.delta).collect()
    }

    pub fn row_nearest(&self, delta: f64) -> Option<&SweepRow> {
        self.rows.iter().min_by(|a, b| (a.delta - delta).abs().total_cmp(&(b.delta - delta).abs()))
    }
}

/// Computes a single sweep row.
pub fn sweep_row(omega0_over_omega: f64, delta: f64, branch: Branch, config: &IntegratorConfig) -> SweepRow {
    let attempt = || -> Result<SweepRow> {
        let params = FieldParams::from_ratio(omega0_over_omega, delta)?;
        let traj = evolve(&params, config, branch)?;
        let p_fixed = transition_probability_fixed_label(&traj)?;
        let d = decompose(&traj, 0.0)?;
        let mut flags = Vec::new();
        if d.is_ambiguous() {
            flags.push(RowFlag::AmbiguousBranch);
        }
        if d.winding.is_none() {
            flags.push(RowFlag::OnDegeneracyCircle);
        }
        Ok(SweepRow {
            delta,
            p_zener_fixed_label: p_fixed,
            p_lg_convention: 1.0 - p_fixed,
            berry_phase: d.berry_phase,
            total_phase: d.total_phase,
            dynamical_phase: d.dynamical_phase,
            winding: d.winding,
            dominant_population: d.dominant_population,
            flags,
        })
    };
    attempt().unwrap_or_else(|_| SweepRow::failed(delta))
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with_workers(spec, default_workers())
}

/// Rows are written into a buffer keyed by grid index, so the result does
/// not depend on `workers`.
pub fn run_sweep_with_workers(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let grid = spec.grid();
    let mut rows: Vec<Option<SweepRow>> = vec![None; grid.len()];
    let workers = workers.clamp(1, grid.len());
    let compute = |delta: f64| sweep_row(spec.omega0_over_omega, delta, spec.branch, &spec.config);

    if workers == 1 {
        for (slot, &delta) in rows.iter_mut().zip(&grid) {
            *slot = Some(compute(delta));
        }
    } else {
        let chunk = grid.len().div_ceil(workers);
        std::thread::scope(|scope| {
            for (slots, deltas) in rows.chunks_mut(chunk).zip(grid.chunks(chunk)) {
                scope.spawn(move || {
                    for (slot, &delta) in slots.iter_mut().zip(deltas) {
                        *slot = Some(compute(delta));
                    }
                });
            }
        });
    }

    Ok(SweepResult { rows: rows.into_iter().map(|r| r.expect("every grid index computed")).collect() })
}

pub const CSV_HEADER: &str =
    "delta,p_zener_fixed_label,p_lg_convention,berry_phase,total_phase,dynamical_phase,winding,dominant_population,flags";

/// 17 significant digits: enough to round-trip any f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in &result.rows {
        let winding = row.winding.map(|w| w.to_string()).unwrap_or_default();
        let flags: Vec<&str> = row.flags.iter().map(RowFlag::as_str).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(row.delta),
            fmt_f64(row.p_zener_fixed_label),
            fmt_f64(row.p_lg_convention),
            fmt_f64(row.berry_phase),
            fmt_f64(row.total_phase),
            fmt_f64(row.dynamical_phase),
            winding,
            fmt_f64(row.dominant_population),
            flags.join("|"),
        )?;
    }
    Ok(())
}

pub fn emit_csv(result: &SweepResult, destination: &Path) -> io::Result<()> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    std::fs::write(destination, buf)
}

fn invalid(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

/// Reads back a file written by [`write_csv`].
pub fn read_csv<R: BufRead>(input: R) -> io::Result<SweepResult> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?;
    if header.as_deref() != Some(CSV_HEADER) {
        return Err(invalid("missing or unexpected header"));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| invalid(format!("bad number {s:?}: {e}")));
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(invalid(format!("expected 9 fields, got {}", fields.len())));
        }
        let winding = match fields[6] {
            "" => None,
            w => Some(w.parse::<i32>().map_err(|e| invalid(e.to_string()))?),
        };
        let flags = fields[8]
            .split('|')
            .filter(|f| !f.is_empty())
            .map(|f| RowFlag::parse(f).ok_or_else(|| invalid(format!("unknown flag {f:?}"))))
            .collect::<io::Result<Vec<_>>>()?;
        rows.push(SweepRow {
            delta: num(fields[0])?,
            p_zener_fixed_label: num(fields[1])?,
            p_lg_convention: num(fields[2])?,
            berry_phase: num(fields[3])?,
            total_phase: num(fields[4])?,
            dynamical_phase: num(fields[5])?,
            winding,
            dominant_population: num(fields[7])?,
            flags,
        });
    }
    Ok(SweepResult { rows })
}

pub const TRAJECTORY_CSV_HEADER: &str = "t,omega_x,omega_y,omega_z,re_c_up,im_c_up,re_c_down,im_c_down,sx,sy,sz";

/// One line per recorded sample: time, field, amplitudes, polarization.
pub fn write_trajectory_csv<W: Write>(traj: &TrajectoryRecord, mut out: W) -> io::Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let f = field_at(&traj.params, t);
        let b = polarization(psi);
        let values = [t, f.x, f.y, f.z, psi.c_up.re, psi.c_up.im, psi.c_down.re, psi.c_down.im, b.sx, b.sy, b.sz];
        let line: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn emit_trajectory_csv(traj: &TrajectoryRecord, destination: &Path) -> io::Result<()> {
    let mut buf = Vec::new();
    write_trajectory_csv(traj, &mut buf)?;
    std::fs::write(destination, buf)
}
