//! Minimal SVG line/scatter panels for field paths, polarization traces and
//! Δ-sweeps. Output is a pure function of the input so files are
//! byte-reproducible.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::error::{Error, Result};
use crate::integrator::TrajectoryRecord;
use crate::protocol::field_at;
use crate::spin::polarization;
use crate::sweep::SweepResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    FieldPath,
    Polarization,
    Sweep,
}

impl PlotKind {
    pub fn name(&self) -> &'static str {
        match self {
            PlotKind::FieldPath => "field_path",
            PlotKind::Polarization => "polarization",
            PlotKind::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum PlotInput<'a> {
    Trajectory(&'a TrajectoryRecord),
    Sweep(&'a SweepResult),
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;

const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

struct Series<'a> {
    label: &'a str,
    class: &'a str,
    points: Vec<(f64, f64)>,
    markers: bool,
}

struct Axes {
    x: (f64, f64),
    y: (f64, f64),
}

impl Axes {
    fn fit(series: &[Series<'_>], pad: f64) -> Axes {
        let mut x = (f64::INFINITY, f64::NEG_INFINITY);
        let mut y = (f64::INFINITY, f64::NEG_INFINITY);
        for &(px, py) in series.iter().flat_map(|s| &s.points) {
            x = (x.0.min(px), x.1.max(px));
            y = (y.0.min(py), y.1.max(py));
        }
        let widen = |(lo, hi): (f64, f64)| {
            if !lo.is_finite() {
                return (0.0, 1.0);
            }
            let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
            (lo - pad * span, hi + pad * span)
        };
        Axes { x: widen(x), y: widen(y) }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn ticks((lo, hi): (f64, f64)) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn render(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>], axes: &Axes, extra: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#, WIDTH / 2.0);

    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    let _ = writeln!(
        svg,
        r##"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        x1 - x0,
        y1 - y0
    );
    for t in ticks(axes.x) {
        let x = axes.px(t);
        let _ = writeln!(svg, r##"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##, y1 + 5.0);
        let _ = writeln!(svg, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, y1 + 18.0, fmt_tick(t));
    }
    for t in ticks(axes.y) {
        let y = axes.py(t);
        let _ = writeln!(svg, r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="#333"/>"##, x0 - 5.0);
        let _ =
            writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, x0 - 8.0, y + 4.0, fmt_tick(t));
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );
    svg.push_str(extra);

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", axes.px(x), axes.py(y))).collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            s.class,
            pts.join(" ")
        );
        if s.markers {
            for &(x, y) in &s.points {
                let _ = writeln!(
                    svg,
                    r#"<circle class="{}" cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                    s.class,
                    axes.px(x),
                    axes.py(y)
                );
            }
        }
        let ly = MARGIN_TOP + 16.0 + 16.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT - 120.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn field_path(traj: &TrajectoryRecord) -> String {
    let points: Vec<(f64, f64)> = traj
        .times
        .iter()
        .map(|&t| {
            let f = field_at(&traj.params, t);
            (f.x, f.y)
        })
        .collect();
    let series = [Series { label: "Ω(t)", class: "field", points, markers: false }];
    // equal aspect so the loop stays a circle; include the origin
    let mut axes = Axes::fit(&series, 0.05);
    axes.x = (axes.x.0.min(-0.05 * (axes.x.1 - axes.x.0)), axes.x.1);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let scale = ((axes.x.1 - axes.x.0) / plot_w).max((axes.y.1 - axes.y.0) / plot_h);
    let cx = 0.5 * (axes.x.0 + axes.x.1);
    let cy = 0.5 * (axes.y.0 + axes.y.1);
    axes.x = (cx - 0.5 * scale * plot_w, cx + 0.5 * scale * plot_w);
    axes.y = (cy - 0.5 * scale * plot_h, cy + 0.5 * scale * plot_h);
    let origin = format!(
        "<circle class=\"origin\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n",
        axes.px(0.0),
        axes.py(0.0)
    );
    render("Field trajectory", "Ω_x", "Ω_y", &series, &axes, &origin)
}

fn polarization_trace(traj: &TrajectoryRecord) -> String {
    let mut comps: [Vec<(f64, f64)>; 3] = Default::default();
    for (&t, psi) in traj.times.iter().zip(&traj.states) {
        let b = polarization(psi);
        comps[0].push((t, b.sx));
        comps[1].push((t, b.sy));
        comps[2].push((t, b.sz));
    }
    let [sx, sy, sz] = comps;
    let series = [
        Series { label: "⟨σ_x⟩", class: "sx", points: sx, markers: false },
        Series { label: "⟨σ_y⟩", class: "sy", points: sy, markers: false },
        Series { label: "⟨σ_z⟩", class: "sz", points: sz, markers: false },
    ];
    let mut axes = Axes::fit(&series, 0.0);
    axes.y = (-1.1, 1.1);
    render("Polarization", "t", "⟨σ⟩", &series, &axes, "")
}

fn sweep_panel(result: &SweepResult) -> String {
    let finite = |v: f64| v.is_finite();
    let p: Vec<(f64, f64)> = result
        .rows
        .iter()
        .filter(|r| finite(r.p_zener_fixed_label))
        .map(|r| (r.delta, r.p_zener_fixed_label))
        .collect();
    let g: Vec<(f64, f64)> = result
        .rows
        .iter()
        .filter(|r| finite(r.berry_phase))
        .map(|r| (r.delta, r.berry_phase / std::f64::consts::PI))
        .collect();
    let series = [
        Series { label: "P_Zener", class: "p", points: p, markers: true },
        Series { label: "γ_B / π", class: "g", points: g, markers: true },
    ];
    let mut axes = Axes::fit(&series, 0.02);
    axes.y = (axes.y.0.min(-0.05), axes.y.1.max(1.05));
    render("Zener probability and Berry phase", "Δ", "P, γ_B/π", &series, &axes, "")
}

pub fn render_svg(input: PlotInput<'_>, kind: PlotKind) -> Result<String> {
    match (input, kind) {
        (PlotInput::Trajectory(t), PlotKind::FieldPath | PlotKind::Polarization) if t.times.is_empty() => {
            Err(Error::PlotInput("empty trajectory".into()))
        }
        (PlotInput::Trajectory(t), PlotKind::FieldPath) => Ok(field_path(t)),
        (PlotInput::Trajectory(t), PlotKind::Polarization) => Ok(polarization_trace(t)),
        (PlotInput::Sweep(r), PlotKind::Sweep) if r.rows.is_empty() => Err(Error::PlotInput("empty sweep".into())),
        (PlotInput::Sweep(r), PlotKind::Sweep) => Ok(sweep_panel(r)),
        (_, kind) => Err(Error::PlotInput(format!("{} needs a different input", kind.name()))),
    }
}

pub fn emit_plot(input: PlotInput<'_>, kind: PlotKind, destination: &Path) -> io::Result<()> {
    let svg = render_svg(input, kind).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
    std::fs::write(destination, svg)
}
