//! The planar drive `Ω(t) = (ω₁ - ω₀ cos ωt, ω₀ sin ωt, 0)`.
//!
//! Over one period `t ∈ [-π/ω, π/ω]` the field traces a circle of radius
//! `ω₀` centred at `(ω₁, 0)`. The circle encloses the degeneracy point
//! `Ω = 0` iff `|ω₁| < ω₀`, and touches it when `|ω₁| = ω₀` (Δ = 0 or Δ = -2).

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Relative size of the ball around `Ω = 0` treated as the degeneracy.
pub const DEGENERACY_REL_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    omega: f64,
    omega0: f64,
    omega1: f64,
}

impl FieldParams {
    pub fn new(omega: f64, omega0: f64, omega1: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParams(format!("omega must be > 0, got {omega}")));
        }
        if !(omega0 >= 0.0) || !omega0.is_finite() {
            return Err(Error::InvalidParams(format!("omega0 must be >= 0, got {omega0}")));
        }
        if !omega1.is_finite() {
            return Err(Error::InvalidParams(format!("omega1 must be finite, got {omega1}")));
        }
        Ok(Self { omega, omega0, omega1 })
    }

    /// Parameters in units of the drive frequency: `ω = 1`, `ω₀ = ratio`,
    /// `ω₁ = ω₀ (1 + Δ)`.
    pub fn from_ratio(omega0_over_omega: f64, delta: f64) -> Result<Self> {
        if !(omega0_over_omega > 0.0) {
            return Err(Error::InvalidParams(format!("omega0/omega must be > 0, got {omega0_over_omega}")));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParams(format!("delta must be finite, got {delta}")));
        }
        Self::new(1.0, omega0_over_omega, omega0_over_omega * (1.0 + delta))
    }

    /// Constant field `(ω₁, 0, 0)` with `ω₀ = 0`.
    pub fn static_field(omega: f64, omega1: f64) -> Result<Self> {
        Self::new(omega, 0.0, omega1)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    /// `(ω₁ - ω₀) / ω₀`; undefined for `ω₀ = 0`.
    pub fn delta(&self) -> Option<f64> {
        (self.omega0 > 0.0).then(|| (self.omega1 - self.omega0) / self.omega0)
    }

    pub fn ratio(&self) -> f64 {
        self.omega0 / self.omega
    }

    pub fn t_start(&self) -> f64 {
        -PI / self.omega
    }

    pub fn t_end(&self) -> f64 {
        PI / self.omega
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn degeneracy_epsilon(&self) -> f64 {
        DEGENERACY_REL_EPSILON * self.omega0.max(self.omega1.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FieldVector {
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

pub fn field_at(params: &FieldParams, t: f64) -> FieldVector {
    let (s, c) = (params.omega * t).sin_cos();
    FieldVector { x: params.omega1 - params.omega0 * c, y: params.omega0 * s, z: 0.0 }
}

/// `|Ω(t)|` from `|Ω|² = ω₁² + ω₀² - 2ω₁ω₀ cos ωt`, rearranged as
/// `(ω₁ - ω₀)² + 4ω₁ω₀ sin²(ωt/2)` so it stays accurate near the origin.
pub fn field_magnitude(params: &FieldParams, t: f64) -> f64 {
    let d = params.omega1 - params.omega0;
    let h = (0.5 * params.omega * t).sin();
    let sq = d * d + 4.0 * params.omega1 * params.omega0 * h * h;
    if sq > 0.0 {
        sq.sqrt()
    } else {
        field_at(params, t).norm()
    }
}

/// Continuous azimuth `atan2(Ω_y, Ω_x)` along `t_grid`.
pub fn azimuth_unwrapped(params: &FieldParams, t_grid: &[f64]) -> Result<Vec<f64>> {
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("time grid must be strictly increasing".into()));
    }
    let eps = params.degeneracy_epsilon();
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let f = field_at(params, t);
        let magnitude = f.norm();
        if magnitude <= eps {
            return Err(Error::DegeneracyEncountered { t, magnitude });
        }
        let raw = f.y.atan2(f.x);
        let phi = match out.last() {
            Some(&prev) => unwrap_near(raw, prev),
            None => raw,
        };
        out.push(phi);
    }
    Ok(out)
}

/// The representative of `angle` mod 2π closest to `reference`.
pub fn unwrap_near(angle: f64, reference: f64) -> f64 {
    reference + wrap_to_pi(angle - reference)
}

/// Reduces an angle into `(-π, π]`.
pub fn wrap_to_pi(angle: f64) -> f64 {
    let mut r = angle.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Number of times the loop winds around `Ω = 0`.
///
/// The parametrisation runs clockwise about the circle centre, so an enclosed
/// origin gives -1.
pub fn winding_number(params: &FieldParams) -> Result<i32> {
    let gap = params.omega1.abs() - params.omega0;
    if gap.abs() <= params.degeneracy_epsilon() {
        return Err(Error::OnDegeneracyCircle);
    }
    Ok(if gap < 0.0 { -1 } else { 0 })
}
