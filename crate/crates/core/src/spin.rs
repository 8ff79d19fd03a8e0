//! Spin-1/2 value types and closed-form Pauli algebra.
//!
//! States are column vectors in the σ_z eigenbasis. Global phase is kept as
//! computed: nothing in this module re-phases or renormalises a state.

use std::ops::Mul;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Allowed deviation of `|c_up|² + |c_down|²` from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Allowed deviation of a rotation axis from unit length.
pub const DIRECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinState {
    pub c_up: C64,
    pub c_down: C64,
}

impl SpinState {
    pub const UP: SpinState = SpinState { c_up: C64::new(1.0, 0.0), c_down: C64::new(0.0, 0.0) };
    pub const DOWN: SpinState = SpinState { c_up: C64::new(0.0, 0.0), c_down: C64::new(1.0, 0.0) };

    pub fn new(c_up: C64, c_down: C64) -> Self {
        Self { c_up, c_down }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_up.norm_sqr() + self.c_down.norm_sqr()
    }

    /// `| |ψ|² - 1 |`.
    pub fn norm_deviation(&self) -> f64 {
        (self.norm_sqr() - 1.0).abs()
    }

    /// Fails with [`Error::NormViolation`] if the state is not normalised
    /// within [`NORM_TOLERANCE`].
    pub fn check_normalized(&self) -> Result<()> {
        let deviation = self.norm_deviation();
        if deviation > NORM_TOLERANCE || !deviation.is_finite() {
            return Err(Error::NormViolation { deviation });
        }
        Ok(())
    }

    /// The state orthogonal to `self`, `(-c̄_down, c̄_up)`.
    pub fn orthogonal(&self) -> Self {
        Self::new(-self.c_down.conj(), self.c_up.conj())
    }

    /// Euclidean distance `‖a - b‖`, sensitive to global phase.
    pub fn distance(&self, other: &SpinState) -> f64 {
        ((self.c_up - other.c_up).norm_sqr() + (self.c_down - other.c_down).norm_sqr()).sqrt()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::new(self.c_up * factor, self.c_down * factor)
    }
}

/// Expectation values `⟨ψ|σ_i|ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }

    pub fn dot(&self, v: [f64; 3]) -> f64 {
        self.sx * v[0] + self.sy * v[1] + self.sz * v[2]
    }
}

/// A 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Mat2([[one, zero], [zero, one]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, state: &SpinState) -> SpinState {
        let m = &self.0;
        SpinState::new(m[0][0] * state.c_up + m[0][1] * state.c_down, m[1][0] * state.c_up + m[1][1] * state.c_down)
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    /// `v·σ` for a real 3-vector.
    pub fn pauli_dot(v: [f64; 3]) -> Self {
        Mat2([[C64::new(v[2], 0.0), C64::new(v[0], -v[1])], [C64::new(v[0], v[1]), C64::new(-v[2], 0.0)]])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

/// `exp(i a n̂·σ) = cos(a) I + i sin(a) n̂·σ`.
pub fn pauli_rotation(a: f64, n: [f64; 3]) -> Result<Mat2> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if (norm - 1.0).abs() > DIRECTION_TOLERANCE || !norm.is_finite() {
        return Err(Error::NonUnitDirection { norm });
    }
    Ok(rotation_unchecked(a, n))
}

#[inline]
pub(crate) fn rotation_unchecked(a: f64, n: [f64; 3]) -> Mat2 {
    let (s, c) = a.sin_cos();
    Mat2([
        [C64::new(c, s * n[2]), C64::new(s * n[1], s * n[0])],
        [C64::new(-s * n[1], s * n[0]), C64::new(c, -s * n[2])],
    ])
}

/// Bloch vector `(2Re(c̄↑c↓), 2Im(c̄↑c↓), |c↑|² - |c↓|²)`.
pub fn polarization(state: &SpinState) -> BlochVector {
    let cross = state.c_up.conj() * state.c_down;
    BlochVector { sx: 2.0 * cross.re, sy: 2.0 * cross.im, sz: state.c_up.norm_sqr() - state.c_down.norm_sqr() }
}

/// `⟨a|b⟩`.
pub fn overlap(a: &SpinState, b: &SpinState) -> C64 {
    a.c_up.conj() * b.c_up + a.c_down.conj() * b.c_down
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &SpinState, b: &SpinState) -> f64 {
    overlap(a, b).norm_sqr()
}
