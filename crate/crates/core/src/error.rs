use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidParams(String),

    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),

    #[error("rotation axis is not a unit vector (|n| = {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("field magnitude {magnitude:e} at t = {t} is below the degeneracy threshold")]
    DegeneracyEncountered { t: f64, magnitude: f64 },

    #[error("|omega1| equals omega0: the loop passes through the degeneracy point")]
    OnDegeneracyCircle,

    #[error("initial field vanishes (omega1 + omega0 = 0); no instantaneous eigenstate")]
    DegenerateInitialField,

    #[error("static-field oracle requires omega0 = 0")]
    NotStaticField,

    #[error("rotating-frame oracle requires omega1 = 0")]
    NotCenteredCircle,

    #[error("adaptive quadrature did not reach {tolerance:e} (estimate {estimate:e})")]
    QuadratureNotConverged { tolerance: f64, estimate: f64 },

    #[error("no dominant branch: larger population {population} within margin of 1/2")]
    AmbiguousBranch { population: f64 },

    #[error("state norm drifted by {deviation:e}, beyond tolerance")]
    NormViolation { deviation: f64 },

    #[error("plot kind does not match its input: {0}")]
    PlotInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
