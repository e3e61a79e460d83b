//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numerical parameter is outside its admissible range.
    /// `field` uses dotted paths ("material.nu", "numerics.order") so CLI
    /// diagnostics can point at the offending scenario key.
    #[error("invalid value for `{field}`: {value} ({reason})")]
    InvalidParameter {
        field: String,
        value: f64,
        reason: String,
    },

    /// Scenario file could not be read, parsed or validated.
    #[error("scenario `{path}`: {message}")]
    Scenario { path: String, message: String },

    /// Time step too large for the characteristic sweep.
    #[error("CFL violation: Courant number {courant:.6} exceeds 1; shrink the time step")]
    CflViolation { courant: f64 },

    /// A sweep asked for stencil nodes outside the ghost-extended line.
    /// This indicates a ghost-sizing bug, not a user error.
    #[error("internal: stencil [{lo}, {hi}] exceeds line bounds (len {len})")]
    StencilOutOfBounds { lo: isize, hi: isize, len: usize },

    /// The solution blew up; reports where, for diagnostics.
    #[error("non-finite state at step {step}, node ({i}, {j}, {k}), component {component}")]
    NonFinite {
        step: usize,
        i: usize,
        j: usize,
        k: usize,
        component: usize,
    },

    /// NRMSE normalization is undefined when the reference field is constant.
    #[error("undefined normalization: reference field has zero value range")]
    DegenerateRange,

    /// Two fields (or a field and a target geometry) do not line up.
    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable one-word category for the CLI's machine-readable error line.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::Scenario { .. } => "scenario",
            Error::CflViolation { .. } => "cfl",
            Error::StencilOutOfBounds { .. } => "internal",
            Error::NonFinite { .. } => "non-finite",
            Error::DegenerateRange => "degenerate-range",
            Error::GeometryMismatch(_) => "geometry",
            Error::Unsupported(_) => "unsupported",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
