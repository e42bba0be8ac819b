use thiserror::Error;

use crate::kinetics::SchemeKind;

/// Errors produced by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation requires a {expected} level scheme, got {found}")]
    SchemeMismatch {
        expected: &'static str,
        found: SchemeKind,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("a shift of {bins} bins is not representable on the grid")]
    GridResolution { bins: f64 },

    #[error("replica shift of {bins} bins is not half of the {n_phi}-point grid")]
    MisalignedReplica { bins: usize, n_phi: usize },

    #[error("harmonic order {p_max} aliases on a {n_phi}-point phase grid")]
    Aliasing { p_max: usize, n_phi: usize },

    #[error("{what} did not converge: change {change:e} exceeds {tolerance:e}")]
    Convergence {
        what: &'static str,
        change: f64,
        tolerance: f64,
    },

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for the numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Self::Convergence { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
