use thiserror::Error;

use crate::rational::{format_vector, Rational};

/// Broad classification used by callers that map errors onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller handed in malformed or inconsistent data.
    Input,
    /// The data is well formed but the operation is undefined on it.
    Domain,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis mismatch: `{left}` vs `{right}`")]
    BasisMismatch { left: String, right: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cone is not salient; it contains the line through {}", format_vector(.line))]
    NotSalient { line: Vec<Rational> },

    #[error("inequality system is unbounded in direction {}", format_vector(.direction))]
    Unbounded { direction: Vec<Rational> },

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("class {} is not pseudo-effective; separating functional {}", format_vector(.class), format_vector(.functional))]
    NotPseudoEffective {
        class: Vec<Rational>,
        functional: Vec<Rational>,
    },

    #[error("objective is not strictly positive on the extremal ray {}", format_vector(.ray))]
    InvalidObjective { ray: Vec<Rational> },

    #[error("outside surface-type regime: {reason}")]
    OutsideSurfaceRegime {
        reason: String,
        support: Vec<usize>,
        submatrix: Vec<Vec<Rational>>,
    },

    #[error("oracle found {count} valid decompositions, expected exactly one")]
    OracleAmbiguity { count: usize },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("ring error: {0}")]
    Ring(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("malformed fixture `{name}`: {reason}")]
    MalformedFixture { name: String, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch { .. }
            | Error::BasisMismatch { .. }
            | Error::Parse(_)
            | Error::InvalidInput(_)
            | Error::InvalidObjective { .. }
            | Error::UnknownFixture(_)
            | Error::MalformedFixture { .. }
            | Error::Json(_)
            | Error::Io(_) => ErrorKind::Input,
            _ => ErrorKind::Domain,
        }
    }

    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::BasisMismatch { .. } => "basis_mismatch",
            Error::Parse(_) => "parse_error",
            Error::InvalidInput(_) => "invalid_input",
            Error::NotSalient { .. } => "not_salient",
            Error::Unbounded { .. } => "unbounded",
            Error::EmptyPolytope => "empty_polytope",
            Error::NotPseudoEffective { .. } => "not_pseudo_effective",
            Error::InvalidObjective { .. } => "invalid_objective",
            Error::OutsideSurfaceRegime { .. } => "outside_surface_regime",
            Error::OracleAmbiguity { .. } => "oracle_ambiguity",
            Error::Degree(_) => "degree_error",
            Error::Ring(_) => "ring_error",
            Error::UnknownFixture(_) => "unknown_fixture",
            Error::MalformedFixture { .. } => "malformed_fixture",
            Error::Json(_) => "json_error",
            Error::Io(_) => "io_error",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
