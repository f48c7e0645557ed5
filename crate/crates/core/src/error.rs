use thiserror::Error;

use crate::expr::{EvalError, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("metric is singular at {point:?}")]
    SingularMetric { point: Vec<f64> },
    #[error("metric is not positive definite at {point:?} (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { point: Vec<f64>, min_eigenvalue: f64 },
    #[error("metric is not symmetric at {point:?} (entry ({i},{j}) differs by {defect:e})")]
    AsymmetricMetric {
        point: Vec<f64>,
        i: usize,
        j: usize,
        defect: f64,
    },
    #[error("point {point:?} lies outside the sampling domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("geodesic left the domain at s = {s} (point {point:?})")]
    DomainExit { s: f64, point: Vec<f64> },
    #[error("Jacobian has rank {rank}, expected {expected}, at {point:?}")]
    RankDeficient {
        point: Vec<f64>,
        rank: usize,
        expected: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} at {point:?} is not horizontal (vertical part {vertical_norm:e})")]
    NotHorizontal {
        what: &'static str,
        point: Vec<f64>,
        vertical_norm: f64,
    },
    #[error("curve is not regular at s = {s}")]
    NonRegularCurve { s: f64 },
    #[error("curve is not a geodesic: residual {residual:e} exceeds {tolerance:e} at s = {s}")]
    NotGeodesic { s: f64, residual: f64, tolerance: f64 },
    #[error("sample set is empty")]
    EmptySamples,
    #[error("submersion has no fibre directions (source and target dimension are equal)")]
    NoFibres,
    #[error("could not draw {requested} points from the sampling domain")]
    SamplingExhausted { requested: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
