use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by the quadrature pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input value was NaN or infinite.
    NonFinite { what: &'static str },
    /// Vector or matrix dimensions do not conform.
    DimensionMismatch { expected: usize, found: usize },
    /// A window configuration violates its invariants.
    InvalidConfig(&'static str),
    /// A grid violates its invariants (or the rule's requirements on it).
    InvalidGrid(&'static str),
    /// A parameter lies outside its admissible range.
    OutOfRange { what: &'static str, value: f64 },
    /// Too few nodes for an FE reconstruction.
    UnsupportedGrid { nodes: usize },
    /// Precomputed factors were built for a different configuration.
    ConfigMismatch,
    /// Singular-window detection needs at least three windows.
    DetectionUnavailable { windows: usize },
    /// The endpoint predictor denominator `|u_min[p]|` is degenerate.
    PredictionFailed { position: usize, weight: f64 },
    /// A branch window for the correction would extend past the grid.
    InsufficientSupport { node: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid window configuration: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::OutOfRange { what, value } => write!(f, "{what} out of range: {value}"),
            Error::UnsupportedGrid { nodes } => {
                write!(f, "unsupported grid: {nodes} nodes (at least 3 required)")
            }
            Error::ConfigMismatch => write!(f, "reference factors do not match the configuration"),
            Error::DetectionUnavailable { windows } => {
                write!(f, "detection needs at least 3 windows, got {windows}")
            }
            Error::PredictionFailed { position, weight } => write!(
                f,
                "endpoint prediction failed: |u_min[{position}]| = {weight:e} is degenerate"
            ),
            Error::InsufficientSupport { node } => {
                write!(f, "branch window around node {node} does not fit in the grid")
            }
        }
    }
}

impl core::error::Error for Error {}
