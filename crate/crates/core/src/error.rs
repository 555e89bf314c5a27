use thiserror::Error;

/// Errors raised by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("composition of `{left}` and `{right}` is undefined")]
    UndefinedComposition { left: String, right: String },

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("weak groupoid axiom {axiom} violated at {witness:?}")]
    WeakAxiomViolation { axiom: String, witness: Vec<String> },

    #[error("table parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),

    #[error("segment {segment} passes within {distance:.3e} of puncture {puncture} (clearance {clearance:.3e})")]
    ClearanceViolation {
        segment: usize,
        puncture: usize,
        distance: f64,
        clearance: f64,
    },

    #[error("path is not closed (endpoint gap {gap:.3e})")]
    NotClosed { gap: f64 },

    #[error("endpoint mismatch (gap {gap:.3e})")]
    EndpointMismatch { gap: f64 },

    #[error("winding residual {residual:.3e} exceeds tolerance")]
    NonIntegralWinding { residual: f64 },

    #[error("mesh has no path to ({x}, {y})")]
    MeshUndefined { x: f64, y: f64 },

    #[error("operation requires {required}, space has {actual} puncture(s)")]
    PunctureCount { required: String, actual: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty sector")]
    EmptySector,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
