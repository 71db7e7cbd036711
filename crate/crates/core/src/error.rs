use std::fmt;

use thiserror::Error;

/// A single violated graph invariant, with a machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub code: &'static str,
    pub message: String,
}

impl ValidationIssue {
    pub(crate) fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid graph: {}", join_issues(.0))]
    Invalid(Vec<ValidationIssue>),

    #[error("invalid vertex conditions: {0}")]
    InvalidConditions(String),

    #[error("edge {edge} has a Dirichlet eigenvalue at lambda = {lambda}")]
    EdgeDirichletPole { edge: String, lambda: f64 },

    #[error("lambda = {lambda} is a Dirichlet eigenvalue of edges {}", .edges.join(", "))]
    DirichletPole { lambda: f64, edges: Vec<String> },

    #[error("interior block of the Dirichlet-to-Neumann matrix is singular (condition estimate {condition:e})")]
    SingularInteriorBlock { condition: f64 },

    #[error("eigenvalue scan up to lambda = {lambda_max} could not be certified: {detail}")]
    ScanIncomplete { lambda_max: f64, detail: String },

    #[error("lambda = {lambda} lies in the spectrum (smallest singular value {sigma:e})")]
    LambdaInSpectrum { lambda: f64, sigma: f64 },

    #[error("operation requires a vanishing potential")]
    PotentialNotZero,

    #[error("subspace of dimension {available} cannot give {requested} Ritz values")]
    InsufficientSubspace { available: usize, requested: usize },

    #[error("spectra do not cover the indices needed: {0}")]
    InsufficientRange(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    #[error("surgery would disconnect the graph")]
    Disconnects,

    #[error("position {position} is not strictly inside edge `{edge}` of length {length}")]
    BadPosition {
        edge: String,
        position: f64,
        length: f64,
    },

    #[error("vertex `{vertex}` has degree {degree}, expected 2")]
    NotDegree2 { vertex: String, degree: usize },

    #[error("vertex `{0}` is the only vertex of a single loop")]
    LoneLoopVertex(String),

    #[error("lengthening factor must be finite and > 1, got {0}")]
    BadAlpha(f64),

    #[error("bad pairing: {0}")]
    BadPairing(String),

    #[error("bad partition: {0}")]
    BadPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// Machine-readable error code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Invalid(issues) => issues.first().map_or("INVALID_GRAPH", |i| i.code),
            Error::InvalidConditions(_) => "INVALID_CONDITIONS",
            Error::EdgeDirichletPole { .. } => "EDGE_DIRICHLET_POLE",
            Error::DirichletPole { .. } => "DIRICHLET_POLE",
            Error::SingularInteriorBlock { .. } => "SINGULAR_INTERIOR_BLOCK",
            Error::ScanIncomplete { .. } => "SCAN_INCOMPLETE",
            Error::LambdaInSpectrum { .. } => "LAMBDA_IN_SPECTRUM",
            Error::PotentialNotZero => "POTENTIAL_NOT_ZERO",
            Error::InsufficientSubspace { .. } => "INSUFFICIENT_SUBSPACE",
            Error::InsufficientRange(_) => "INSUFFICIENT_RANGE",
            Error::UnknownVertex(_) => "UNKNOWN_VERTEX",
            Error::UnknownEdge(_) => "UNKNOWN_EDGE",
            Error::Disconnects => "DISCONNECTS",
            Error::BadPosition { .. } => "BAD_POSITION",
            Error::NotDegree2 { .. } => "NOT_DEGREE_2",
            Error::LoneLoopVertex(_) => "LONE_LOOP_VERTEX",
            Error::BadAlpha(_) => "BAD_ALPHA",
            Error::BadPairing(_) => "BAD_PAIRING",
            Error::BadPartition(_) => "BAD_PARTITION",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::Io(_) => "IO_ERROR",
        }
    }

    /// All codes carried by this error; validation failures carry one per issue.
    pub fn codes(&self) -> Vec<&'static str> {
        match self {
            Error::Invalid(issues) => issues.iter().map(|i| i.code).collect(),
            other => vec![other.code()],
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
