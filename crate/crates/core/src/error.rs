use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },

    #[error("edge {a}-{b} has nonpositive weight {weight}")]
    NonpositiveWeight { a: String, b: String, weight: f64 },

    #[error("vertex {vertex} has nonpositive measure {value}")]
    NonpositiveMeasure { vertex: String, value: f64 },

    #[error("edge {a}-{b} appears more than once")]
    DuplicateEdge { a: String, b: String },

    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: String },

    #[error("unknown vertex {vertex}")]
    UnknownVertex { vertex: String },

    #[error("domain is empty")]
    EmptyDomain,

    #[error("domain has an empty interior")]
    EmptyInterior,

    #[error("domain has an empty boundary (no vertex of the domain has a neighbour outside it)")]
    EmptyBoundary,

    #[error("field is not a Dirichlet field: value {value} at vertex {vertex} outside the interior")]
    NotDirichletField { vertex: String, value: f64 },

    #[error("initial or forcing data assigns {value} to vertex {vertex}, which is not an interior vertex")]
    NotInInterior { vertex: String, value: f64 },

    #[error("field length {found} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid exponent {value}")]
    InvalidExponent { value: f64 },

    #[error("time horizon must be positive, got {value}")]
    NonpositiveHorizon { value: f64 },

    #[error("time grid needs at least one step")]
    ZeroSteps,

    #[error("time {t} outside [{lo}, {hi}]")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("step size {delta} is not below 1")]
    StepTooLarge { delta: f64 },

    #[error("no convergence at step {step}: final residual {residual:e}")]
    NoConvergence { step: usize, residual: f64 },

    #[error("need at least {required} samples, got {found}")]
    InsufficientSamples { required: usize, found: usize },

    #[error("reference trajectory does not cover time {t} (range [0, {horizon}])")]
    TimeRangeMismatch { t: f64, horizon: f64 },

    #[error("integration step {dt} must lie in (0, {horizon}]")]
    NonpositiveStep { dt: f64, horizon: f64 },

    #[error("unstable integration at t = {time}: {detail}")]
    UnstableIntegration { time: f64, detail: String },

    #[error("energy decay check requires zero forcing")]
    ForcingNotZero,

    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("unknown forcing kind '{kind}'")]
    UnknownForcingKind { kind: String },

    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("cannot access '{}': {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} check(s) failed")]
    ChecksFailed { failed: usize },
}

impl Error {
    /// Stable machine-readable code, printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyGraph => "E_EMPTY_GRAPH",
            Error::DisconnectedGraph { .. } => "E_DISCONNECTED",
            Error::NonpositiveWeight { .. } => "E_WEIGHT",
            Error::NonpositiveMeasure { .. } => "E_MEASURE",
            Error::DuplicateEdge { .. } => "E_DUPLICATE_EDGE",
            Error::SelfLoop { .. } => "E_SELF_LOOP",
            Error::UnknownVertex { .. } => "E_UNKNOWN_VERTEX",
            Error::EmptyDomain => "E_EMPTY_DOMAIN",
            Error::EmptyInterior => "E_EMPTY_INTERIOR",
            Error::EmptyBoundary => "E_EMPTY_BOUNDARY",
            Error::NotDirichletField { .. } => "E_NOT_DIRICHLET",
            Error::NotInInterior { .. } => "E_UNKNOWN_VERTEX",
            Error::LengthMismatch { .. } => "E_LENGTH",
            Error::InvalidExponent { .. } => "E_EXPONENT",
            Error::NonpositiveHorizon { .. } => "E_HORIZON",
            Error::ZeroSteps => "E_ZERO_STEPS",
            Error::TimeOutOfRange { .. } => "E_TIME_RANGE",
            Error::StepTooLarge { .. } => "E_STEP_TOO_LARGE",
            Error::NoConvergence { .. } => "E_NO_CONVERGENCE",
            Error::InsufficientSamples { .. } => "E_SAMPLES",
            Error::TimeRangeMismatch { .. } => "E_TIME_MISMATCH",
            Error::NonpositiveStep { .. } => "E_STEP",
            Error::UnstableIntegration { .. } => "E_UNSTABLE",
            Error::ForcingNotZero => "E_FORCING_NOT_ZERO",
            Error::InvalidParameter { .. } => "E_PARAMETER",
            Error::UnknownForcingKind { .. } => "E_FORCING_KIND",
            Error::Parse { .. } => "E_PARSE",
            Error::Io { .. } => "E_IO",
            Error::ChecksFailed { .. } => "E_CHECK_FAILED",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
