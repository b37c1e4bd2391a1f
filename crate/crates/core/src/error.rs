use num_complex::Complex64;
use thiserror::Error;

/// One problem found while validating an [`crate::ExperimentSetup`].
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    /// A dimension or parameter is non-positive, non-finite or otherwise unusable.
    Config(String),
    /// The slit layout is inconsistent (unsorted, overlapping, wrong count).
    Geometry(String),
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::Config(msg) => write!(f, "config: {msg}"),
            ValidationIssue::Geometry(msg) => write!(f, "geometry: {msg}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid setup: {}", join_issues(.0))]
    Validation(Vec<ValidationIssue>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("complex erf overflows at z = {0}")]
    Overflow(Complex64),

    #[error(
        "quadrature did not converge after {refinements} refinements \
         (previous {previous}, last {last})"
    )]
    Convergence {
        refinements: u32,
        previous: Complex64,
        last: Complex64,
    },

    #[error("node budget exceeded: estimated {estimated} nodes, budget {budget}")]
    Budget { estimated: f64, budget: f64 },

    #[error("degenerate normalization: {0}")]
    DegenerateNormalization(String),

    #[error("failed to parse configuration: {0}")]
    Parse(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn has_geometry_issue(&self) -> bool {
        matches!(self, Error::Validation(issues)
            if issues.iter().any(|i| matches!(i, ValidationIssue::Geometry(_))))
    }

    pub fn has_config_issue(&self) -> bool {
        matches!(self, Error::Validation(issues)
            if issues.iter().any(|i| matches!(i, ValidationIssue::Config(_))))
    }
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
