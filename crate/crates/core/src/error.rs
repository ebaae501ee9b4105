use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("point lies on a singular axis: {0}")]
    SingularPoint(String),

    #[error("metric factor is not positive at the requested point (f = {value:e})")]
    NonPositiveMetric { value: f64 },

    #[error("energy {energy} lies outside every validity window: {reason}")]
    OutOfWindow { energy: f64, reason: String },

    #[error("operation not available for space {kind}: {reason}")]
    Kind { kind: String, reason: String },

    #[error("quantum-number scheme {scheme} is not valid for space {kind}")]
    Scheme { scheme: String, kind: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("space constants do not match the special case {case}: {reason}")]
    PatternMismatch { case: String, reason: String },

    #[error("special case {case} has no sign-consistent real root: {reason}")]
    NoConsistentRoot { case: String, reason: String },

    #[error("closed form is complex: {re} {im:+}i")]
    ComplexEnergy { re: f64, im: f64 },

    #[error("chart {chart} is not supported for space {kind}")]
    Chart { chart: String, kind: String },

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    Accuracy { estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
