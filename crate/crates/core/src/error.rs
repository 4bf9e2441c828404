use thiserror::Error;

use crate::classify::DivergenceDiagnostic;
use crate::montecarlo::EcfReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid process specification: {0}")]
    InvalidSpec(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("Lévy measure is not integrable against min(1,|z|²): {0}")]
    NonIntegrableMeasure(String),
    #[error("quadrature did not reach tolerance ({context}): estimate {value:e}, error {error:e}")]
    QuadratureFailure { context: String, value: f64, error: f64 },
    #[error("empty or degenerate sample grid")]
    EmptyGrid,
    #[error("regularity integral is inconclusive")]
    InconclusiveIntegral(Box<DivergenceDiagnostic>),
    #[error("d > 1 process is not covered by (H0) rules and no decomposition was declared: {0}")]
    MissingDecomposition(String),
    #[error("operation not defined for this case: {0}")]
    WrongCase(String),
    #[error("compound Poisson law has an atom at the origin, no density")]
    AtomAtOrigin,
    #[error("e^(-t Re ψ) is not integrable at the configured precision")]
    TailNotIntegrable,
    #[error("λ-potential density does not exist: ∫ Re 1/(λ+ψ) diverges (points are polar)")]
    CaseAViolation,
    #[error("Laplace exponent has no derivative available")]
    MissingDerivative,
    #[error("supremum search exhausted without convergence: {0}")]
    SupSearchExhausted(String),
    #[error("dimension not supported here: {0}")]
    DimensionUnsupported(String),
    #[error("process is not isotropic unimodal with a supported closed form: {0}")]
    NotUnimodal(String),
    #[error("simulation horizon too short: discounted tail {tail:e} exceeds 1% of estimate {value:e}")]
    HorizonTooShort { tail: f64, value: f64 },
    #[error("sampler does not reproduce the characteristic function")]
    SamplerMismatch(Box<EcfReport>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
