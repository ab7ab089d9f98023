use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not enough series coefficients: need {needed}, have {available}")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("precision loss at order {order}: only {digits:.1} significant digits remain")]
    PrecisionLoss { order: usize, digits: f64 },

    #[error("series generation failed at order {order}: {source}")]
    AtOrder {
        order: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("odd coefficient {index} is too large ({magnitude:e}) for a series in mu^2")]
    OddCoefficient { index: usize, magnitude: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("branch tracking is ambiguous near nu = {re:e}{im:+e}i")]
    BranchAmbiguity { re: f64, im: f64 },

    #[error("no quadratic root reproduces the series constant term")]
    NoMatchingBranch,

    #[error("no persistent complex-conjugate pair among the discriminant roots")]
    NoPersistentPair,

    #[error("no Pade pole near the target singularity (nearest at distance {distance:e})")]
    Inconclusive { distance: f64 },

    #[error("Pade denominator vanishes near nu = {nu:e} (spurious pole)")]
    SpuriousPole { nu: f64 },

    #[error("step size underflow at t = {t_reached:e}")]
    StepUnderflow { t_reached: f64 },

    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether the error signals a violated input contract rather than a
    /// numerical failure.
    pub fn is_precondition(&self) -> bool {
        match self {
            Error::Precondition(_)
            | Error::InsufficientCoefficients { .. }
            | Error::OrderMismatch { .. }
            | Error::Parse(_) => true,
            Error::AtOrder { source, .. } => source.is_precondition(),
            _ => false,
        }
    }
}
