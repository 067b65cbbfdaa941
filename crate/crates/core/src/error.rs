use thiserror::Error;

/// Errors raised by the numerical kernel, the Fock-space oracle and the
/// observable evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("denominator Pochhammer vanishes at index {index} before the series terminates")]
    DenominatorPole { index: usize },

    #[error("series does not terminate: no nonpositive-integer numerator parameter")]
    NonTerminating,

    #[error("log-gamma pole at nonpositive integer {0}")]
    PoleAtNonpositiveInteger(f64),

    #[error("gamma pole: nonpositive argument {0}")]
    GammaPole(f64),

    #[error("inverse Mellin contour did not converge: estimated error {estimate:e} > {tolerance:e}")]
    ContourNotConverged { estimate: f64, tolerance: f64 },

    #[error("inverse Mellin density is negative ({value:e}) beyond tolerance")]
    NegativeDensity { value: f64 },

    #[error("quadrature did not converge: last estimate {estimate}, error {error:e}")]
    NoConvergence { estimate: f64, error: f64 },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("creation beyond the truncation limit of {max_quanta} total quanta")]
    TruncationOverflow { max_quanta: u32 },

    #[error("su(2) squeezing factor undefined: <K3> vanishes")]
    UndefinedSqueezeFactor,

    #[error("vacuum mode: mean occupation is zero, Mandel Q undefined")]
    VacuumMode,

    #[error("degenerate denominator: mode mean is 0 or n")]
    DegenerateDenominator,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
