use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EagmError {
    #[error("zeta root undefined at u=0")]
    ZetaRootUndefined,
    #[error("sin(phi) must be nonzero")]
    ZeroSinPhi,
    #[error("max_iter must be at least 1")]
    NoIterations,
    #[error("convergence tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("parameter is not finite: {0}")]
    NonFinite(&'static str),
    #[error("amplitude limit degenerate (u_inf = 0)")]
    DegenerateAmplitude,
    #[error("zeta series undefined: u_n = 0 at row {0}")]
    ZetaUndefinedAt(usize),
    #[error("schedule uses {bits} free bits but only {max_iter} iterations are run")]
    TooManyBits { bits: u32, max_iter: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("logarithmic singularity: k^2 = 1")]
    LogarithmicSingularity,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("degenerate reference values: {0}")]
    DegenerateRefs(&'static str),
    #[error("no locus is predicted for {0}")]
    NoLocus(&'static str),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
