use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular matrix")]
    SingularMatrix,
    #[error("point {0} lies outside the kernel window (|p|_inf <= {1})")]
    WindowExceeded(String, i64),
    #[error("prefix cancellation failed at order {order}: {detail}")]
    PrefixNotZero { order: usize, detail: String },
    #[error("pairing is not annular-embeddable: {0}")]
    NotAnnular(String),
    #[error("partition reduction did not terminate: {0}")]
    NonReducible(String),
    #[error("cut of edge {0} is degenerate (a_st = 0)")]
    DegenerateCut(String),
    #[error("jet has zero constant term")]
    ZeroConstantTerm,
    #[error("invalid cut set: {0}")]
    InvalidCutSet(String),
    #[error("graph too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("Dirichlet Laplacian is singular")]
    SingularLaplacian,
    #[error("n = {0} exceeds the supported cap {1}")]
    CapExceeded(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
