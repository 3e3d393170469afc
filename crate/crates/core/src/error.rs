use thiserror::Error;

/// Errors surfaced by the symbolic kernel and the verification suites.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomials belong to different variable registries")]
    RegistryMismatch,
    #[error("variable {0} has no assignment and no identity fallback")]
    UnassignedVariable(String),
    #[error("variable {0} does not exist in the target registry")]
    ForeignVariable(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid index set: {0}")]
    BadIndexSet(String),
    #[error("index sets have different cardinality or ambient size")]
    CardinalityMismatch,
    #[error("minor [{0}] is missing from the table")]
    MissingMinor(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("Groebner basis is incomplete (budget ran out); refusing to certify")]
    IncompleteBasis,
    #[error("ideal generators must be homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("exact division failed (non-divisible remainder)")]
    InexactDivision,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
