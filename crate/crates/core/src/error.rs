use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("generator index {index} out of range 1..={n}")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("ring mismatch: [{0}] vs [{1}]")]
    RingMismatch(String, String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("elementary automorphism requires a nonzero scalar")]
    ZeroScalar,
    #[error("parameter of sigma({index}, ..) must not involve generator {index}")]
    ParameterInvolvesGenerator { index: usize },
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("transposition needs two distinct generators, got ({0} {0})")]
    DegenerateTransposition(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal check failed: {0}")]
    CheckFailed(String),
}
