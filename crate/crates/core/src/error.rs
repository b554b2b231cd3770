use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported prime {0} (supported: 2, 3, 5, 7)")]
    UnsupportedPrime(u32),

    #[error("unsupported length {0} (supported: 1..=6)")]
    UnsupportedLength(usize),

    #[error("arithmetic overflow")]
    Overflow,

    #[error("malformed sequence: {0}")]
    Malformed(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("Bockstein sequences are not supported here: {0}")]
    BocksteinUnsupported(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("straightening did not terminate after {0} pair rewrites")]
    NonTermination(u64),

    #[error("singular or inconsistent linear system in degree {0}")]
    Singular(u128),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}
