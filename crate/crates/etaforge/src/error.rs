use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero is undefined")]
    UndefinedValuation,
    #[error("cyclotomic element is not rational (nonzero coefficient at degree {0})")]
    NotRational(usize),
    #[error("bracket parse error: {0}")]
    Bracket(String),
    #[error("base {0} does not divide the level {1}")]
    LevelMismatch(u64, u64),
    #[error("{0} is not a divisor of {1}")]
    NotADivisor(u64, u64),
    #[error("series has non-invertible leading coefficient")]
    NonInvertibleLeading,
    #[error("series offsets differ by a non-integer power of q")]
    IncompatibleOffsets,
    #[error("lambda in {{0, 1}} gives a singular curve")]
    SingularCurve,
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("no independence witness within the first {0} coefficients")]
    InsufficientPrecision(usize),
    #[error("witness matrix is singular")]
    SingularSystem,
    #[error("combination disagrees with the target at coefficient {0}")]
    Mismatch(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("p = {0} <= 16 leaves the Hasse interval ambiguous")]
    HasseAmbiguous(u64),
    #[error("residue {0} has no representative inside the Hasse bound for p = {1}")]
    HasseOutOfRange(u64, u64),
}

pub type Result<T> = std::result::Result<T, Error>;
