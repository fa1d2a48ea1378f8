use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("primes differ: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("p^{exp} does not fit in 63 bits for p = {p}")]
    PrecisionTooLarge { p: u64, exp: u32 },
    #[error("division by a p-adic zero")]
    DivisionByZero,
    #[error("argument is not congruent to 1 mod p")]
    NotOneUnit,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("unit root requested at a supersingular prime")]
    SupersingularInput,
    #[error("not a multiplicative prime")]
    NotMultiplicative,
    #[error("no rational candidate within the denominator bound")]
    NoCandidate,
    #[error("several rational candidates within the denominator bound")]
    Ambiguous,
    #[error("reconstruction failed: {0}")]
    ReconstructionFailed(String),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("coefficient at index {0} must vanish")]
    SupportViolation(u64),
    #[error("degree {0} exceeds the supported bound")]
    DegreeOverflow(usize),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("curve is singular")]
    SingularCurve,
    #[error("twist parameter is zero")]
    ZeroD,
    #[error("curve is not ordinary at {0}")]
    NotOrdinary(u64),
    #[error("functional equation inconsistent: {0}")]
    Inconsistent(String),
    #[error("analytic rank exceeds the supported cap")]
    RankCapExceeded,
    #[error("character is imprimitive")]
    Imprimitive,
    #[error("conductor of the character is not prime to N")]
    BadConductor,
    #[error("curve has additive reduction at {0}")]
    AdditiveReduction(u64),
    #[error("reduction at {0} is not split multiplicative")]
    NotSplitMultiplicative(u64),
    #[error("central value vanishes")]
    RankPositive,
    #[error("no twist below the search bound")]
    NoCandidateBelowX,
    #[error("curves do not have the same reduction type at {0}")]
    NotSameType(u64),
    #[error("cusp {0}/{1} is not supported")]
    UnsupportedCusp(i64, u64),
    #[error("could not factor {0}")]
    FactorizationFailed(i128),
    #[error("integer overflow")]
    Overflow,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
