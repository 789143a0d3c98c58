use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("{0} is not a prime")]
    NotPrime(BigInt),
    #[error("{0} is not an odd prime")]
    NotOddPrime(BigInt),
    #[error("{n} is divisible by {p}")]
    DivisibleByPrime { n: BigInt, p: BigInt },
    #[error("{0} is even, expected an odd integer")]
    EvenInput(BigInt),
    #[error("{a} and {m} are not coprime")]
    NotCoprime { a: BigInt, m: BigInt },
    #[error("{value} is not congruent to {residue} mod {modulus}")]
    WrongResidue {
        value: BigInt,
        residue: i64,
        modulus: i64,
    },
    #[error("cannot certify primality of {0}: beyond the deterministic Miller-Rabin range")]
    PrimalityLimit(BigInt),
    #[error("form coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("expected a form of rank {expected}, got rank {found}")]
    WrongRank { expected: usize, found: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("the real place is not allowed here")]
    RealPlaceNotAllowed,
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("could not parse form: {0}")]
    FormSyntax(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parity case mismatch: {0}")]
    ParityMismatch(String),
    #[error("search exhausted without a result: {0}")]
    NotFound(String),
    #[error("construction failed verification: {0}")]
    ConstructionFailed(String),
    #[error("oracle workload too large: {0}")]
    OracleTooLarge(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("invalid census code: {0}")]
    InvalidCode(String),
    #[error("census data is malformed: {0}")]
    CensusData(String),
}
