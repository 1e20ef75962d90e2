use thiserror::Error;

/// Errors raised by the exact-arithmetic layers.
///
/// Certificate-producing operations report mathematical failures inside their
/// report types; this enum is reserved for precondition violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cyclotomic level: ell={ell}, level={level}")]
    InvalidLevel { ell: u64, level: u32 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("level mismatch: ({ell_a}, {level_a}) vs ({ell_b}, {level_b})")]
    LevelMismatch {
        ell_a: u64,
        level_a: u32,
        ell_b: u64,
        level_b: u32,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot embed level {from} into lower level {to}")]
    LevelDecrease { from: u32, to: u32 },

    #[error("automorphism exponent {s} is divisible by {ell}")]
    NotCoprime { s: i64, ell: u64 },

    #[error("valuation of zero")]
    ValuationOfZero,

    #[error("exponent {s} has ord_ell {t} >= level {level}")]
    FormulaInapplicable { s: i64, t: u32, level: u32 },

    #[error("Hensel precondition failed: {0}")]
    HenselPrecondition(String),

    #[error("insufficient p-adic precision: have {have}, need {need}")]
    Precision { have: u32, need: u32 },

    #[error("exponent {a} vanishes modulo {modulus}")]
    ZeroIndex { a: i64, modulus: u64 },

    #[error("exponent mass {mass} exceeds guard {limit}")]
    MassGuard { mass: u128, limit: u128 },

    #[error("level {level} too small (need at least {min})")]
    LevelTooSmall { level: u32, min: u32 },

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "no unit solutions for ell = 2 with S empty: the residue field of the real \
         subfield above 2 is F_2, and 1 + 1 = 1 has no solution there"
    )]
    TwoAdicObstruction,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
