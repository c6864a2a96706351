//! Error taxonomy shared across the crate.

use num_bigint::BigUint;
use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The curve has zero discriminant and is therefore singular.
    #[error("singular curve: discriminant is zero")]
    SingularCurve,

    /// The curve has bad reduction at the given prime.
    #[error("bad reduction at prime {0}")]
    BadReduction(BigUint),

    /// A precondition of a predicate does not hold, so the predicate is
    /// undefined rather than false (e.g. the Euler test with odd `N+1-a_N`).
    #[error("predicate undefined: {0}")]
    UndefinedPredicate(String),

    /// A case outside the supported algorithm envelope.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Input failed validation (off-curve point, non-coprime moduli, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Factorization exceeded its digit budget.
    #[error("factorization timeout: {0} exceeds the digit budget")]
    FactorizationTimeout(BigUint),

    /// A modular inversion failed, exposing a nontrivial factor of the
    /// modulus. Never silently wrong: the factor is carried along.
    #[error("nontrivial factor found: {0}")]
    FactorFound(BigUint),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
