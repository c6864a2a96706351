//! Elliptic pseudoprimes over `Z/NZ`.
//!
//! This crate implements the computational machinery behind elliptic,
//! Euler elliptic, and strong elliptic pseudoprime tests together with the
//! Korselt-style criteria that characterize their Carmichael analogues:
//!
//! * [`arith`] — Jacobi symbols, p-adic valuations, factorization, CRT.
//! * [`curve`] — Weierstrass curves, discriminants, reduction mod `m`.
//! * [`ecpoint`] — division polynomials and scalar multiplication mod `N`
//!   without modular inversions.
//! * [`lseries`] — traces of Frobenius `a_p`, prime-power coefficients
//!   `a_{p^e}`, the multiplicative `a_N`, and anomalous-prime search.
//! * [`groupstruct`] — invariant factors of `E(F_p)`, exponents of
//!   `E(Z/p^e Z)`, point orders, halving tests, 2-torsion counting.
//! * [`classify`] — the pseudoprime/Carmichael/Korselt predicates with
//!   witness evidence and an aggregated report.
//! * [`experiments`] — Deuring trace census vs. Hurwitz class numbers,
//!   Monte-Carlo density estimates, and exhaustive lemma scans.

pub mod arith;
pub mod classify;
pub mod curve;
pub mod ecpoint;
pub mod error;
pub mod experiments;
pub mod fp;
pub mod groupstruct;
pub mod lseries;
pub(crate) mod serde_util;

pub use arith::{Factorization, PadicOrder, TwoPowerSplit};
pub use classify::ClassificationReport;
pub use curve::{ReducedCurve, WeierstrassCurve};
pub use ecpoint::{DivisionPolynomialContext, ProjectivePoint};
pub use error::Error;
pub use experiments::{DensityEstimate, TraceCensus};
pub use groupstruct::{ExponentRecord, GroupShape};
pub use lseries::TraceTable;
