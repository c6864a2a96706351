//! Pseudoprime and Carmichael predicates: the per-point elliptic, Euler
//! elliptic, and strong elliptic tests, the whole-curve Korselt-style
//! criteria (Type I, Type II, Euler, strong), and the equivalence
//! corollaries connecting them.
//!
//! All per-point tests work componentwise over the prime powers of `N`:
//! "`= O (mod N)`" means the identity at every component, and "a 2-torsion
//! point modulo `N`" is *strictly* an affine point `[x : y : 1]` with
//! `2y + a1 x + a3 = 0 (mod N)` — CRT hybrids that are the identity at some
//! components and affine at others satisfy neither form.

use crate::arith::{
    crt_combine, jacobi, padic_order, split_two_power, Factorization, PadicOrder,
};
use crate::curve::WeierstrassCurve;
use crate::ecpoint::{psi_vanishes, scalar_mul, ProjectivePoint};
use crate::error::{Error, Result};
use crate::groupstruct::{count_order_two, exponent_mod_prime_power, is_double};
use crate::lseries::{trace_of_frobenius, trace_table};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Reduction of a point modulo one prime-power component of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Identity,
    Affine(BigInt, BigInt),
    /// Neither the identity nor affine: only possible modulo `p^e` with
    /// `e >= 2` (the kernel of reduction to `F_p`).
    Other,
}

/// Verdict of the Euler elliptic pseudoprime test, with the branch taken.
#[derive(Debug, Clone)]
pub struct EulerOutcome {
    pub value: bool,
    /// Whether `P = 2Q` was solvable, i.e. which case of the definition
    /// applied.
    pub point_is_double: bool,
    /// The components of `((N+1-a_N)/2) P`.
    pub half_multiple: Vec<(BigUint, Component)>,
}

/// Verdict of the strong elliptic pseudoprime test.
#[derive(Debug, Clone)]
pub struct StrongOutcome {
    pub value: bool,
    pub s: u64,
    pub t: BigUint,
    pub witness: Option<StrongWitness>,
}

/// How the strong test succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrongWitness {
    /// `tP = O (mod N)`.
    TMultipleIdentity,
    /// `(2^r t) P` is an affine 2-torsion point modulo `N`.
    TwoTorsion { r: u64, x: BigInt, y: BigInt },
}

/// Type I Korselt verdict with the first failing condition, if any.
#[derive(Debug, Clone)]
pub struct Korselt1Outcome {
    pub value: bool,
    /// `(p, condition)` for the first prime/condition that failed.
    pub failing: Option<(u64, String)>,
}

/// Per-prime disjunction record for the Type-I/Euler equivalence:
/// `(p, divisibility branch, full-2-torsion branch)`.
#[derive(Debug, Clone)]
pub struct EulerEquivalence {
    pub value: bool,
    pub per_prime: Vec<(u64, bool, bool)>,
}

/// One predicate slot of a [`ClassificationReport`]: a verdict, or `null`
/// with a reason when the predicate does not apply.
#[derive(Debug, Clone, Serialize)]
pub struct Flag {
    pub value: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Flag {
    fn yes(detail: impl Into<Option<String>>) -> Self {
        Flag {
            value: Some(true),
            detail: detail.into(),
        }
    }
    fn no(detail: impl Into<Option<String>>) -> Self {
        Flag {
            value: Some(false),
            detail: detail.into(),
        }
    }
    fn na(reason: String) -> Self {
        Flag {
            value: None,
            detail: Some(reason),
        }
    }
    fn from_bool(v: bool) -> Self {
        Flag {
            value: Some(v),
            detail: None,
        }
    }
}

/// Aggregated verdict record for one `(N, E, P?)` instance.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    #[serde(serialize_with = "crate::serde_util::biguint_as_string")]
    pub n: BigUint,
    pub curve: String,
    #[serde(serialize_with = "crate::serde_util::opt_bigint_pair_as_strings")]
    pub point: Option<(BigInt, BigInt)>,
    pub factors: Vec<(u64, u32)>,
    #[serde(serialize_with = "crate::serde_util::bigint_as_string")]
    pub a_n: BigInt,
    pub elliptic_pp: Flag,
    pub euler_pp: Flag,
    pub strong_pp: Flag,
    pub elliptic_carmichael: Flag,
    pub euler_carmichael: Flag,
    pub strong_carmichael: Flag,
    pub korselt_type1: Flag,
    pub korselt_type2: Flag,
}

/// Checks the common gate of every pseudoprime definition: at least two
/// distinct prime factors and good reduction at each of them.
fn check_gate(fact: &Factorization, curve: &WeierstrassCurve) -> Result<()> {
    if fact.num_primes() < 2 {
        return Err(Error::UndefinedPredicate(
            "N must have at least two distinct prime factors".into(),
        ));
    }
    for (p, _) in fact.factors() {
        if !curve.has_good_reduction(&p) {
            return Err(Error::BadReduction(p.clone()));
        }
    }
    Ok(())
}

/// `N + 1 - a_N` (always positive under the Hasse bound), with `a_N`.
pub fn n_plus_one_minus_a_n(
    curve: &WeierstrassCurve,
    fact: &Factorization,
) -> Result<(BigInt, BigUint)> {
    let a_n = trace_table(curve, fact)?.a_n;
    let m = BigInt::from(fact.value()) + BigInt::one() - &a_n;
    let m = m
        .to_biguint()
        .ok_or_else(|| Error::InvalidInput("N + 1 - a_N is not positive".into()))?;
    Ok((a_n, m))
}

/// Splits a point of `E(Z/NZ)` into its prime-power components.
fn split_components(
    point: &ProjectivePoint,
    fact: &Factorization,
) -> Result<Vec<(BigUint, Option<(BigInt, BigInt)>)>> {
    let mut out = Vec::new();
    for (p, e) in fact.factors() {
        let pe = p.pow(*e);
        if (&point.z % BigInt::from(pe.clone())).is_zero() {
            out.push((pe, None));
        } else {
            match point.component_affine(&pe) {
                Some(xy) => out.push((pe, Some(xy))),
                None => {
                    return Err(Error::Unsupported(
                        "point is neither affine nor the identity modulo a prime power of N"
                            .into(),
                    ))
                }
            }
        }
    }
    Ok(out)
}

/// The components of `mP` for each prime power of `N`.
fn multiple_components(
    m: &BigUint,
    comps: &[(BigUint, Option<(BigInt, BigInt)>)],
    curve: &WeierstrassCurve,
) -> Result<Vec<(BigUint, Component)>> {
    let mut out = Vec::new();
    for (pe, comp) in comps {
        let c = match comp {
            None => Component::Identity,
            Some((x, y)) => {
                let mult = scalar_mul(m, x, y, curve, pe)?;
                if mult.is_identity() {
                    Component::Identity
                } else {
                    match mult.to_affine() {
                        Some((mx, my)) => Component::Affine(mx, my),
                        None => Component::Other,
                    }
                }
            }
        };
        out.push((pe.clone(), c));
    }
    Ok(out)
}

/// `mP = O (mod N)`, componentwise, via the division-polynomial criterion.
fn multiple_is_identity(
    m: &BigUint,
    comps: &[(BigUint, Option<(BigInt, BigInt)>)],
    curve: &WeierstrassCurve,
) -> Result<bool> {
    for (pe, comp) in comps {
        if let Some((x, y)) = comp {
            if !psi_vanishes(m, x, y, curve, pe)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether every component is affine and satisfies the 2-torsion form
/// `2y + a1 x + a3 = 0`; returns the CRT-combined point when so.
fn all_two_torsion(
    comps: &[(BigUint, Component)],
    curve: &WeierstrassCurve,
) -> Result<Option<(BigInt, BigInt)>> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (pe, c) in comps {
        match c {
            Component::Affine(x, y) if curve.is_two_torsion_form(x, y, pe) => {
                xs.push((x.clone(), pe.clone()));
                ys.push((y.clone(), pe.clone()));
            }
            _ => return Ok(None),
        }
    }
    let (x, _) = crt_combine(&xs)?;
    let (y, _) = crt_combine(&ys)?;
    Ok(Some((BigInt::from(x), BigInt::from(y))))
}

/// `N` is an elliptic pseudoprime for `(E, P)`: at least two distinct
/// primes, good reduction at all of them, and `(N+1-a_N) P = O (mod N)`.
pub fn is_elliptic_pseudoprime(
    fact: &Factorization,
    curve: &WeierstrassCurve,
    point: &ProjectivePoint,
) -> Result<bool> {
    check_gate(fact, curve)?;
    let (_, m) = n_plus_one_minus_a_n(curve, fact)?;
    let comps = split_components(point, fact)?;
    multiple_is_identity(&m, &comps, curve)
}

/// Gordon's CM pseudoprime test: `gcd(N, 6 Delta) = 1`,
/// `jacobi(-d, N) = -1`, and `(N+1) P = O (mod N)`.
pub fn is_gordon_elliptic_pseudoprime(
    fact: &Factorization,
    curve: &WeierstrassCurve,
    point: &ProjectivePoint,
    d: i64,
) -> Result<bool> {
    let n = fact.value();
    let disc6 = (BigInt::from(6) * curve.discriminant()).magnitude().clone();
    if !n.gcd(&disc6).is_one() {
        return Err(Error::InvalidInput("gcd(N, 6 Delta) must be 1".into()));
    }
    if jacobi(&BigInt::from(-d), &BigInt::from(n.clone()))? != -1 {
        return Ok(false);
    }
    let comps = split_components(point, fact)?;
    multiple_is_identity(&(n + 1u32), &comps, curve)
}

/// The Euler elliptic pseudoprime test. Requires `N + 1 - a_N` even (the
/// predicate is undefined otherwise) and squarefree `N` (for the halving
/// test).
pub fn is_euler_elliptic_pseudoprime(
    fact: &Factorization,
    curve: &WeierstrassCurve,
    point: &ProjectivePoint,
) -> Result<EulerOutcome> {
    check_gate(fact, curve)?;
    let (_, m) = n_plus_one_minus_a_n(curve, fact)?;
    if m.is_odd() {
        return Err(Error::UndefinedPredicate(
            "the Euler test needs N + 1 - a_N to be even".into(),
        ));
    }
    let half = &m >> 1u32;
    let comps = split_components(point, fact)?;
    let point_is_double = is_double(point, curve, fact)?;
    let half_multiple = multiple_components(&half, &comps, curve)?;
    let is_identity = half_multiple
        .iter()
        .all(|(_, c)| *c == Component::Identity);
    let value = if point_is_double {
        is_identity
    } else {
        // A "2-torsion point modulo N" here means O or an affine point in
        // the 2-torsion form; mixed identity/affine combinations fail.
        is_identity || all_two_torsion(&half_multiple, curve)?.is_some()
    };
    Ok(EulerOutcome {
        value,
        point_is_double,
        half_multiple,
    })
}

/// The strong elliptic pseudoprime test: with `N + 1 - a_N = 2^s t`
/// (`t` odd), accept if `tP = O (mod N)` or some `(2^r t) P`, `0 <= r < s`,
/// is an affine 2-torsion point modulo `N`.
pub fn is_strong_elliptic_pseudoprime(
    fact: &Factorization,
    curve: &WeierstrassCurve,
    point: &ProjectivePoint,
) -> Result<StrongOutcome> {
    check_gate(fact, curve)?;
    let (_, m) = n_plus_one_minus_a_n(curve, fact)?;
    let split = split_two_power(&m)?;
    let comps = split_components(point, fact)?;
    if multiple_is_identity(&split.t, &comps, curve)? {
        return Ok(StrongOutcome {
            value: true,
            s: split.s,
            t: split.t,
            witness: Some(StrongWitness::TMultipleIdentity),
        });
    }
    for r in 0..split.s {
        let k = &split.t << r;
        let mult = multiple_components(&k, &comps, curve)?;
        if let Some((x, y)) = all_two_torsion(&mult, curve)? {
            return Ok(StrongOutcome {
                value: true,
                s: split.s,
                t: split.t,
                witness: Some(StrongWitness::TwoTorsion { r, x, y }),
            });
        }
    }
    Ok(StrongOutcome {
        value: false,
        s: split.s,
        t: split.t,
        witness: None,
    })
}

fn factor_as_u64(p: &BigUint) -> Result<u64> {
    p.to_u64()
        .ok_or_else(|| Error::Unsupported(format!("prime factor {p} exceeds the supported bound")))
}

/// Type I Korselt: for every prime `p | N`, good reduction,
/// `(p+1-a_p) | (N+1-a_N)`, and `ord_p(a_N - 1) >= ord_p(N)` (relaxed by
/// one when `a_p` is not `1 (mod p)`).
pub fn is_korselt_type1(
    fact: &Factorization,
    curve: &WeierstrassCurve,
) -> Result<Korselt1Outcome> {
    check_gate(fact, curve)?;
    let (a_n, m) = n_plus_one_minus_a_n(curve, fact)?;
    let m = BigInt::from(m);
    for (p, e) in fact.factors() {
        let p64 = factor_as_u64(&p)?;
        let a_p = trace_of_frobenius(curve, p64)?;
        let local_order = BigInt::from(p64 as i64 + 1 - a_p);
        if !(&m % &local_order).is_zero() {
            return Ok(Korselt1Outcome {
                value: false,
                failing: Some((p64, format!("{local_order} does not divide {m}"))),
            });
        }
        let anomalous_mod_p = (a_p - 1).rem_euclid(p64 as i64) == 0;
        let slack = if anomalous_mod_p { 0 } else { 1 };
        let needed = *e as i64 - slack;
        let ord = padic_order(&(&a_n - 1), &p);
        let ok = match ord {
            PadicOrder::Infinite => true,
            PadicOrder::Finite(v) => v as i64 >= needed,
        };
        if !ok {
            return Ok(Korselt1Outcome {
                value: false,
                failing: Some((p64, format!("ord_{p64}(a_N - 1) = {ord:?} < {needed}"))),
            });
        }
    }
    Ok(Korselt1Outcome {
        value: true,
        failing: None,
    })
}

/// Exponents `epsilon_{N,p}` for every prime power of `N`.
fn exponents(
    fact: &Factorization,
    curve: &WeierstrassCurve,
) -> Result<Vec<(u64, BigUint)>> {
    fact.factors()
        .iter()
        .map(|(p, e)| {
            let p64 = factor_as_u64(p)?;
            let rec = exponent_mod_prime_power(curve, p64, *e)?;
            Ok((p64, rec.epsilon_n_p))
        })
        .collect()
}

/// Type II Korselt: `epsilon_{N,p} | (N+1-a_N)` for every `p | N`.
pub fn is_korselt_type2(fact: &Factorization, curve: &WeierstrassCurve) -> Result<bool> {
    check_gate(fact, curve)?;
    let (_, m) = n_plus_one_minus_a_n(curve, fact)?;
    Ok(exponents(fact, curve)?
        .iter()
        .all(|(_, eps)| m.is_multiple_of(eps)))
}

/// Elliptic Carmichael (odd `N > 2`): equivalent to Type II Korselt.
pub fn is_elliptic_carmichael(fact: &Factorization, curve: &WeierstrassCurve) -> Result<bool> {
    let n = fact.value();
    if n.is_even() || n <= BigUint::from(2u32) {
        return Err(Error::UndefinedPredicate(
            "the Carmichael criterion applies to odd N > 2".into(),
        ));
    }
    is_korselt_type2(fact, curve)
}

/// Euler elliptic Carmichael: `epsilon_{N,p} | (N+1-a_N)/2` for every `p`.
pub fn is_euler_elliptic_carmichael(
    fact: &Factorization,
    curve: &WeierstrassCurve,
) -> Result<bool> {
    check_gate(fact, curve)?;
    let (_, m) = n_plus_one_minus_a_n(curve, fact)?;
    if m.is_odd() {
        return Err(Error::UndefinedPredicate(
            "the Euler criterion needs N + 1 - a_N to be even".into(),
        ));
    }
    let half = &m >> 1u32;
    Ok(exponents(fact, curve)?
        .iter()
        .all(|(_, eps)| half.is_multiple_of(eps)))
}

/// Strong elliptic Carmichael (odd `N`): `epsilon_{N,p} | t` for every
/// `p`, where `t` is the odd part of `N + 1 - a_N`.
pub fn is_strong_elliptic_carmichael(
    fact: &Factorization,
    curve: &WeierstrassCurve,
) -> Result<bool> {
    check_gate(fact, curve)?;
    if fact.value().is_even() {
        return Err(Error::UndefinedPredicate(
            "the strong criterion applies to odd N".into(),
        ));
    }
    let (_, m) = n_plus_one_minus_a_n(curve, fact)?;
    let t = split_two_power(&m)?.t;
    Ok(exponents(fact, curve)?
        .iter()
        .all(|(_, eps)| t.is_multiple_of(eps)))
}

/// For Type I Korselt `N` with even `N + 1 - a_N`: `N` is Euler elliptic
/// Carmichael iff for every `p | N` either `(p+1-a_p) | (N+1-a_N)/2` or
/// `E(F_p)` has exactly three points of order 2.
pub fn korselt1_euler_equivalence(
    fact: &Factorization,
    curve: &WeierstrassCurve,
) -> Result<EulerEquivalence> {
    let k1 = is_korselt_type1(fact, curve)?;
    if !k1.value {
        return Err(Error::UndefinedPredicate(
            "the equivalence applies to Type I Korselt numbers".into(),
        ));
    }
    let (_, m) = n_plus_one_minus_a_n(curve, fact)?;
    if m.is_odd() {
        return Err(Error::UndefinedPredicate(
            "the equivalence needs N + 1 - a_N to be even".into(),
        ));
    }
    let half = BigInt::from(&m >> 1);
    let mut per_prime = Vec::new();
    let mut value = true;
    for (p, _) in fact.factors() {
        let p64 = factor_as_u64(&p)?;
        let a_p = trace_of_frobenius(curve, p64)?;
        let local = BigInt::from(p64 as i64 + 1 - a_p);
        let div_branch = (&half % &local).is_zero();
        let torsion_branch = count_order_two(curve, p64)? == 3;
        value &= div_branch || torsion_branch;
        per_prime.push((p64, div_branch, torsion_branch));
    }
    Ok(EulerEquivalence { value, per_prime })
}

/// For Type I Korselt `N`: `N` is strong elliptic Carmichael iff
/// `p + 1 - a_p` is odd for every prime `p | N`.
pub fn korselt1_strong_equivalence(
    fact: &Factorization,
    curve: &WeierstrassCurve,
) -> Result<bool> {
    let k1 = is_korselt_type1(fact, curve)?;
    if !k1.value {
        return Err(Error::UndefinedPredicate(
            "the equivalence applies to Type I Korselt numbers".into(),
        ));
    }
    for (p, _) in fact.factors() {
        let p64 = factor_as_u64(&p)?;
        let a_p = trace_of_frobenius(curve, p64)?;
        if (p64 as i64 + 1 - a_p) % 2 == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn flag_from(result: Result<bool>) -> Result<Flag> {
    match result {
        Ok(v) => Ok(Flag::from_bool(v)),
        Err(Error::UndefinedPredicate(r)) | Err(Error::Unsupported(r)) => Ok(Flag::na(r)),
        Err(e) => Err(e),
    }
}

/// Runs every predicate on `(N, E)` and, when given, the per-point tests
/// on `P`, mapping undefined predicates to `n/a` flags with reasons.
pub fn classify_report(
    fact: &Factorization,
    curve: &WeierstrassCurve,
    point: Option<(BigInt, BigInt)>,
) -> Result<ClassificationReport> {
    let n = fact.value();
    if fact.num_primes() < 2 {
        return Err(Error::UndefinedPredicate(
            "N must have at least two distinct prime factors".into(),
        ));
    }
    curve.reduce_mod(&n)?; // surfaces bad reduction with the prime named
    let (a_n, _) = n_plus_one_minus_a_n(curve, fact)?;
    let proj = match &point {
        Some((x, y)) => {
            if !curve.is_on_curve_mod(x, y, &n) {
                return Err(Error::InvalidInput(format!(
                    "point ({x}, {y}) is not on {curve} modulo {n}"
                )));
            }
            Some(ProjectivePoint::from_affine(x.clone(), y.clone(), &n))
        }
        None => None,
    };
    let no_point = || Flag::na("no point supplied".into());
    let (elliptic_pp, euler_pp, strong_pp) = match &proj {
        None => (no_point(), no_point(), no_point()),
        Some(pt) => {
            let e = flag_from(is_elliptic_pseudoprime(fact, curve, pt))?;
            let eu = match is_euler_elliptic_pseudoprime(fact, curve, pt) {
                Ok(o) => {
                    let branch = if o.point_is_double {
                        "P = 2Q solvable".to_string()
                    } else {
                        "P is not a double".to_string()
                    };
                    if o.value {
                        Flag::yes(Some(branch))
                    } else {
                        Flag::no(Some(branch))
                    }
                }
                Err(Error::UndefinedPredicate(r)) | Err(Error::Unsupported(r)) => Flag::na(r),
                Err(e) => return Err(e),
            };
            let st = match is_strong_elliptic_pseudoprime(fact, curve, pt) {
                Ok(o) => {
                    let detail = match &o.witness {
                        Some(StrongWitness::TMultipleIdentity) => Some("tP = O".to_string()),
                        Some(StrongWitness::TwoTorsion { r, x, y }) => {
                            Some(format!("2-torsion at r = {r}: ({x}, {y})"))
                        }
                        None => None,
                    };
                    Flag {
                        value: Some(o.value),
                        detail,
                    }
                }
                Err(Error::UndefinedPredicate(r)) | Err(Error::Unsupported(r)) => Flag::na(r),
                Err(e) => return Err(e),
            };
            (e, eu, st)
        }
    };
    let korselt_type1 = match is_korselt_type1(fact, curve) {
        Ok(o) => Flag {
            value: Some(o.value),
            detail: o.failing.map(|(p, c)| format!("fails at p = {p}: {c}")),
        },
        Err(Error::UndefinedPredicate(r)) | Err(Error::Unsupported(r)) => Flag::na(r),
        Err(e) => return Err(e),
    };
    let report = ClassificationReport {
        n: n.clone(),
        curve: curve.to_string(),
        point,
        factors: fact
            .factors()
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap_or(u64::MAX), *e))
            .collect(),
        a_n,
        elliptic_pp,
        euler_pp,
        strong_pp,
        elliptic_carmichael: flag_from(is_elliptic_carmichael(fact, curve))?,
        euler_carmichael: flag_from(is_euler_elliptic_carmichael(fact, curve))?,
        strong_carmichael: flag_from(is_strong_elliptic_carmichael(fact, curve))?,
        korselt_type1,
        korselt_type2: flag_from(is_korselt_type2(fact, curve))?,
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use crate::lseries::find_anomalous;
    use std::str::FromStr;

    fn curve(a: i64, b: i64) -> WeierstrassCurve {
        WeierstrassCurve::new_short(a, b).unwrap()
    }

    fn fact_of(n: u64) -> Factorization {
        factorize(&BigUint::from(n)).unwrap()
    }

    fn pt(x: i64, y: i64, n: &BigUint) -> ProjectivePoint {
        ProjectivePoint::from_affine(BigInt::from(x), BigInt::from(y), n)
    }

    #[test]
    fn gordon_7739_example() {
        let e = curve(-1056, 13552);
        let fact = fact_of(7739);
        let n = fact.value();
        let p = pt(33, 121, &n);
        assert!(is_elliptic_pseudoprime(&fact, &e, &p).unwrap());
        assert!(is_gordon_elliptic_pseudoprime(&fact, &e, &p, 11).unwrap());
        let euler = is_euler_elliptic_pseudoprime(&fact, &e, &p).unwrap();
        assert!(euler.value);
        let strong = is_strong_elliptic_pseudoprime(&fact, &e, &p).unwrap();
        assert!(!strong.value);
        assert_eq!(strong.s, 2);
        assert_eq!(strong.t, BigUint::from(1935u32));
    }

    #[test]
    fn appendix_composite_not_pseudoprime() {
        // N = 61 * 997 * 1289 * 3851 * 30113 with y^2 = x^3 - 5x, P = (5,10).
        let e = curve(-5, 0);
        let n = BigUint::from_str("9090870127122419").unwrap();
        let fact = factorize(&n).unwrap();
        let p = pt(5, 10, &n);
        assert!(!is_elliptic_pseudoprime(&fact, &e, &p).unwrap());
    }

    #[test]
    fn korselt_27563_example() {
        let e = curve(7, 3);
        let fact = fact_of(27563);
        let k1 = is_korselt_type1(&fact, &e).unwrap();
        assert!(k1.value, "failing: {:?}", k1.failing);
        assert!(is_korselt_type2(&fact, &e).unwrap());
        assert!(is_elliptic_carmichael(&fact, &e).unwrap());
        // 42 does not divide (N+1-a_N)/2 = 13797 and E(F_43) does not have
        // full 2-torsion, so the Euler criterion fails at p = 43.
        assert!(!is_euler_elliptic_carmichael(&fact, &e).unwrap());
        assert!(!is_strong_elliptic_carmichael(&fact, &e).unwrap());
        let eq = korselt1_euler_equivalence(&fact, &e).unwrap();
        assert!(!eq.value);
        let p43 = eq.per_prime.iter().find(|(p, _, _)| *p == 43).unwrap();
        assert!(!p43.1 && !p43.2);
        assert_eq!(eq.value, is_euler_elliptic_carmichael(&fact, &e).unwrap());
        // p + 1 - a_43 = 42 is even, so the strong equivalence fails too.
        assert!(!korselt1_strong_equivalence(&fact, &e).unwrap());
    }

    #[test]
    fn euler_carmichael_6119_example() {
        let e = curve(0, 80);
        let fact = fact_of(6119);
        assert!(is_euler_elliptic_carmichael(&fact, &e).unwrap());
        assert!(is_korselt_type2(&fact, &e).unwrap());
        // epsilon_{N,29} = 30 is even while t is odd.
        assert!(!is_strong_elliptic_carmichael(&fact, &e).unwrap());
    }

    #[test]
    fn remark_n21_example() {
        let e = curve(14, 6);
        let fact = fact_of(21);
        // a_N = 0, so N + 1 - a_N = 22; both exponents are 2 and 2 | 22.
        assert!(is_korselt_type2(&fact, &e).unwrap());
        assert!(is_elliptic_carmichael(&fact, &e).unwrap());
        // (N+1-a_N)/2 = 11 is odd, so 2 does not divide it.
        assert!(!is_euler_elliptic_carmichael(&fact, &e).unwrap());
        assert!(!is_strong_elliptic_carmichael(&fact, &e).unwrap());
        // Type I fails: 4 = 3 + 1 - a_3 with a_3 = 0 does not divide 22.
        let k1 = is_korselt_type1(&fact, &e).unwrap();
        assert!(!k1.value);
        assert_eq!(k1.failing.as_ref().unwrap().0, 3);
    }

    #[test]
    fn anomalous_products_are_strong_carmichael() {
        // y^2 = x^3 + 3x + 7 is anomalous at 5 and 13.
        let e = curve(3, 7);
        assert_eq!(find_anomalous(&e, 5, 20), vec![5, 13]);
        let fact = fact_of(65);
        assert!(is_korselt_type1(&fact, &e).unwrap().value);
        assert!(is_strong_elliptic_carmichael(&fact, &e).unwrap());
        assert!(korselt1_strong_equivalence(&fact, &e).unwrap());
        // a_5 = a_13 = 1, so N + 1 - a_N = 65 is odd and the Euler
        // criterion is undefined.
        assert!(matches!(
            is_euler_elliptic_carmichael(&fact, &e),
            Err(Error::UndefinedPredicate(_))
        ));
        assert!(matches!(
            korselt1_euler_equivalence(&fact, &e),
            Err(Error::UndefinedPredicate(_))
        ));
    }

    #[test]
    fn report_shapes() {
        let e = curve(-1056, 13552);
        let fact = fact_of(7739);
        let report =
            classify_report(&fact, &e, Some((BigInt::from(33), BigInt::from(121)))).unwrap();
        assert_eq!(report.euler_pp.value, Some(true));
        assert_eq!(report.strong_pp.value, Some(false));
        assert_eq!(report.elliptic_pp.value, Some(true));
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["n"], "7739");
        assert_eq!(json["point"][0], "33");
        // Prime N is rejected at the definition gate.
        let prime = factorize(&BigUint::from(101u32)).unwrap();
        assert!(matches!(
            classify_report(&prime, &e, None),
            Err(Error::UndefinedPredicate(_))
        ));
        // No point: per-point flags are n/a with a reason.
        let r2 = classify_report(&fact, &e, None).unwrap();
        assert_eq!(r2.euler_pp.value, None);
        assert!(r2.euler_pp.detail.is_some());
    }

    #[test]
    fn korselt1_search_equivalences() {
        // Exhaustive cross-check of both corollary equivalences over all
        // Type I Korselt products p*q <= 10^5 for y^2 = x^3 + 7x + 3.
        let e = curve(7, 3);
        let good = |p: &u64| *p >= 5 && e.has_good_reduction(&BigUint::from(*p));
        let small: Vec<u64> = crate::arith::primes_up_to(316)
            .into_iter()
            .filter(good)
            .collect();
        let large: Vec<u64> = crate::arith::primes_up_to(20_000)
            .into_iter()
            .filter(good)
            .collect();
        let mut checked = 0u32;
        for &p in &small {
            for &q in large.iter().filter(|&&q| q > p && p * q <= 100_000) {
                let fact = fact_of(p * q);
                if !is_korselt_type1(&fact, &e).unwrap().value {
                    continue;
                }
                checked += 1;
                let (_, m) = n_plus_one_minus_a_n(&e, &fact).unwrap();
                if m.is_even() {
                    let eq = korselt1_euler_equivalence(&fact, &e).unwrap();
                    assert_eq!(
                        eq.value,
                        is_euler_elliptic_carmichael(&fact, &e).unwrap(),
                        "Euler equivalence fails at N = {}",
                        p * q
                    );
                }
                assert_eq!(
                    korselt1_strong_equivalence(&fact, &e).unwrap(),
                    is_strong_elliptic_carmichael(&fact, &e).unwrap(),
                    "strong equivalence fails at N = {}",
                    p * q
                );
            }
        }
        assert!(checked > 0, "search found no Type I Korselt numbers");
    }
}
