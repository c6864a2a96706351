//! Structure of `E(F_p)` and `E(Z/p^e Z)`: group order and invariant
//! factors, exponents, point orders, the halving ("is a double") test, and
//! 2-torsion counting.

use crate::arith::Factorization;
use crate::curve::WeierstrassCurve;
use crate::ecpoint::{add_points, psi_vanishes, ProjectivePoint};
use crate::error::{Error, Result};
use crate::fp::{factorize_u64, poly_roots, sqrtmod, CurveFp, FpPoint};
use crate::lseries::trace_of_frobenius;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

/// Invariant factors of `E(F_p) = Z/delta + Z/epsilon` with
/// `delta | epsilon` and `delta * epsilon = p + 1 - a_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupShape {
    pub p: u64,
    /// `#E(F_p) = p + 1 - a_p`.
    pub order: u64,
    pub delta: u64,
    pub epsilon: u64,
}

/// The exponent `epsilon_{N,p}` of `E(Z/p^e Z)`, `e = ord_p(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentRecord {
    pub p: u64,
    pub e: u32,
    pub epsilon_n_p: BigUint,
}

/// Exhaustive enumeration threshold for [`group_shape`]; above it the
/// exponent is certified by seeded random sampling.
const EXHAUSTIVE_LIMIT: u64 = 10_000;

/// Consecutive non-improving samples required before the sampled exponent
/// is accepted (per-prime failure odds at most `2^-40`).
const STABLE_SAMPLES: u32 = 40;

fn det_seed(curve: &WeierstrassCurve, p: u64) -> u64 {
    let mut h = DefaultHasher::new();
    curve.to_string().hash(&mut h);
    p.hash(&mut h);
    h.finish()
}

/// Points of the long model over a tiny field (`p < 5`), identity excluded.
fn tiny_field_points(curve: &WeierstrassCurve, p: u64) -> Vec<(BigInt, BigInt)> {
    let m = BigUint::from(p);
    let mut pts = Vec::new();
    for x in 0..p {
        for y in 0..p {
            let (xb, yb) = (BigInt::from(x), BigInt::from(y));
            if curve.is_on_curve_mod(&xb, &yb, &m) {
                pts.push((xb, yb));
            }
        }
    }
    pts
}

/// Order of an affine point over a tiny field by repeated addition.
fn tiny_point_order(curve: &WeierstrassCurve, x: &BigInt, y: &BigInt, p: u64) -> u64 {
    let m = BigUint::from(p);
    let pt = ProjectivePoint::from_affine(x.clone(), y.clone(), &m);
    let mut acc = pt.clone();
    let mut k = 1u64;
    while !acc.is_identity() {
        acc = add_points(&acc, &pt, curve, &m).expect("prime modulus");
        k += 1;
    }
    k
}

/// Minimal `k > 0` with `kP = O` over `F_p`; the identity has order 1.
pub fn point_order(
    curve: &WeierstrassCurve,
    pt: Option<(&BigInt, &BigInt)>,
    p: u64,
) -> Result<u64> {
    if !curve.has_good_reduction(&BigUint::from(p)) {
        return Err(Error::BadReduction(BigUint::from(p)));
    }
    let (x, y) = match pt {
        None => return Ok(1),
        Some(xy) => xy,
    };
    if p < 5 {
        return Ok(tiny_point_order(curve, x, y, p));
    }
    let a_p = trace_of_frobenius(curve, p)?;
    let n = (p as i64 + 1 - a_p) as u64;
    let fpc = short_curve_fp(curve, p)?;
    let fpt = short_point(curve, x, y, p)?;
    Ok(fpc.point_order(fpt, n, &factorize_u64(n)))
}

fn short_curve_fp(curve: &WeierstrassCurve, p: u64) -> Result<CurveFp> {
    let (a, b) = curve.short_params_u64(p)?;
    Ok(CurveFp::new(a, b, p))
}

/// Image of an affine point of the original model in short-model `F_p`
/// coordinates.
fn short_point(curve: &WeierstrassCurve, x: &BigInt, y: &BigInt, p: u64) -> Result<FpPoint> {
    let m = BigUint::from(p);
    let model = curve.short_model(&m)?;
    let (xs, ys) = model.map_point(x, y);
    let pb = BigInt::from(p);
    Ok(Some((
        xs.mod_floor(&pb).to_u64().expect("reduced"),
        ys.mod_floor(&pb).to_u64().expect("reduced"),
    )))
}

/// Invariant factors of `E(F_p)` (odd `p`, good reduction).
///
/// For `p <= 10^4` the exponent is the lcm of the orders of every point.
/// For larger `p` it is the lcm of sampled point orders, accepted once the
/// candidate is consistent with the order, the `delta | gcd(epsilon, p-1)`
/// constraint and the exact 2-torsion count, and has survived
/// [`STABLE_SAMPLES`] non-improving draws.
pub fn group_shape(curve: &WeierstrassCurve, p: u64) -> Result<GroupShape> {
    if !curve.has_good_reduction(&BigUint::from(p)) {
        return Err(Error::BadReduction(BigUint::from(p)));
    }
    if p == 2 {
        return Err(Error::Unsupported("group shape at p = 2".into()));
    }
    if p < 5 {
        let pts = tiny_field_points(curve, p);
        let order = pts.len() as u64 + 1;
        let epsilon = pts
            .iter()
            .fold(1u64, |acc, (x, y)| acc.lcm(&tiny_point_order(curve, x, y, p)));
        return Ok(GroupShape {
            p,
            order,
            delta: order / epsilon,
            epsilon,
        });
    }
    let a_p = trace_of_frobenius(curve, p)?;
    let n = (p as i64 + 1 - a_p) as u64;
    let nf = factorize_u64(n);
    let fpc = short_curve_fp(curve, p)?;
    let epsilon = if p <= EXHAUSTIVE_LIMIT {
        fpc.all_points()
            .into_iter()
            .fold(1u64, |acc, pt| acc.lcm(&fpc.point_order(pt, n, &nf)))
    } else {
        let order_two = count_order_two(curve, p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(det_seed(curve, p));
        let mut eps = 1u64;
        let mut stable = 0u32;
        loop {
            let x = rng.gen_range(0..p);
            let rhs = fpc.rhs(x);
            let y = match sqrtmod(rhs, p) {
                Some(y) => y,
                None => continue,
            };
            let o = fpc.point_order(Some((x, y)), n, &nf);
            let merged = eps.lcm(&o);
            if merged == eps {
                stable += 1;
            } else {
                eps = merged;
                stable = 0;
            }
            if eps == n {
                break; // cyclic: nothing larger is possible
            }
            if stable >= STABLE_SAMPLES {
                let delta = n / eps.min(n);
                let consistent = n % eps == 0
                    && eps % delta == 0
                    && (p - 1) % delta == 0
                    && (delta % 2 == 0) == (order_two == 3);
                if consistent {
                    break;
                }
                stable = 0; // keep sampling until consistent
            }
        }
        eps
    };
    Ok(GroupShape {
        p,
        order: n,
        delta: n / epsilon,
        epsilon,
    })
}

/// Number of points of exact order 2 in `E(F_p)` (0, 1, or 3): the roots
/// of `4x^3 + b2 x^2 + 2 b4 x + b6` modulo `p`.
pub fn count_order_two(curve: &WeierstrassCurve, p: u64) -> Result<usize> {
    if p == 2 {
        return Err(Error::Unsupported("2-torsion count at p = 2".into()));
    }
    if !curve.has_good_reduction(&BigUint::from(p)) {
        return Err(Error::BadReduction(BigUint::from(p)));
    }
    let (b2, b4, b6, _) = curve.b_quantities();
    let pb = BigInt::from(p);
    let red = |v: BigInt| v.mod_floor(&pb).to_u64().expect("reduced");
    let f = vec![red(b6), red(2 * b4), red(b2), 4 % p];
    Ok(poly_roots(&f, p).len())
}

/// Exponent of `E(Z/p^e Z)`.
///
/// `e = 1` comes from [`group_shape`]. For `e >= 2`: when
/// `p` does not divide `n = p + 1 - a_p` the reduction sequence splits and
/// the exponent is `p^{e-1} * epsilon`; when `p | n` the group is
/// enumerated directly (supported for `p >= 5`, `p^e <= 10^4`).
pub fn exponent_mod_prime_power(curve: &WeierstrassCurve, p: u64, e: u32) -> Result<ExponentRecord> {
    let shape = group_shape(curve, p)?;
    if e == 1 {
        return Ok(ExponentRecord {
            p,
            e,
            epsilon_n_p: BigUint::from(shape.epsilon),
        });
    }
    if shape.order % p != 0 {
        let eps = BigUint::from(p).pow(e - 1) * shape.epsilon;
        return Ok(ExponentRecord {
            p,
            e,
            epsilon_n_p: eps,
        });
    }
    // p divides the group order: the extension need not split, so the
    // exponent is found by enumerating E(Z/p^e Z) itself. Its kernel of
    // reduction is cyclic of order p^{e-1}, so the exponent is
    // lcm(p^{e-1}, orders of all affine points).
    let pe = match p.checked_pow(e) {
        Some(pe) if p >= 5 && pe <= 10_000 => pe,
        _ => {
            return Err(Error::Unsupported(format!(
                "exponent of E(Z/{p}^{e} Z) with p | #E(F_p): enumeration bound exceeded \
                 (the exponent still divides p^(e-1) * (p+1-a_p))"
            )))
        }
    };
    let m = BigUint::from(pe);
    let kernel = BigUint::from(p).pow(e - 1);
    let bound = &kernel * BigUint::from(shape.order); // every order divides this
    let bound_factors: Vec<(u64, u32)> = {
        let mut f = factorize_u64(shape.order);
        match f.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += e - 1,
            None => f.push((p, e - 1)),
        }
        f
    };
    let mut eps = kernel.clone();
    for x in 0..pe {
        for y in 0..pe {
            let (xb, yb) = (BigInt::from(x), BigInt::from(y));
            if !curve.is_on_curve_mod(&xb, &yb, &m) {
                continue;
            }
            // Peel primes off the order bound while psi still vanishes.
            let mut d = bound.clone();
            for (q, _) in &bound_factors {
                let qb = BigUint::from(*q);
                while (&d % &qb).is_zero() && psi_vanishes(&(&d / &qb), &xb, &yb, curve, &m)? {
                    d /= &qb;
                }
            }
            eps = eps.lcm(&d);
            if eps == bound {
                break;
            }
        }
    }
    Ok(ExponentRecord {
        p,
        e,
        epsilon_n_p: eps,
    })
}

/// Whether the component of `P` modulo `p` is a double in `E(F_p)`.
fn is_double_mod_p(point: &ProjectivePoint, curve: &WeierstrassCurve, p: u64) -> Result<bool> {
    let pb = BigUint::from(p);
    if (&point.z % BigInt::from(p)).is_zero() {
        return Ok(true); // O = 2O
    }
    let (x, y) = point
        .component_affine(&pb)
        .expect("nonzero Z mod a prime is invertible");
    if p < 5 {
        // Tiny field: collect the doubles set directly on the long model.
        let target = ProjectivePoint::from_affine(x, y, &pb);
        for (qx, qy) in tiny_field_points(curve, p) {
            let q = ProjectivePoint::from_affine(qx, qy, &pb);
            if add_points(&q, &q, curve, &pb)? == target {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let a_p = trace_of_frobenius(curve, p)?;
    let n = (p as i64 + 1 - a_p) as u64;
    if n % 2 == 1 {
        return Ok(true); // in a group of odd order every point is a double
    }
    let fpc = short_curve_fp(curve, p)?;
    let (xp, yp) = short_point(curve, &x, &y, p)?.expect("affine");
    // Solve x(2Q) = x_P: the fiber of the duplication map is the quartic
    //   X^4 - 4 x_P X^3 - 2A X^2 - (8B + 4 x_P A) X + (A^2 - 4 x_P B).
    let (a, b) = (fpc.a, fpc.b);
    let mul = crate::fp::mulmod;
    let sub = crate::fp::submod;
    let quartic = vec![
        sub(mul(a, a, p), mul(4 % p, mul(xp, b, p), p), p),
        (p - (mul(8 % p, b, p) + mul(4 % p, mul(xp, a, p), p)) % p) % p,
        (p - mul(2 % p, a, p)) % p,
        (p - mul(4 % p, xp, p)) % p,
        1,
    ];
    for xq in poly_roots(&quartic, p) {
        let fq = fpc.rhs(xq);
        if fq == 0 {
            continue; // Q would be 2-torsion, doubling to O, not to P
        }
        if let Some(yq) = sqrtmod(fq, p) {
            for cand in [yq, p - yq] {
                if fpc.dbl(Some((xq, cand))) == Some((xp, yp)) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Whether `P = 2Q` has a solution in `E(Z/NZ)`, for squarefree odd `N`
/// (checked componentwise over the primes of the factorization).
pub fn is_double(
    point: &ProjectivePoint,
    curve: &WeierstrassCurve,
    fact: &Factorization,
) -> Result<bool> {
    if fact.value() != point.modulus {
        return Err(Error::InvalidInput(
            "factorization does not match the point's modulus".into(),
        ));
    }
    if !fact.is_squarefree() {
        return Err(Error::Unsupported(
            "halving test requires squarefree N".into(),
        ));
    }
    for (p, _) in fact.factors() {
        let p64 = p.to_u64().ok_or_else(|| {
            Error::Unsupported(format!("prime factor {p} exceeds the supported bound"))
        })?;
        if p64 == 2 {
            return Err(Error::Unsupported("halving test requires odd N".into()));
        }
        if !is_double_mod_p(point, curve, p64)? {
            return Ok(false);
        }
    }
    Ok(true)
}
