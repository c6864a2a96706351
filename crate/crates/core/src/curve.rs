//! Weierstrass curves over the integers: discriminants, reduction modulo
//! `m`, good-reduction tests, and the affine order-2 condition.

use crate::arith::{factorize, mod_inverse};
use crate::error::{Error, Result};
use crate::fp;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// An elliptic curve `y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6` with
/// integer coefficients and nonzero discriminant. Short-form curves
/// `y^2 = x^3 + Ax + B` are stored with `a1 = a2 = a3 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

/// A curve reduced modulo `m >= 2` along the good-reduction path:
/// `gcd(m, disc) = 1` is checked by the constructor.
#[derive(Debug, Clone)]
pub struct ReducedCurve {
    pub curve: WeierstrassCurve,
    pub modulus: BigUint,
    /// Coefficient residues `(a1, a2, a3, a4, a6)` mod `m`.
    pub residues: [BigUint; 5],
}

impl WeierstrassCurve {
    /// Long-form constructor; rejects singular curves.
    pub fn new_long(
        a1: impl Into<BigInt>,
        a2: impl Into<BigInt>,
        a3: impl Into<BigInt>,
        a4: impl Into<BigInt>,
        a6: impl Into<BigInt>,
    ) -> Result<Self> {
        let curve = WeierstrassCurve {
            a1: a1.into(),
            a2: a2.into(),
            a3: a3.into(),
            a4: a4.into(),
            a6: a6.into(),
        };
        if curve.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(curve)
    }

    /// Short-form constructor for `y^2 = x^3 + Ax + B`.
    pub fn new_short(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        Self::new_long(0, 0, 0, a.into(), b.into())
    }

    /// Parses the text format `[A,B]` (short) or `[a1,a2,a3,a4,a6]` (long).
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidInput(format!("curve must be bracketed: {text}")))?;
        let coeffs: Vec<BigInt> = inner
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidInput(format!("bad curve coefficient: {s}")))
            })
            .collect::<Result<_>>()?;
        match coeffs.as_slice() {
            [a, b] => Self::new_short(a.clone(), b.clone()),
            [a1, a2, a3, a4, a6] => {
                Self::new_long(a1.clone(), a2.clone(), a3.clone(), a4.clone(), a6.clone())
            }
            _ => Err(Error::InvalidInput(
                "curve needs 2 (short) or 5 (long) coefficients".into(),
            )),
        }
    }

    /// True for curves stored in short form.
    pub fn is_short(&self) -> bool {
        self.a1.is_zero() && self.a2.is_zero() && self.a3.is_zero()
    }

    /// Standard `b`-quantities `(b2, b4, b6, b8)`.
    pub fn b_quantities(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let b2 = &self.a1 * &self.a1 + BigInt::from(4) * &self.a2;
        let b4 = BigInt::from(2) * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + BigInt::from(4) * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + BigInt::from(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    /// The discriminant; `-16(4A^3 + 27B^2)` in short form.
    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_quantities();
        -(&b2 * &b2 * &b8) - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6) + BigInt::from(9) * &b2 * &b4 * &b6
    }

    /// Good reduction at `p`: the discriminant is a unit mod `p`.
    pub fn has_good_reduction(&self, p: &BigUint) -> bool {
        !(self.discriminant() % BigInt::from(p.clone())).is_zero()
    }

    /// Reduces the curve mod `m >= 2`; on failure names a prime divisor of
    /// `gcd(m, disc)` as the offending bad-reduction prime.
    pub fn reduce_mod(&self, m: &BigUint) -> Result<ReducedCurve> {
        if *m < BigUint::from(2u32) {
            return Err(Error::InvalidInput("modulus must be >= 2".into()));
        }
        let g = self.discriminant().magnitude().gcd(m);
        if !g.is_one() {
            let prime = factorize(&g)?.factors()[0].0.clone();
            return Err(Error::BadReduction(prime));
        }
        let mb = BigInt::from(m.clone());
        let reduce = |a: &BigInt| a.mod_floor(&mb).magnitude().clone();
        Ok(ReducedCurve {
            curve: self.clone(),
            modulus: m.clone(),
            residues: [
                reduce(&self.a1),
                reduce(&self.a2),
                reduce(&self.a3),
                reduce(&self.a4),
                reduce(&self.a6),
            ],
        })
    }

    /// The affine order-2 condition: `2y + a1*x + a3 = 0 (mod m)`. For short
    /// form this is `y = 0 (mod m)`.
    pub fn is_two_torsion_form(&self, x: &BigInt, y: &BigInt, m: &BigUint) -> bool {
        let mb = BigInt::from(m.clone());
        (BigInt::from(2) * y + &self.a1 * x + &self.a3).mod_floor(&mb).is_zero()
    }

    /// Whether `(x, y)` satisfies the curve equation mod `m`.
    pub fn is_on_curve_mod(&self, x: &BigInt, y: &BigInt, m: &BigUint) -> bool {
        let mb = BigInt::from(m.clone());
        let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
        let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
        (lhs - rhs).mod_floor(&mb).is_zero()
    }

    /// Short model mod `m` with its point map. Identity map for curves that
    /// are already short; otherwise requires `gcd(m, 6) = 1`.
    pub fn short_model(&self, m: &BigUint) -> Result<ShortModel> {
        let mb = BigInt::from(m.clone());
        if self.is_short() {
            return Ok(ShortModel {
                a: self.a4.mod_floor(&mb),
                b: self.a6.mod_floor(&mb),
                m: m.clone(),
                transform: None,
            });
        }
        if !m.gcd(&BigUint::from(6u32)).is_one() {
            return Err(Error::Unsupported(format!(
                "long-form curve needs gcd(m, 6) = 1 to pass to a short model, m = {m}"
            )));
        }
        let (b2, b4, b6, _) = self.b_quantities();
        let c4 = &b2 * &b2 - BigInt::from(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - BigInt::from(216) * &b6;
        // (x, y) -> (36x + 3b2, 108(2y + a1 x + a3)) lands on
        // y'^2 = x'^3 - 27 c4 x' - 54 c6; an isomorphism whenever 6 is a unit.
        Ok(ShortModel {
            a: (BigInt::from(-27) * &c4).mod_floor(&mb),
            b: (BigInt::from(-54) * &c6).mod_floor(&mb),
            m: m.clone(),
            transform: Some(LongToShort {
                a1: self.a1.clone(),
                a3: self.a3.clone(),
                b2,
            }),
        })
    }

    /// Short-model parameters `(A, B)` mod a machine-word prime `p >= 5`
    /// (or any odd `p` for curves already in short form).
    pub fn short_params_u64(&self, p: u64) -> Result<(u64, u64)> {
        let model = self.short_model(&BigUint::from(p))?;
        Ok((
            model.a.to_u64().expect("residue fits"),
            model.b.to_u64().expect("residue fits"),
        ))
    }
}

/// Data for mapping points between a long-form curve and its short model.
#[derive(Debug, Clone)]
struct LongToShort {
    a1: BigInt,
    a3: BigInt,
    b2: BigInt,
}

/// A short model `y^2 = x^3 + a x + b` of a curve modulo `m`, with point
/// maps to and from the original model.
#[derive(Debug, Clone)]
pub struct ShortModel {
    /// `A` residue in `[0, m)`.
    pub a: BigInt,
    /// `B` residue in `[0, m)`.
    pub b: BigInt,
    pub m: BigUint,
    transform: Option<LongToShort>,
}

impl ShortModel {
    /// Maps an affine point of the original curve into the short model.
    pub fn map_point(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        let mb = BigInt::from(self.m.clone());
        match &self.transform {
            None => (x.mod_floor(&mb), y.mod_floor(&mb)),
            Some(t) => {
                let xs = (BigInt::from(36) * x + BigInt::from(3) * &t.b2).mod_floor(&mb);
                let ys = (BigInt::from(108) * (BigInt::from(2) * y + &t.a1 * x + &t.a3)).mod_floor(&mb);
                (xs, ys)
            }
        }
    }

    /// Maps an affine short-model point back to the original curve.
    pub fn unmap_point(&self, xs: &BigInt, ys: &BigInt) -> (BigInt, BigInt) {
        let mb = BigInt::from(self.m.clone());
        match &self.transform {
            None => (xs.mod_floor(&mb), ys.mod_floor(&mb)),
            Some(t) => {
                let inv36 = mod_inverse(&BigInt::from(36), &mb).expect("gcd(m,6)=1");
                let inv216 = mod_inverse(&BigInt::from(216), &mb).expect("gcd(m,6)=1");
                let x = ((xs - BigInt::from(3) * &t.b2) * &inv36).mod_floor(&mb);
                let y = ((ys - BigInt::from(108) * (&t.a1 * &x + &t.a3)) * &inv216).mod_floor(&mb);
                (x, y)
            }
        }
    }

    /// The machine-word view when `m` fits in a `u64`.
    pub fn as_curve_fp(&self) -> Option<fp::CurveFp> {
        let p = self.m.to_u64()?;
        Some(fp::CurveFp::new(
            self.a.to_u64()?,
            self.b.to_u64()?,
            p,
        ))
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_short() {
            write!(f, "[{},{}]", self.a4, self.a6)
        } else {
            write!(
                f,
                "[{},{},{},{},{}]",
                self.a1, self.a2, self.a3, self.a4, self.a6
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn short(a: i64, b: i64) -> WeierstrassCurve {
        WeierstrassCurve::new_short(a, b).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(short(7, 3).discriminant(), BigInt::from(-25840));
        assert_eq!(short(-5, 0).discriminant(), BigInt::from(8000));
        assert!(matches!(
            WeierstrassCurve::new_short(0, 0),
            Err(Error::SingularCurve)
        ));
    }

    #[test]
    fn good_reduction_examples() {
        let e = short(7, 3);
        assert!(e.has_good_reduction(&BigUint::from(43u32)));
        assert!(!e.has_good_reduction(&BigUint::from(2u32)));
        assert!(!short(-5, 0).has_good_reduction(&BigUint::from(5u32)));
    }

    #[test]
    fn reduce_mod_examples() {
        let e = short(-1056, 13552);
        let r = e.reduce_mod(&BigUint::from(7739u32)).unwrap();
        assert_eq!(r.residues[3], BigUint::from(7739u32 - 1056));
        assert_eq!(r.residues[4], BigUint::from(13552u32 % 7739));
        assert!(short(0, 80).reduce_mod(&BigUint::from(6119u32)).is_ok());
        match short(-5, 0).reduce_mod(&BigUint::from(10u32)) {
            Err(Error::BadReduction(p)) => assert_eq!(p, BigUint::from(2u32)),
            other => panic!("expected bad reduction, got {other:?}"),
        }
    }

    #[test]
    fn two_torsion_form_examples() {
        let e = short(-1056, 13552);
        let m109 = BigUint::from(109u32);
        assert!(e.is_two_torsion_form(&BigInt::from(102), &BigInt::from(0), &m109));
        assert!(!e.is_two_torsion_form(
            &BigInt::from(33),
            &BigInt::from(121),
            &BigUint::from(7739u32)
        ));
        let muller_n: BigUint = "676258600736819377469073681570025709".parse().unwrap();
        let x: BigInt = "513078336047534294929224848649215641".parse().unwrap();
        assert!(short(-3500, -98000).is_two_torsion_form(&x, &BigInt::from(0), &muller_n));
    }

    #[test]
    fn parse_roundtrip() {
        let e = WeierstrassCurve::parse("[7, 3]").unwrap();
        assert_eq!(e, short(7, 3));
        let e = WeierstrassCurve::parse("[1,-1,1,-10,-20]").unwrap();
        assert!(!e.is_short());
        assert!(WeierstrassCurve::parse("7,3").is_err());
        assert!(WeierstrassCurve::parse("[1,2,3]").is_err());
        assert!(WeierstrassCurve::parse("[x,3]").is_err());
    }

    #[test]
    fn long_form_short_model_consistency() {
        // Curve 11a1: y^2 + y = x^3 - x^2 - 10x - 20, disc -11^5.
        let e = WeierstrassCurve::new_long(0, -1, 1, -10, -20).unwrap();
        assert_eq!(e.discriminant(), BigInt::from(-161051));
        let m = BigUint::from(101u32);
        let model = e.short_model(&m).unwrap();
        // Point (5, 5) lies on 11a1.
        let (x, y) = (BigInt::from(5), BigInt::from(5));
        assert!(e.is_on_curve_mod(&x, &y, &m));
        let (xs, ys) = model.map_point(&x, &y);
        let mb = BigInt::from(101);
        let lhs = (&ys * &ys).mod_floor(&mb);
        let rhs = (&xs * &xs * &xs + &model.a * &xs + &model.b).mod_floor(&mb);
        assert_eq!(lhs, rhs, "mapped point must satisfy the short model");
        let (xb, yb) = model.unmap_point(&xs, &ys);
        assert_eq!((xb, yb), (x, y));
    }

    #[test]
    fn good_reduction_iff_separable_cubic_odd_primes() {
        // Independent check: for odd p, p does not divide the discriminant
        // iff x^3 + Ax + B is separable mod p (nonzero cubic discriminant).
        for p in primes_up_to(1000).into_iter().filter(|&p| p > 2) {
            for a in -20i64..=20 {
                for b in -20i64..=20 {
                    let curve = match WeierstrassCurve::new_short(a, b) {
                        Ok(c) => c,
                        Err(_) => {
                            assert_eq!(4 * a * a * a + 27 * b * b, 0);
                            continue;
                        }
                    };
                    let cubic_disc = (-4 * a * a * a - 27 * b * b).rem_euclid(p as i64);
                    assert_eq!(
                        curve.has_good_reduction(&BigUint::from(p)),
                        cubic_disc != 0,
                        "p={p} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn short_form_always_bad_at_two() {
        // The short-form discriminant carries a factor 16, so this model
        // never has good reduction at 2.
        for a in -20i64..=20 {
            for b in -20i64..=20 {
                if let Ok(curve) = WeierstrassCurve::new_short(a, b) {
                    assert!(!curve.has_good_reduction(&BigUint::from(2u32)));
                }
            }
        }
    }
}
