//! Integer utilities: Jacobi symbols, p-adic valuation, factorization,
//! Chinese remaindering, and two-power splitting.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The p-adic order of an integer: `ord_p(0)` is infinite, otherwise the
/// largest `e` with `p^e | n`. The infinite case is a tagged variant so
/// comparisons stay assertable without sentinel values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadicOrder {
    Finite(u64),
    Infinite,
}

impl PadicOrder {
    /// `self >= other` in the extended ordering where `Infinite` dominates.
    pub fn at_least(self, bound: u64) -> bool {
        match self {
            PadicOrder::Infinite => true,
            PadicOrder::Finite(e) => e >= bound,
        }
    }
}

/// A factored positive integer: strictly increasing primes with exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Builds a factorization after validating the invariants: primes
    /// strictly increasing, each passing a primality check.
    pub fn new(factors: Vec<(BigUint, u32)>) -> Result<Self> {
        for window in factors.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::InvalidInput(
                    "factorization primes must be strictly increasing".into(),
                ));
            }
        }
        for (p, e) in &factors {
            if *e == 0 || !is_probable_prime(p) {
                return Err(Error::InvalidInput(format!(
                    "{p}^{e} is not a prime power with positive exponent"
                )));
            }
        }
        Ok(Factorization { factors })
    }

    /// The `(prime, exponent)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Product of `prime^exponent` — the factored integer.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Number of distinct primes.
    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    /// True when every exponent is 1.
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`, computed by the
/// quadratic-reciprocity ladder without factoring `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i32> {
    if n.is_negative() || n.is_zero() || n.is_even() {
        return Err(Error::InvalidInput(format!(
            "Jacobi symbol denominator must be odd and positive, got {n}"
        )));
    }
    let mut n = n.magnitude().clone();
    let mut a = a.mod_floor(&BigInt::from(n.clone())).magnitude().clone();
    let mut result = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        Ok(result)
    } else {
        Ok(0)
    }
}

/// Jacobi symbol with machine-word operands. Same contract as [`jacobi`].
pub fn jacobi_u64(a: i64, n: u64) -> Result<i32> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "Jacobi symbol denominator must be odd and positive, got {n}"
        )));
    }
    let mut n = n;
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut result = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        Ok(result)
    } else {
        Ok(0)
    }
}

/// `ord_p(n)`: the largest `e` with `p^e | n`, or infinity for `n = 0`.
pub fn padic_order(n: &BigInt, p: &BigUint) -> PadicOrder {
    if n.is_zero() {
        return PadicOrder::Infinite;
    }
    let p = BigInt::from(p.clone());
    let mut n = n.abs();
    let mut e = 0u64;
    while (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    PadicOrder::Finite(e)
}

/// `m = 2^s * t` with `t` odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoPowerSplit {
    pub s: u64,
    pub t: BigUint,
}

/// Splits a positive integer into its two-power part and odd part.
pub fn split_two_power(m: &BigUint) -> Result<TwoPowerSplit> {
    if m.is_zero() {
        return Err(Error::InvalidInput("cannot split zero".into()));
    }
    let s = m.trailing_zeros().unwrap_or(0);
    Ok(TwoPowerSplit {
        s,
        t: m >> s,
    })
}

/// Deterministic Miller-Rabin witness set valid for all inputs below
/// 3.3 * 10^24; reused as a strong probabilistic test above that bound.
const MR_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin primality test with the fixed witness set above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for w in MR_WITNESSES {
        let w = BigUint::from(w);
        if *n == w {
            return true;
        }
        if (n % &w).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let t = &n_minus_1 >> s;
    'witness: for w in MR_WITNESSES {
        let mut x = BigUint::from(w).modpow(&t, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes: all primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &is_p)| if is_p { Some(i as u64) } else { None })
        .collect()
}

/// Pollard rho (Brent's cycle variant) for a nontrivial factor of an odd
/// composite that has no small prime factors.
fn pollard_rho(n: &BigUint, seed: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let c = BigUint::from(seed);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    let mut d = one.clone();
    let mut count = 0u64;
    while d.is_one() {
        x = f(&x);
        y = f(&f(&y));
        let diff = if x > y { &x - &y } else { &y - &x };
        d = diff.gcd(n);
        count += 1;
        if count > 1u64 << 22 {
            return None;
        }
    }
    if &d == n {
        None
    } else {
        Some(d)
    }
}

/// Maximum decimal digits accepted by [`factorize`] before it refuses with
/// a timeout error. All interesting moduli in this crate are far smaller.
pub const FACTOR_DIGIT_BUDGET: usize = 40;

/// Factors a positive integer by trial division then Pollard rho.
///
/// Inputs above [`FACTOR_DIGIT_BUDGET`] decimal digits are rejected up
/// front with [`Error::FactorizationTimeout`].
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    if n.to_string().len() > FACTOR_DIGIT_BUDGET {
        return Err(Error::FactorizationTimeout(n.clone()));
    }
    let mut remaining = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    for p in primes_up_to(100_000) {
        if remaining.is_one() {
            break;
        }
        let p = BigUint::from(p);
        if &p * &p > remaining {
            break;
        }
        let mut e = 0u32;
        while (&remaining % &p).is_zero() {
            remaining /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    // What survives trial division is 1, a prime, or a product of primes
    // each above 10^5; split the latter recursively with Pollard rho.
    let mut stack = Vec::new();
    if !remaining.is_one() {
        stack.push(remaining);
    }
    while let Some(m) = stack.pop() {
        if is_probable_prime(&m) {
            match factors.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => factors.push((m, 1)),
            }
            continue;
        }
        let mut split = None;
        for seed in 1..64 {
            if let Some(d) = pollard_rho(&m, seed) {
                split = Some(d);
                break;
            }
        }
        let d = split.ok_or_else(|| Error::FactorizationTimeout(m.clone()))?;
        stack.push(&m / &d);
        stack.push(d);
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization::new(factors)
}

/// Combines residues by the Chinese Remainder Theorem.
///
/// Returns the unique representative in `[0, product)` together with the
/// product of the moduli. Rejects non-coprime moduli.
pub fn crt_combine(residues: &[(BigInt, BigUint)]) -> Result<(BigUint, BigUint)> {
    if residues.is_empty() {
        return Err(Error::InvalidInput("empty residue list".into()));
    }
    let mut acc_r = residues[0]
        .0
        .mod_floor(&BigInt::from(residues[0].1.clone()))
        .magnitude()
        .clone();
    let mut acc_m = residues[0].1.clone();
    for (r, m) in &residues[1..] {
        if acc_m.gcd(m) != BigUint::one() {
            return Err(Error::InvalidInput(format!(
                "moduli {acc_m} and {m} are not coprime"
            )));
        }
        let m_int = BigInt::from(m.clone());
        let acc_m_int = BigInt::from(acc_m.clone());
        let r = r.mod_floor(&m_int);
        // x = acc_r + acc_m * k with x = r (mod m) => k = (r - acc_r) / acc_m.
        let inv = mod_inverse(&acc_m_int, &m_int).expect("coprime moduli");
        let k = ((&r - BigInt::from(acc_r.clone())) * inv).mod_floor(&m_int);
        acc_r += acc_m.clone() * k.magnitude();
        acc_m *= m;
    }
    Ok((acc_r, acc_m))
}

/// Modular inverse of `a` mod `m` when `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn big(s: &str) -> BigInt {
        BigInt::from_str(s).unwrap()
    }

    fn ubig(s: &str) -> BigUint {
        BigUint::from_str(s).unwrap()
    }

    #[test]
    fn jacobi_golden_values() {
        // Corrected Muller modulus.
        let n = big("676258600736819377469073681570025709");
        assert_eq!(jacobi(&big("-7"), &n).unwrap(), -1);
        assert_eq!(jacobi(&big("1"), &big("15")).unwrap(), 1);
        // 3^2 = 2 (mod 7).
        assert_eq!(jacobi(&big("2"), &big("7")).unwrap(), 1);
        assert_eq!(jacobi(&big("-11"), &big("7739")).unwrap(), -1);
        assert_eq!(jacobi(&big("-3"), &big("6119")).unwrap(), -1);
    }

    #[test]
    fn jacobi_rejects_even_or_nonpositive_denominator() {
        assert!(jacobi(&big("3"), &big("10")).is_err());
        assert!(jacobi(&big("3"), &big("0")).is_err());
        assert!(jacobi(&big("3"), &big("-7")).is_err());
        assert!(jacobi_u64(3, 10).is_err());
    }

    #[test]
    fn jacobi_u64_matches_bigint() {
        for a in -50i64..=50 {
            for n in (1u64..200).step_by(2) {
                assert_eq!(
                    jacobi_u64(a, n).unwrap(),
                    jacobi(&BigInt::from(a), &BigInt::from(n)).unwrap(),
                    "a={a} n={n}"
                );
            }
        }
    }

    #[test]
    fn jacobi_agrees_with_euler_criterion() {
        for p in primes_up_to(1000).into_iter().skip(1) {
            // skip 2
            for a in 1..p {
                let by_pow = {
                    let mut x = 1u64;
                    let mut base = a % p;
                    let mut e = (p - 1) / 2;
                    while e > 0 {
                        if e & 1 == 1 {
                            x = x * base % p;
                        }
                        base = base * base % p;
                        e >>= 1;
                    }
                    if x == p - 1 {
                        -1
                    } else {
                        x as i64
                    }
                };
                assert_eq!(jacobi_u64(a as i64, p).unwrap() as i64, by_pow);
            }
        }
    }

    #[test]
    fn padic_order_examples() {
        assert_eq!(
            padic_order(&big("7740"), &ubig("2")),
            PadicOrder::Finite(2)
        );
        assert_eq!(padic_order(&big("0"), &ubig("5")), PadicOrder::Infinite);
        assert_eq!(
            padic_order(&big("27563"), &ubig("43")),
            PadicOrder::Finite(1)
        );
        assert_eq!(padic_order(&big("-8"), &ubig("2")), PadicOrder::Finite(3));
        assert!(PadicOrder::Infinite.at_least(100));
        assert!(PadicOrder::Finite(2).at_least(2));
        assert!(!PadicOrder::Finite(1).at_least(2));
    }

    #[test]
    fn factorize_golden() {
        let f = factorize(&ubig("7739")).unwrap();
        assert_eq!(
            f.factors(),
            &[(ubig("71"), 1), (ubig("109"), 1)]
        );
        assert!(factorize(&ubig("1")).unwrap().factors().is_empty());
        let muller = factorize(&ubig("676258600736819377469073681570025709")).unwrap();
        let expected = ["47737", "275183", "1212119", "2489759", "3178891", "5366089"];
        assert_eq!(
            muller.factors(),
            expected.map(|p| (ubig(p), 1)).as_slice()
        );
        let appx = factorize(&ubig("9090870127122419")).unwrap();
        let expected = ["61", "997", "1289", "3851", "30113"];
        assert_eq!(appx.factors(), expected.map(|p| (ubig(p), 1)).as_slice());
    }

    #[test]
    fn factorize_roundtrip_small_range() {
        for n in 1u64..=100_000 {
            let f = factorize(&BigUint::from(n)).unwrap();
            assert_eq!(f.value(), BigUint::from(n), "n={n}");
        }
    }

    #[test]
    fn factorize_respects_digit_budget() {
        let huge = BigUint::one() << 200u32;
        assert!(matches!(
            factorize(&huge),
            Err(Error::FactorizationTimeout(_))
        ));
    }

    #[test]
    fn crt_examples() {
        let (r, m) =
            crt_combine(&[(big("0"), ubig("71")), (big("0"), ubig("109"))]).unwrap();
        assert_eq!(r, ubig("0"));
        assert_eq!(m, ubig("7739"));
        let (r, m) = crt_combine(&[(big("1"), ubig("3")), (big("2"), ubig("7"))]).unwrap();
        assert_eq!(r, ubig("16"));
        assert_eq!(m, ubig("21"));
        let (r, m) = crt_combine(&[(big("5"), ubig("71"))]).unwrap();
        assert_eq!(r, ubig("5"));
        assert_eq!(m, ubig("71"));
        assert!(crt_combine(&[(big("1"), ubig("6")), (big("2"), ubig("4"))]).is_err());
    }

    #[test]
    fn split_two_power_examples() {
        let s = split_two_power(&ubig("7740")).unwrap();
        assert_eq!((s.s, s.t), (2, ubig("1935")));
        let s = split_two_power(&ubig("1")).unwrap();
        assert_eq!((s.s, s.t), (0, ubig("1")));
        let s = split_two_power(&ubig("32760")).unwrap();
        assert_eq!((s.s, s.t), (3, ubig("4095")));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_probable_prime(&ubig("5366089")));
        assert!(is_probable_prime(&ubig("30113")));
        assert!(!is_probable_prime(&ubig("7739")));
        assert!(!is_probable_prime(&ubig("1")));
        let primes = primes_up_to(1000);
        assert_eq!(primes.len(), 168);
        for p in primes {
            assert!(is_probable_prime(&BigUint::from(p)));
        }
    }
}
