//! Empirical machinery around the density of anomalous-prime products
//! among Type I Korselt numbers: the Deuring/Kronecker class-number
//! census, a Monte-Carlo sampler for the limiting-probability conjecture,
//! and exhaustive scans verifying the supporting divisibility lemmas and
//! the anomalous-product trichotomy.

use crate::arith::{primes_up_to, Factorization};
use crate::classify::is_korselt_type1;
use crate::curve::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::lseries::{is_anomalous, trace_of_frobenius};
use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Default seed for the density sampler when the caller does not pin one.
pub const DEFAULT_DENSITY_SEED: u64 = 0x5eed_e11c;

/// Per-trace curve counts over `F_p`, both as raw `(A, B)` pairs and as
/// twist-orbit (isomorphism-class) counts weighted by automorphisms.
#[derive(Debug, Clone, Serialize)]
pub struct TraceCensus {
    pub p: u64,
    /// Number of nonsingular short Weierstrass pairs `(A, B)` with trace `t`.
    pub pairs: BTreeMap<i64, u64>,
    /// Weighted isomorphism-class count with trace `t`, in sixths: a
    /// generic class contributes 6, `j = 1728` contributes 3, `j = 0`
    /// contributes 2. Equals the Kronecker class number `H(t^2 - 4p)` in
    /// sixths.
    pub class_sixths: BTreeMap<i64, u64>,
}

impl TraceCensus {
    /// The weighted class count for trace `t` as an exact rational.
    pub fn classes(&self, t: i64) -> Ratio<u64> {
        Ratio::new(self.class_sixths.get(&t).copied().unwrap_or(0), 6)
    }
}

/// Outcome of one Monte-Carlo density run.
#[derive(Debug, Clone, Serialize)]
pub struct DensityEstimate {
    pub m: u64,
    pub trials: u64,
    /// Samples passing both local-order divisibility conditions.
    pub conditioned_successes: u64,
    /// Accepted samples with `a_p = a_q = 1`.
    pub anomalous_count: u64,
    /// `anomalous_count / conditioned_successes` (0 when nothing accepted).
    pub anomalous_fraction: f64,
    pub rng_seed: u64,
}

/// Tallies from the exhaustive divisibility-lemma scan.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaScanReport {
    pub q_max: u64,
    /// Tuples `(p, a_p, q, a_q)` enumerated within Hasse bounds.
    pub tuples_checked: u64,
    /// Tuples satisfying both divisibility conditions.
    pub solutions: u64,
    /// Solution pairs at fixed `(q, a_q)` reconciled by the `(k, alpha)`
    /// parametrization.
    pub parametrized_pairs: u64,
}

/// Tallies from the Type I Korselt product trichotomy scan.
#[derive(Debug, Clone, Serialize)]
pub struct TrichotomyReport {
    pub m: u64,
    pub korselt_products: u64,
    pub branch_small_p: u64,
    pub branch_anomalous: u64,
    pub branch_sqrt_bound: u64,
}

/// Legendre-symbol table for `F_p`: `chi[x]` is 0 at 0 and +/-1 otherwise.
fn chi_table(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    let mut x = 1u64;
    while x < p {
        chi[((x * x) % p) as usize] = 1;
        x += 1;
        // Squares repeat beyond (p-1)/2; stopping there is enough.
        if x > p / 2 {
            break;
        }
    }
    chi
}

/// Trace of Frobenius of `y^2 = x^3 + ax + b` over `F_p` by character sum.
fn trace_via_table(a: u64, b: u64, p: u64, chi: &[i8]) -> i64 {
    let mut sum = 0i64;
    for x in 0..p {
        let x2 = (x * x) % p;
        let rhs = ((x2 * x) % p + (a * x) % p + b) % p;
        sum += chi[rhs as usize] as i64;
    }
    -sum
}

fn is_singular_pair(a: u64, b: u64, p: u64) -> bool {
    let a2 = (a * a) % p;
    let a3 = (a2 * a) % p;
    let b2 = (b * b) % p;
    (4 * a3 + 27 * b2) % p == 0
}

/// Number of primitive reduced positive-definite forms of discriminant
/// `d`, scaled by 6 and weighted 1/2 at `d = -4` and 1/3 at `d = -3`.
fn primitive_forms_sixths(d: i64) -> u64 {
    if d == -3 {
        return 2;
    }
    if d == -4 {
        return 3;
    }
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        let mut b = -a + 1;
        while b <= a {
            if (b * b - d) % 2 == 0 {
                let num = (b * b - d) / 4;
                if num % a == 0 {
                    let c = num / a;
                    // Reduced: -a < b <= a <= c, with b >= 0 when a = c.
                    if c >= a && !(a == c && b < 0) {
                        let g = gcd3(a, b.abs(), c);
                        if g == 1 {
                            count += 1;
                        }
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    6 * count
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a.abs()
    }
    gcd(gcd(a, b), c)
}

/// Kronecker/Hurwitz class number `H(D)` in sixths: the weighted count of
/// reduced positive-definite forms over all conductors `f^2 | D`.
pub fn hurwitz_sixths(d: i64) -> Result<u64> {
    if d >= 0 || !(d % 4 == 0 || d.rem_euclid(4) == 1) {
        return Err(Error::InvalidInput(format!(
            "{d} is not a negative discriminant (0 or 1 mod 4)"
        )));
    }
    let mut total = 0u64;
    let mut f = 1i64;
    while f * f <= -d {
        if d % (f * f) == 0 {
            let d0 = d / (f * f);
            if d0 % 4 == 0 || d0.rem_euclid(4) == 1 {
                total += primitive_forms_sixths(d0);
            }
        }
        f += 1;
    }
    Ok(total)
}

/// `H(D)` as an exact rational, computed by form counting.
pub fn hurwitz_class_number(d: i64) -> Result<Ratio<u64>> {
    Ok(Ratio::new(hurwitz_sixths(d)?, 6))
}

/// Exhaustive per-trace census of all nonsingular short Weierstrass
/// curves over `F_p`, `3 < p <= 200`.
pub fn trace_census(p: u64) -> Result<TraceCensus> {
    if p <= 3 || p > 200 || !crate::arith::is_probable_prime(&BigUint::from(p)) {
        return Err(Error::InvalidInput(format!(
            "census requires a prime 3 < p <= 200, got {p}"
        )));
    }
    let chi = chi_table(p);
    let per_a: Vec<BTreeMap<i64, u64>> = (0..p)
        .into_par_iter()
        .map(|a| {
            let mut local = BTreeMap::new();
            for b in 0..p {
                if is_singular_pair(a, b, p) {
                    continue;
                }
                let t = trace_via_table(a, b, p, &chi);
                *local.entry(t).or_insert(0u64) += 1;
            }
            local
        })
        .collect();
    let mut pairs: BTreeMap<i64, u64> = BTreeMap::new();
    for local in per_a {
        for (t, c) in local {
            *pairs.entry(t).or_insert(0) += c;
        }
    }
    let mut class_sixths = BTreeMap::new();
    for (&t, &n) in &pairs {
        let scaled = 12 * n;
        debug_assert_eq!(scaled % (p - 1), 0);
        class_sixths.insert(t, scaled / (p - 1));
    }
    Ok(TraceCensus {
        p,
        pairs,
        class_sixths,
    })
}

/// Monte-Carlo sampler for the limiting-probability conjecture: draws
/// distinct primes `p != q` in `[5, M]` and a uniform good-reduction
/// short curve modulo `N = pq` (independent nonsingular residues glued by
/// CRT), accepts when both `p+1-a_p` and `q+1-a_q` divide `N+1-a_N`, and
/// reports the anomalous fraction among accepted samples. Deterministic
/// under `seed`: each trial uses its own counter-derived stream.
pub fn sample_density(m: u64, trials: u64, seed: u64) -> Result<DensityEstimate> {
    if m < 7 {
        return Err(Error::InvalidInput("density sampling needs M >= 7".into()));
    }
    let primes: Vec<u64> = primes_up_to(m).into_iter().filter(|&p| p >= 5).collect();
    if primes.len() < 2 {
        return Err(Error::InvalidInput(
            "no prime pairs available below M".into(),
        ));
    }
    let tables: Vec<Vec<i8>> = primes.par_iter().map(|&p| chi_table(p)).collect();
    let draw_trace = |rng: &mut ChaCha8Rng, idx: usize| -> i64 {
        let p = primes[idx];
        loop {
            let a = rng.gen_range(0..p);
            let b = rng.gen_range(0..p);
            if !is_singular_pair(a, b, p) {
                return trace_via_table(a, b, p, &tables[idx]);
            }
        }
    };
    let (accepted, anomalous) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial + 1);
            let i = rng.gen_range(0..primes.len());
            let j = loop {
                let j = rng.gen_range(0..primes.len());
                if j != i {
                    break j;
                }
            };
            let (p, q) = (primes[i] as i128, primes[j] as i128);
            let a_p = draw_trace(&mut rng, i) as i128;
            let a_q = draw_trace(&mut rng, j) as i128;
            let order_n = p * q + 1 - a_p * a_q;
            let (n_p, n_q) = (p + 1 - a_p, q + 1 - a_q);
            if order_n % n_p != 0 || order_n % n_q != 0 {
                return (0u64, 0u64);
            }
            if a_p == 1 && a_q == 1 {
                // Order multiplicativity: anomalous pairs hit the global
                // order exactly.
                assert_eq!(n_p * n_q, order_n);
                (1, 1)
            } else {
                (1, 0)
            }
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(DensityEstimate {
        m,
        trials,
        conditioned_successes: accepted,
        anomalous_count: anomalous,
        anomalous_fraction: if accepted == 0 {
            0.0
        } else {
            anomalous as f64 / accepted as f64
        },
        rng_seed: seed,
    })
}

fn hasse_range(p: u64) -> std::ops::RangeInclusive<i64> {
    let bound = (4.0 * p as f64).sqrt().floor() as i64;
    -bound..=bound
}

/// Exhaustively verifies the divisibility lemmas on every tuple
/// `(p, a_p, q, a_q)` with primes `5 <= p < q <= q_max` and traces inside
/// the Hasse bounds:
///
/// 1. when `(q+1-a_q) | (pq+1-a_p a_q)`, `a_q` is never 0, and never 1
///    unless `a_p = a_q = 1`;
/// 2. the two formulations of the divisibility conditions agree side by
///    side;
/// 3. at fixed `(q, a_q)`, every solution `(p, a_p)` differs from the
///    first one by the integer `(k, alpha)` parametrization.
///
/// Any counterexample is a hard failure carrying the offending tuple.
pub fn verify_divisibility_lemmas(q_max: u64) -> Result<LemmaScanReport> {
    if q_max > 500 {
        return Err(Error::InvalidInput(
            "exhaustive lemma scan is limited to q_max <= 500".into(),
        ));
    }
    let primes: Vec<i64> = primes_up_to(q_max)
        .into_iter()
        .filter(|&p| p >= 5)
        .map(|p| p as i64)
        .collect();
    let fail = |what: &str, p: i64, a_p: i64, q: i64, a_q: i64| {
        Err(Error::InvalidInput(format!(
            "counterexample to {what} at (p, a_p, q, a_q) = ({p}, {a_p}, {q}, {a_q})"
        )))
    };
    let mut tuples = 0u64;
    let mut solutions = 0u64;
    let mut parametrized = 0u64;
    for (qi, &q) in primes.iter().enumerate() {
        for a_q in hasse_range(q as u64) {
            // Solutions (p, a_p) of the q-side condition at this (q, a_q),
            // for the parametrization check.
            let mut q_side_solutions: Vec<(i64, i64)> = Vec::new();
            for &p in &primes[..qi] {
                for a_p in hasse_range(p as u64) {
                    tuples += 1;
                    let n_p = p + 1 - a_p;
                    let n_q = q + 1 - a_q;
                    let order_n = p * q + 1 - a_p * a_q;
                    let d_p = order_n % n_p == 0;
                    let d_q = order_n % n_q == 0;
                    // Lemma: the reformulated conditions match term by term.
                    let r_p = (1 - a_p * a_q - q + q * a_p) % n_p == 0;
                    let r_q = (1 - a_p * a_q - p + p * a_q) % n_q == 0;
                    if d_p != r_p || d_q != r_q {
                        return fail("the divisibility reformulation", p, a_p, q, a_q);
                    }
                    if d_q {
                        q_side_solutions.push((p, a_p));
                        // Lemma: a_q is pinned away from 0 and (unless the
                        // pair is anomalous) from 1.
                        if a_q == 0 {
                            return fail("a_q != 0", p, a_p, q, a_q);
                        }
                        if a_q == 1 && !(a_p == 1) {
                            return fail("a_q != 1 unless a_p = a_q = 1", p, a_p, q, a_q);
                        }
                    }
                    if d_p && d_q {
                        solutions += 1;
                    }
                }
            }
            // Parametrization: every q-side solution differs from the base
            // one by a_p = a_p0 + k(q+1-a_q) + (1-a_q)alpha and
            // p = p0 + k(q+1-a_q) - a_q alpha for integers k, alpha.
            if let Some(&(p0, a_p0)) = q_side_solutions.first() {
                let n_q = q + 1 - a_q;
                for &(p, a_p) in &q_side_solutions[1..] {
                    let x = a_p - a_p0;
                    let y = p - p0;
                    let combo = a_q * x + (1 - a_q) * y;
                    if combo % n_q != 0 {
                        return fail("the k-integrality of the parametrization", p, a_p, q, a_q);
                    }
                    let k = combo / n_q;
                    let alpha = x - y;
                    if x != k * n_q + (1 - a_q) * alpha || y != k * n_q - a_q * alpha {
                        return fail("the (k, alpha) parametrization", p, a_p, q, a_q);
                    }
                    parametrized += 1;
                }
            }
        }
    }
    Ok(LemmaScanReport {
        q_max,
        tuples_checked: tuples,
        solutions,
        parametrized_pairs: parametrized,
    })
}

/// Exhaustively finds every Type I Korselt product `N = pq`
/// (`5 <= p < q <= M`, good reduction at both) for `curve` and asserts the
/// trichotomy: `p <= 13`, or both primes are anomalous, or
/// `p >= sqrt(q)/16`. A violation is a hard failure naming `N`.
/// One Korselt Type I product N = p * q found by [`korselt_type1_products`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KorseltProduct {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub a_p: i64,
    pub a_q: i64,
}

/// All squarefree two-prime products N = p * q with 5 <= p < q <= M of good
/// reduction that satisfy the Korselt Type I criterion for `curve`.
pub fn korselt_type1_products(curve: &WeierstrassCurve, m: u64) -> Result<Vec<KorseltProduct>> {
    if m > 100_000 {
        return Err(Error::InvalidInput(
            "exhaustive product scan is limited to M <= 10^5".into(),
        ));
    }
    let primes: Vec<u64> = primes_up_to(m)
        .into_iter()
        .filter(|&p| p >= 5 && curve.has_good_reduction(&BigUint::from(p)))
        .collect();
    let mut rows: Vec<KorseltProduct> = primes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &p)| {
            primes[i + 1..].iter().filter_map(move |&q| {
                let fact =
                    Factorization::new(vec![(BigUint::from(p), 1), (BigUint::from(q), 1)]).ok()?;
                is_korselt_type1(&fact, curve)
                    .ok()
                    .filter(|k| k.value)
                    .map(|_| (p, q))
            })
        })
        .map(|(p, q)| {
            Ok(KorseltProduct {
                p,
                q,
                n: p * q,
                a_p: trace_of_frobenius(curve, p)?,
                a_q: trace_of_frobenius(curve, q)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.p));
    Ok(rows)
}

pub fn verify_anomalous_trichotomy(
    curve: &WeierstrassCurve,
    m: u64,
) -> Result<TrichotomyReport> {
    if m > 10_000 {
        return Err(Error::InvalidInput(
            "exhaustive trichotomy scan is limited to M <= 10^4".into(),
        ));
    }
    let primes: Vec<u64> = primes_up_to(m)
        .into_iter()
        .filter(|&p| p >= 5 && curve.has_good_reduction(&BigUint::from(p)))
        .collect();
    let found: Vec<(u64, u64)> = primes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &p)| {
            primes[i + 1..].iter().filter_map(move |&q| {
                let fact =
                    Factorization::new(vec![(BigUint::from(p), 1), (BigUint::from(q), 1)]).ok()?;
                is_korselt_type1(&fact, curve)
                    .ok()
                    .filter(|k| k.value)
                    .map(|_| (p, q))
            })
        })
        .collect();
    let mut report = TrichotomyReport {
        m,
        korselt_products: found.len() as u64,
        branch_small_p: 0,
        branch_anomalous: 0,
        branch_sqrt_bound: 0,
    };
    for (p, q) in found {
        if p <= 13 {
            report.branch_small_p += 1;
        } else if is_anomalous(curve, p)? && is_anomalous(curve, q)? {
            report.branch_anomalous += 1;
        } else if (16 * p).pow(2) >= q {
            report.branch_sqrt_bound += 1;
        } else {
            return Err(Error::InvalidInput(format!(
                "trichotomy violated by N = {} * {}",
                p, q
            )));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_golden_values() {
        assert_eq!(hurwitz_class_number(-3).unwrap(), Ratio::new(1, 3));
        assert_eq!(hurwitz_class_number(-4).unwrap(), Ratio::new(1, 2));
        // H(-12) = h(-12) + weighted h(-3) = 1 + 1/3.
        assert_eq!(hurwitz_class_number(-12).unwrap(), Ratio::new(4, 3));
        assert_eq!(hurwitz_class_number(-15).unwrap(), Ratio::new(2, 1));
        assert_eq!(hurwitz_class_number(-16).unwrap(), Ratio::new(3, 2));
        assert_eq!(hurwitz_class_number(-23).unwrap(), Ratio::new(3, 1));
        assert!(hurwitz_class_number(-5).is_err());
        assert!(hurwitz_class_number(4).is_err());
    }

    #[test]
    fn census_totals_and_deuring_identity() {
        // Total nonsingular pair count is p^2 - p.
        let c5 = trace_census(5).unwrap();
        assert_eq!(c5.pairs.values().sum::<u64>(), 20);
        // Traces beyond the Hasse bound never appear.
        let c7 = trace_census(7).unwrap();
        assert!(c7.pairs.keys().all(|t| t * t <= 28));
        // Per-trace class counts match the class-number oracle.
        for p in [5u64, 7, 11, 13] {
            let census = trace_census(p).unwrap();
            assert_eq!(
                census.pairs.values().sum::<u64>(),
                p * p - p,
                "pair total at p = {p}"
            );
            for t in hasse_range(p) {
                let counted = census.class_sixths.get(&t).copied().unwrap_or(0);
                let oracle = hurwitz_sixths(t * t - 4 * p as i64).unwrap();
                assert_eq!(counted, oracle, "Deuring identity at p = {p}, t = {t}");
            }
        }
    }

    #[test]
    fn density_sampler_runs_and_is_deterministic() {
        let a = sample_density(7, 500, 42).unwrap();
        let b = sample_density(7, 500, 42).unwrap();
        assert_eq!(a.conditioned_successes, b.conditioned_successes);
        assert_eq!(a.anomalous_count, b.anomalous_count);
        assert!(a.anomalous_fraction >= 0.0 && a.anomalous_fraction <= 1.0);
        let c = sample_density(50, 2000, DEFAULT_DENSITY_SEED).unwrap();
        assert!(c.conditioned_successes > 0);
    }

    #[test]
    fn lemma_scan_small_range() {
        let report = verify_divisibility_lemmas(50).unwrap();
        assert!(report.tuples_checked > 0);
        assert!(report.solutions > 0);
        // The anomalous pair (p=5, a_p=1, q=7, a_q=1) satisfies both
        // formulations.
        let (p, a_p, q, a_q) = (5i64, 1i64, 7i64, 1i64);
        let order_n = p * q + 1 - a_p * a_q;
        assert_eq!(order_n % (p + 1 - a_p), 0);
        assert_eq!(order_n % (q + 1 - a_q), 0);
        assert_eq!((1 - a_p * a_q - q + q * a_p) % (p + 1 - a_p), 0);
        assert_eq!((1 - a_p * a_q - p + p * a_q) % (q + 1 - a_q), 0);
    }

    #[test]
    fn trichotomy_small_scan() {
        let e = WeierstrassCurve::new_short(7, 3).unwrap();
        let report = verify_anomalous_trichotomy(&e, 700).unwrap();
        assert!(report.korselt_products > 0);
        assert_eq!(
            report.korselt_products,
            report.branch_small_p + report.branch_anomalous + report.branch_sqrt_bound
        );
    }
}
