//! Machine-word arithmetic over prime fields.
//!
//! Fast path used by point counting, group-structure computation, and the
//! exhaustive verification suites. All moduli here fit in `u64` (products in
//! `u128`), which covers every per-prime computation in the crate; arithmetic
//! modulo composite `N` lives in [`crate::ecpoint`] on big integers.

use crate::arith::jacobi_u64;

/// `a * b mod m` without overflow.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a + b mod m`.
#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

/// `a - b mod m`.
#[inline]
pub fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `a^e mod m`.
pub fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Modular inverse mod `m` via the extended Euclidean algorithm.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Square root mod an odd prime `p` by Tonelli-Shanks.
/// Returns the root `r` with `r <= p - r` when one exists.
pub fn sqrtmod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if jacobi_u64(a as i64, p).unwrap() != 1 {
        return None;
    }
    if p % 4 == 3 {
        let r = powmod(a, (p + 1) / 4, p);
        return Some(r.min(p - r));
    }
    // Find a quadratic nonresidue deterministically.
    let mut z = 2;
    while jacobi_u64(z as i64, p).unwrap() != -1 {
        z += 1;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulmod(b, b, p);
        }
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r.min(p - r))
}

/// An affine point or the identity on a short-form curve mod `p`.
pub type FpPoint = Option<(u64, u64)>;

/// Short Weierstrass curve `y^2 = x^3 + ax + b` over `F_p`, `p` odd.
#[derive(Debug, Clone, Copy)]
pub struct CurveFp {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl CurveFp {
    pub fn new(a: u64, b: u64, p: u64) -> Self {
        CurveFp {
            p,
            a: a % p,
            b: b % p,
        }
    }

    /// `4a^3 + 27b^2 mod p`; zero iff the reduction is singular.
    pub fn disc_factor(&self) -> u64 {
        let p = self.p;
        let a3 = mulmod(mulmod(self.a, self.a, p), self.a, p);
        let b2 = mulmod(self.b, self.b, p);
        addmod(mulmod(4, a3, p), mulmod(27, b2, p), p)
    }

    /// `x^3 + ax + b mod p`.
    #[inline]
    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = mulmod(x, x, p);
        addmod(addmod(mulmod(x2, x, p), mulmod(self.a, x, p), p), self.b, p)
    }

    pub fn is_on_curve(&self, pt: FpPoint) -> bool {
        match pt {
            None => true,
            Some((x, y)) => mulmod(y, y, self.p) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: FpPoint) -> FpPoint {
        pt.map(|(x, y)| (x, if y == 0 { 0 } else { self.p - y }))
    }

    /// Chord-tangent addition.
    pub fn add(&self, p1: FpPoint, p2: FpPoint) -> FpPoint {
        let p = self.p;
        let (x1, y1) = match p1 {
            None => return p2,
            Some(v) => v,
        };
        let (x2, y2) = match p2 {
            None => return p1,
            Some(v) => v,
        };
        let lambda = if x1 == x2 {
            if addmod(y1, y2, p) == 0 {
                return None;
            }
            // Tangent: (3x^2 + a) / 2y.
            let num = addmod(mulmod(3, mulmod(x1, x1, p), p), self.a, p);
            mulmod(num, invmod(addmod(y1, y1, p), p).expect("prime modulus"), p)
        } else {
            let num = submod(y2, y1, p);
            mulmod(num, invmod(submod(x2, x1, p), p).expect("prime modulus"), p)
        };
        let x3 = submod(submod(mulmod(lambda, lambda, p), x1, p), x2, p);
        let y3 = submod(mulmod(lambda, submod(x1, x3, p), p), y1, p);
        Some((x3, y3))
    }

    pub fn dbl(&self, pt: FpPoint) -> FpPoint {
        self.add(pt, pt)
    }

    /// Scalar multiplication by double-and-add.
    pub fn mul(&self, mut n: u64, pt: FpPoint) -> FpPoint {
        let mut acc = None;
        let mut base = pt;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.dbl(base);
            n >>= 1;
        }
        acc
    }

    /// All points of `E(F_p)`, identity first. Intended for small `p`.
    pub fn all_points(&self) -> Vec<FpPoint> {
        let mut pts = vec![None];
        for x in 0..self.p {
            let c = self.rhs(x);
            if c == 0 {
                pts.push(Some((x, 0)));
            } else if let Some(y) = sqrtmod(c, self.p) {
                pts.push(Some((x, y)));
                pts.push(Some((x, self.p - y)));
            }
        }
        pts
    }

    /// Group order by the quadratic-character sum `p + 1 + sum chi(x^3+ax+b)`.
    pub fn order_by_char_sum(&self) -> u64 {
        let p = self.p;
        // For small p a residue table beats per-x Jacobi evaluations.
        if p <= 1 << 22 {
            let mut chi = vec![-1i8; p as usize];
            chi[0] = 0;
            let mut x = 1u64;
            while x <= (p - 1) / 2 {
                chi[mulmod(x, x, p) as usize] = 1;
                x += 1;
            }
            let mut sum = 0i64;
            for x in 0..p {
                sum += chi[self.rhs(x) as usize] as i64;
            }
            (p as i64 + 1 + sum) as u64
        } else {
            let mut sum = 0i64;
            for x in 0..p {
                sum += jacobi_u64(self.rhs(x) as i64, p).unwrap() as i64;
            }
            (p as i64 + 1 + sum) as u64
        }
    }

    /// Order of a point given the factored group order `n`.
    pub fn point_order(&self, pt: FpPoint, n: u64, n_factors: &[(u64, u32)]) -> u64 {
        let mut ord = n;
        for &(q, e) in n_factors {
            for _ in 0..e {
                if ord % q == 0 && self.mul(ord / q, pt).is_none() {
                    ord /= q;
                } else {
                    break;
                }
            }
        }
        ord
    }
}

/// Factors a `u64` by trial division (sufficient for group orders near `p`).
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// --- dense polynomial arithmetic over F_p (small degree) ---

/// Coefficients little-endian; empty vector is the zero polynomial.
pub type Poly = Vec<u64>;

fn poly_trim(mut f: Poly) -> Poly {
    while let Some(&0) = f.last() {
        f.pop();
    }
    f
}

pub fn poly_mul(f: &[u64], g: &[u64], p: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(a, b, p), p);
        }
    }
    poly_trim(out)
}

/// Remainder of `f` modulo `g` (leading coefficient of `g` need not be 1).
pub fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Poly {
    let g = poly_trim(g.to_vec());
    assert!(!g.is_empty(), "division by zero polynomial");
    let mut r = poly_trim(f.to_vec());
    let lead_inv = invmod(*g.last().unwrap(), p).expect("prime modulus");
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (i, &gc) in g.iter().enumerate() {
            r[shift + i] = submod(r[shift + i], mulmod(c, gc, p), p);
        }
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

pub fn poly_gcd(f: &[u64], g: &[u64], p: u64) -> Poly {
    let mut a = poly_trim(f.to_vec());
    let mut b = poly_trim(g.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = invmod(lead, p).expect("prime modulus");
        a = a.iter().map(|&c| mulmod(c, inv, p)).collect();
    }
    a
}

/// `base^e mod (f, p)` for polynomials.
pub fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Poly {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &b, p), f, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), f, p);
        e >>= 1;
    }
    result
}

/// All roots in `F_p` of a low-degree polynomial, via `gcd(x^p - x, f)`
/// followed by equal-degree splitting. Deterministic: the splitting shifts
/// are tried in increasing order.
pub fn poly_roots(f: &[u64], p: u64) -> Vec<u64> {
    let f = poly_trim(f.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    if p < 256 {
        // Brute force beats modular composition for tiny fields.
        let mut roots = Vec::new();
        for x in 0..p {
            let mut v = 0u64;
            for &c in f.iter().rev() {
                v = addmod(mulmod(v, x, p), c, p);
            }
            if v == 0 {
                roots.push(x);
            }
        }
        return roots;
    }
    // x^p mod f, then gcd with x^p - x isolates the linear factors.
    let xp = poly_powmod(&[0, 1], p, &f, p);
    let mut xp_minus_x = xp;
    if xp_minus_x.len() < 2 {
        xp_minus_x.resize(2, 0);
    }
    xp_minus_x[1] = submod(xp_minus_x[1], 1, p);
    let mut linear = poly_gcd(&xp_minus_x, &f, p);
    let mut roots = Vec::new();
    let mut stack = Vec::new();
    if linear.len() > 1 {
        stack.push(std::mem::take(&mut linear));
    }
    let mut shift = 0u64;
    while let Some(g) = stack.pop() {
        if g.len() == 2 {
            // g = c0 + c1 x => root -c0/c1.
            let root = mulmod(
                submod(0, g[0], p),
                invmod(g[1], p).expect("prime modulus"),
                p,
            );
            roots.push(root);
            continue;
        }
        // Split with gcd(g, (x+shift)^((p-1)/2) - 1).
        loop {
            shift = (shift + 1) % p;
            let mut h = poly_powmod(&[shift, 1], (p - 1) / 2, &g, p);
            if h.is_empty() {
                h = vec![submod(0, 1, p)];
            } else {
                h[0] = submod(h[0], 1, p);
            }
            let d = poly_gcd(&h, &g, p);
            if d.len() > 1 && d.len() < g.len() {
                let q = poly_divide_exact(&g, &d, p);
                stack.push(d);
                stack.push(q);
                break;
            }
        }
    }
    roots.sort_unstable();
    roots
}

fn poly_divide_exact(f: &[u64], g: &[u64], p: u64) -> Poly {
    // Quotient of an exact division.
    let mut r = poly_trim(f.to_vec());
    let g = poly_trim(g.to_vec());
    let mut q = vec![0u64; r.len() + 1 - g.len()];
    let lead_inv = invmod(*g.last().unwrap(), p).expect("prime modulus");
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (i, &gc) in g.iter().enumerate() {
            r[shift + i] = submod(r[shift + i], mulmod(c, gc, p), p);
        }
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    poly_trim(q)
}
