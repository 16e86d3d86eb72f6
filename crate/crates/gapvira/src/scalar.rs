//! Exact arithmetic in the cyclotomic field Q(xi_p).
//!
//! Elements are stored as rational coefficient vectors in the power basis
//! 1, xi, ..., xi^(phi(p)-1) modulo the p-th cyclotomic polynomial, where
//! phi is Euler's totient. For prime p this is the familiar length-(p-1)
//! vector modulo 1 + x + ... + x^(p-1); for p = 2 it degenerates to plain
//! rationals (xi_2 = -1).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

/// Degree of Q(xi_p) over Q, i.e. Euler's totient of p.
pub fn cyclo_dim(p: u32) -> usize {
    assert!(p >= 2, "p must be at least 2");
    let mut n = p;
    let mut phi = p;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            phi -= phi / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi as usize
}

/// Coefficients of the p-th cyclotomic polynomial, ascending degree, monic.
///
/// Computed as (x^p - 1) divided by the product of all lower cyclotomic
/// polynomials at divisors of p; the division is exact over the integers.
pub fn cyclotomic_poly(p: u32) -> Vec<BigInt> {
    fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
        let mut rem = num.to_vec();
        let dd = den.len() - 1;
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for qi in (0..quot.len()).rev() {
            let c = rem[qi + dd].clone();
            if c.is_zero() {
                continue;
            }
            // den is monic throughout this module
            quot[qi] = c.clone();
            for (t, dc) in den.iter().enumerate() {
                rem[qi + t] -= &c * dc;
            }
        }
        debug_assert!(rem.iter().all(|c| c.is_zero()));
        quot
    }
    fn cyclo(n: u32) -> Vec<BigInt> {
        if n == 1 {
            return vec![-BigInt::one(), BigInt::one()];
        }
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = -BigInt::one();
        num[n as usize] = BigInt::one();
        let mut result = num;
        for d in 1..n {
            if n % d == 0 {
                let phi_d = cyclo(d);
                result = poly_div_exact(&result, &phi_d);
            }
        }
        result
    }
    assert!(p >= 2, "p must be at least 2");
    cyclo(p)
}

/// An element of Q(xi_p) with exact rational coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclo {
    p: u32,
    c: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero(p: u32) -> Self {
        Cyclo {
            p,
            c: vec![BigRational::zero(); cyclo_dim(p)],
        }
    }

    pub fn one(p: u32) -> Self {
        Self::from_ratio(p, BigRational::one())
    }

    pub fn from_ratio(p: u32, q: BigRational) -> Self {
        let mut out = Self::zero(p);
        out.c[0] = q;
        out
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        Self::from_ratio(p, BigRational::from_integer(BigInt::from(n)))
    }

    /// n/d as an element of Q(xi_p). Panics if d = 0.
    pub fn rational(p: u32, n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_ratio(p, BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// xi_p^k, with k reduced mod p.
    pub fn xi_pow(p: u32, k: u64) -> Self {
        let k = (k % p as u64) as usize;
        let mut raw = vec![BigRational::zero(); k + 1];
        raw[k] = BigRational::one();
        Self::from_coeffs(p, raw)
    }

    /// Build from an arbitrary-length coefficient vector over the powers of
    /// xi_p, reducing high powers modulo the cyclotomic polynomial.
    pub fn from_coeffs(p: u32, coeffs: Vec<BigRational>) -> Self {
        let dim = cyclo_dim(p);
        let modulus = cyclotomic_poly(p);
        let mut v = coeffs;
        if v.len() < dim {
            v.resize(dim, BigRational::zero());
        }
        for e in (dim..v.len()).rev() {
            let c = std::mem::replace(&mut v[e], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (t, mc) in modulus.iter().take(dim).enumerate() {
                let adj = &c * BigRational::from_integer(mc.clone());
                v[e - dim + t] -= adj;
            }
        }
        v.truncate(dim);
        Cyclo { p, c: v }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|q| q.is_zero())
    }

    /// Some(q) when the element lies in the rational subfield.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(|q| q.is_zero()) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        assert_eq!(self.p, other.p, "mixed cyclotomic fields");
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| a + b)
            .collect();
        Cyclo { p: self.p, c }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        assert_eq!(self.p, other.p, "mixed cyclotomic fields");
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| a - b)
            .collect();
        Cyclo { p: self.p, c }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            p: self.p,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        assert_eq!(self.p, other.p, "mixed cyclotomic fields");
        let n = self.c.len();
        let mut raw = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        Cyclo::from_coeffs(self.p, raw)
    }

    pub fn scale(&self, q: &BigRational) -> Cyclo {
        Cyclo {
            p: self.p,
            c: self.c.iter().map(|a| a * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x]
    /// against the cyclotomic modulus. Panics on zero.
    pub fn inv(&self) -> Cyclo {
        assert!(!self.is_zero(), "inverse of zero");
        type Poly = Vec<BigRational>;
        fn deg(a: &Poly) -> Option<usize> {
            a.iter().rposition(|c| !c.is_zero())
        }
        fn trim(mut a: Poly) -> Poly {
            while a.len() > 1 && a.last().map(|c| c.is_zero()).unwrap_or(false) {
                a.pop();
            }
            a
        }
        // returns (quotient, remainder) of a / b with b nonzero
        fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
            let db = deg(b).expect("division by zero polynomial");
            let mut rem = a.clone();
            let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db) + 1];
            let lead = b[db].clone();
            while let Some(dr) = deg(&rem) {
                if dr < db {
                    break;
                }
                let f = &rem[dr] / &lead;
                quot[dr - db] = f.clone();
                for t in 0..=db {
                    let adj = &f * &b[t];
                    rem[dr - db + t] -= adj;
                }
            }
            (trim(quot), trim(rem))
        }
        fn poly_mul(a: &Poly, b: &Poly) -> Poly {
            let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            trim(out)
        }
        fn poly_sub(a: &Poly, b: &Poly) -> Poly {
            let n = a.len().max(b.len());
            let mut out = vec![BigRational::zero(); n];
            for (i, x) in a.iter().enumerate() {
                out[i] += x;
            }
            for (i, y) in b.iter().enumerate() {
                out[i] -= y;
            }
            trim(out)
        }

        let modulus: Poly = cyclotomic_poly(self.p)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        // extended Euclid: maintain r0 = modulus, r1 = self with
        // s-coefficients tracking Bezout factors of self.
        let mut r0 = modulus;
        let mut r1 = trim(self.c.clone());
        let mut s0: Poly = vec![BigRational::zero()];
        let mut s1: Poly = vec![BigRational::one()];
        while deg(&r1).is_some() {
            let (q, r) = div_rem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // invariant: r0 = u*modulus + s0*self, so s0*self == gcd mod Phi_p
        let d = deg(&r0).expect("gcd of nonzero inputs cannot vanish");
        assert_eq!(d, 0, "element not invertible modulo the cyclotomic polynomial");
        let scale = r0[0].recip();
        let bezout: Poly = s0.iter().map(|c| c * &scale).collect();
        Cyclo::from_coeffs(self.p, bezout)
    }

    pub fn div(&self, other: &Cyclo) -> Cyclo {
        self.mul(&other.inv())
    }

    /// Canonical text form fitting the element grammar: a bare rational,
    /// `xi^k`, or a parenthesized sum of rational multiples of xi powers.
    pub fn render(&self) -> String {
        if let Some(q) = self.as_rational() {
            return format_ratio(q);
        }
        let terms: Vec<(usize, &BigRational)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .collect();
        if terms.len() == 1 {
            let (k, q) = terms[0];
            if q.is_one() && k > 0 {
                return format!("xi^{k}");
            }
        }
        let mut out = String::from("(");
        for (pos, (k, q)) in terms.iter().enumerate() {
            let mag = q.abs();
            if pos == 0 {
                if q.is_negative() {
                    out.push('-');
                }
            } else if q.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if *k == 0 {
                out.push_str(&format_ratio(&mag));
            } else if mag.is_one() {
                out.push_str(&format!("xi^{k}"));
            } else {
                out.push_str(&format!("{}*xi^{k}", format_ratio(&mag)));
            }
        }
        out.push(')');
        out
    }

    /// Coefficients as "a/b" strings (integers render without the "/b").
    pub fn coeff_strings(&self) -> Vec<String> {
        self.c.iter().map(format_ratio).collect()
    }
}

pub fn format_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse "a" or "a/b" into an exact rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo(p={}, {})", self.p, self.render())
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
