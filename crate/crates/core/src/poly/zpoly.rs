//! Integer polynomials, their discriminants and resultants, and polynomial
//! arithmetic over F_p for factor-degree patterns.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{inv_mod, mul_mod};
use crate::linalg::Matrix;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mod_p(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        trim(
            self.coeffs
                .iter()
                .map(|c| c.mod_floor(&m).to_u64().unwrap())
                .collect(),
        )
    }

    /// disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f).
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n < 1 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let r = resultant(self, &self.derivative()) / self.leading();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{a}*X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{a}*X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Bareiss fraction-free determinant.
pub fn determinant(m: &Matrix<BigInt>) -> BigInt {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (m, n) = (f.degree(), g.degree());
    if m < 0 || n < 0 {
        return BigInt::zero();
    }
    let (m, n) = (m as usize, n as usize);
    if m + n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut s = Matrix::<BigInt>::zeros(size, size);
    // rows hold coefficients from the leading term down
    for r in 0..n {
        for (i, c) in f.coeffs.iter().rev().enumerate() {
            s[(r, r + i)] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.coeffs.iter().rev().enumerate() {
            s[(n + r, r + i)] = c.clone();
        }
    }
    determinant(&s)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn sub_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mul_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
fn divrem_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_mod(b[db] as i128, p as i128).expect("nonzero leading coefficient") as u64;
    let mut q = vec![0u64; r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mul_mod(*r.last().unwrap(), inv, p);
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, y, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn monic_p(a: Vec<u64>, p: u64) -> Vec<u64> {
    match a.last() {
        None => a,
        Some(&l) => {
            let inv = inv_mod(l as i128, p as i128).unwrap() as u64;
            a.iter().map(|&x| mul_mod(x, inv, p)).collect()
        }
    }
}

fn gcd_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = divrem_p(&a, &b, p);
        a = b;
        b = r;
    }
    monic_p(a, p)
}

fn powmod_p(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = divrem_p(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem_p(&mul_p(&acc, &b, p), m, p).1;
        }
        b = divrem_p(&mul_p(&b, &b, p), m, p).1;
        e >>= 1;
    }
    acc
}

/// Whether f mod p is squarefree of the same degree.
pub fn squarefree_mod(f: &IntPoly, p: u64) -> bool {
    let fp = f.mod_p(p);
    if fp.len() != f.coeffs.len() {
        return false;
    }
    let d = f.derivative().mod_p(p);
    !d.is_empty() && gcd_p(&fp, &d, p).len() == 1
}

/// Degrees of the irreducible factors of a squarefree f mod p, ascending.
pub fn factor_degrees_mod(f: &IntPoly, p: u64) -> Vec<usize> {
    let mut rest = monic_p(f.mod_p(p), p);
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 1;
    while rest.len() > 2 * i {
        h = powmod_p(&h, p, &rest, p);
        let g = gcd_p(&rest, &sub_p(&h, &x, p), p);
        let dg = g.len() - 1;
        if dg > 0 {
            out.extend(std::iter::repeat_n(i, dg / i));
            rest = divrem_p(&rest, &g, p).0;
            h = divrem_p(&h, &rest, p).1;
        }
        i += 1;
    }
    if rest.len() > 1 {
        out.push(rest.len() - 1);
    }
    out
}

/// Number of roots of f mod p, by brute force (test helper scale only).
pub fn count_roots_mod(f: &IntPoly, p: u64) -> usize {
    let fp = f.mod_p(p);
    (0..p)
        .filter(|&x| {
            fp.iter()
                .rev()
                .fold(0u64, |acc, &c| (mul_mod(acc, x, p) + c) % p)
                == 0
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_forms() {
        assert_eq!(IntPoly::from_i64(&[-10, 1, 1]).to_string(), "X^2 + X - 10");
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-X");
        assert_eq!(IntPoly::from_i64(&[3, 0, -2, 1]).to_string(), "X^3 - 2*X^2 + 3");
        assert_eq!(IntPoly::from_i64(&[]).to_string(), "0");
    }

    #[test]
    fn discriminants() {
        assert_eq!(IntPoly::from_i64(&[-10, 1, 1]).discriminant(), BigInt::from(41));
        assert_eq!(IntPoly::from_i64(&[-1, 1, 1]).discriminant(), BigInt::from(5));
        // x^3 + x + 1: -4 - 27 = -31
        assert_eq!(IntPoly::from_i64(&[1, 1, 0, 1]).discriminant(), BigInt::from(-31));
        // x^4 + 1: 256
        assert_eq!(IntPoly::from_i64(&[1, 0, 0, 0, 1]).discriminant(), BigInt::from(256));
    }

    #[test]
    fn degree_patterns() {
        // x^4 + 1 splits into quadratics mod 3, linears mod 17
        let f = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
        assert_eq!(factor_degrees_mod(&f, 3), vec![2, 2]);
        assert_eq!(factor_degrees_mod(&f, 17), vec![1, 1, 1, 1]);
        let g = IntPoly::from_i64(&[1, 1, 0, 1]);
        assert_eq!(factor_degrees_mod(&g, 2), vec![3]);
        assert!(!squarefree_mod(&g, 31));
    }

    proptest! {
        #[test]
        fn resultant_is_product_over_roots(a in prop::collection::vec(-6i64..7, 1..4),
                                           g in prop::collection::vec(-9i64..10, 1..5)) {
            // f = prod (X - a_i); Res(f, g) = prod g(a_i)
            let mut f = IntPoly::from_i64(&[1]);
            for &r in &a {
                let mut c = vec![BigInt::zero(); f.coeffs.len() + 1];
                for (i, x) in f.coeffs.iter().enumerate() {
                    c[i + 1] += x;
                    c[i] -= x * BigInt::from(r);
                }
                f = IntPoly::new(c);
            }
            let g = IntPoly::from_i64(&g);
            prop_assume!(g.degree() >= 0);
            let want: BigInt = a.iter().map(|&r| g.eval(&BigInt::from(r))).product();
            prop_assert_eq!(resultant(&f, &g), want);
        }

        #[test]
        fn linear_factor_count_matches_roots(c in prop::collection::vec(-20i64..21, 2..6),
                                             pi in 0usize..6) {
            let p = [3u64, 5, 7, 11, 13, 101][pi];
            let mut c = c;
            *c.last_mut().unwrap() = 1;
            let f = IntPoly::from_i64(&c);
            prop_assume!(squarefree_mod(&f, p));
            let degs = factor_degrees_mod(&f, p);
            prop_assert_eq!(degs.iter().sum::<usize>() as isize, f.degree());
            prop_assert_eq!(degs.iter().filter(|&&d| d == 1).count(), count_roots_mod(&f, p));
        }
    }
}
