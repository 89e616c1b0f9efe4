//! Exact norms from multiquadratic fields Q(√g_1, ..., √g_m) and from power
//! bases Q[X]/(f).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::zpoly::{resultant, IntPoly};
use crate::error::{Error, Result};

/// The algebra with basis β_A = ∏_{i∈A} √g_i indexed by bitmask A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiquadratic {
    pub radicands: Vec<BigInt>,
}

impl Multiquadratic {
    pub fn new(radicands: Vec<BigInt>) -> Result<Self> {
        if radicands.len() > 16 {
            return Err(Error::Validation("at most 16 radicals".into()));
        }
        Ok(Self { radicands })
    }

    pub fn dimension(&self) -> usize {
        1 << self.radicands.len()
    }

    /// β_A β_B = β_{A△B} ∏_{i∈A∩B} g_i.
    pub fn mul(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let n = self.dimension();
        let mut out = vec![BigRational::zero(); n];
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut c = xa * yb;
                for (i, g) in self.radicands.iter().enumerate() {
                    if a & b & (1 << i) != 0 {
                        c *= BigRational::from_integer(g.clone());
                    }
                }
                out[a ^ b] += c;
            }
        }
        out
    }

    /// Image under the automorphism flipping the signs of √g_i for i in s.
    pub fn conjugate(&self, x: &[BigRational], s: usize) -> Vec<BigRational> {
        x.iter()
            .enumerate()
            .map(|(a, c)| {
                if (a & s).count_ones() % 2 == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect()
    }

    fn check(&self, x: &[BigRational]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::Validation(format!(
                "expected {} coordinates, got {}",
                self.dimension(),
                x.len()
            )));
        }
        Ok(())
    }

    /// Product of all 2^m conjugates.
    pub fn norm(&self, x: &[BigRational]) -> Result<BigRational> {
        self.check(x)?;
        let mut acc = x.to_vec();
        for s in 1..self.dimension() {
            acc = self.mul(&acc, &self.conjugate(x, s));
        }
        if acc[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::Invariant(
                "conjugate product is not rational; radicands are not independent".into(),
            ));
        }
        Ok(acc[0].clone())
    }

    /// θ = Σ √g_i.
    fn theta(&self) -> Vec<BigRational> {
        let mut t = vec![BigRational::zero(); self.dimension()];
        for i in 0..self.radicands.len() {
            t[1 << i] = BigRational::one();
        }
        t
    }

    /// Minimal polynomial of θ, ∏_s (X - σ_s θ).
    pub fn theta_polynomial(&self) -> Result<IntPoly> {
        let n = self.dimension();
        let theta = self.theta();
        // coefficients are algebra elements; the product is rational
        let mut poly: Vec<Vec<BigRational>> = vec![unit(n)];
        for s in 0..n {
            let root = self.conjugate(&theta, s);
            let mut next = vec![vec![BigRational::zero(); n]; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                add_into(&mut next[i + 1], c);
                let t = self.mul(c, &root);
                sub_into(&mut next[i], &t);
            }
            poly = next;
        }
        let mut out = Vec::with_capacity(poly.len());
        for c in &poly {
            if c[1..].iter().any(|x| !x.is_zero()) || !c[0].is_integer() {
                return Err(Error::Invariant("θ polynomial is not integral".into()));
            }
            out.push(c[0].to_integer());
        }
        Ok(IntPoly::new(out))
    }

    /// Coordinates of x in the power basis 1, θ, ..., θ^{n-1}.
    pub fn power_coordinates(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        self.check(x)?;
        let n = self.dimension();
        let theta = self.theta();
        let mut cols = vec![unit(n)];
        for _ in 1..n {
            let next = self.mul(cols.last().unwrap(), &theta);
            cols.push(next);
        }
        // solve Σ c_j θ^j = x
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
                row.push(x[r].clone());
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .ok_or_else(|| Error::Invariant("θ does not generate the algebra".into()))?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v / &p;
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= &f * pv;
                    }
                }
            }
        }
        Ok(m.into_iter().map(|row| row[n].clone()).collect())
    }

    /// The norm again, as Res(F, g) with x = g(θ) and F the θ polynomial.
    pub fn norm_via_resultant(&self, x: &[BigRational]) -> Result<BigRational> {
        let f = self.theta_polynomial()?;
        let g = self.power_coordinates(x)?;
        norm_power_basis(&f, &g)
    }
}

fn unit(n: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[0] = BigRational::one();
    v
}

fn add_into(a: &mut [BigRational], b: &[BigRational]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn sub_into(a: &mut [BigRational], b: &[BigRational]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
}

/// N(g(θ)) for θ a root of the monic integral f: Res(f, g), with the
/// denominators of g cleared first.
pub fn norm_power_basis(f: &IntPoly, coords: &[BigRational]) -> Result<BigRational> {
    if !f.is_monic() || f.degree() < 1 {
        return Err(Error::Validation("defining polynomial must be monic of positive degree".into()));
    }
    let n = f.degree() as usize;
    if coords.len() != n {
        return Err(Error::Validation(format!(
            "expected {n} coordinates, got {}",
            coords.len()
        )));
    }
    let den = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let g = IntPoly::new(
        coords
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect(),
    );
    let r = if g.degree() < 0 {
        BigInt::zero()
    } else {
        resultant(f, &g)
    };
    let scale = num_traits::pow(den, n);
    Ok(BigRational::new(r, scale))
}

/// Parses "a", "a/b" or "-a/b".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("rational {s:?}"));
    match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Norm of Σ x_A β_A over Q(√g_1, ..., √g_m).
pub fn norm_form_eval(radicands: &[i64], coords: &[BigRational]) -> Result<BigRational> {
    let m = Multiquadratic::new(radicands.iter().map(|&g| BigInt::from(g)).collect())?;
    m.norm(coords)
}
