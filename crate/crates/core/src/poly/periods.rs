//! Gaussian periods of a subgroup H of (Z/f)^* in fixed-point arithmetic,
//! and the integer polynomial they satisfy.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::dirichlet::DirichletData;
use super::zpoly::IntPoly;
use crate::error::{Error, Result};

pub const MAX_PRECISION_BITS: u64 = 1 << 20;

/// Accepted distance from an integer is 10^-4.
const TOLERANCE_DENOM: u64 = 10_000;

/// Complex number scaled by 2^bits.
#[derive(Clone, Debug)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

struct Fixed {
    bits: u64,
}

impl Fixed {
    fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.bits
    }

    fn cmul(&self, a: &Cx, b: &Cx) -> Cx {
        Cx {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.bits,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.bits,
        }
    }

    /// atan(1/x) by its Taylor series.
    fn atan_inv(&self, x: u64) -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut power = self.one() / x;
        let mut sum = power.clone();
        let mut k = 1u64;
        while !power.is_zero() {
            power /= &x2;
            let term = &power / (2 * k + 1);
            if k % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            k += 1;
        }
        sum
    }

    fn pi(&self) -> BigInt {
        16 * self.atan_inv(5) - 4 * self.atan_inv(239)
    }

    fn cos_sin(&self, theta: &BigInt) -> (BigInt, BigInt) {
        let mut cos = self.one();
        let mut sin = theta.clone();
        let t2 = self.mul(theta, theta);
        let mut term = self.one();
        let mut k = 1u64;
        loop {
            term = -self.mul(&term, &t2) / ((2 * k - 1) * (2 * k));
            if term.is_zero() {
                break;
            }
            cos += &term;
            k += 1;
        }
        let mut term = theta.clone();
        let mut k = 1u64;
        loop {
            term = -self.mul(&term, &t2) / ((2 * k) * (2 * k + 1));
            if term.is_zero() {
                break;
            }
            sin += &term;
            k += 1;
        }
        (cos, sin)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodPolynomial {
    #[serde(serialize_with = "ser_coeffs")]
    pub poly: IntPoly,
    /// Working precision that produced the accepted rounding.
    pub bits: u64,
}

fn ser_coeffs<S: serde::Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

/// ∏ (X - η_i) over the cosets of H, rounded; `None` when some coefficient
/// is not within tolerance of an integer.
fn attempt(dd: &DirichletData, bits: u64) -> Option<IntPoly> {
    let f = dd.f.max(1);
    let log_f = 64 - f.leading_zeros() as u64;
    let fx = Fixed {
        bits: bits + 2 * log_f + 32,
    };
    let theta = 2 * fx.pi() / f;
    let (c, s) = fx.cos_sin(&theta);
    let zeta = Cx { re: c, im: s };
    let mut powers = Vec::with_capacity(f as usize);
    let mut cur = Cx {
        re: fx.one(),
        im: BigInt::zero(),
    };
    for _ in 0..f {
        powers.push(cur.clone());
        cur = fx.cmul(&cur, &zeta);
    }
    let mut covered = vec![false; f as usize];
    let mut periods = Vec::new();
    for a in dd.units() {
        if covered[a as usize] {
            continue;
        }
        let mut eta = Cx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        };
        for &h in &dd.kernel {
            let x = (a * h % f) as usize;
            covered[x] = true;
            eta.re += &powers[x].re;
            eta.im += &powers[x].im;
        }
        periods.push(eta);
    }
    let mut coeffs = vec![Cx {
        re: fx.one(),
        im: BigInt::zero(),
    }];
    for eta in &periods {
        let mut next = vec![
            Cx {
                re: BigInt::zero(),
                im: BigInt::zero()
            };
            coeffs.len() + 1
        ];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1].re += &c.re;
            next[i + 1].im += &c.im;
            let t = fx.cmul(c, eta);
            next[i].re -= t.re;
            next[i].im -= t.im;
        }
        coeffs = next;
    }
    let one = fx.one();
    let half = &one >> 1;
    let tol = &one / TOLERANCE_DENOM;
    let mut out = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let n: BigInt = (&c.re + &half) >> fx.bits;
        let resid = &c.re - (&n << fx.bits);
        if resid.abs() > tol || c.im.abs() > tol {
            return None;
        }
        out.push(n);
    }
    Some(IntPoly::new(out))
}

/// Polynomial of the Gaussian periods of H; precision starts at
/// n log2(f) + 64 bits (or `start_bits`) and doubles until the rounding is
/// within tolerance and stable under one further doubling.
pub fn gaussian_period_polynomial(
    dd: &DirichletData,
    start_bits: Option<u64>,
) -> Result<PeriodPolynomial> {
    let log_f = 64 - dd.f.max(1).leading_zeros() as u64;
    let mut bits = start_bits.unwrap_or(dd.n * log_f + 64).max(16);
    loop {
        if bits > MAX_PRECISION_BITS {
            return Err(Error::Precision {
                bits,
                suggested: 2 * bits,
            });
        }
        if let Some(p) = attempt(dd, bits) {
            if attempt(dd, 2 * bits).as_ref() == Some(&p) {
                return Ok(PeriodPolynomial { poly: p, bits });
            }
        }
        log::debug!("periods: {bits} bits insufficient");
        bits *= 2;
    }
}
