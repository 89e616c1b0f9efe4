//! Exact arithmetic in Q and imaginary quadratic fields Q(sqrt(d)).

mod classgroup;
mod parse;
mod place;
mod sunits;

pub use classgroup::{class_group, ClassGroup, Form};
pub use parse::{parse_element, parse_place};
pub use place::{PlaceKind, PrimePlace};
pub use sunits::{build_s, s_unit_generators, SUnitBasis};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_bigint, is_squarefree};
use crate::error::{Error, Result};

/// Trial-division bound used when factoring norms.
pub const FACTOR_BOUND: u64 = 1 << 24;

/// Default bound on |discriminant| for class group enumeration.
pub const CLASS_GROUP_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Rational,
    ImagQuadratic,
}

/// Q (stored as d = 0) or Q(sqrt(d)) with d < 0 squarefree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseField {
    d: i64,
}

impl BaseField {
    pub fn rational() -> Self {
        Self { d: 0 }
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        if d >= 0 || !is_squarefree(d) {
            return Err(Error::Validation(format!(
                "d = {d} must be a negative squarefree integer"
            )));
        }
        Ok(Self { d })
    }

    pub fn kind(&self) -> FieldKind {
        if self.d == 0 {
            FieldKind::Rational
        } else {
            FieldKind::ImagQuadratic
        }
    }

    pub fn is_rational(&self) -> bool {
        self.d == 0
    }

    /// The radicand; 0 for Q.
    pub fn d(&self) -> i64 {
        self.d
    }

    /// Whether O_K = Z[(1+sqrt(d))/2].
    pub fn half_integral(&self) -> bool {
        self.d != 0 && self.d.rem_euclid(4) == 1
    }

    pub fn discriminant(&self) -> i64 {
        match self.d {
            0 => 1,
            d if self.half_integral() => d,
            d => 4 * d,
        }
    }

    pub fn degree(&self) -> u32 {
        if self.d == 0 {
            1
        } else {
            2
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_int(self, 1)
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_int(self, n)
    }

    pub fn elem(&self, x: i64, y: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::Validation("zero denominator".into()));
        }
        if self.d == 0 && y != 0 {
            return Err(Error::Validation("sqrt term in Q".into()));
        }
        let r = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(den));
        Ok(FieldElement {
            d: self.d,
            a: r(x),
            b: r(y),
        })
    }

    pub fn sqrt_d(&self) -> Result<FieldElement> {
        self.elem(0, 1, 1)
    }

    /// ω with O_K = Z[ω].
    pub fn omega(&self) -> FieldElement {
        if self.half_integral() {
            self.elem(1, 1, 2).unwrap()
        } else {
            self.elem(0, 1, 1).unwrap()
        }
    }

    /// Generator of the roots of unity in K and its order.
    pub fn torsion_generator(&self) -> (FieldElement, u64) {
        match self.d {
            -1 => (self.elem(0, 1, 1).unwrap(), 4),
            -3 => (self.elem(1, 1, 2).unwrap(), 6),
            _ => (self.int(-1), 2),
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        parse_element(self, s)
    }

    pub fn parse_place(&self, s: &str) -> Result<PrimePlace> {
        parse_place(self, s)
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            0 => write!(f, "Q"),
            d => write!(f, "Q(sqrt({d}))"),
        }
    }
}

impl std::str::FromStr for BaseField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" || t == "QQ" {
            return Ok(Self::rational());
        }
        let inner = t
            .strip_prefix("Q(sqrt(")
            .and_then(|r| r.strip_suffix("))"))
            .ok_or_else(|| Error::Parse(format!("base field {s:?}")))?;
        let d = inner
            .parse::<i64>()
            .map_err(|_| Error::Parse(format!("base field {s:?}")))?;
        Self::quadratic(d)
    }
}

/// a + b sqrt(d) with rational a, b. In Q, b is always 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    d: i64,
    a: BigRational,
    b: BigRational,
}

/// α = (x + y ω) / m with x, y, m integers, m > 0 and gcd(x, y, m) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralForm {
    pub x: BigInt,
    pub y: BigInt,
    pub m: BigInt,
}

impl FieldElement {
    pub fn from_int(k: &BaseField, n: i64) -> Self {
        Self::from_rational(k, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(k: &BaseField, a: BigRational) -> Self {
        Self {
            d: k.d,
            a,
            b: BigRational::zero(),
        }
    }

    pub fn from_parts(k: &BaseField, a: BigRational, b: BigRational) -> Result<Self> {
        if k.d == 0 && !b.is_zero() {
            return Err(Error::Validation("sqrt term in Q".into()));
        }
        Ok(Self { d: k.d, a, b })
    }

    pub fn field(&self) -> BaseField {
        BaseField { d: self.d }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            d: self.d,
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn norm(&self) -> BigRational {
        if self.d == 0 {
            return self.a.clone();
        }
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.into())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Validation("inverse of zero".into()));
        }
        if self.d == 0 {
            return Ok(Self {
                d: 0,
                a: self.a.recip(),
                b: BigRational::zero(),
            });
        }
        let n = self.norm();
        let c = self.conj();
        Ok(Self {
            d: self.d,
            a: c.a / &n,
            b: c.b / n,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = BaseField { d: self.d }.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Writes the element over the integral basis 1, ω.
    pub fn integral_form(&self) -> IntegralForm {
        let (xr, yr) = if self.d == 0 {
            (self.a.clone(), BigRational::zero())
        } else if self.d.rem_euclid(4) == 1 {
            // a + b sqrt(d) = (a - b) + 2b ω
            (&self.a - &self.b, &self.b * BigRational::from_integer(2.into()))
        } else {
            (self.a.clone(), self.b.clone())
        };
        let m = xr.denom().lcm(yr.denom());
        let x = (&xr * BigRational::from_integer(m.clone())).to_integer();
        let y = (&yr * BigRational::from_integer(m.clone())).to_integer();
        let g = x.gcd(&y).gcd(&m);
        let (x, y, m) = if g.is_zero() || g.is_one() {
            (x, y, m)
        } else {
            (x / &g, y / &g, m / &g)
        };
        IntegralForm { x, y, m }
    }

    pub fn is_integral(&self) -> bool {
        self.integral_form().m.is_one()
    }

    /// Factorisation of the principal fractional ideal (self).
    pub fn factor(&self) -> Result<Vec<(PrimePlace, i64)>> {
        if self.is_zero() {
            return Err(Error::Validation("factorisation of zero".into()));
        }
        let k = self.field();
        let n = self.norm();
        let mut primes: Vec<u64> = Vec::new();
        for part in [n.numer(), n.denom()] {
            let fac = factor_bigint(part, FACTOR_BOUND)
                .ok_or_else(|| Error::FactorBound(format!("norm of {self}")))?;
            for (p, _) in fac {
                let p = p
                    .to_u64()
                    .ok_or_else(|| Error::FactorBound(format!("prime factor of norm of {self}")))?;
                primes.push(p);
            }
        }
        primes.sort_unstable();
        primes.dedup();
        let mut out = Vec::new();
        for p in primes {
            for v in PrimePlace::above(&k, p) {
                let e = v.valuation(self)?;
                if e != 0 {
                    out.push((v, e));
                }
            }
        }
        Ok(out)
    }

    pub fn valuation(&self, v: &PrimePlace) -> Result<i64> {
        v.valuation(self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let den = self.a.denom().lcm(self.b.denom());
        let x = (&self.a * BigRational::from_integer(den.clone())).to_integer();
        let y = (&self.b * BigRational::from_integer(den.clone())).to_integer();
        let mut s = String::new();
        if !x.is_zero() {
            s.push_str(&x.to_string());
            s.push(if y.is_negative() { '-' } else { '+' });
        } else if y.is_negative() {
            s.push('-');
        }
        let ya = y.abs();
        if !ya.is_one() {
            s.push_str(&ya.to_string());
            s.push('*');
        }
        s.push_str(&format!("sqrt({})", self.d));
        if den.is_one() {
            write!(f, "{s}")
        } else {
            write!(f, "({s})/{den}")
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.d, o.d);
        FieldElement {
            d: self.d,
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.d, o.d);
        FieldElement {
            d: self.d,
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.d, o.d);
        let d = BigRational::from_integer(self.d.into());
        FieldElement {
            d: self.d,
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            d: self.d,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

/// Product of `gens[i]^exps[i]`.
pub fn power_product(k: &BaseField, gens: &[FieldElement], exps: &[i64]) -> Result<FieldElement> {
    let mut acc = k.one();
    for (g, &e) in gens.iter().zip(exps) {
        if e != 0 {
            acc = &acc * &g.pow(e)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k47() -> BaseField {
        BaseField::quadratic(-47).unwrap()
    }

    #[test]
    fn display_forms() {
        let k = k47();
        assert_eq!(k.elem(2, 3, 1).unwrap().to_string(), "2+3*sqrt(-47)");
        assert_eq!(k.elem(1, 1, 2).unwrap().to_string(), "(1+sqrt(-47))/2");
        assert_eq!(k.elem(-353, 48, 1).unwrap().to_string(), "-353+48*sqrt(-47)");
        assert_eq!(k.elem(0, -1, 1).unwrap().to_string(), "-sqrt(-47)");
        let q = BaseField::rational();
        assert_eq!(q.elem(37, 0, 16).unwrap().to_string(), "37/16");
    }

    #[test]
    fn norms_and_inverse() {
        let k = k47();
        let g = k.elem(128, 3, 1).unwrap();
        assert_eq!(g.norm(), BigRational::from_integer(16807.into()));
        let gi = g.inv().unwrap();
        assert!((&g * &gi).is_one());
    }

    #[test]
    fn integral_form_halves() {
        let k = k47();
        let f = k.elem(1, 1, 2).unwrap().integral_form();
        assert_eq!((f.x, f.y, f.m), (0.into(), 1.into(), 1.into()));
        let f = k.elem(1, 0, 2).unwrap().integral_form();
        assert_eq!((f.x, f.y, f.m), (1.into(), 0.into(), 2.into()));
    }

    #[test]
    fn field_parsing() {
        assert_eq!("Q".parse::<BaseField>().unwrap(), BaseField::rational());
        assert_eq!("Q(sqrt(-47))".parse::<BaseField>().unwrap(), k47());
        assert!("Q(sqrt(-4))".parse::<BaseField>().is_err());
        assert!("Q(sqrt(5))".parse::<BaseField>().is_err());
    }
}
