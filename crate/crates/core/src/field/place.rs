use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{BaseField, FieldElement};
use crate::arith::{inv_mod, is_prime, legendre, sqrt_mod, valuation_bigint};
use crate::error::{Error, Result};
use crate::residue::{FiniteField, Residue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Infinite,
    /// A rational prime, K = Q.
    Rational,
    Split,
    Inert,
    Ramified,
}

/// A place of K. Finite places of a quadratic field above a split or
/// ramified p carry a coordinate `a`: the ideal is (p, (a+sqrt(d))/2) when
/// d = 1 mod 4 (a odd, -1 <= a < 2p-1) and (p, a+sqrt(d)) otherwise
/// (0 <= a < p). In both cases sqrt(d) reduces to -a.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePlace {
    pub p: u64,
    pub kind: PlaceKind,
    pub a: i64,
    d: i64,
}

impl PrimePlace {
    pub fn infinite(k: &BaseField) -> Self {
        Self {
            p: 0,
            kind: PlaceKind::Infinite,
            a: 0,
            d: k.d(),
        }
    }

    fn finite(k: &BaseField, p: u64, kind: PlaceKind, a: i64) -> Self {
        Self { p, kind, a, d: k.d() }
    }

    pub fn field(&self) -> BaseField {
        if self.d == 0 {
            BaseField::rational()
        } else {
            BaseField::quadratic(self.d).expect("place of a valid field")
        }
    }

    pub fn is_finite(&self) -> bool {
        self.kind != PlaceKind::Infinite
    }

    fn half(&self) -> bool {
        self.d != 0 && self.d.rem_euclid(4) == 1
    }

    /// All places above the rational prime `p`, in increasing coordinate.
    pub fn above(k: &BaseField, p: u64) -> Vec<PrimePlace> {
        debug_assert!(is_prime(p));
        if k.is_rational() {
            return vec![Self::finite(k, p, PlaceKind::Rational, 0)];
        }
        let d = k.d();
        let pi = p as i64;
        let split = |roots: Vec<i64>| -> Vec<PrimePlace> {
            let mut v: Vec<PrimePlace> = roots
                .into_iter()
                .map(|a| Self::finite(k, p, PlaceKind::Split, a))
                .collect();
            v.sort();
            v.dedup();
            v
        };
        if k.half_integral() {
            if p != 2 && d % pi == 0 {
                return vec![Self::finite(k, p, PlaceKind::Ramified, pi)];
            }
            if p == 2 {
                return if d.rem_euclid(8) == 1 {
                    split(vec![-1, 1])
                } else {
                    vec![Self::finite(k, p, PlaceKind::Inert, 0)]
                };
            }
            if legendre(d, p) == 1 {
                let r = sqrt_mod(d, p).unwrap() as i64;
                let lift = |r: i64| {
                    let a = if r % 2 != 0 { r } else { r + pi };
                    if a == 2 * pi - 1 {
                        -1
                    } else {
                        a
                    }
                };
                return split(vec![lift(r), lift((pi - r) % pi)]);
            }
            vec![Self::finite(k, p, PlaceKind::Inert, 0)]
        } else {
            if p == 2 {
                return vec![Self::finite(k, p, PlaceKind::Ramified, d.rem_euclid(2))];
            }
            if d % pi == 0 {
                return vec![Self::finite(k, p, PlaceKind::Ramified, 0)];
            }
            if legendre(d, p) == 1 {
                let r = sqrt_mod(d, p).unwrap() as i64;
                return split(vec![r, (pi - r) % pi]);
            }
            vec![Self::finite(k, p, PlaceKind::Inert, 0)]
        }
    }

    /// Place above `p` whose ideal contains the coordinate element for `a`.
    pub fn from_coordinate(k: &BaseField, p: u64, a: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        let places = Self::above(k, p);
        let gen = if k.half_integral() {
            k.elem(a, 1, 2)?
        } else {
            k.elem(a, 1, 1)?
        };
        if !gen.is_integral() {
            return Err(Error::Validation(format!(
                "coordinate {a} does not give an integral element over {p}"
            )));
        }
        places
            .into_iter()
            .filter(|v| matches!(v.kind, PlaceKind::Split | PlaceKind::Ramified))
            .find(|v| v.valuation(&gen).is_ok_and(|e| e > 0))
            .ok_or_else(|| {
                Error::Validation(format!("no prime ideal above {p} with coordinate {a}"))
            })
    }

    pub fn degree(&self) -> u32 {
        match self.kind {
            PlaceKind::Inert => 2,
            PlaceKind::Infinite => 0,
            _ => 1,
        }
    }

    /// Residue field size q_v.
    pub fn q(&self) -> u64 {
        self.p.pow(self.degree())
    }

    pub fn ramification_index(&self) -> i64 {
        if self.kind == PlaceKind::Ramified {
            2
        } else {
            1
        }
    }

    pub fn conjugate(&self) -> Self {
        if self.kind != PlaceKind::Split {
            return *self;
        }
        let k = self.field();
        *Self::above(&k, self.p)
            .iter()
            .find(|v| v.a != self.a)
            .expect("split prime has two places")
    }

    /// Image of ω in F_p for a degree-1 place.
    fn omega_image(&self) -> u64 {
        let p = self.p as i64;
        let s = if self.d == 0 {
            0
        } else if self.half() {
            (1 - self.a) / 2
        } else {
            -self.a
        };
        s.rem_euclid(p) as u64
    }

    pub fn residue_field(&self) -> FiniteField {
        match self.kind {
            PlaceKind::Inert if self.p == 2 => {
                // t = ω, t^2 = t + (d-1)/4
                FiniteField::quadratic(2, ((self.d - 1) / 4).rem_euclid(2) as u64, 1)
            }
            PlaceKind::Inert => {
                FiniteField::quadratic(self.p, self.d.rem_euclid(self.p as i64) as u64, 0)
            }
            _ => FiniteField::prime(self.p),
        }
    }

    fn reduce_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    /// Residue of x + y ω, an element of O_K.
    pub fn reduce_integral(&self, x: &BigInt, y: &BigInt) -> Residue {
        let p = self.p;
        let (xr, yr) = (self.reduce_int(x), self.reduce_int(y));
        match self.kind {
            PlaceKind::Inert if p == 2 || !self.half() => Residue::new(xr, yr),
            PlaceKind::Inert => {
                // ω = (1 + t)/2
                let h = inv_mod(2, p as i128).unwrap() as u64;
                let yh = (yr as u128 * h as u128 % p as u128) as u64;
                Residue::new((xr + yh) % p, yh)
            }
            _ => {
                let s = self.omega_image();
                Residue::new(((xr as u128 + yr as u128 * s as u128) % p as u128) as u64, 0)
            }
        }
    }

    fn integral_norm(&self, x: &BigInt, y: &BigInt) -> BigInt {
        if self.d == 0 {
            return x.clone();
        }
        if self.half() {
            x * x + x * y + y * y * BigInt::from((1 - self.d) / 4)
        } else {
            x * x - y * y * BigInt::from(self.d)
        }
    }

    fn valuation_integral(&self, x: &BigInt, y: &BigInt) -> i64 {
        let vp = |n: &BigInt| {
            if n.is_zero() {
                u32::MAX
            } else {
                valuation_bigint(n, self.p)
            }
        };
        let k = vp(x).min(vp(y));
        let pk = BigInt::from(self.p).pow(k);
        let (x, y) = (x / &pk, y / &pk);
        let extra = match self.kind {
            PlaceKind::Ramified => i64::from(self.reduce_integral(&x, &y).is_zero()),
            PlaceKind::Split if self.reduce_integral(&x, &y).is_zero() => {
                valuation_bigint(&self.integral_norm(&x, &y), self.p) as i64
            }
            _ => 0,
        };
        k as i64 * self.ramification_index() + extra
    }

    /// Exact valuation of a nonzero element at this place.
    pub fn valuation(&self, x: &FieldElement) -> Result<i64> {
        if !self.is_finite() {
            return Err(Error::Validation("valuation at the infinite place".into()));
        }
        if x.is_zero() {
            return Err(Error::Validation("valuation of zero".into()));
        }
        let f = x.integral_form();
        let vm = valuation_bigint(&f.m, self.p) as i64;
        Ok(self.valuation_integral(&f.x, &f.y) - self.ramification_index() * vm)
    }

    /// Reduction modulo this place; requires nonnegative valuation.
    pub fn reduce(&self, x: &FieldElement) -> Result<Residue> {
        if x.is_zero() {
            return Ok(Residue::ZERO);
        }
        let v = self.valuation(x)?;
        if v < 0 {
            return Err(Error::NotIntegral(format!("{x} at {self}")));
        }
        if v > 0 {
            return Ok(Residue::ZERO);
        }
        let ff = self.residue_field();
        let f = x.integral_form();
        let k = valuation_bigint(&f.m, self.p);
        if k == 0 {
            let num = self.reduce_integral(&f.x, &f.y);
            let m = ff.elem(self.reduce_int(&f.m) as i64, 0);
            return Ok(ff.mul(num, ff.inv(m)?));
        }
        // only a split place can see p in the denominator at valuation 0
        let field = x.field();
        let sbar = self.conjugate().omega_image() as i64;
        let t = &field.omega() - &field.int(sbar);
        let tk = t.pow(k as i64)?;
        let beta = x * &tk;
        let rb = self.reduce(&beta)?;
        let rt = self.reduce(&tk)?;
        Ok(ff.mul(rb, ff.inv(rt)?))
    }

    /// Binary quadratic form (A, B, C) of discriminant disc(K) attached to the
    /// ideal A Z + ((-B + sqrt(D))/2) Z; `None` for principal prime ideals.
    pub fn form(&self) -> Option<(i64, i64, i64)> {
        match self.kind {
            PlaceKind::Split | PlaceKind::Ramified => {
                let p = self.p as i64;
                let a = self.a;
                if self.half() {
                    Some((p, -a, (a * a - self.d) / (4 * p)))
                } else {
                    Some((p, -2 * a, (a * a - self.d) / p))
                }
            }
            _ => None,
        }
    }

    fn sort_key(&self) -> (bool, u64, i64) {
        (self.is_finite(), self.p, self.a)
    }
}

impl Ord for PrimePlace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PrimePlace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PlaceKind::Infinite => write!(f, "inf"),
            PlaceKind::Rational | PlaceKind::Inert => write!(f, "({})", self.p),
            _ if self.half() => write!(f, "({},({}+sqrt({}))/2)", self.p, self.a, self.d),
            _ if self.a == 0 => write!(f, "({},sqrt({}))", self.p, self.d),
            _ => write!(f, "({},{}+sqrt({}))", self.p, self.a, self.d),
        }
    }
}

impl fmt::Debug for PrimePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for PrimePlace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Norm of the place as a big integer.
pub(crate) fn place_norm(v: &PrimePlace) -> BigInt {
    if v.is_finite() {
        BigInt::from(v.q())
    } else {
        BigInt::one()
    }
}
