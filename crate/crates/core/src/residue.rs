//! Arithmetic in F_p and F_{p^2}, e-th power residues and discrete logarithms
//! modulo e.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factor_u64, mul_mod, pow_mod, prime_divisors};
use crate::error::{Error, Result};

/// F_p (degree 1) or F_p[t]/(t^2 - c1 t - c0) (degree 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteField {
    pub p: u64,
    pub degree: u8,
    pub c0: u64,
    pub c1: u64,
}

/// x + y t; `y` is always 0 in degree 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    pub x: u64,
    pub y: u64,
}

impl Residue {
    pub const ONE: Residue = Residue { x: 1, y: 0 };
    pub const ZERO: Residue = Residue { x: 0, y: 0 };

    pub fn new(x: u64, y: u64) -> Self {
        Self { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, 1) => write!(f, "s"),
            (0, y) => write!(f, "{y}*s"),
            (x, 1) => write!(f, "{x}+s"),
            (x, y) => write!(f, "{x}+{y}*s"),
        }
    }
}

impl std::str::FromStr for Residue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("residue {s:?}"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let coeff = |t: &str| -> Result<u64> {
            match t.strip_suffix("s") {
                Some("") => Ok(1),
                Some(c) => num(c.strip_suffix('*').ok_or_else(bad)?),
                None => Err(bad()),
            }
        };
        if let Some((x, y)) = s.split_once('+') {
            return Ok(Residue::new(num(x)?, coeff(y)?));
        }
        if s.ends_with('s') {
            return Ok(Residue::new(0, coeff(&s)?));
        }
        Ok(Residue::new(num(&s)?, 0))
    }
}

impl FiniteField {
    pub fn prime(p: u64) -> Self {
        Self {
            p,
            degree: 1,
            c0: 0,
            c1: 0,
        }
    }

    /// F_p[t] with t^2 = c0 + c1 t; the caller guarantees irreducibility.
    pub fn quadratic(p: u64, c0: u64, c1: u64) -> Self {
        Self {
            p,
            degree: 2,
            c0: c0 % p,
            c1: c1 % p,
        }
    }

    pub fn q(&self) -> u64 {
        if self.degree == 1 {
            self.p
        } else {
            self.p * self.p
        }
    }

    pub fn elem(&self, x: i64, y: i64) -> Residue {
        let p = self.p as i64;
        let y = if self.degree == 1 { 0 } else { y.rem_euclid(p) as u64 };
        Residue::new(x.rem_euclid(p) as u64, y)
    }

    pub fn contains(&self, r: &Residue) -> bool {
        r.x < self.p && (r.y < self.p) && (self.degree == 2 || r.y == 0)
    }

    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        Residue::new((a.x + b.x) % self.p, (a.y + b.y) % self.p)
    }

    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        let p = self.p;
        Residue::new((a.x + p - b.x) % p, (a.y + p - b.y) % p)
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        let p = self.p;
        if self.degree == 1 {
            return Residue::new(mul_mod(a.x, b.x, p), 0);
        }
        // (ax + ay t)(bx + by t), t^2 = c0 + c1 t
        let yy = mul_mod(a.y, b.y, p);
        let x = (mul_mod(a.x, b.x, p) + mul_mod(yy, self.c0, p)) % p;
        let y = (mul_mod(a.x, b.y, p) + mul_mod(a.y, b.x, p) + mul_mod(yy, self.c1, p)) % p;
        Residue::new(x, y)
    }

    pub fn pow(&self, mut base: Residue, mut exp: u64) -> Residue {
        if self.degree == 1 {
            return Residue::new(pow_mod(base.x, exp, self.p), 0);
        }
        let mut acc = Residue::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Residue) -> Result<Residue> {
        if a.is_zero() {
            return Err(Error::Invariant("inverse of zero residue".into()));
        }
        Ok(self.pow(a, self.q() - 2))
    }

    fn check_e(&self, e: u64) -> Result<()> {
        if e == 0 || !(self.q() - 1).is_multiple_of(e) {
            return Err(Error::Invariant(format!(
                "e = {e} does not divide q - 1 = {}",
                self.q() - 1
            )));
        }
        Ok(())
    }

    fn check_unit(&self, x: Residue) -> Result<()> {
        if x.is_zero() {
            return Err(Error::Invariant("zero residue has no class mod e-th powers".into()));
        }
        Ok(())
    }

    /// Euler's criterion: x^((q-1)/e) = 1.
    pub fn is_eth_power(&self, x: Residue, e: u64) -> Result<bool> {
        self.check_e(e)?;
        self.check_unit(x)?;
        Ok(self.pow(x, (self.q() - 1) / e) == Residue::ONE)
    }

    /// Whether the class of x generates F_q^* / F_q^{*e}.
    pub fn generates_quotient(&self, x: Residue, e: u64) -> Result<bool> {
        self.check_e(e)?;
        self.check_unit(x)?;
        let q1 = self.q() - 1;
        Ok(prime_divisors(e)
            .into_iter()
            .all(|l| self.pow(x, q1 / l) != Residue::ONE))
    }

    pub fn is_primitive_root(&self, x: Residue) -> bool {
        if x.is_zero() {
            return false;
        }
        let q1 = self.q() - 1;
        factor_u64(q1)
            .into_iter()
            .all(|(l, _)| self.pow(x, q1 / l) != Residue::ONE)
    }

    /// Candidates in the fixed enumeration order: 2, 3, ... in degree 1; in
    /// degree 2, x + y t ordered by (y, x) with y >= 0.
    pub fn candidates(&self) -> impl Iterator<Item = Residue> + '_ {
        let p = self.p;
        let deg1 = (self.degree == 1).then(|| (1..p).map(|x| Residue::new(x, 0)));
        let deg2 = (self.degree == 2)
            .then(|| (0..p).flat_map(move |y| (0..p).map(move |x| Residue::new(x, y))));
        deg1.into_iter()
            .flatten()
            .chain(deg2.into_iter().flatten())
            .filter(|r| !r.is_zero() && *r != Residue::ONE)
    }

    pub fn pick_generator(&self, e: u64, ordering: GeneratorOrdering) -> Result<QuotientGenerator> {
        self.check_e(e)?;
        let b = match ordering {
            GeneratorOrdering::PrimitiveRoot => self.candidates().find(|&r| self.is_primitive_root(r)),
            GeneratorOrdering::Quotient => self
                .candidates()
                .find(|&r| self.generates_quotient(r, e).unwrap_or(false)),
        };
        match b {
            Some(b) => Ok(QuotientGenerator { b, e }),
            // e = 1: every class generates the trivial quotient
            None if e == 1 => Ok(QuotientGenerator { b: Residue::ONE, e }),
            None => Err(Error::Invariant(format!("no generator found in F_{}", self.q()))),
        }
    }

    /// Checks an externally supplied root.
    pub fn validate_generator(&self, b: Residue, e: u64) -> Result<QuotientGenerator> {
        if !self.contains(&b) {
            return Err(Error::Validation(format!("{b} is not an element of F_{}", self.q())));
        }
        if !self.generates_quotient(b, e)? {
            return Err(Error::Validation(format!(
                "{b} does not generate F_{}^*/(F_{}^*)^{e}",
                self.q(),
                self.q()
            )));
        }
        Ok(QuotientGenerator { b, e })
    }

    /// The l in Z/eZ with x = b^l modulo e-th powers.
    pub fn dlog_mod_e(&self, x: Residue, g: &QuotientGenerator) -> Result<u64> {
        let e = g.e;
        self.check_e(e)?;
        self.check_unit(x)?;
        let k = (self.q() - 1) / e;
        let target = self.pow(x, k);
        let step = self.pow(g.b, k);
        let mut cur = Residue::ONE;
        for l in 0..e {
            if cur == target {
                return Ok(l);
            }
            cur = self.mul(cur, step);
        }
        Err(Error::Invariant(format!(
            "{} does not generate the quotient of F_{}^*",
            g.b,
            self.q()
        )))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorOrdering {
    /// Smallest primitive root of F_q^*.
    #[default]
    PrimitiveRoot,
    /// Smallest element whose class generates F_q^*/F_q^{*e}.
    Quotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientGenerator {
    pub b: Residue,
    pub e: u64,
}
