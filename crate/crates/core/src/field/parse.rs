//! Text forms of elements and places.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{BaseField, FieldElement, PrimePlace};
use crate::error::{Error, Result};

struct Parser<'a> {
    k: &'a BaseField,
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                if rhs.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElement> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let n = n.to_i64().ok_or_else(|| self.err("exponent too large"))?;
            return base.pow(if neg { -n } else { n });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        Ok(self.src[start..self.pos].parse().unwrap())
    }

    fn atom(&mut self) -> Result<FieldElement> {
        if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(e);
        }
        if self.s[self.pos..].starts_with(b"sqrt(") {
            self.pos += 5;
            let neg = self.eat(b'-');
            let n = self.integer()?;
            let n = if neg { -n } else { n };
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            if self.k.is_rational() || n != BigInt::from(self.k.d()) {
                return Err(self.err(&format!("sqrt({n}) is not sqrt(d) of {}", self.k)));
            }
            return self.k.sqrt_d();
        }
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.integer()?;
            return Ok(FieldElement::from_rational(self.k, BigRational::from_integer(n)));
        }
        Err(self.err("unexpected input"))
    }
}

/// Parses expressions such as `2+3*sqrt(-47)`, `(1+sqrt(-47))/2` or `37/16`.
pub fn parse_element(k: &BaseField, s: &str) -> Result<FieldElement> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser {
        k,
        s: t.as_bytes(),
        pos: 0,
        src: &t,
    };
    let e = p.expr()?;
    if p.pos != t.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses `inf`, `p`, `(p)`, `(p,a+sqrt(d))`, `(p,(a+sqrt(d))/2)`, or a
/// prime element such as `(65+12*sqrt(-47))`.
pub fn parse_place(k: &BaseField, s: &str) -> Result<PrimePlace> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "inf" || t == "oo" || t == "infinity" {
        return Ok(PrimePlace::infinite(k));
    }
    let bad = || Error::Parse(format!("place {s:?}"));
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(&t);
    if let Some((p, gen)) = split_top_comma(inner) {
        let p: u64 = p.parse().map_err(|_| bad())?;
        let g = parse_element(k, gen)?;
        if k.is_rational() {
            return Err(bad());
        }
        // the second generator a + sqrt(d) (or its half) fixes the coordinate
        let two = BigRational::from_integer(2.into());
        let b = g.sqrt_part();
        let a = if k.half_integral() && *b == BigRational::new(1.into(), 2.into()) {
            g.rational_part() * &two
        } else if b.is_one() {
            g.rational_part().clone()
        } else {
            return Err(bad());
        };
        if !a.is_integer() {
            return Err(bad());
        }
        let a = a.to_integer().to_i64().ok_or_else(bad)?;
        return PrimePlace::from_coordinate(k, p, a);
    }
    if let Ok(p) = inner.parse::<u64>() {
        if !crate::arith::is_prime(p) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        let places = PrimePlace::above(k, p);
        return match places.as_slice() {
            [v] => Ok(*v),
            _ => Err(Error::Parse(format!(
                "{p} splits in {k}; give the place as (p,a+sqrt(d))"
            ))),
        };
    }
    // principal prime ideal given by a generator
    let g = parse_element(k, inner)?;
    let f = g.factor()?;
    match f.as_slice() {
        [(v, 1)] if g.is_integral() => Ok(*v),
        _ => Err(Error::Parse(format!("{s:?} does not generate a prime ideal"))),
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}
