//! Bounded enumeration of the places in T(S; e; 1; {x}) and T(S; e; {x}; y).

use crate::arith::next_prime;
use crate::error::{Error, Result};
use crate::field::{BaseField, FieldElement, PrimePlace, SUnitBasis};
use crate::residue::Residue;

/// Default bound on the rational prime below a candidate place.
pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

/// All finite places of K ordered by (p, coordinate).
#[derive(Clone, Debug)]
pub struct PlaceWalk {
    field: BaseField,
    p: u64,
    pending: Vec<PrimePlace>,
}

impl PlaceWalk {
    pub fn new(k: &BaseField) -> Self {
        Self {
            field: *k,
            p: 1,
            pending: Vec::new(),
        }
    }

    /// The rational prime of the most recently produced place.
    pub fn prime(&self) -> u64 {
        self.p
    }
}

impl Iterator for PlaceWalk {
    type Item = PrimePlace;

    fn next(&mut self) -> Option<PrimePlace> {
        while self.pending.is_empty() {
            self.p = next_prime(self.p);
            self.pending = PrimePlace::above(&self.field, self.p);
            self.pending.reverse();
        }
        self.pending.pop()
    }
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub field: BaseField,
    /// Finite places of S.
    pub s: Vec<PrimePlace>,
    pub e: u64,
    pub xs: Vec<FieldElement>,
    /// Element whose class must generate F_v^*/F_v^{*e}.
    pub y: Option<FieldElement>,
    pub exclude: Vec<PrimePlace>,
    /// Largest rational prime inspected.
    pub bound: u64,
}

impl SearchSpec {
    pub fn new(basis: &SUnitBasis, e: u64, bound: u64) -> Self {
        Self {
            field: basis.field,
            s: basis.places.clone(),
            e,
            xs: basis.gamma.clone(),
            y: None,
            exclude: Vec::new(),
            bound,
        }
    }

    pub fn with_y(mut self, y: FieldElement) -> Self {
        self.y = Some(y);
        self
    }

    pub fn excluding(mut self, places: &[PrimePlace]) -> Self {
        self.exclude.extend_from_slice(places);
        self
    }

    /// Whether v satisfies every membership condition.
    pub fn admits(&self, v: &PrimePlace) -> Result<bool> {
        if !v.is_finite() || self.s.contains(v) || self.exclude.contains(v) {
            return Ok(false);
        }
        if !(v.q() - 1).is_multiple_of(self.e) {
            return Ok(false);
        }
        let ff = v.residue_field();
        for x in &self.xs {
            match unit_residue(v, x)? {
                Some(r) if ff.is_eth_power(r, self.e)? => {}
                _ => return Ok(false),
            }
        }
        if let Some(y) = &self.y {
            match unit_residue(v, y)? {
                Some(r) if ff.generates_quotient(r, self.e)? => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}

/// Residue of x at v when x is a v-unit.
fn unit_residue(v: &PrimePlace, x: &FieldElement) -> Result<Option<Residue>> {
    if v.valuation(x)? != 0 {
        return Ok(None);
    }
    v.reduce(x).map(Some)
}

/// Resumable position in the place order.
#[derive(Clone, Debug)]
pub struct Cursor {
    walk: PlaceWalk,
    pub inspected: u64,
}

impl Cursor {
    pub fn start(k: &BaseField) -> Self {
        Self {
            walk: PlaceWalk::new(k),
            inspected: 0,
        }
    }
}

pub fn next_place(spec: &SearchSpec, cursor: &mut Cursor) -> Result<PrimePlace> {
    loop {
        let v = cursor.walk.next().expect("infinitely many primes");
        if v.p > spec.bound {
            return Err(Error::SearchExhausted {
                inspected: cursor.inspected,
                bound: spec.bound,
            });
        }
        cursor.inspected += 1;
        if cursor.inspected.is_multiple_of(10_000) {
            log::debug!("search: inspected {} places, at p = {}", cursor.inspected, v.p);
        }
        if spec.admits(&v)? {
            return Ok(v);
        }
    }
}

pub fn stream(spec: &SearchSpec, n: usize) -> Result<Vec<PrimePlace>> {
    let mut cursor = Cursor::start(&spec.field);
    (0..n).map(|_| next_place(spec, &mut cursor)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_s, s_unit_generators};

    fn example_two() -> SUnitBasis {
        let k = BaseField::quadratic(-47).unwrap();
        let s = build_s(&k, &[k.elem(2, 3, 1).unwrap()]).unwrap();
        s_unit_generators(&k, &s).unwrap()
    }

    #[test]
    fn example_one_places() {
        let q = BaseField::rational();
        let basis = s_unit_generators(&q, &build_s(&q, &[q.elem(37, 0, 16).unwrap()]).unwrap())
            .unwrap();
        let spec = SearchSpec::new(&basis, 2, 1000);
        assert_eq!(stream(&spec, 1).unwrap()[0].p, 41);
        let spec = spec.with_y(q.int(41));
        assert_eq!(stream(&spec, 1).unwrap()[0].p, 137);
    }

    #[test]
    fn example_two_list() {
        let basis = example_two();
        let spec = SearchSpec::new(&basis, 6, 10_000);
        let got: Vec<String> = stream(&spec, 13)
            .unwrap()
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(
            got,
            vec![
                "(97,(27+sqrt(-47))/2)",
                "(569)",
                "(809)",
                "(1033)",
                "(1381,(1445+sqrt(-47))/2)",
                "(1913)",
                "(2281,(619+sqrt(-47))/2)",
                "(2377,(3677+sqrt(-47))/2)",
                "(2887)",
                "(4621)",
                "(4789,(2537+sqrt(-47))/2)",
                "(5227)",
                "(6101)",
            ]
        );
        assert!(stream(&spec, 0).unwrap().is_empty());
    }

    #[test]
    fn bound_is_reported() {
        let basis = example_two();
        let spec = SearchSpec::new(&basis, 6, 500);
        match stream(&spec, 2) {
            Err(Error::SearchExhausted { inspected, bound }) => {
                assert_eq!(bound, 500);
                assert!(inspected > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn walk_order() {
        let k = BaseField::quadratic(-47).unwrap();
        let w: Vec<PrimePlace> = PlaceWalk::new(&k).take(200).collect();
        assert!(w.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn quadratic_case_matches_legendre() {
        // K = Q, e = 2: membership is a conjunction of Legendre symbols
        let q = BaseField::rational();
        let basis = s_unit_generators(&q, &build_s(&q, &[q.int(6)]).unwrap()).unwrap();
        let spec = SearchSpec::new(&basis, 2, 2000).with_y(q.int(5));
        let got = stream(&spec, 10).unwrap();
        let mut want = Vec::new();
        let mut p = 3u64;
        while want.len() < 10 {
            p = next_prime(p);
            let leg = |x: i64| crate::arith::legendre(x, p);
            if leg(-1) == 1 && leg(2) == 1 && leg(3) == 1 && leg(5) == -1 {
                want.push(p);
            }
        }
        assert_eq!(got.iter().map(|v| v.p).collect::<Vec<_>>(), want);
    }
}
