//! Class groups of imaginary quadratic orders via reduced binary quadratic
//! forms.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{BaseField, PrimePlace, CLASS_GROUP_BOUND};
use crate::arith::ext_gcd;
use crate::error::{Error, Result};
use crate::linalg::{smith, Matrix};

/// Primitive positive definite form a x^2 + b xy + c y^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn identity(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Self::new(1, b, (b * b - disc) / 4)
    }

    pub fn is_reduced(&self) -> bool {
        let Form { a, b, c } = *self;
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    fn normalize(self) -> Self {
        let Form { a, b, c } = self;
        if -a < b && b <= a {
            return self;
        }
        let r = (a - b).div_euclid(2 * a);
        let b2 = b + 2 * r * a;
        let c2 = a * r * r + b * r + c;
        Self::new(a, b2, c2)
    }

    pub fn reduce(self) -> Self {
        let mut f = self.normalize();
        while f.a > f.c {
            f = Self::new(f.c, -f.b, f.a).normalize();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c).reduce()
    }

    /// Gauss composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Self {
        let disc = self.discriminant();
        let (f1, f2) = if self.a > other.a {
            (other, self)
        } else {
            (self, other)
        };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (d, y1) = if a2 % a1 == 0 {
            (a1, 0)
        } else {
            let (g, u, _v) = ext_gcd(a2, a1);
            (g, u)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let (g, x, y) = ext_gcd(s, d);
            (g, x, -y)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (b3 * b3 - disc as i128) / (4 * a3);
        Self::new(a3 as i64, b3 as i64, c3 as i64).reduce()
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::identity(self.discriminant());
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            n >>= 1;
        }
        acc
    }
}

/// All reduced primitive forms of discriminant `disc` < 0.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let amax = ((-disc) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = Form::new(a, b, c);
            if !f.is_reduced() {
                continue;
            }
            if gcd3(a, b, c) != 1 {
                continue;
            }
            out.push(f);
        }
    }
    out.sort();
    out
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    let (g, _, _) = ext_gcd(a as i128, b as i128);
    let (g, _, _) = ext_gcd(g, c as i128);
    g as i64
}

/// Structure of Pic(O_K) as ⊕ Z/n_i with a generator form per factor.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub disc: i64,
    pub invariants: Vec<u64>,
    pub generators: Vec<Form>,
    coords: HashMap<Form, Vec<u64>>,
}

impl ClassGroup {
    pub fn trivial() -> Self {
        let mut coords = HashMap::new();
        coords.insert(Form::identity(1), Vec::new());
        Self {
            disc: 1,
            invariants: Vec::new(),
            generators: Vec::new(),
            coords,
        }
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    /// Coordinates of a form's class.
    pub fn log(&self, f: &Form) -> Vec<u64> {
        if self.disc == 1 {
            return Vec::new();
        }
        self.coords[&f.reduce()].clone()
    }

    /// Class of a finite place.
    pub fn class_of(&self, v: &PrimePlace) -> Vec<u64> {
        match v.form() {
            Some((a, b, c)) if self.disc != 1 => self.log(&Form::new(a, b, c)),
            _ => vec![0; self.invariants.len()],
        }
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.invariants)
            .map(|((a, b), n)| (a + b) % n)
            .collect()
    }

    pub fn scale(&self, x: &[u64], k: i64) -> Vec<u64> {
        x.iter()
            .zip(&self.invariants)
            .map(|(a, &n)| ((*a as i128 * k as i128).rem_euclid(n as i128)) as u64)
            .collect()
    }

    pub fn is_zero(x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }
}

/// Class group of K; trivial for Q.
pub fn class_group(k: &BaseField) -> Result<ClassGroup> {
    class_group_bounded(k, CLASS_GROUP_BOUND)
}

pub fn class_group_bounded(k: &BaseField, bound: u64) -> Result<ClassGroup> {
    if k.is_rational() {
        return Ok(ClassGroup::trivial());
    }
    let disc = k.discriminant();
    if disc.unsigned_abs() > bound {
        return Err(Error::ClassGroupTooLarge(disc.unsigned_abs()));
    }
    let forms = reduced_forms(disc);
    let id = Form::identity(disc);

    // generators in form order, each extending the known subgroup
    let mut gens: Vec<Form> = Vec::new();
    let mut known: HashMap<Form, Vec<i64>> = HashMap::new();
    known.insert(id, Vec::new());
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for f in &forms {
        if known.contains_key(f) {
            continue;
        }
        let r = gens.len();
        // order of f modulo the known subgroup
        let mut m = 1u64;
        let mut cur = *f;
        while !known.contains_key(&cur) {
            cur = cur.compose(f);
            m += 1;
        }
        let mut rel = known[&cur].clone();
        rel.iter_mut().for_each(|x| *x = -*x);
        rel.push(m as i64);
        for old in relations.iter_mut() {
            old.push(0);
        }
        relations.push(rel);
        let mut next = HashMap::with_capacity(known.len() * m as usize);
        let mut power = id;
        for j in 0..m {
            for (g, v) in &known {
                let mut w = v.clone();
                w.resize(r, 0);
                w.push(j as i64);
                next.insert(g.compose(&power), w);
            }
            power = power.compose(f);
        }
        known = next;
        gens.push(*f);
    }
    let r = gens.len();
    let rel = Matrix::from_rows(
        relations
            .iter()
            .map(|row| {
                let mut row: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
                row.resize(r, BigInt::zero());
                row
            })
            .collect(),
    );
    let snf = smith(&rel, None);
    // group ≅ Z^r / rows(D) through x -> x V
    let keep: Vec<usize> = (0..r)
        .filter(|&i| snf.diag[i] != BigInt::from(1))
        .collect();
    let invariants: Vec<u64> = keep.iter().map(|&i| snf.diag[i].to_u64().unwrap()).collect();
    let v = snf.v.map(|x| x.to_i64().expect("small transform"));
    let vinv = snf.v_inv.map(|x| x.to_i64().expect("small transform"));
    let mut coords = HashMap::with_capacity(known.len());
    for (f, x) in &known {
        let mut x = x.clone();
        x.resize(r, 0);
        let y: Vec<u64> = keep
            .iter()
            .zip(&invariants)
            .map(|(&i, &n)| {
                let s: i64 = (0..r).map(|j| x[j] * v[(j, i)]).sum();
                s.rem_euclid(n as i64) as u64
            })
            .collect();
        coords.insert(*f, y);
    }
    let generators = keep
        .iter()
        .map(|&i| {
            (0..r).fold(id, |acc, j| {
                let e = vinv[(i, j)];
                let g = if e >= 0 {
                    gens[j].pow(e as u64)
                } else {
                    gens[j].inverse().pow((-e) as u64)
                };
                acc.compose(&g)
            })
        })
        .collect();
    Ok(ClassGroup {
        disc,
        invariants,
        generators,
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(d: i64) -> u64 {
        class_group(&BaseField::quadratic(d).unwrap()).unwrap().order()
    }

    #[test]
    fn class_numbers() {
        assert_eq!(h(-47), 5);
        assert_eq!(h(-5), 2);
        assert_eq!(h(-23), 3);
        assert_eq!(h(-1), 1);
        assert_eq!(h(-3), 1);
        assert_eq!(h(-163), 1);
        assert_eq!(class_group(&BaseField::rational()).unwrap().order(), 1);
    }

    #[test]
    fn non_cyclic_structure() {
        // disc -420 has class group (Z/2)^3
        let k = BaseField::quadratic(-105).unwrap();
        let cg = class_group(&k).unwrap();
        assert_eq!(cg.invariants, vec![2, 2, 2]);
        for (g, n) in cg.generators.iter().zip(&cg.invariants) {
            assert_eq!(g.pow(*n), Form::identity(cg.disc));
        }
    }

    #[test]
    fn reduced_forms_of_minus_20() {
        let f = reduced_forms(-20);
        assert_eq!(f, vec![Form::new(1, 0, 5), Form::new(2, 2, 3)]);
    }

    #[test]
    fn class_group_bound() {
        let k = BaseField::quadratic(-47).unwrap();
        assert!(matches!(
            class_group_bounded(&k, 10),
            Err(Error::ClassGroupTooLarge(47))
        ));
    }

    proptest! {
        #[test]
        fn log_is_a_homomorphism(i in 0usize..64, j in 0usize..64, d in prop::sample::select(vec![-47i64, -71, -105, -161, -5, -14, -26])) {
            let k = BaseField::quadratic(d).unwrap();
            let cg = class_group(&k).unwrap();
            let forms = reduced_forms(cg.disc);
            let f = forms[i % forms.len()];
            let g = forms[j % forms.len()];
            let lhs = cg.log(&f.compose(&g));
            let rhs = cg.add(&cg.log(&f), &cg.log(&g));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(forms.len() as u64, cg.order());
        }
    }
}
