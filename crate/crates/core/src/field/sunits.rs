//! The set S, generators of the S-units and uniformisers.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::classgroup::{class_group, ClassGroup};
use super::place::place_norm;
use super::{power_product, BaseField, FieldElement, PlaceKind, PrimePlace};
use crate::arith::next_prime;
use crate::error::{Error, Result};
use crate::linalg::{generates, smith, Lattice, Matrix};

/// Largest number of exponent vectors inspected by the lattice searches.
const ENUMERATION_LIMIT: usize = 200_000;

#[derive(Clone, Debug)]
pub struct SUnitBasis {
    pub field: BaseField,
    /// Finite places of S in increasing order; the infinite place is implicit.
    pub places: Vec<PrimePlace>,
    /// γ_0 (torsion) followed by γ_1..γ_r.
    pub gamma: Vec<FieldElement>,
    pub torsion_order: u64,
    class_group: ClassGroup,
}

impl SUnitBasis {
    /// Basis with the given generators, after checking that they generate
    /// the S-units and that γ_0 generates the roots of unity.
    pub fn with_generators(
        k: &BaseField,
        s: &[PrimePlace],
        gamma: Vec<FieldElement>,
    ) -> Result<SUnitBasis> {
        let mut basis = s_unit_generators(k, s)?;
        if gamma.len() != basis.gamma.len() {
            return Err(Error::Validation(format!(
                "expected {} S-unit generators, got {}",
                basis.gamma.len(),
                gamma.len()
            )));
        }
        let n = basis.torsion_order;
        let z = &gamma[0];
        let root = z.pow(n as i64)?.is_one()
            && crate::arith::prime_divisors(n)
                .into_iter()
                .all(|l| !z.pow((n / l) as i64).map_or(true, |x| x.is_one()));
        if !root {
            return Err(Error::Validation(format!(
                "{z} does not generate the roots of unity of {k}"
            )));
        }
        if !basis.generates_same(&gamma)? {
            return Err(Error::Validation("generators do not span the S-units".into()));
        }
        basis.gamma = gamma;
        Ok(basis)
    }

    /// Rank r = |S| - 1.
    pub fn rank(&self) -> usize {
        self.places.len()
    }

    /// S including the infinite place.
    pub fn all_places(&self) -> Vec<PrimePlace> {
        let mut v = vec![PrimePlace::infinite(&self.field)];
        v.extend(self.places.iter().copied());
        v
    }

    pub fn contains(&self, v: &PrimePlace) -> bool {
        !v.is_finite() || self.places.contains(v)
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.class_group
    }

    /// Valuation vector over the finite places of S.
    pub fn valuation_vector(&self, x: &FieldElement) -> Result<Vec<i64>> {
        self.places.iter().map(|v| v.valuation(x)).collect()
    }

    /// Square matrix whose column i is the valuation vector of γ_{i+1}.
    pub fn valuation_matrix(&self) -> Result<Matrix<i64>> {
        let cols: Vec<Vec<i64>> = self.gamma[1..]
            .iter()
            .map(|g| self.valuation_vector(g))
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(self.places.len(), &cols))
    }

    /// Exponents (c_0, ..., c_r) with x = Π γ_i^{c_i}; c_0 is taken mod the
    /// torsion order.
    pub fn exponents(&self, x: &FieldElement) -> Result<Vec<i64>> {
        if x.is_zero() {
            return Err(Error::STooSmall("zero is not an S-unit".into()));
        }
        for (v, _) in x.factor()? {
            if !self.contains(&v) {
                return Err(Error::STooSmall(format!("{x} has nonzero valuation at {v}")));
            }
        }
        let val = self.valuation_vector(x)?;
        let m = self.valuation_matrix()?.map(|&e| BigInt::from(e));
        let rhs: Vec<BigInt> = val.iter().map(|&e| BigInt::from(e)).collect();
        let c = solve_integer(&m, &rhs).ok_or_else(|| {
            Error::Invariant(format!("valuation vector of {x} not in the S-unit lattice"))
        })?;
        let c: Vec<i64> = c.iter().map(|x| x.to_i64().unwrap()).collect();
        let rest = x.div(&power_product(&self.field, &self.gamma[1..], &c)?)?;
        let (z, n) = (&self.gamma[0], self.torsion_order);
        let mut cur = self.field.one();
        for c0 in 0..n {
            if cur == rest {
                let mut out = vec![c0 as i64];
                out.extend(c);
                return Ok(out);
            }
            cur = &cur * z;
        }
        Err(Error::Invariant(format!("{rest} is not a root of unity")))
    }

    /// A uniformiser at `v` that is a unit outside S ∪ {v}, minimising
    /// N(v) Π N(P)^|a_P| over the S-exponents used.
    pub fn uniformiser(&self, v: &PrimePlace) -> Result<FieldElement> {
        if !v.is_finite() || self.contains(v) {
            return Err(Error::Validation(format!("uniformiser requested at {v} in S")));
        }
        if self.field.is_rational() {
            return Ok(self.field.int(v.p as i64));
        }
        let cg = &self.class_group;
        let target = cg.class_of(v);
        let classes: Vec<Vec<u64>> = self.places.iter().map(|p| cg.class_of(p)).collect();
        let norms: Vec<BigInt> = self.places.iter().map(place_norm).collect();
        for (a, _) in ExponentWalk::new(norms).take(ENUMERATION_LIMIT) {
            let mut c = target.clone();
            for (cls, &e) in classes.iter().zip(&a) {
                c = cg.add(&c, &cg.scale(cls, e));
            }
            if ClassGroup::is_zero(&c) {
                let mut ideal = vec![(*v, 1)];
                ideal.extend(self.places.iter().copied().zip(a.iter().copied()));
                return generator_of(&self.field, &ideal);
            }
        }
        Err(Error::SearchExhausted {
            inspected: ENUMERATION_LIMIT as u64,
            bound: ENUMERATION_LIMIT as u64,
        })
    }

    /// Checks that π is a uniformiser at v relative to S.
    pub fn validate_uniformiser(&self, v: &PrimePlace, pi: &FieldElement) -> Result<()> {
        for (w, e) in pi.factor()? {
            if w == *v {
                if e != 1 {
                    return Err(Error::Validation(format!("{pi} has valuation {e} at {v}")));
                }
            } else if !self.contains(&w) {
                return Err(Error::Validation(format!(
                    "{pi} has valuation {e} at {w}, outside S and {v}"
                )));
            }
        }
        if v.valuation(pi)? != 1 {
            return Err(Error::Validation(format!("{pi} is not a uniformiser at {v}")));
        }
        Ok(())
    }

    /// Whether the given elements generate the same group as `gamma`.
    pub fn generates_same(&self, other: &[FieldElement]) -> Result<bool> {
        let exps: Vec<Vec<i64>> = other.iter().map(|x| self.exponents(x)).collect::<Result<_>>()?;
        let mut moduli = vec![self.torsion_order];
        moduli.extend(std::iter::repeat_n(0, self.rank()));
        Ok(generates(&exps, &moduli))
    }
}

/// Solves m x = rhs over Z exactly when a solution exists.
pub(crate) fn solve_integer(m: &Matrix<BigInt>, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith(m, None);
    let ub = s.u.mul_vec(rhs);
    let mut z = vec![BigInt::zero(); m.cols()];
    for (i, b) in ub.iter().enumerate() {
        if i < s.diag.len() && !s.diag[i].is_zero() {
            let (q, r) = (b / &s.diag[i], b % &s.diag[i]);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !b.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&z))
}

/// Exponent vectors over places of the given norms, nondecreasing in the
/// weight Π N_i^|a_i|.
pub(crate) struct ExponentWalk {
    norms: Vec<BigInt>,
    heap: BinaryHeap<Reverse<(BigInt, Vec<i64>)>>,
}

impl ExponentWalk {
    pub(crate) fn new(norms: Vec<BigInt>) -> Self {
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((BigInt::one(), vec![0; norms.len()])));
        Self { norms, heap }
    }
}

impl Iterator for ExponentWalk {
    type Item = (Vec<i64>, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let Reverse((w, a)) = self.heap.pop()?;
        let last = a.iter().rposition(|&x| x != 0);
        let start = last.unwrap_or(0);
        for j in start..a.len() {
            let nw = &w * &self.norms[j];
            if Some(j) == last {
                let mut b = a.clone();
                b[j] += b[j].signum();
                self.heap.push(Reverse((nw, b)));
            } else if a[j] == 0 {
                for s in [1, -1] {
                    let mut b = a.clone();
                    b[j] = s;
                    self.heap.push(Reverse((nw.clone(), b)));
                }
            }
        }
        Some((a, w))
    }
}

/// Canonical generator of the principal fractional ideal Π P^e.
pub fn generator_of(k: &BaseField, ideal: &[(PrimePlace, i64)]) -> Result<FieldElement> {
    // Π P^e = J / n with J = Π P^{e+} Π conj(P)^{e-} integral
    let mut integral: Vec<(PrimePlace, i64)> = Vec::new();
    let mut den = BigInt::one();
    let mut push = |v: PrimePlace, e: i64| {
        if let Some(entry) = integral.iter_mut().find(|(w, _)| *w == v) {
            entry.1 += e;
        } else {
            integral.push((v, e));
        }
    };
    for &(v, e) in ideal {
        if e > 0 {
            push(v, e);
        } else if e < 0 {
            let m = -e;
            den *= BigInt::from(v.p).pow(m as u32);
            match v.kind {
                PlaceKind::Split => push(v.conjugate(), m),
                PlaceKind::Ramified => push(v, m),
                _ => {}
            }
        }
    }
    integral.retain(|&(_, e)| e != 0);
    let g = integral_generator(k, &integral)?;
    Ok(&g * &FieldElement::from_rational(k, BigRational::new(BigInt::one(), den)))
}

/// Generator of an integral principal ideal by norm enumeration.
fn integral_generator(k: &BaseField, ideal: &[(PrimePlace, i64)]) -> Result<FieldElement> {
    let norm: BigInt = ideal
        .iter()
        .map(|(v, e)| place_norm(v).pow(*e as u32))
        .product();
    if k.is_rational() {
        return Ok(FieldElement::from_rational(k, BigRational::from_integer(norm)));
    }
    let ad = BigInt::from(-k.d());
    let half = k.half_integral();
    // x^2 + |d| y^2 = 4N (half-integral) or N
    let target = if half { &norm * 4 } else { norm.clone() };
    let mut y = BigInt::zero();
    let mut best: Option<FieldElement> = None;
    while &ad * &y * &y <= target {
        let rest = &target - &ad * &y * &y;
        let x = rest.sqrt();
        if &x * &x == rest && (!half || (&x - &y) % 2 == BigInt::zero()) {
            for sx in [1i64, -1] {
                for sy in [1i64, -1] {
                    let xs = &x * sx;
                    let ys = &y * sy;
                    let den = if half { 2 } else { 1 };
                    let cand = FieldElement::from_parts(
                        k,
                        BigRational::new(xs, BigInt::from(den)),
                        BigRational::new(ys, BigInt::from(den)),
                    )?;
                    if cand.is_zero() {
                        continue;
                    }
                    let ok = ideal
                        .iter()
                        .all(|(v, e)| v.valuation(&cand) == Ok(*e));
                    if ok {
                        let c = canonical_associate(k, &cand);
                        if best.as_ref().is_none_or(|b| key(b) > key(&c)) {
                            best = Some(c);
                        }
                    }
                }
            }
            if best.is_some() {
                break;
            }
        }
        y += 1;
    }
    best.ok_or_else(|| Error::Invariant(format!("no generator of norm {norm} for a principal ideal")))
}

fn key(x: &FieldElement) -> (BigRational, BigRational) {
    (x.sqrt_part().clone(), x.rational_part().clone())
}

/// Representative of x up to roots of unity: y > 0, or y = 0 and x > 0,
/// with the argument in [0, 2π/w) for the fields with extra units.
fn canonical_associate(k: &BaseField, x: &FieldElement) -> FieldElement {
    let (z, n) = k.torsion_generator();
    let mut cur = x.clone();
    let mut best: Option<FieldElement> = None;
    for _ in 0..n {
        let in_sector = {
            let (a, b) = (cur.rational_part(), cur.sqrt_part());
            match n {
                2 => b.is_positive() || (b.is_zero() && a.is_positive()),
                // argument in [0, 2π/n): a > 0, b >= 0 and for n = 6 also
                // below the 60 degree line
                _ => {
                    let re = a.to_f64().unwrap_or(0.0);
                    let im = b.to_f64().unwrap_or(0.0) * (-k.d() as f64).sqrt();
                    let ang = im.atan2(re);
                    let w = 2.0 * std::f64::consts::PI / n as f64;
                    ang >= -1e-12 && ang < w - 1e-12
                }
            }
        };
        if in_sector {
            best = Some(cur.clone());
            break;
        }
        cur = &cur * &z;
    }
    best.unwrap_or_else(|| x.clone())
}

/// S = {∞} ∪ supp(α_i), extended greedily by smallest-norm places until the
/// classes of S generate the class group.
pub fn build_s(k: &BaseField, alphas: &[FieldElement]) -> Result<Vec<PrimePlace>> {
    let mut s: Vec<PrimePlace> = Vec::new();
    for a in alphas {
        if a.is_zero() {
            return Err(Error::Validation("alpha = 0".into()));
        }
        for (v, _) in a.factor()? {
            if !s.contains(&v) {
                s.push(v);
            }
        }
    }
    s.sort();
    let cg = class_group(k)?;
    let moduli = cg.invariants.clone();
    let cls = |s: &[PrimePlace]| -> Vec<Vec<i64>> {
        s.iter()
            .map(|v| cg.class_of(v).into_iter().map(|c| c as i64).collect())
            .collect()
    };
    let index = |s: &[PrimePlace]| crate::linalg::subgroup_index(&cls(s), &moduli);
    let mut cur = index(&s);
    let mut p = 1u64;
    while cur.as_ref().is_none_or(|i| !i.is_one()) {
        p = next_prime(p);
        for v in PrimePlace::above(k, p) {
            if s.contains(&v) {
                continue;
            }
            let mut t = s.clone();
            t.push(v);
            let idx = index(&t);
            if idx < cur || cur.is_none() && idx.is_some() {
                s = t;
                cur = idx;
            }
        }
        if p > 1_000_000 {
            return Err(Error::SearchExhausted {
                inspected: p,
                bound: 1_000_000,
            });
        }
    }
    s.sort();
    let mut out = vec![PrimePlace::infinite(k)];
    out.extend(s);
    Ok(out)
}

/// Generators γ_0, ..., γ_r of the S-units.
pub fn s_unit_generators(k: &BaseField, s: &[PrimePlace]) -> Result<SUnitBasis> {
    let mut places: Vec<PrimePlace> = s.iter().filter(|v| v.is_finite()).copied().collect();
    places.sort();
    places.dedup();
    let cg = class_group(k)?;
    let (z, n) = k.torsion_generator();
    if k.is_rational() {
        let mut gamma = vec![z];
        gamma.extend(places.iter().map(|v| k.int(v.p as i64)));
        return Ok(SUnitBasis {
            field: *k,
            places,
            gamma,
            torsion_order: n,
            class_group: cg,
        });
    }
    let classes: Vec<Vec<u64>> = places.iter().map(|v| cg.class_of(v)).collect();
    let moduli: Vec<i64> = cg.invariants.iter().map(|&x| x as i64).collect();
    let cls_i64: Vec<Vec<i64>> = classes
        .iter()
        .map(|c| c.iter().map(|&x| x as i64).collect())
        .collect();
    if !generates(&cls_i64, &cg.invariants) {
        return Err(Error::Validation(
            "the classes of S do not generate the class group".into(),
        ));
    }
    let image: BigInt = moduli.iter().map(|&m| BigInt::from(m)).product();
    let r = places.len();
    let norms: Vec<BigInt> = places.iter().map(place_norm).collect();
    let mut lat = Lattice::new(r);
    let mut gamma = vec![z];
    for (a, _) in ExponentWalk::new(norms).skip(1).take(ENUMERATION_LIMIT) {
        if r == 0 || lat.determinant().is_some_and(|d| d == image) {
            break;
        }
        if a.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            continue;
        }
        let mut c = vec![0u64; cg.invariants.len()];
        for (cls, &e) in classes.iter().zip(&a) {
            c = cg.add(&c, &cg.scale(cls, e));
        }
        if !ClassGroup::is_zero(&c) || lat.contains(&a) {
            continue;
        }
        let ideal: Vec<(PrimePlace, i64)> = places.iter().copied().zip(a.iter().copied()).collect();
        let g = generator_of(k, &ideal)?;
        lat.insert(&a);
        gamma.push(g);
    }
    if r > 0 && !lat.determinant().is_some_and(|d| d == image) {
        return Err(Error::SearchExhausted {
            inspected: ENUMERATION_LIMIT as u64,
            bound: ENUMERATION_LIMIT as u64,
        });
    }
    // lattice growth can leave more than r vectors; reduce to a basis
    if gamma.len() - 1 > r {
        gamma = reduce_to_basis(k, &places, gamma)?;
    }
    Ok(SUnitBasis {
        field: *k,
        places,
        gamma,
        torsion_order: n,
        class_group: cg,
    })
}

/// Replaces a generating set of S-units by r generators via unimodular
/// column operations on the valuation matrix.
fn reduce_to_basis(
    k: &BaseField,
    places: &[PrimePlace],
    gamma: Vec<FieldElement>,
) -> Result<Vec<FieldElement>> {
    let r = places.len();
    let cols: Vec<Vec<BigInt>> = gamma[1..]
        .iter()
        .map(|g| {
            places
                .iter()
                .map(|v| v.valuation(g).map(BigInt::from))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let m = Matrix::from_columns(r, &cols);
    let s = smith(&m, None);
    // m V = U^{-1} D: the first r columns of m V generate the lattice
    let mut out = vec![gamma[0].clone()];
    for j in 0..r {
        let exps: Vec<i64> = (0..gamma.len() - 1)
            .map(|i| s.v[(i, j)].to_i64().unwrap())
            .collect();
        out.push(power_product(k, &gamma[1..], &exps)?);
    }
    Ok(out)
}
