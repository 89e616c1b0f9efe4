//! The incremental choice of places v_i, w_i and correction units u_i, and
//! the matrices A, B, R describing the characteristic morphism.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{power_product, BaseField, FieldElement, PrimePlace, SUnitBasis};
use crate::group::{plan_group, AbelianGroupSpec, GroupPlan};
use crate::linalg::{invert_mod, mul_mod, solve_mod, Matrix};
use crate::residue::{GeneratorOrdering, QuotientGenerator, Residue};
use crate::search::{next_place, Cursor, SearchSpec, DEFAULT_SEARCH_BOUND};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchOrder {
    /// v_1, w_1, v_2, w_2, ...
    #[default]
    Interleaved,
    /// v_1, ..., v_k' first, then the w_j.
    VFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub search_bound: u64,
    pub ordering: GeneratorOrdering,
    pub order: SearchOrder,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            search_bound: DEFAULT_SEARCH_BOUND,
            ordering: GeneratorOrdering::default(),
            order: SearchOrder::default(),
        }
    }
}

/// Pinned choices; `None` (or a missing entry) means the default rule.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub v: Vec<Option<PrimePlace>>,
    pub w: Vec<Option<PrimePlace>>,
    pub b: Vec<Option<Residue>>,
    pub b_prime: Vec<Option<Residue>>,
    pub pi: Vec<Option<FieldElement>>,
    pub w_pi: Vec<Option<FieldElement>>,
}

fn pinned<T: Clone>(list: &[Option<T>], i: usize) -> Option<T> {
    list.get(i).cloned().flatten()
}

/// One factor F_v^* ⊗ Z/e of G' with its standard generator and uniformiser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub place: PrimePlace,
    pub root: Residue,
    pub pi: FieldElement,
}

impl Slot {
    fn generator(&self, e: u64) -> QuotientGenerator {
        QuotientGenerator { b: self.root, e }
    }

    /// Discrete log mod e of a v-unit.
    pub fn dlog(&self, x: &FieldElement, e: u64) -> Result<u64> {
        if self.place.valuation(x)? != 0 {
            return Err(Error::Invariant(format!("{x} is not a unit at {}", self.place)));
        }
        let ff = self.place.residue_field();
        ff.dlog_mod_e(self.place.reduce(x)?, &self.generator(e))
    }
}

#[derive(Clone, Debug)]
pub struct CharMorphismData {
    pub basis: SUnitBasis,
    pub alphas: Vec<FieldElement>,
    pub plan: GroupPlan,
    /// v_1, w_1, ..., v_k', w_k'; a single v_1 when G is cyclic.
    pub slots: Vec<Slot>,
    /// c_j solving the step-j system, one vector per step.
    pub c: Vec<Vec<i64>>,
    pub l: Matrix<i64>,
    pub l_prime: Matrix<i64>,
    pub a: Matrix<i64>,
    pub b: Matrix<i64>,
    pub r: Matrix<i64>,
}

impl CharMorphismData {
    pub fn field(&self) -> BaseField {
        self.basis.field
    }

    pub fn e(&self) -> u64 {
        self.plan.e
    }

    pub fn group(&self) -> &AbelianGroupSpec {
        &self.plan.group
    }

    pub fn kprime(&self) -> usize {
        self.plan.kprime
    }

    pub fn v(&self, i: usize) -> &Slot {
        &self.slots[if self.plan.is_cyclic() { i } else { 2 * i }]
    }

    pub fn w(&self, i: usize) -> &Slot {
        &self.slots[2 * i + 1]
    }

    /// "v1", "w1", ... for slot index t.
    pub fn slot_label(&self, t: usize) -> String {
        let kind = if t.is_multiple_of(2) || self.plan.is_cyclic() { 'v' } else { 'w' };
        let i = if self.plan.is_cyclic() { t } else { t / 2 };
        format!("{kind}{}", i + 1)
    }

    pub fn slot_of(&self, v: &PrimePlace) -> Option<usize> {
        self.slots.iter().position(|s| s.place == *v)
    }

    /// Coordinates of the image of a uniformiser π at `own` in the standard
    /// basis: dlogs of π^{-1} at every slot, 0 at the slot of `own`.
    pub fn pi_coordinates(&self, pi: &FieldElement, own: Option<usize>) -> Result<Vec<i64>> {
        let inv = pi.inv()?;
        self.slots
            .iter()
            .enumerate()
            .map(|(t, s)| {
                if Some(t) == own {
                    Ok(0)
                } else {
                    s.dlog(&inv, self.e()).map(|x| x as i64)
                }
            })
            .collect()
    }

    /// Coordinates of the image of an S-unit; zero by construction.
    pub fn unit_coordinates(&self, x: &FieldElement) -> Result<Vec<i64>> {
        self.slots
            .iter()
            .map(|s| s.dlog(x, self.e()).map(|l| l as i64))
            .collect()
    }

    /// R applied to a coordinate vector, reduced in G.
    pub fn apply_r(&self, x: &[i64]) -> Vec<i64> {
        let y = self.r.mul_vec(x);
        self.group()
            .reduce(&y)
            .into_iter()
            .map(|c| c as i64)
            .collect()
    }

    /// Column t of R reduced in G.
    pub fn r_column(&self, t: usize) -> Vec<i64> {
        let mut unit = vec![0; self.slots.len()];
        unit[t] = 1;
        self.apply_r(&unit)
    }

    /// Checks every structural invariant of the construction.
    pub fn check_invariants(&self) -> Result<()> {
        let e = self.e() as i64;
        let n = self.slots.len();
        for i in 0..n {
            for j in 0..i {
                if self.slots[i].place == self.slots[j].place {
                    return Err(Error::Invariant(format!(
                        "{} and {} coincide",
                        self.slot_label(j),
                        self.slot_label(i)
                    )));
                }
            }
            if self.basis.contains(&self.slots[i].place) {
                return Err(Error::Invariant(format!("{} lies in S", self.slot_label(i))));
            }
        }
        invert_mod(&self.a, &e).map_err(|_| Error::Invariant("A is not invertible mod e".into()))?;
        for j in 1..=self.kprime() {
            let block = leading_block(&self.l_prime, j);
            invert_mod(&block, &e).map_err(|_| {
                Error::Invariant(format!("leading {j}x{j} block of l' is not invertible (step {j})"))
            })?;
        }
        let cols: Vec<Vec<i64>> = (0..n).map(|t| self.r_column(t)).collect();
        if !self.group().generated_by(&cols) {
            return Err(Error::Invariant("R is not surjective onto G".into()));
        }
        for g in &self.basis.gamma {
            let img = self.apply_r(&self.unit_coordinates(g)?);
            if img.iter().any(|&x| x != 0) {
                return Err(Error::Invariant(format!("R does not annihilate {g}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let strs = |xs: Vec<String>| Value::from(xs);
        let cyclic = self.plan.is_cyclic();
        let pick = |odd: bool| -> Vec<&Slot> {
            self.slots
                .iter()
                .enumerate()
                .filter(|(t, _)| !cyclic && (t % 2 == 1) == odd || cyclic && !odd)
                .map(|(_, s)| s)
                .collect()
        };
        let (vs, ws) = (pick(false), pick(true));
        json!({
            "field": self.field().to_string(),
            "group": self.group().factors,
            "e": self.e(),
            "alphas": strs(self.alphas.iter().map(|x| x.to_string()).collect()),
            "s": strs(self.basis.all_places().iter().map(|v| v.to_string()).collect()),
            "gamma": strs(self.basis.gamma.iter().map(|x| x.to_string()).collect()),
            "v": strs(vs.iter().map(|s| s.place.to_string()).collect()),
            "w": strs(ws.iter().map(|s| s.place.to_string()).collect()),
            "b": strs(vs.iter().map(|s| s.root.to_string()).collect()),
            "b_prime": strs(ws.iter().map(|s| s.root.to_string()).collect()),
            "pi": strs(vs.iter().map(|s| s.pi.to_string()).collect()),
            "w_pi": strs(ws.iter().map(|s| s.pi.to_string()).collect()),
            "c": self.c,
            "l": self.l.to_rows(),
            "l_prime": self.l_prime.to_rows(),
            "A": self.a.to_rows(),
            "B": self.b.to_rows(),
            "C": self.plan.c.to_rows(),
            "R": self.r.to_rows(),
        })
    }

    /// Reloads a document written by `to_json`, recomputing every derived
    /// quantity and rejecting the document if any stored value differs.
    pub fn from_json(doc: &Value) -> Result<Self> {
        let k: BaseField = str_field(doc, "field")?.parse()?;
        let factors: Vec<u64> = serde_json::from_value(get(doc, "group")?.clone())
            .map_err(|e| Error::Parse(format!("group: {e}")))?;
        let plan = plan_group(&AbelianGroupSpec::new(factors.clone())?)?;
        if plan.group.factors != factors {
            return Err(Error::Validation("group is not in planned form".into()));
        }
        let elems = |key: &str| -> Result<Vec<FieldElement>> {
            str_list(doc, key)?.iter().map(|s| k.parse_element(s)).collect()
        };
        let places = |key: &str| -> Result<Vec<PrimePlace>> {
            str_list(doc, key)?.iter().map(|s| k.parse_place(s)).collect()
        };
        let residues = |key: &str| -> Result<Vec<Residue>> {
            str_list(doc, key)?.iter().map(|s| s.parse()).collect()
        };
        let s = places("s")?;
        let basis = SUnitBasis::with_generators(&k, &s, elems("gamma")?)?;
        let alphas = elems("alphas")?;
        let (v, w) = (places("v")?, places("w")?);
        let (b, bp) = (residues("b")?, residues("b_prime")?);
        let (pi, wpi) = (elems("pi")?, elems("w_pi")?);
        if v.len() != b.len() || v.len() != pi.len() || w.len() != bp.len() || w.len() != wpi.len() {
            return Err(Error::Validation("slot lists have different lengths".into()));
        }
        let mut slots = Vec::new();
        for i in 0..v.len() {
            slots.push(Slot {
                place: v[i],
                root: b[i],
                pi: pi[i].clone(),
            });
            if i < w.len() {
                slots.push(Slot {
                    place: w[i],
                    root: bp[i],
                    pi: wpi[i].clone(),
                });
            }
        }
        if slots.len() != plan.slot_count() {
            return Err(Error::Validation(format!(
                "expected {} places, found {}",
                plan.slot_count(),
                slots.len()
            )));
        }
        for slot in &slots {
            validate_slot(&basis, plan.e, slot)?;
        }
        let data = assemble(basis, alphas, plan, slots)?;
        let again = data.to_json();
        for key in ["c", "l", "l_prime", "A", "B", "C", "R"] {
            if doc.get(key).is_some_and(|x| *x != again[key]) {
                return Err(Error::Validation(format!("stored {key} does not match the recomputed value")));
            }
        }
        Ok(data)
    }
}

fn get<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key)
        .ok_or_else(|| Error::Parse(format!("missing key {key:?}")))
}

fn str_field<'a>(doc: &'a Value, key: &str) -> Result<&'a str> {
    get(doc, key)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("{key} must be a string")))
}

fn str_list(doc: &Value, key: &str) -> Result<Vec<String>> {
    serde_json::from_value(get(doc, key)?.clone())
        .map_err(|e| Error::Parse(format!("{key}: {e}")))
}

fn leading_block(m: &Matrix<i64>, j: usize) -> Matrix<i64> {
    Matrix::from_rows((0..j).map(|r| m.row(r)[..j].to_vec()).collect())
}

fn validate_slot(basis: &SUnitBasis, e: u64, slot: &Slot) -> Result<()> {
    basis.validate_uniformiser(&slot.place, &slot.pi)?;
    let ff = slot.place.residue_field();
    ff.validate_generator(slot.root, e)?;
    Ok(())
}

/// u_j = Π π_s^{-c_s} for every step.
pub fn u_values(data: &CharMorphismData) -> Result<Vec<FieldElement>> {
    let k = data.field();
    let pis: Vec<FieldElement> = (0..data.kprime()).map(|i| data.v(i).pi.clone()).collect();
    data.c
        .iter()
        .map(|c| {
            let neg: Vec<i64> = c.iter().map(|x| -x).collect();
            power_product(&k, &pis[..c.len()], &neg)
        })
        .collect()
}

/// Computes c, l, l', A, B and R from fully chosen slots.
fn assemble(
    basis: SUnitBasis,
    alphas: Vec<FieldElement>,
    plan: GroupPlan,
    slots: Vec<Slot>,
) -> Result<CharMorphismData> {
    let e = plan.e;
    let kp = plan.kprime;
    let (l, lp, a, b) = if plan.is_cyclic() {
        (
            Matrix::zeros(0, 0),
            Matrix::zeros(0, 0),
            Matrix::identity(1),
            Matrix::identity(1),
        )
    } else {
        let mut l = Matrix::zeros(kp, kp);
        let mut lp = Matrix::zeros(kp, kp);
        for m in 0..kp {
            for s in 0..kp {
                let inv = slots[2 * s].pi.inv()?;
                if s != m {
                    l[(m, s)] = slots[2 * m].dlog(&inv, e)? as i64;
                }
                lp[(m, s)] = slots[2 * m + 1].dlog(&inv, e)? as i64;
            }
        }
        let mut a = Matrix::zeros(2 * kp, 2 * kp);
        for m in 0..kp {
            a[(2 * m, 2 * m)] = 1;
            for s in 0..kp {
                a[(2 * m, 2 * s + 1)] = l[(m, s)];
                a[(2 * m + 1, 2 * s + 1)] = lp[(m, s)];
            }
        }
        let mut b = Matrix::zeros(plan.k, 2 * kp);
        for (i, &(mi, ni)) in plan.pairs.iter().enumerate() {
            b[(mi, 2 * i)] = 1;
            b[(ni, 2 * i + 1)] = 1;
        }
        (l, lp, a, b)
    };
    let ei = e as i64;
    let ainv = invert_mod(&a, &ei)
        .map_err(|_| Error::Invariant("A is not invertible mod e".into()))?;
    let r = mul_mod(&mul_mod(&plan.c, &b, &ei), &ainv, &ei);
    let mut c = Vec::with_capacity(kp);
    for j in 0..kp {
        let m = leading_block(&lp, j);
        let rhs: Vec<i64> = (0..j).map(|i| lp[(i, j)]).collect();
        let sol = if j == 0 {
            Vec::new()
        } else {
            solve_mod(&m, &rhs, &ei).map_err(|_| {
                Error::Invariant(format!("step {} system has no solution", j + 1))
            })?
        };
        c.push(sol);
    }
    let data = CharMorphismData {
        basis,
        alphas,
        plan,
        slots,
        c,
        l,
        l_prime: lp,
        a,
        b,
        r,
    };
    data.check_invariants()?;
    Ok(data)
}

/// Runs the construction: chooses v_j, π_j, b_j, u_j, w_j, b'_j step by step.
pub fn build(
    basis: &SUnitBasis,
    alphas: &[FieldElement],
    plan: &GroupPlan,
    cfg: &BuildConfig,
    ov: &Overrides,
) -> Result<CharMorphismData> {
    for a in alphas {
        basis.exponents(a)?;
    }
    let e = plan.e;
    let k = basis.field;
    let vspec = SearchSpec::new(basis, e, cfg.search_bound);
    let mut vcursor = Cursor::start(&k);
    let mut used: Vec<PrimePlace> = Vec::new();

    let mut choose_v = |i: usize, used: &mut Vec<PrimePlace>| -> Result<Slot> {
        let place = match pinned(&ov.v, i) {
            Some(p) => {
                if !vspec.admits(&p)? || used.contains(&p) {
                    return Err(Error::Validation(format!("pinned v{} = {p} is not admissible", i + 1)));
                }
                p
            }
            None => loop {
                let p = next_place(&vspec, &mut vcursor)?;
                if !used.contains(&p) {
                    break p;
                }
            },
        };
        used.push(place);
        let pi = match pinned(&ov.pi, i) {
            Some(x) => {
                basis.validate_uniformiser(&place, &x)?;
                x
            }
            None => basis.uniformiser(&place)?,
        };
        let root = pick_root(&place, e, pinned(&ov.b, i), cfg.ordering)?;
        log::info!("v{} = {place}, b = {root}, pi = {pi}", i + 1);
        Ok(Slot { place, root, pi })
    };

    if plan.is_cyclic() {
        let v = choose_v(0, &mut used)?;
        return assemble(basis.clone(), alphas.to_vec(), plan.clone(), vec![v]);
    }

    let kp = plan.kprime;
    let mut vs: Vec<Slot> = Vec::with_capacity(kp);
    let mut ws: Vec<Slot> = Vec::with_capacity(kp);
    if cfg.order == SearchOrder::VFirst {
        for i in 0..kp {
            vs.push(choose_v(i, &mut used)?);
        }
    }
    // lp[m][s] = dlog of π_s^{-1} at w_m
    let mut lp: Vec<Vec<i64>> = Vec::new();
    for j in 0..kp {
        if cfg.order == SearchOrder::Interleaved {
            vs.push(choose_v(j, &mut used)?);
        }
        let inv = vs[j].pi.inv()?;
        for (m, w) in ws.iter().enumerate() {
            lp[m].push(w.dlog(&inv, e)? as i64);
        }
        let c = if j == 0 {
            Vec::new()
        } else {
            let block = Matrix::from_rows(lp.iter().map(|r| r[..j].to_vec()).collect());
            let rhs: Vec<i64> = lp.iter().map(|r| r[j]).collect();
            solve_mod(&block, &rhs, &(e as i64)).map_err(|_| {
                Error::Invariant(format!("step {} system has no solution", j + 1))
            })?
        };
        let neg: Vec<i64> = c.iter().map(|x| -x).collect();
        let pis: Vec<FieldElement> = vs[..j].iter().map(|s| s.pi.clone()).collect();
        let u = power_product(&k, &pis, &neg)?;
        let y = &u * &vs[j].pi;
        let wspec = SearchSpec::new(basis, e, cfg.search_bound)
            .with_y(y.clone())
            .excluding(&used);
        let place = match pinned(&ov.w, j) {
            Some(p) => {
                if !wspec.admits(&p)? {
                    return Err(Error::Validation(format!("pinned w{} = {p} is not admissible", j + 1)));
                }
                p
            }
            None => next_place(&wspec, &mut Cursor::start(&k))?,
        };
        used.push(place);
        let root = pick_root(&place, e, pinned(&ov.b_prime, j), cfg.ordering)?;
        let pi = match pinned(&ov.w_pi, j) {
            Some(x) => {
                basis.validate_uniformiser(&place, &x)?;
                x
            }
            None => basis.uniformiser(&place)?,
        };
        log::info!("u{} = {u}, w{} = {place}, b' = {root}", j + 1, j + 1);
        let w = Slot { place, root, pi };
        let mut row = Vec::with_capacity(kp);
        for s in vs.iter().take(j + 1) {
            row.push(w.dlog(&s.pi.inv()?, e)? as i64);
        }
        lp.push(row);
        ws.push(w);
    }
    let mut slots = Vec::with_capacity(2 * kp);
    for (v, w) in vs.into_iter().zip(ws) {
        slots.push(v);
        slots.push(w);
    }
    assemble(basis.clone(), alphas.to_vec(), plan.clone(), slots)
}

fn pick_root(
    place: &PrimePlace,
    e: u64,
    pinned: Option<Residue>,
    ordering: GeneratorOrdering,
) -> Result<Residue> {
    let ff = place.residue_field();
    Ok(match pinned {
        Some(b) => ff.validate_generator(b, e)?.b,
        None => ff.pick_generator(e, ordering)?.b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{build_s, s_unit_generators};

    fn example_one(ordering: GeneratorOrdering) -> CharMorphismData {
        let q = BaseField::rational();
        let alpha = q.elem(37, 0, 16).unwrap();
        let basis = s_unit_generators(&q, &build_s(&q, std::slice::from_ref(&alpha)).unwrap()).unwrap();
        let plan = plan_group(&AbelianGroupSpec::new(vec![2, 2]).unwrap()).unwrap();
        let cfg = BuildConfig {
            ordering,
            ..Default::default()
        };
        build(&basis, &[alpha], &plan, &cfg, &Overrides::default()).unwrap()
    }

    #[test]
    fn example_one_identity() {
        for ord in [GeneratorOrdering::Quotient, GeneratorOrdering::PrimitiveRoot] {
            let d = example_one(ord);
            assert_eq!(d.v(0).place.p, 41);
            assert_eq!(d.w(0).place.p, 137);
            assert_eq!(d.r, Matrix::identity(2));
        }
        assert_eq!(example_one(GeneratorOrdering::Quotient).v(0).root, Residue::new(3, 0));
        assert_eq!(example_one(GeneratorOrdering::PrimitiveRoot).v(0).root, Residue::new(6, 0));
    }

    #[test]
    fn cyclic_over_q() {
        let q = BaseField::rational();
        let basis = s_unit_generators(&q, &build_s(&q, &[q.one()]).unwrap()).unwrap();
        let plan = plan_group(&AbelianGroupSpec::new(vec![3]).unwrap()).unwrap();
        let d = build(&basis, &[q.one()], &plan, &BuildConfig::default(), &Overrides::default())
            .unwrap();
        assert_eq!(d.slots.len(), 1);
        assert_eq!(d.v(0).place.p, 7);
        assert_eq!(d.r.to_rows(), vec![vec![1]]);
        assert!(u_values(&d).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        let d = example_one(GeneratorOrdering::PrimitiveRoot);
        let doc = d.to_json();
        let back = CharMorphismData::from_json(&doc).unwrap();
        assert_eq!(back.to_json(), doc);
        let mut bad = doc.clone();
        bad["R"] = json!([[1, 1], [0, 1]]);
        assert!(CharMorphismData::from_json(&bad).is_err());
    }

    #[test]
    fn pinned_place_must_be_admissible() {
        let q = BaseField::rational();
        let alpha = q.elem(37, 0, 16).unwrap();
        let basis = s_unit_generators(&q, &build_s(&q, std::slice::from_ref(&alpha)).unwrap()).unwrap();
        let plan = plan_group(&AbelianGroupSpec::new(vec![2, 2]).unwrap()).unwrap();
        let ov = Overrides {
            v: vec![Some(PrimePlace::above(&q, 43)[0])],
            ..Default::default()
        };
        let err = build(&basis, &[alpha], &plan, &BuildConfig::default(), &ov).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    fn example_two_basis() -> (SUnitBasis, FieldElement, GroupPlan) {
        let k = BaseField::quadratic(-47).unwrap();
        let alpha = k.elem(2, 3, 1).unwrap();
        let basis = s_unit_generators(&k, &build_s(&k, std::slice::from_ref(&alpha)).unwrap()).unwrap();
        let plan = plan_group(&AbelianGroupSpec::new(vec![6, 3, 3, 3]).unwrap()).unwrap();
        (basis, alpha, plan)
    }

    fn example_two_overrides(k: &BaseField) -> Overrides {
        let places = |xs: &[&str]| xs.iter().map(|s| Some(k.parse_place(s).unwrap())).collect();
        let elems = |xs: &[&str]| xs.iter().map(|s| Some(k.parse_element(s).unwrap())).collect();
        let res = |xs: &[&str]| xs.iter().map(|s| Some(s.parse().unwrap())).collect();
        Overrides {
            v: places(&["(97,(27+sqrt(-47))/2)", "(809)", "(1033)", "(1913)", "(2377,(3677+sqrt(-47))/2)", "(2887)"]),
            w: places(&["(569)", "(1381,(1445+sqrt(-47))/2)", "(2281,(619+sqrt(-47))/2)", "(4789,(2537+sqrt(-47))/2)", "(4621)", "(65+12*sqrt(-47))"]),
            b: res(&["5", "1+s", "20+s", "7+s", "5", "1+s"]),
            b_prime: res(&["2+s", "2", "7", "2", "5+s", "7"]),
            pi: elems(&["-353+48*sqrt(-47)", "809", "1033", "1913", "712+81*sqrt(-47)", "2887"]),
            w_pi: Vec::new(),
        }
    }

    #[test]
    fn example_two_pinned() {
        let (basis, alpha, plan) = example_two_basis();
        let ov = example_two_overrides(&basis.field);
        let d = build(&basis, &[alpha], &plan, &BuildConfig::default(), &ov).unwrap();
        assert_eq!(d.c, vec![vec![], vec![0], vec![0, 3], vec![0, 5, 4], vec![4, 0, 2, 0], vec![4, 5, 5, 2, 2]]);
        assert_eq!(d.l_prime[(0, 0)], 5);
        assert_eq!(d.l_prime[(0, 1)], 0);
        let a = vec![
            vec![1, 0, 0, 0, 0, 3, 0, 0, 0, 3, 0, 1],
            vec![0, 5, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0],
            vec![0, 4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            vec![0, 4, 0, 5, 0, 3, 0, 1, 0, 4, 0, 0],
            vec![0, 1, 0, 2, 1, 0, 0, 0, 0, 4, 0, 2],
            vec![0, 0, 0, 2, 0, 1, 0, 2, 0, 2, 0, 5],
            vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 4, 0, 0],
            vec![0, 1, 0, 0, 0, 1, 0, 5, 0, 0, 0, 1],
            vec![0, 1, 0, 4, 0, 2, 0, 0, 1, 0, 0, 0],
            vec![0, 2, 0, 2, 0, 2, 0, 4, 0, 5, 0, 4],
            vec![0, 3, 0, 4, 0, 4, 0, 0, 0, 4, 1, 0],
            vec![0, 4, 0, 1, 0, 5, 0, 5, 0, 0, 0, 3],
        ];
        assert_eq!(d.a.to_rows(), a);
        let r = vec![
            vec![1, 5, 1, 4, 1, 5, 0, 4, 0, 1, 0, 2],
            vec![0, 2, 0, 2, 0, 2, 1, 0, 1, 2, 0, 2],
            vec![0, 1, 0, 4, 0, 3, 0, 2, 0, 4, 1, 5],
            vec![0, 4, 0, 4, 0, 1, 0, 4, 0, 1, 0, 0],
        ];
        assert_eq!(d.r.to_rows(), r);
        let k = basis.field;
        let u = u_values(&d).unwrap();
        assert!(u[0].is_one() && u[1].is_one());
        assert_eq!(u[2], k.int(809).pow(-3).unwrap());
        let back = CharMorphismData::from_json(&d.to_json()).unwrap();
        assert_eq!(back.r, d.r);
    }

    #[test]
    fn example_two_unpinned() {
        let (basis, alpha, plan) = example_two_basis();
        for order in [SearchOrder::Interleaved, SearchOrder::VFirst] {
            let cfg = BuildConfig { order, ..Default::default() };
            let d = build(&basis, std::slice::from_ref(&alpha), &plan, &cfg, &Overrides::default()).unwrap();
            assert_eq!(d.slots.len(), 12);
            d.check_invariants().unwrap();
            assert_eq!(d.v(0).place.to_string(), "(97,(27+sqrt(-47))/2)");
        }
    }
}
