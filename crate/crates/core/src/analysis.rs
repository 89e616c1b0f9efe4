//! Facts about L_ρ read off from the constructed data: ramification and
//! conductor, Artin symbols, split places, local norms and the Hasse norm
//! principle.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimePlace};
use crate::group::{wedge, wedge_square, AbelianGroupSpec, WedgeLabel};
use crate::linalg::{generates, Matrix};
use crate::morphism::CharMorphismData;
use crate::residue::Residue;
use crate::search::PlaceWalk;

/// A homomorphism G -> H = ⊕ Z/m_i given by an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub label: String,
    pub matrix: Matrix<i64>,
    pub target: AbelianGroupSpec,
}

impl Projection {
    pub fn identity(g: &AbelianGroupSpec) -> Self {
        Self {
            label: "full".into(),
            matrix: Matrix::identity(g.factors.len()),
            target: g.clone(),
        }
    }

    /// Projection onto the j-th factor (0-based).
    pub fn factor(g: &AbelianGroupSpec, j: usize) -> Result<Self> {
        let n = *g
            .factors
            .get(j)
            .ok_or_else(|| Error::Validation(format!("G has no factor {}", j + 1)))?;
        let mut row = vec![0; g.factors.len()];
        row[j] = 1;
        Ok(Self {
            label: format!("{}", j + 1),
            matrix: Matrix::from_rows(vec![row]),
            target: AbelianGroupSpec::new(vec![n])?,
        })
    }

    /// Checks that the matrix is well defined on G.
    pub fn new(g: &AbelianGroupSpec, matrix: Matrix<i64>, moduli: Vec<u64>) -> Result<Self> {
        if matrix.cols() != g.factors.len() || matrix.rows() != moduli.len() {
            return Err(Error::Validation("projection matrix has the wrong shape".into()));
        }
        let target = AbelianGroupSpec::new(moduli)?;
        for (j, &n) in g.factors.iter().enumerate() {
            let col: Vec<i64> = matrix.column(j).iter().map(|x| x * n as i64).collect();
            if !target.is_zero(&col) {
                return Err(Error::Validation(format!(
                    "projection is not defined on G: column {} times {n} is nonzero",
                    j + 1
                )));
            }
        }
        Ok(Self {
            label: "custom".into(),
            matrix,
            target,
        })
    }

    /// `full`, a 1-based factor index, or `{"matrix": [[..]], "moduli": [..]}`.
    pub fn parse(g: &AbelianGroupSpec, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "full" || s == "all" {
            return Ok(Self::identity(g));
        }
        if let Ok(j) = s.parse::<usize>() {
            if j == 0 {
                return Err(Error::Parse("projection factors are numbered from 1".into()));
            }
            return Self::factor(g, j - 1);
        }
        #[derive(serde::Deserialize)]
        struct Custom {
            matrix: Vec<Vec<i64>>,
            moduli: Vec<u64>,
        }
        let c: Custom = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("projection {s:?}: {e}")))?;
        let mut p = Self::new(g, Matrix::from_rows(c.matrix), c.moduli)?;
        p.label = s.to_string();
        Ok(p)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.target
            .reduce(&self.matrix.mul_vec(x))
            .into_iter()
            .map(|c| c as i64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conductor {
    /// (slot index, place), in slot order.
    pub places: Vec<(usize, PrimePlace)>,
    /// "v1 w1 v2 ...".
    pub labels: String,
}

/// The slot places whose inertia group survives the projection; all tame.
pub fn ramified_places(data: &CharMorphismData, proj: &Projection) -> Conductor {
    let places: Vec<(usize, PrimePlace)> = (0..data.slots.len())
        .filter(|&t| proj.apply(&data.r_column(t)).iter().any(|&x| x != 0))
        .map(|t| (t, data.slots[t].place))
        .collect();
    let labels = places
        .iter()
        .map(|(t, _)| data.slot_label(*t))
        .collect::<Vec<_>>()
        .join(" ");
    Conductor { places, labels }
}

/// Artin symbol of v in G; the identity at places of S.
pub fn artin_symbol(data: &CharMorphismData, v: &PrimePlace) -> Result<Vec<i64>> {
    if data.basis.contains(v) {
        return Ok(vec![0; data.group().factors.len()]);
    }
    let pi = data.basis.uniformiser(v)?;
    artin_symbol_with(data, v, &pi)
}

/// Artin symbol computed from a given uniformiser at v.
pub fn artin_symbol_with(
    data: &CharMorphismData,
    v: &PrimePlace,
    pi: &FieldElement,
) -> Result<Vec<i64>> {
    let own = data.slot_of(v);
    if let Some(t) = own {
        if data.r_column(t).iter().any(|&x| x != 0) {
            return Err(Error::Ramified(v.to_string()));
        }
    }
    data.basis.validate_uniformiser(v, pi)?;
    Ok(data.apply_r(&data.pi_coordinates(pi, own)?))
}

/// Artin symbol composed with the projection. Slot places that ramify in G
/// but not in the image are handled here.
pub fn projected_symbol(
    data: &CharMorphismData,
    proj: &Projection,
    v: &PrimePlace,
) -> Result<Vec<i64>> {
    if data.basis.contains(v) {
        return Ok(vec![0; proj.target.factors.len()]);
    }
    let own = data.slot_of(v);
    if let Some(t) = own {
        if proj.apply(&data.r_column(t)).iter().any(|&x| x != 0) {
            return Err(Error::Ramified(v.to_string()));
        }
    }
    let pi = data.basis.uniformiser(v)?;
    Ok(proj.apply(&data.apply_r(&data.pi_coordinates(&pi, own)?)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPlace {
    pub place: PrimePlace,
    pub in_s: bool,
}

/// The first n places, in the canonical order, that split completely in the
/// fixed field of ker Π. Places of S are included and flagged.
pub fn split_places(
    data: &CharMorphismData,
    proj: &Projection,
    n: usize,
    bound: u64,
) -> Result<Vec<SplitPlace>> {
    let mut out = Vec::with_capacity(n);
    let mut walk = PlaceWalk::new(&data.field());
    let mut inspected = 0u64;
    while out.len() < n {
        let v = walk.next().expect("infinitely many primes");
        if v.p > bound {
            return Err(Error::SearchExhausted { inspected, bound });
        }
        inspected += 1;
        let in_s = data.basis.contains(&v);
        match projected_symbol(data, proj, &v) {
            Ok(x) if x.iter().all(|&c| c == 0) => out.push(SplitPlace { place: v, in_s }),
            Ok(_) | Err(Error::Ramified(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormClause {
    /// ρ_v is trivial for v in S: every generator of O_S^* has zero image.
    SPlace {
        place: String,
        generator_images: Vec<Vec<i64>>,
    },
    /// α is an e-th power in F_v: residue^((q-1)/e) = 1.
    SlotPlace {
        label: String,
        place: String,
        residue: String,
        exponent: u64,
        power: String,
    },
    /// Everywhere else α is a unit and L_ρ is unramified.
    Elsewhere { s_unit_exponents: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalNormCertificate {
    pub alpha: String,
    pub clauses: Vec<NormClause>,
    pub verdict: bool,
}

/// Verifies that each α is a local norm everywhere, with witnesses.
pub fn local_norm_certificate(
    data: &CharMorphismData,
    alphas: &[FieldElement],
) -> Result<Vec<LocalNormCertificate>> {
    let e = data.e();
    let generator_images = data
        .basis
        .gamma
        .iter()
        .map(|g| data.unit_coordinates(g).map(|x| data.apply_r(&x)))
        .collect::<Result<Vec<_>>>()?;
    let s_ok = generator_images.iter().all(|x| x.iter().all(|&c| c == 0));
    let mut out = Vec::new();
    for alpha in alphas {
        let exps = data
            .basis
            .exponents(alpha)
            .map_err(|_| Error::STooSmall(format!("{alpha} is not an S-unit")))?;
        let mut clauses = Vec::new();
        let mut verdict = s_ok;
        for v in data.basis.all_places() {
            clauses.push(NormClause::SPlace {
                place: v.to_string(),
                generator_images: generator_images.clone(),
            });
        }
        for (t, slot) in data.slots.iter().enumerate() {
            let v = &slot.place;
            let ff = v.residue_field();
            if v.valuation(alpha)? != 0 {
                return Err(Error::STooSmall(format!("{alpha} is not a unit at {v}")));
            }
            let r = v.reduce(alpha)?;
            let k = (v.q() - 1) / e;
            let power = ff.pow(r, k);
            verdict &= power == Residue::ONE;
            clauses.push(NormClause::SlotPlace {
                label: data.slot_label(t),
                place: v.to_string(),
                residue: r.to_string(),
                exponent: k,
                power: power.to_string(),
            });
        }
        clauses.push(NormClause::Elsewhere {
            s_unit_exponents: exps,
        });
        out.push(LocalNormCertificate {
            alpha: alpha.to_string(),
            clauses,
            verdict,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionWedge {
    pub label: String,
    pub place: String,
    /// Image of the units at the place (inertia).
    pub inertia: Vec<i64>,
    /// Image of the uniformiser.
    pub frobenius: Vec<i64>,
    pub wedge: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HnpResult {
    pub verdict: bool,
    pub wedge_moduli: Vec<u64>,
    pub witness: Vec<DecompositionWedge>,
}

/// Tests whether the local wedge squares of the decomposition groups span
/// ∧²G. Only the slot places can have non-cyclic decomposition groups.
pub fn hnp_check(data: &CharMorphismData) -> Result<HnpResult> {
    let (wg, labels) = wedge_square(data.group());
    let mut witness = Vec::new();
    for (t, slot) in data.slots.iter().enumerate() {
        let g = data.r_column(t);
        let h = data.apply_r(&data.pi_coordinates(&slot.pi, Some(t))?);
        witness.push(DecompositionWedge {
            label: data.slot_label(t),
            place: slot.place.to_string(),
            wedge: wedge(&labels, &g, &h),
            inertia: g,
            frobenius: h,
        });
    }
    let verdict = wedges_span(&wg, &witness);
    Ok(HnpResult {
        verdict,
        wedge_moduli: wg.factors,
        witness,
    })
}

fn wedges_span(wg: &AbelianGroupSpec, w: &[DecompositionWedge]) -> bool {
    let gens: Vec<Vec<i64>> = w.iter().map(|d| d.wedge.clone()).collect();
    generates(&gens, &wg.factors)
}

/// Labels of ∧²G, e.g. "g1^g2".
pub fn wedge_labels(labels: &[WedgeLabel]) -> Vec<String> {
    labels
        .iter()
        .map(|l| format!("g{}^g{}", l.i + 1, l.j + 1))
        .collect()
}

pub struct ReportOptions<'a> {
    pub projections: &'a [Projection],
    pub split_count: usize,
    pub search_bound: u64,
}

/// The analysis document; keys are emitted in sorted order by serde_json.
pub fn analysis_report(data: &CharMorphismData, opts: &ReportOptions) -> Result<Value> {
    let place_strs =
        |c: &Conductor| -> Vec<String> { c.places.iter().map(|(_, v)| v.to_string()).collect() };
    let full = Projection::identity(data.group());
    let conductor = ramified_places(data, &full);
    let hnp = hnp_check(data)?;
    let norms = local_norm_certificate(data, &data.alphas)?;
    let mut projections = serde_json::Map::new();
    for p in opts.projections {
        let c = ramified_places(data, p);
        let split = split_places(data, p, opts.split_count, opts.search_bound)?;
        projections.insert(
            p.label.clone(),
            json!({
                "target": p.target.factors,
                "conductor": place_strs(&c),
                "conductor_labels": c.labels,
                "split": split.iter().map(|s| json!({"place": s.place.to_string(), "in_s": s.in_s})).collect::<Vec<_>>(),
            }),
        );
    }
    let (_, labels) = wedge_square(data.group());
    Ok(json!({
        "group": data.group().factors,
        "conductor": place_strs(&conductor),
        "ramified": conductor.labels,
        "hnp": {
            "verdict": hnp.verdict,
            "wedge_basis": wedge_labels(&labels),
            "wedge_moduli": hnp.wedge_moduli,
            "witness": hnp.witness,
        },
        "local_norms": norms,
        "projections": projections,
    }))
}
