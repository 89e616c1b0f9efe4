//! Reference fixtures: a job config plus expected values, replayed exactly.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{hnp_check, local_norm_certificate, ramified_places, split_places, Projection};
use crate::config::{construct, JobConfig};
use crate::error::{Error, Result};
use crate::morphism::CharMorphismData;
use crate::poly::synthesize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpectedProjection {
    pub conductor: Option<Vec<String>>,
    pub conductor_labels: Option<String>,
    pub split: Option<Vec<String>>,
    /// Period polynomial, constant term first (K = Q only).
    pub polynomial: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Expected {
    /// Keys of the construction document that must match exactly.
    pub data: serde_json::Map<String, Value>,
    pub projections: std::collections::BTreeMap<String, ExpectedProjection>,
    pub hnp: Option<bool>,
    pub local_norms: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    pub config: JobConfig,
    pub expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplayReport {
    pub fixture: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Fixture {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("fixture: {e}")))
    }
}

struct Checker(Vec<Check>);

impl Checker {
    fn check(&mut self, name: String, expected: Value, actual: Value) {
        self.0.push(Check {
            passed: expected == actual,
            name,
            expected,
            actual,
        });
    }
}

/// Runs the construction in the fixture and compares every expected value.
pub fn replay(fx: &Fixture) -> Result<(CharMorphismData, ReplayReport)> {
    let data = construct(&fx.config)?;
    let doc = data.to_json();
    let mut c = Checker(Vec::new());
    for (key, want) in &fx.expected.data {
        let got = doc.get(key).cloned().unwrap_or(Value::Null);
        c.check(key.clone(), want.clone(), got);
    }
    if let Some(want) = fx.expected.hnp {
        c.check("hnp".into(), json!(want), json!(hnp_check(&data)?.verdict));
    }
    if let Some(want) = fx.expected.local_norms {
        let ok = local_norm_certificate(&data, &data.alphas)?
            .iter()
            .all(|x| x.verdict);
        c.check("local_norms".into(), json!(want), json!(ok));
    }
    for (label, want) in &fx.expected.projections {
        let proj = Projection::parse(data.group(), label)?;
        let cond = ramified_places(&data, &proj);
        if let Some(places) = &want.conductor {
            let got: Vec<String> = cond.places.iter().map(|(_, v)| v.to_string()).collect();
            c.check(format!("{label}.conductor"), json!(places), json!(got));
        }
        if let Some(labels) = &want.conductor_labels {
            c.check(format!("{label}.conductor_labels"), json!(labels), json!(cond.labels));
        }
        if let Some(split) = &want.split {
            let got: Vec<String> = split_places(&data, &proj, split.len(), fx.config.search_bound)?
                .iter()
                .map(|s| s.place.to_string())
                .collect();
            c.check(format!("{label}.split"), json!(split), json!(got));
        }
        if let Some(poly) = &want.polynomial {
            let r = synthesize(&data, &proj, fx.config.search_bound, 50)?;
            let got: Vec<String> = r.coefficients.coeffs().iter().map(|x| x.to_string()).collect();
            let want: Vec<String> = poly.iter().map(|x| x.to_string()).collect();
            c.check(format!("{label}.polynomial"), json!(want), json!(got));
        }
    }
    let passed = c.0.iter().all(|x| x.passed);
    Ok((
        data,
        ReplayReport {
            fixture: fx.name.clone(),
            passed,
            checks: c.0,
        },
    ))
}
