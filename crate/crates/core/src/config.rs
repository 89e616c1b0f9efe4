//! Declarative job description and the construction pipeline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{build_s, s_unit_generators, BaseField, FieldElement};
use crate::group::{plan_group, AbelianGroupSpec};
use crate::morphism::{build, BuildConfig, CharMorphismData, Overrides, SearchOrder};
use crate::residue::GeneratorOrdering;
use crate::search::DEFAULT_SEARCH_BOUND;

/// Pinned choices as strings; `null` entries fall back to the default rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OverrideSpec {
    pub v: Vec<Option<String>>,
    pub w: Vec<Option<String>>,
    pub b: Vec<Option<String>>,
    pub b_prime: Vec<Option<String>>,
    pub pi: Vec<Option<String>>,
    pub w_pi: Vec<Option<String>>,
}

impl OverrideSpec {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn resolve(&self, k: &BaseField) -> Result<Overrides> {
        fn each<T>(xs: &[Option<String>], f: impl Fn(&str) -> Result<T>) -> Result<Vec<Option<T>>> {
            xs.iter()
                .map(|x| x.as_deref().map(&f).transpose())
                .collect()
        }
        Ok(Overrides {
            v: each(&self.v, |s| k.parse_place(s))?,
            w: each(&self.w, |s| k.parse_place(s))?,
            b: each(&self.b, |s| s.parse())?,
            b_prime: each(&self.b_prime, |s| s.parse())?,
            pi: each(&self.pi, |s| k.parse_element(s))?,
            w_pi: each(&self.w_pi, |s| k.parse_element(s))?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// "Q" or "Q(sqrt(d))".
    pub field: String,
    pub group: Vec<u64>,
    pub alphas: Vec<String>,
    #[serde(default = "default_bound")]
    pub search_bound: u64,
    #[serde(default)]
    pub generator_ordering: GeneratorOrdering,
    #[serde(default)]
    pub search_order: SearchOrder,
    #[serde(default, skip_serializing_if = "OverrideSpec::is_empty")]
    pub overrides: OverrideSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

fn default_bound() -> u64 {
    DEFAULT_SEARCH_BOUND
}

impl JobConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn base_field(&self) -> Result<BaseField> {
        self.field.parse()
    }

    pub fn group_spec(&self) -> Result<AbelianGroupSpec> {
        if let Some(n) = self.group.iter().find(|&&n| n < 2) {
            return Err(Error::Validation(format!("group factor {n} is less than 2")));
        }
        AbelianGroupSpec::new(self.group.clone())
    }

    pub fn alpha_elements(&self) -> Result<Vec<FieldElement>> {
        let k = self.base_field()?;
        let xs = self
            .alphas
            .iter()
            .map(|s| k.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        if xs.iter().any(|x| x.is_zero()) {
            return Err(Error::Validation("alpha must be nonzero".into()));
        }
        Ok(xs)
    }

    pub fn build_config(&self) -> BuildConfig {
        BuildConfig {
            search_bound: self.search_bound,
            ordering: self.generator_ordering,
            order: self.search_order,
        }
    }
}

/// S from the alphas, O_S^* generators, the group plan, then the places.
pub fn construct(cfg: &JobConfig) -> Result<CharMorphismData> {
    let k = cfg.base_field()?;
    let alphas = cfg.alpha_elements()?;
    let plan = plan_group(&cfg.group_spec()?)?;
    let s = build_s(&k, &alphas)?;
    let basis = s_unit_generators(&k, &s)?;
    log::info!("S = {:?}, gamma = {:?}", basis.all_places(), basis.gamma);
    let ov = cfg.overrides.resolve(&k)?;
    build(&basis, &alphas, &plan, &cfg.build_config(), &ov)
}
