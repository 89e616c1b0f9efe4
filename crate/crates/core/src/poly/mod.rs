//! Defining polynomials of the subextensions of L_ρ when K = Q, and exact
//! norm-form evaluation.

pub mod dirichlet;
pub mod normform;
pub mod periods;
pub mod zpoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::analysis::{projected_symbol, Projection};
use crate::arith::next_prime;
use crate::error::{Error, Result};
use crate::field::PrimePlace;
use crate::morphism::CharMorphismData;

pub use dirichlet::{character_kernel, DirichletData};
pub use normform::{norm_form_eval, norm_power_basis, parse_rational, Multiquadratic};
pub use periods::{gaussian_period_polynomial, PeriodPolynomial};
pub use zpoly::IntPoly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusCheck {
    pub p: u64,
    pub expected_order: u64,
    pub factor_degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusReport {
    pub passed: bool,
    pub checks: Vec<FrobeniusCheck>,
}

/// For the first `trials` primes p not dividing f·disc(poly), every factor
/// of poly mod p must have degree equal to the order of the projected Artin
/// symbol at p.
pub fn frobenius_verify(
    poly: &IntPoly,
    data: &CharMorphismData,
    proj: &Projection,
    trials: usize,
) -> Result<FrobeniusReport> {
    if poly.degree() <= 1 {
        return Ok(FrobeniusReport {
            passed: true,
            checks: Vec::new(),
        });
    }
    if !data.field().is_rational() {
        return Err(Error::Unsupported("Frobenius checks are only available over Q".into()));
    }
    let f: u64 = crate::analysis::ramified_places(data, proj)
        .places
        .iter()
        .map(|(_, v)| v.p)
        .product();
    let bad = poly.discriminant() * BigInt::from(f);
    let mut checks = Vec::with_capacity(trials);
    let mut passed = true;
    let mut p = 1;
    while checks.len() < trials {
        p = next_prime(p);
        if bad.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        let v = PrimePlace::above(&data.field(), p)[0];
        let expected = proj.target.element_order(&projected_symbol(data, proj, &v)?);
        let factor_degrees = zpoly::factor_degrees_mod(poly, p);
        passed &= factor_degrees.iter().all(|&d| d as u64 == expected);
        checks.push(FrobeniusCheck {
            p,
            expected_order: expected,
            factor_degrees,
        });
    }
    Ok(FrobeniusReport { passed, checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyReport {
    pub projection: String,
    pub conductor: u64,
    pub degree: u64,
    #[serde(serialize_with = "ser_coeffs")]
    pub coefficients: IntPoly,
    pub polynomial: String,
    pub discriminant: String,
    pub precision_bits: u64,
    pub frobenius: FrobeniusReport,
}

fn ser_coeffs<S: serde::Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        match c.to_i64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&c.to_string())?,
        }
    }
    seq.end()
}

/// Character kernel, period polynomial and its Frobenius check.
pub fn synthesize(
    data: &CharMorphismData,
    proj: &Projection,
    bound: u64,
    trials: usize,
) -> Result<PolyReport> {
    let dd = character_kernel(data, proj, bound)?;
    let pp = gaussian_period_polynomial(&dd, None)?;
    let frobenius = frobenius_verify(&pp.poly, data, proj, trials)?;
    if !frobenius.passed {
        return Err(Error::Invariant(format!(
            "period polynomial {} fails the Frobenius check",
            pp.poly
        )));
    }
    Ok(PolyReport {
        projection: proj.label.clone(),
        conductor: dd.f,
        degree: dd.n,
        polynomial: pp.poly.to_string(),
        discriminant: pp.poly.discriminant().to_string(),
        coefficients: pp.poly,
        precision_bits: pp.bits,
        frobenius,
    })
}
