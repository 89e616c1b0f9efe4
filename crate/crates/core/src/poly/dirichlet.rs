//! The Artin character of a projection, read as a character of (Z/f)^*.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::analysis::{projected_symbol, ramified_places, Projection};
use crate::arith::{next_prime, prime_divisors};
use crate::error::{Error, Result};
use crate::field::PrimePlace;
use crate::morphism::CharMorphismData;
use crate::residue::FiniteField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirichletData {
    /// Product of the ramified primes.
    pub f: u64,
    /// Index of the kernel, the degree of the fixed field.
    pub n: u64,
    /// The kernel H, sorted.
    pub kernel: Vec<u64>,
    /// Value of the character on each unit class mod f.
    #[serde(skip)]
    pub values: BTreeMap<u64, Vec<i64>>,
}

impl DirichletData {
    /// Units mod f, with 0 standing for the single class when f = 1.
    pub fn units(&self) -> Vec<u64> {
        units_mod(self.f)
    }

    pub fn phi(&self) -> u64 {
        self.units().len() as u64
    }
}

pub(crate) fn units_mod(f: u64) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    (1..f).filter(|a| a.gcd(&f) == 1).collect()
}

fn rational_place(data: &CharMorphismData, p: u64) -> PrimePlace {
    PrimePlace::above(&data.field(), p)[0]
}

/// Generators of (Z/f)^* for squarefree f: a primitive root for each prime
/// factor, lifted to 1 modulo the others.
fn unit_generators(f: u64) -> Vec<u64> {
    prime_divisors(f)
        .into_iter()
        .map(|q| {
            let ff = FiniteField::prime(q);
            let g = (1..q)
                .find(|&x| ff.is_primitive_root(ff.elem(x as i64, 0)))
                .unwrap();
            // x ≡ g (mod q), x ≡ 1 (mod f/q)
            let m = f / q;
            (0..q)
                .map(|t| 1 + t * m)
                .find(|x| x % q == g % q)
                .unwrap()
                % f
        })
        .collect()
}

/// Assigns to every class mod f the projected Artin symbol of the smallest
/// prime in it, and checks the assignment is a homomorphism.
pub fn character_kernel(
    data: &CharMorphismData,
    proj: &Projection,
    bound: u64,
) -> Result<DirichletData> {
    if !data.field().is_rational() {
        return Err(Error::Unsupported(
            "polynomial synthesis is only available over Q".into(),
        ));
    }
    let conductor = ramified_places(data, proj);
    let f: u64 = conductor.places.iter().map(|(_, v)| v.p).product();
    let units = units_mod(f);
    let mut values: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    let mut p = 1;
    let mut inspected = 0;
    while values.len() < units.len() {
        p = next_prime(p);
        if p > bound {
            return Err(Error::SearchExhausted { inspected, bound });
        }
        inspected += 1;
        if f.is_multiple_of(p) {
            continue;
        }
        let class = p % f;
        if let std::collections::btree_map::Entry::Vacant(e) = values.entry(class) {
            let chi = projected_symbol(data, proj, &rational_place(data, p))?;
            e.insert(chi);
        }
    }
    let target = &proj.target;
    let zero = vec![0i64; target.factors.len()];
    if values[&(1 % f)] != zero {
        return Err(Error::Invariant("character is nontrivial on 1".into()));
    }
    for g in unit_generators(f) {
        for &a in &units {
            let sum: Vec<i64> = values[&g]
                .iter()
                .zip(&values[&a])
                .map(|(x, y)| x + y)
                .collect();
            if target.reduce(&sum) != target.reduce(&values[&((g * a) % f)]) {
                return Err(Error::Invariant(format!(
                    "Artin symbols mod {f} are not multiplicative at {g}*{a}"
                )));
            }
        }
    }
    let kernel: Vec<u64> = units.iter().copied().filter(|a| values[a] == zero).collect();
    let mut image: Vec<&Vec<i64>> = values.values().collect();
    image.sort();
    image.dedup();
    let n = image.len() as u64;
    if kernel.len() as u64 * n != units.len() as u64 {
        return Err(Error::Invariant("kernel index does not match the image size".into()));
    }
    Ok(DirichletData {
        f,
        n,
        kernel,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::legendre;
    use crate::config::{construct, JobConfig};
    use crate::linalg::Matrix;

    fn example_one() -> CharMorphismData {
        construct(
            &JobConfig::from_json(r#"{"field": "Q", "group": [2, 2], "alphas": ["37/16"]}"#)
                .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn quadratic_characters() {
        let d = example_one();
        let g = d.group().clone();
        let dd = character_kernel(&d, &Projection::factor(&g, 0).unwrap(), 100_000).unwrap();
        assert_eq!((dd.f, dd.n), (41, 2));
        let squares: Vec<u64> = (1..41).filter(|&a| legendre(a as i64, 41) == 1).collect();
        assert_eq!(dd.kernel, squares);
        let full = character_kernel(&d, &Projection::identity(&g), 1_000_000).unwrap();
        assert_eq!((full.f, full.n), (41 * 137, 4));
        assert!(full
            .kernel
            .iter()
            .all(|&a| legendre(a as i64, 41) == 1 && legendre(a as i64, 137) == 1));
    }

    #[test]
    fn trivial_projection() {
        let d = example_one();
        let zero = Projection::new(d.group(), Matrix::from_rows(vec![vec![0, 0]]), vec![2]).unwrap();
        let dd = character_kernel(&d, &zero, 1000).unwrap();
        assert_eq!((dd.f, dd.n, dd.kernel.clone()), (1, 1, vec![0]));
    }

    #[test]
    fn generators_generate() {
        for f in [3u64, 41, 15, 5617, 3 * 5 * 7] {
            let gens = unit_generators(f);
            let mut seen = std::collections::BTreeSet::from([1 % f]);
            let mut frontier = vec![1 % f];
            while let Some(x) = frontier.pop() {
                for g in &gens {
                    let y = x * g % f;
                    if seen.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            assert_eq!(seen.len(), units_mod(f).len(), "f = {f}");
        }
    }
}
