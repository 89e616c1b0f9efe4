//! Finite abelian groups, the plan (e, k, Φ) and the wedge square.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{generates, smith, Matrix};

/// ⊕ Z/n_i with the factors in the order given; coordinates of group
/// elements follow this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianGroupSpec {
    pub factors: Vec<u64>,
}

impl AbelianGroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::Validation("group factors must be positive".into()));
        }
        Ok(Self { factors })
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().map(|&n| BigInt::from(n)).product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |a, &n| a.lcm(&n))
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.iter().all(|&n| n == 1)
    }

    /// n_1 | n_2 | ... with the trivial factors dropped.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let m = self.factors.len();
        let mut diag = Matrix::<BigInt>::zeros(m, m);
        for (i, &n) in self.factors.iter().enumerate() {
            diag[(i, i)] = BigInt::from(n);
        }
        let s = smith(&diag, None);
        s.diag
            .iter()
            .filter(|x| !x.is_one())
            .map(|x| x.to_u64().unwrap())
            .collect()
    }

    /// Reduces integer coordinates componentwise.
    pub fn reduce(&self, x: &[i64]) -> Vec<u64> {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &n)| a.rem_euclid(n as i64) as u64)
            .collect()
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&c| c == 0)
    }

    /// Order of an element.
    pub fn element_order(&self, x: &[i64]) -> u64 {
        self.reduce(x)
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&a, &n)| acc.lcm(&(n / a.gcd(&n))))
    }

    /// Whether the given elements generate the group.
    pub fn generated_by(&self, gens: &[Vec<i64>]) -> bool {
        generates(gens, &self.factors)
    }
}

impl std::fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// e, k, k' = C(k,2), Φ: (Z/e)^k -> G as an m x k matrix, and the pairs
/// (m_i, n_i) in lexicographic order (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPlan {
    pub group: AbelianGroupSpec,
    pub e: u64,
    pub k: usize,
    pub kprime: usize,
    pub c: Matrix<i64>,
    pub pairs: Vec<(usize, usize)>,
}

impl GroupPlan {
    /// Number of places in the construction: 2k', or 1 when G is cyclic.
    pub fn slot_count(&self) -> usize {
        if self.k == 1 {
            1
        } else {
            2 * self.kprime
        }
    }

    pub fn is_cyclic(&self) -> bool {
        self.k == 1
    }
}

/// Plans the construction for G. The factors are kept as given when their
/// number is already minimal; otherwise G is rewritten in invariant factors.
pub fn plan_group(g: &AbelianGroupSpec) -> Result<GroupPlan> {
    if g.is_trivial() {
        return Err(Error::Degenerate);
    }
    let inv = g.invariant_factors();
    let given: Vec<u64> = g.factors.iter().copied().filter(|&n| n != 1).collect();
    let group = if given.len() == inv.len() {
        AbelianGroupSpec { factors: given }
    } else {
        AbelianGroupSpec { factors: inv }
    };
    let k = group.factors.len();
    let kprime = k * (k - 1) / 2;
    let pairs = (0..k)
        .flat_map(|m| (m + 1..k).map(move |n| (m, n)))
        .collect();
    Ok(GroupPlan {
        e: group.exponent(),
        k,
        kprime,
        c: Matrix::identity(k),
        pairs,
        group,
    })
}

/// One basis element g_i ∧ g_j of ∧²G with its order gcd(n_i, n_j).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WedgeLabel {
    pub i: usize,
    pub j: usize,
    pub modulus: u64,
}

/// ∧²G = ⊕_{i<j} Z/gcd(n_i, n_j).
pub fn wedge_square(g: &AbelianGroupSpec) -> (AbelianGroupSpec, Vec<WedgeLabel>) {
    let n = &g.factors;
    let labels: Vec<WedgeLabel> = (0..n.len())
        .flat_map(|i| {
            (i + 1..n.len()).map(move |j| WedgeLabel {
                i,
                j,
                modulus: n[i].gcd(&n[j]),
            })
        })
        .collect();
    let spec = AbelianGroupSpec {
        factors: labels.iter().map(|l| l.modulus).collect(),
    };
    (spec, labels)
}

/// Coordinates of x ∧ y in the basis of `wedge_square`.
pub fn wedge(labels: &[WedgeLabel], x: &[i64], y: &[i64]) -> Vec<i64> {
    labels
        .iter()
        .map(|l| {
            let m = l.modulus as i64;
            (x[l.i] * y[l.j] - x[l.j] * y[l.i]).rem_euclid(m.max(1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(f: &[u64]) -> AbelianGroupSpec {
        AbelianGroupSpec::new(f.to_vec()).unwrap()
    }

    #[test]
    fn plans() {
        let p = plan_group(&g(&[2, 2])).unwrap();
        assert_eq!((p.e, p.k, p.kprime), (2, 2, 1));
        assert_eq!(p.c, Matrix::identity(2));
        let p = plan_group(&g(&[6, 3, 3, 3])).unwrap();
        assert_eq!((p.e, p.k, p.kprime), (6, 4, 6));
        assert_eq!(p.pairs, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(p.group.factors, vec![6, 3, 3, 3]);
        let p = plan_group(&g(&[5])).unwrap();
        assert_eq!((p.e, p.k, p.kprime, p.slot_count()), (5, 1, 0, 1));
        let p = plan_group(&g(&[2, 3])).unwrap();
        assert_eq!(p.group.factors, vec![6]);
        assert!(matches!(plan_group(&g(&[1])), Err(Error::Degenerate)));
        assert!(matches!(plan_group(&g(&[])), Err(Error::Degenerate)));
    }

    #[test]
    fn wedge_squares() {
        let (w, _) = wedge_square(&g(&[2, 2]));
        assert_eq!(w.factors, vec![2]);
        let (w, _) = wedge_square(&g(&[6, 3, 3, 3]));
        assert_eq!(w.factors, vec![3, 3, 3, 3, 3, 3]);
        let (w, _) = wedge_square(&g(&[7]));
        assert!(w.factors.is_empty());
    }

    #[test]
    fn element_orders() {
        let h = g(&[6, 3]);
        assert_eq!(h.element_order(&[2, 0]), 3);
        assert_eq!(h.element_order(&[3, 1]), 6);
        assert_eq!(h.element_order(&[0, 0]), 1);
    }

    /// |∧²G| from the definition: Z^{k*k} modulo n_i e_ij, n_j e_ij and
    /// x⊗x for every element x of G.
    fn brute_wedge_order(n: &[u64]) -> BigInt {
        let k = n.len();
        let mut rels: Vec<Vec<i64>> = Vec::new();
        for i in 0..k {
            for j in 0..k {
                for m in [n[i], n[j]] {
                    let mut r = vec![0i64; k * k];
                    r[i * k + j] = m as i64;
                    rels.push(r);
                }
            }
        }
        let mut x = vec![0i64; k];
        loop {
            rels.push((0..k * k).map(|t| x[t / k] * x[t % k]).collect());
            let mut i = 0;
            while i < k && x[i] + 1 == n[i] as i64 {
                x[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            x[i] += 1;
        }
        crate::linalg::subgroup_index(&rels, &vec![0; k * k]).unwrap()
    }

    proptest! {
        #[test]
        fn wedge_matches_alternating_maps(f in prop::collection::vec(2u64..8, 0..4)) {
            let spec = g(&f);
            let (w, _) = wedge_square(&spec);
            let order: BigInt = w.order();
            prop_assert_eq!(order, brute_wedge_order(&f));
        }

        #[test]
        fn invariant_factors_preserve_order(f in prop::collection::vec(1u64..13, 1..5)) {
            let spec = g(&f);
            let inv = spec.invariant_factors();
            prop_assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
            let o: BigInt = inv.iter().map(|&n| BigInt::from(n)).product();
            prop_assert_eq!(o, spec.order());
        }
    }
}
