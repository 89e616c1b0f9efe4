//! Dense integer matrices, Smith normal form, and linear algebra over ℤ/eℤ.
//!
//! Everything here is generic over the integer scalar. Exact computations
//! over ℤ (relation lattices, subgroup indices) use [`BigInt`]; work modulo a
//! small `e` runs on machine integers with every entry kept in `[0, e)`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer scalar usable in the generic routines below.
pub trait IntScalar:
    Clone + fmt::Debug + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl<T> IntScalar for T where
    T: Clone + fmt::Debug + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| {
                    acc + self[(i, j)].clone() * v[j].clone()
                })
            })
            .collect()
    }

    /// Reduces every entry into `[0, m)`.
    pub fn reduce(&self, m: &T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mod_floor(m)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<S: IntScalar>(&self, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &T, modulus: Option<&T>) {
        for j in 0..self.cols {
            let add = self[(src, j)].clone() * factor.clone();
            let mut x = self[(dst, j)].clone() + add;
            if let Some(m) = modulus {
                x = x.mod_floor(m);
            }
            self[(dst, j)] = x;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &T, modulus: Option<&T>) {
        for i in 0..self.rows {
            let add = self[(i, src)].clone() * factor.clone();
            let mut x = self[(i, dst)].clone() + add;
            if let Some(m) = modulus {
                x = x.mod_floor(m);
            }
            self[(i, dst)] = x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of a Smith reduction: `u * m * v = d` with `d` diagonal and
/// `u`, `v` invertible (unimodular over ℤ, or invertible mod `e`).
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub diag: Vec<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
}

/// Smith normal form over ℤ when `modulus` is `None`; the diagonal entries
/// are then nonnegative and form a divisibility chain. With `Some(e)` all
/// entries are kept reduced mod `e` and the result is only guaranteed to
/// be diagonal, which is all that solving and inverting mod `e` need.
pub fn smith<T: IntScalar>(m: &Matrix<T>, modulus: Option<&T>) -> Smith<T> {
    let (r, c) = (m.rows, m.cols);
    let mut d = match modulus {
        Some(e) => m.reduce(e),
        None => m.clone(),
    };
    let mut u = Matrix::identity(r);
    let mut v = Matrix::identity(c);
    let mut v_inv = Matrix::identity(c);
    let n = r.min(c);

    for t in 0..n {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                let diag = (0..n).map(|i| d[(i, i)].clone()).collect();
                return Smith { diag, u, v, v_inv };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(d[(i, t)].div_floor(&pivot));
                d.add_row(i, t, &q, modulus);
                u.add_row(i, t, &q, modulus);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(d[(t, j)].div_floor(&pivot));
                d.add_col(j, t, &q, modulus);
                v.add_col(j, t, &q, modulus);
                // inverse: row t of v_inv -= q * row j
                let neg = -q.clone();
                v_inv.add_row(t, j, &neg, modulus);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            if modulus.is_none() {
                // enforce divisibility of the trailing block by the pivot
                let mut offender = None;
                'scan: for i in t + 1..r {
                    for j in t + 1..c {
                        if !d[(i, j)].is_multiple_of(&pivot) {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                if let Some(i) = offender {
                    d.add_row(t, i, &T::one(), None);
                    u.add_row(t, i, &T::one(), None);
                    continue;
                }
                if pivot.is_negative() {
                    d.negate_row(t);
                    u.negate_row(t);
                }
            }
            break;
        }
    }
    let diag = (0..n).map(|i| d[(i, i)].clone()).collect();
    Smith { diag, u, v, v_inv }
}

fn solve_congruence<T: IntScalar>(a: &T, b: &T, e: &T) -> Option<T> {
    let a = a.mod_floor(e);
    let b = b.mod_floor(e);
    let g = a.gcd(e);
    if !b.is_multiple_of(&g) {
        return None;
    }
    let m = e.clone() / g.clone();
    if m.is_one() {
        return Some(T::zero());
    }
    let inv = inverse_mod(&(a / g.clone()), &m)?;
    Some(((b / g) * inv).mod_floor(&m))
}

/// Inverse of `a` modulo `m` for any integer scalar.
pub fn inverse_mod<T: IntScalar>(a: &T, m: &T) -> Option<T> {
    let egcd = a.mod_floor(m).extended_gcd(m);
    egcd.gcd.is_one().then(|| egcd.x.mod_floor(m))
}

/// Some solution `x` of `m x ≡ rhs (mod e)`, computed through the Smith form.
pub fn solve_mod<T: IntScalar>(m: &Matrix<T>, rhs: &[T], e: &T) -> Result<Vec<T>> {
    if rhs.len() != m.rows {
        return Err(Error::Invariant(format!(
            "right-hand side has length {} but the system has {} rows",
            rhs.len(),
            m.rows
        )));
    }
    let s = smith(m, Some(e));
    let ub: Vec<T> = s.u.mul_vec(rhs).into_iter().map(|x| x.mod_floor(e)).collect();
    let mut z = vec![T::zero(); m.cols];
    for (i, beta) in ub.iter().enumerate() {
        if i < s.diag.len() {
            z[i] = solve_congruence(&s.diag[i], beta, e)
                .ok_or_else(|| Error::Inconsistent(format!("row {i} of the diagonalised system")))?;
        } else if !beta.mod_floor(e).is_zero() {
            return Err(Error::Inconsistent(format!("row {i} reduces to 0 = {beta:?}")));
        }
    }
    Ok(s.v.mul_vec(&z).into_iter().map(|x| x.mod_floor(e)).collect())
}

/// Inverse of a square matrix over ℤ/eℤ.
pub fn invert_mod<T: IntScalar>(m: &Matrix<T>, e: &T) -> Result<Matrix<T>> {
    if m.rows != m.cols {
        return Err(Error::NotInvertible("matrix is not square".into()));
    }
    let s = smith(m, Some(e));
    let mut dinv = Matrix::zeros(m.rows, m.rows);
    for (i, di) in s.diag.iter().enumerate() {
        let inv = inverse_mod(di, e).ok_or_else(|| {
            Error::NotInvertible(format!("diagonal entry {di:?} is not a unit mod {e:?}"))
        })?;
        dinv[(i, i)] = inv;
    }
    Ok(s.v.mul(&dinv).mul(&s.u).reduce(e))
}

/// Product of two matrices reduced mod `e`.
pub fn mul_mod<T: IntScalar>(a: &Matrix<T>, b: &Matrix<T>, e: &T) -> Matrix<T> {
    a.mul(b).reduce(e)
}

/// Index of the subgroup generated by `gens` inside ⊕ ℤ/nᵢℤ, or `None` for
/// infinite index (some nᵢ = 0 with insufficient generators).
pub fn subgroup_index(gens: &[Vec<i64>], moduli: &[u64]) -> Option<BigInt> {
    let rows = moduli.len();
    if rows == 0 {
        return Some(BigInt::one());
    }
    let mut cols: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| {
            assert_eq!(g.len(), rows);
            g.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    for (i, &n) in moduli.iter().enumerate() {
        let mut col = vec![BigInt::zero(); rows];
        col[i] = BigInt::from(n);
        cols.push(col);
    }
    let m = Matrix::from_columns(rows, &cols);
    let s = smith(&m, None);
    if s.diag.len() < rows || s.diag.iter().any(Zero::is_zero) {
        return None;
    }
    Some(s.diag.iter().fold(BigInt::one(), |acc, x| acc * x))
}

/// Whether the vectors generate all of ⊕ ℤ/nᵢℤ.
pub fn generates(gens: &[Vec<i64>], moduli: &[u64]) -> bool {
    subgroup_index(gens, moduli).is_some_and(|i| i.is_one())
}

/// A sublattice of ℤⁿ kept in row-echelon (Hermite-style) form.
#[derive(Clone, Debug, Default)]
pub struct Lattice {
    dim: usize,
    // rows indexed by their pivot column
    rows: Vec<Option<Vec<BigInt>>>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![None; dim],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().flatten().count()
    }

    /// |det| of the basis when the lattice has full rank.
    pub fn determinant(&self) -> Option<BigInt> {
        (self.rank() == self.dim).then(|| {
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| r.as_ref().unwrap()[i].abs())
                .fold(BigInt::one(), |a, b| a * b)
        })
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for col in 0..self.dim {
            if w[col].is_zero() {
                continue;
            }
            let Some(row) = &self.rows[col] else {
                return false;
            };
            let (q, r) = w[col].div_rem(&row[col]);
            if !r.is_zero() {
                return false;
            }
            for k in col..self.dim {
                w[k] -= &q * &row[k];
            }
        }
        true
    }

    /// Adds a vector; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let mut grew = false;
        for col in 0..self.dim {
            if w[col].is_zero() {
                continue;
            }
            match self.rows[col].take() {
                None => {
                    if w[col].is_negative() {
                        w.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    self.rows[col] = Some(w);
                    return true;
                }
                Some(row) => {
                    if w[col].is_multiple_of(&row[col]) {
                        let q = &w[col] / &row[col];
                        for k in col..self.dim {
                            w[k] -= &q * &row[k];
                        }
                        self.rows[col] = Some(row);
                    } else {
                        let eg = row[col].extended_gcd(&w[col]);
                        let a = &row[col] / &eg.gcd;
                        let b = &w[col] / &eg.gcd;
                        let new_row: Vec<BigInt> = (0..self.dim)
                            .map(|k| &eg.x * &row[k] + &eg.y * &w[k])
                            .collect();
                        let rest: Vec<BigInt> =
                            (0..self.dim).map(|k| &a * &w[k] - &b * &row[k]).collect();
                        self.rows[col] = Some(new_row);
                        w = rest;
                        grew = true;
                    }
                }
            }
        }
        grew
    }
}
