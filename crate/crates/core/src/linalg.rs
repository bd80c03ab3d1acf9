//! Exact arithmetic over `Q` and `Q(i)` and sparse exact linear algebra.
//!
//! Elimination works on sparse rows (sorted `(column, value)` pairs) with
//! plain rational pivoting. Every routine is deterministic: pivots are always
//! chosen as the smallest column index still present in a row.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combo::LinComb;

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Scalar = BigRational;

/// Exact Gaussian rational `a + b i`.
pub type GaussianScalar = Complex<Scalar>;

/// Sparse coordinate vector.
pub type SparseVec = LinComb<usize>;

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a scalar as `p/q`, or `p` when integral.
pub fn fmt_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Scalar::new(n, d))
        }
        None => Some(Scalar::from_integer(text.parse().ok()?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("inconsistent linear system: right-hand side is not in the column space")]
    Inconsistent,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Sparse matrix with exact entries. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, q(*v));
            }
        }
        m
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, v) in col {
                m.set(i, j, v.clone());
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

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = vec![Scalar::zero(); self.rows];
        for (&(i, j), v) in &self.entries {
            out[i] += v * &x[j];
        }
        Ok(out)
    }

    pub fn mul_sparse(&self, x: &SparseVec) -> SparseVec {
        let mut by_col: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            by_col.entry(j).or_default().push((i, v));
        }
        let mut out = SparseVec::zero();
        for (j, xj) in x {
            if let Some(col) = by_col.get(j) {
                for (i, v) in col {
                    out.add_term(*i, *v * xj);
                }
            }
        }
        out
    }

    fn sparse_rows(&self) -> Vec<Row> {
        let mut rows = vec![Row::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            rows[i].push((j, v.clone()));
        }
        rows
    }
}

/// A sparse row: strictly increasing column indices, no zero values.
pub type Row = Vec<(usize, Scalar)>;

pub fn row_from_vec(v: &SparseVec) -> Row {
    v.iter().map(|(&k, c)| (k, c.clone())).collect()
}

/// `a - factor * b` for sparse rows.
fn row_sub_scaled(a: &[(usize, Scalar)], factor: &Scalar, b: &[(usize, Scalar)]) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(factor * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - factor * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally built row echelon form.
///
/// Each stored row has leading entry `1` at its pivot column; rows are only
/// reduced below their pivot, which is enough for rank and membership tests.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, Row>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduce(&self, mut v: Row) -> Row {
        let mut pos = 0;
        while pos < v.len() {
            let col = v[pos].0;
            match self.pivots.get(&col) {
                Some(prow) => {
                    let factor = v[pos].1.clone();
                    v = row_sub_scaled(&v, &factor, prow);
                }
                None => pos += 1,
            }
        }
        v
    }

    /// Adds a row; returns `true` when it was independent of the rows so far.
    pub fn insert(&mut self, v: Row) -> bool {
        let mut r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, c) in r.iter_mut() {
                *c *= &inv;
            }
        }
        self.pivots.insert(r[0].0, r);
        true
    }

    pub fn insert_vec(&mut self, v: &SparseVec) -> bool {
        self.insert(row_from_vec(v))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(row_from_vec(v)).is_empty()
    }

    /// Back-substitutes so every pivot column is zero outside its own row.
    fn into_reduced(mut self) -> BTreeMap<usize, Row> {
        let keys: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &p in &keys {
            let prow = self.pivots[&p].clone();
            for (_, row) in self.pivots.range_mut(..p) {
                if let Ok(idx) = row.binary_search_by_key(&p, |e| e.0) {
                    let factor = row[idx].1.clone();
                    *row = row_sub_scaled(row, &factor, &prow);
                }
            }
        }
        self.pivots
    }
}

/// Exact rank over `Q`.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut ech = Echelon::new();
    for row in m.sparse_rows() {
        ech.insert(row);
    }
    ech.rank()
}

/// Rank of a family of sparse vectors.
pub fn rank_of_vectors<'a, I: IntoIterator<Item = &'a SparseVec>>(vectors: I) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert_vec(v);
    }
    ech.rank()
}

/// Basis of the right null space, as dense vectors of length `cols`.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new();
    for row in m.sparse_rows() {
        ech.insert(row);
    }
    let reduced = ech.into_reduced();
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !reduced.contains_key(c)) {
        let mut v = vec![Scalar::zero(); m.cols];
        v[free] = Scalar::one();
        for (&p, row) in &reduced {
            if let Ok(idx) = row.binary_search_by_key(&free, |e| e.0) {
                v[p] = -row[idx].1.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Kernel of the map whose columns are `columns` (each a vector in some
/// ambient coordinate space), returned as coefficient vectors over the columns.
pub fn column_relations(columns: &[SparseVec]) -> Vec<Vec<Scalar>> {
    let rows = columns
        .iter()
        .flat_map(|c| c.keys().copied())
        .max()
        .map_or(0, |m| m + 1);
    kernel_basis(&SparseMatrix::from_columns(rows, columns))
}

/// One exact solution of `m x = rhs` together with the null-space dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Scalar>,
    pub null_dim: usize,
}

pub fn solve_linear(m: &SparseMatrix, rhs: &[Scalar]) -> Result<Solution, LinalgError> {
    if rhs.len() != m.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows,
            got: rhs.len(),
        });
    }
    let aug = m.cols;
    let mut ech = Echelon::new();
    for (mut row, b) in m.sparse_rows().into_iter().zip(rhs) {
        if !b.is_zero() {
            row.push((aug, b.clone()));
        }
        ech.insert(row);
    }
    if ech.pivots.contains_key(&aug) {
        return Err(LinalgError::Inconsistent);
    }
    let rank = ech.rank();
    let reduced = ech.into_reduced();
    let mut x = vec![Scalar::zero(); m.cols];
    for (&p, row) in &reduced {
        if let Some((_, v)) = row.last().filter(|e| e.0 == aug) {
            x[p] = v.clone();
        }
    }
    Ok(Solution {
        x,
        null_dim: m.cols - rank,
    })
}

/// Coefficients expressing `target` in the span of `spanning`, if possible.
pub fn express_in_span(spanning: &[SparseVec], target: &SparseVec) -> Option<Solution> {
    let rows = spanning
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|c| c.keys().copied())
        .max()
        .map_or(0, |m| m + 1);
    let m = SparseMatrix::from_columns(rows, spanning);
    let mut rhs = vec![Scalar::zero(); rows];
    for (&i, v) in target {
        rhs[i] = v.clone();
    }
    solve_linear(&m, &rhs).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_null(m: &SparseMatrix, v: &[Scalar]) -> bool {
        m.mul_vec(v).unwrap().iter().all(Zero::is_zero)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
        assert_eq!(rank(&SparseMatrix::zeros(4, 7)), 0);
        assert_eq!(rank(&SparseMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(2)).is_empty());
        let z = SparseMatrix::zeros(2, 2);
        let k = kernel_basis(&z);
        assert_eq!(k.len(), 2);
        let as_sparse: Vec<SparseVec> = k
            .iter()
            .map(|v| v.iter().cloned().enumerate().collect())
            .collect();
        assert_eq!(rank_of_vectors(&as_sparse), 2);
        let m = SparseMatrix::from_int_rows(&[vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], q(0));
        assert!(!k[0][0].is_zero());
        assert!(is_null(&m, &k[0]));
    }

    #[test]
    fn solve_examples() {
        let s = solve_linear(&SparseMatrix::identity(2), &[q(3), q(5)]).unwrap();
        assert_eq!(s.x, vec![q(3), q(5)]);
        assert_eq!(s.null_dim, 0);

        let m = SparseMatrix::from_int_rows(&[vec![1, 1]]);
        let s = solve_linear(&m, &[q(2)]).unwrap();
        assert_eq!(s.null_dim, 1);
        assert_eq!(m.mul_vec(&s.x).unwrap(), vec![q(2)]);

        let m = SparseMatrix::from_int_rows(&[vec![1], vec![1]]);
        assert_eq!(solve_linear(&m, &[q(1), q(2)]), Err(LinalgError::Inconsistent));
    }

    #[test]
    fn rational_solution_is_exact() {
        let m = SparseMatrix::from_int_rows(&[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 5]]);
        let s = solve_linear(&m, &[q(1), q(0), q(0)]).unwrap();
        assert_eq!(s.null_dim, 0);
        assert_eq!(m.mul_vec(&s.x).unwrap(), vec![q(1), q(0), q(0)]);
        assert_eq!(s.x[0], qf(15, 31));
    }

    #[test]
    fn scalar_text_round_trip() {
        for s in [qf(-7, 3), q(0), q(12), qf(1, 1024)] {
            assert_eq!(parse_scalar(&fmt_scalar(&s)), Some(s.clone()));
        }
        assert_eq!(fmt_scalar(&qf(6, -4)), "-3/2");
        assert_eq!(parse_scalar("1/0"), None);
    }

    #[test]
    fn membership_via_express() {
        let a: SparseVec = [(0, q(1)), (1, q(1))].into_iter().collect();
        let b: SparseVec = [(1, q(1)), (2, q(1))].into_iter().collect();
        let t: SparseVec = [(0, q(2)), (1, q(5)), (2, q(3))].into_iter().collect();
        let s = express_in_span(&[a.clone(), b.clone()], &t).unwrap();
        assert_eq!(s.x, vec![q(2), q(3)]);
        let bad: SparseVec = [(0, q(1))].into_iter().collect();
        assert!(express_in_span(&[a, b], &bad).is_none());
    }
}

/// Total rank of vectors grouped by a key, each group reduced separately.
///
/// Vectors with distinct keys must have disjoint supports (e.g. weight spaces).
pub fn rank_grouped<W: Ord, I: IntoIterator<Item = (W, SparseVec)>>(items: I) -> usize {
    let mut groups: std::collections::BTreeMap<W, Echelon> = std::collections::BTreeMap::new();
    for (w, v) in items {
        groups.entry(w).or_default().insert_vec(&v);
    }
    groups.values().map(Echelon::rank).sum()
}
