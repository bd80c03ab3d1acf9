//! Finite-dimensional `k = sl2 ⊕ sl2` modules `V_n ⊠ V_m`.
//!
//! The first factor is spanned by `H1+H2, E1, F1`, the second by
//! `H1−H2, E2, F2`. Weights are written in the coordinates
//! `(H1+H2, H1−H2)`, which are integral on every module used here.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combo::LinComb;
use crate::lie::{is_in_k, Basis, LieElement};
use crate::linalg::{kernel_basis, q, qf, Scalar, SparseMatrix, SparseVec};

/// `V_n ⊠ V_m`, i.e. highest weight `n` for `H1+H2` and `m` for `H1−H2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KTypeLabel {
    pub n: u32,
    pub m: u32,
}

impl KTypeLabel {
    pub fn new(n: u32, m: u32) -> Self {
        Self { n, m }
    }

    pub fn dim(&self) -> usize {
        (self.n as usize + 1) * (self.m as usize + 1)
    }

    /// The `ε`-labels `(a, b) = ((n+m)/2, (n−m)/2)`.
    pub fn to_ab(&self) -> (Scalar, Scalar) {
        let (n, m) = (self.n as i64, self.m as i64);
        (qf(n + m, 2), qf(n - m, 2))
    }

    /// `V_(a,b) = V_(a+b) ⊠ V_(a−b)`; `None` unless `a ± b` are nonnegative integers.
    pub fn from_ab(a: &Scalar, b: &Scalar) -> Option<Self> {
        let n = a + b;
        let m = a - b;
        if !n.is_integer() || !m.is_integer() || n < Scalar::zero() || m < Scalar::zero() {
            return None;
        }
        Some(Self::new(
            n.to_integer().try_into().ok()?,
            m.to_integer().try_into().ok()?,
        ))
    }

    /// Weight of `F1^i F2^j · hwv`.
    pub fn weight_of(&self, i: u32, j: u32) -> (i64, i64) {
        (self.n as i64 - 2 * i as i64, self.m as i64 - 2 * j as i64)
    }

    pub fn index(&self, i: u32, j: u32) -> usize {
        i as usize * (self.m as usize + 1) + j as usize
    }

    pub fn coords(&self, idx: usize) -> (u32, u32) {
        let w = self.m as usize + 1;
        ((idx / w) as u32, (idx % w) as u32)
    }
}

impl fmt::Display for KTypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

/// Coordinates `(i, j)` of `F1^i F2^j · hwv`.
pub type KModuleVector = LinComb<(u32, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KModError {
    #[error("not in k: {0}")]
    NotInK(String),
}

/// One `sl2` factor: `F·f^i = f^{i+1}`, `E·f^i = i(n−i+1) f^{i−1}`, `H·f^i = (n−2i) f^i`.
fn sl2_basis_action(op: char, n: u32, i: u32) -> Option<(Scalar, u32)> {
    match op {
        'h' => Some((q(n as i64 - 2 * i as i64), i)),
        'f' => (i < n).then(|| (q(1), i + 1)),
        'e' => (i > 0).then(|| (q(i as i64 * (n as i64 - i as i64 + 1)), i - 1)),
        _ => unreachable!(),
    }
}

/// Action of a `k`-basis vector on `F1^i F2^j · hwv` of `V_n ⊠ V_m`.
pub fn act_k_basis(x: Basis, label: KTypeLabel, i: u32, j: u32) -> Vec<(Scalar, u32, u32)> {
    use Basis::*;
    let half = qf(1, 2);
    let first = |op| sl2_basis_action(op, label.n, i).map(|(c, i2)| (c, i2, j));
    let second = |op| sl2_basis_action(op, label.m, j).map(|(c, j2)| (c, i, j2));
    match x {
        E1 => first('e').into_iter().collect(),
        F1 => first('f').into_iter().collect(),
        E2 => second('e').into_iter().collect(),
        F2 => second('f').into_iter().collect(),
        // H1 = ½((H1+H2) + (H1−H2)), H2 = ½((H1+H2) − (H1−H2))
        H1 | H2 => {
            let (wa, wb) = label.weight_of(i, j);
            let c = if x == H1 { q(wa + wb) } else { q(wa - wb) } * half;
            if c.is_zero() {
                vec![]
            } else {
                vec![(c, i, j)]
            }
        }
        _ => panic!("{x} is not in k"),
    }
}

pub fn act_k(x: &LieElement, v: &KModuleVector, label: KTypeLabel) -> Result<KModuleVector, KModError> {
    if !is_in_k(x) {
        return Err(KModError::NotInK(x.to_string()));
    }
    let mut out = KModuleVector::zero();
    for (&b, cb) in x {
        for (&(i, j), cv) in v {
            for (c, i2, j2) in act_k_basis(b, label, i, j) {
                out.add_term((i2, j2), c * cb * cv);
            }
        }
    }
    Ok(out)
}

fn clebsch_gordan(a: u32, b: u32) -> Vec<u32> {
    let (lo, hi) = (a.abs_diff(b), a + b);
    (lo..=hi).step_by(2).collect()
}

/// Decomposition of `V_l1 ⊗ V_l2` into irreducibles with multiplicities.
pub fn tensor_decompose(l1: KTypeLabel, l2: KTypeLabel) -> BTreeMap<KTypeLabel, usize> {
    let mut out = BTreeMap::new();
    for n in clebsch_gordan(l1.n, l2.n) {
        for m in clebsch_gordan(l1.m, l2.m) {
            *out.entry(KTypeLabel::new(n, m)).or_insert(0) += 1;
        }
    }
    out
}

/// A finite-dimensional `k`-module with a weight basis.
pub trait KRep {
    fn dim(&self) -> usize;
    /// `(H1+H2, H1−H2)`-weight of a basis vector.
    fn weight(&self, idx: usize) -> (i64, i64);
    /// Action of a `k`-basis vector on a basis vector.
    fn act_k_on_basis(&self, x: Basis, idx: usize) -> SparseVec;

    fn act_k_vec(&self, x: Basis, v: &SparseVec) -> SparseVec {
        v.map_linear(|&i| self.act_k_on_basis(x, i))
    }

    fn weight_space(&self, w: (i64, i64)) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weight(i) == w).collect()
    }
}

/// An irreducible `V_n ⊠ V_m` viewed as a [`KRep`].
#[derive(Debug, Clone, Copy)]
pub struct Irreducible(pub KTypeLabel);

impl KRep for Irreducible {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn weight(&self, idx: usize) -> (i64, i64) {
        let (i, j) = self.0.coords(idx);
        self.0.weight_of(i, j)
    }

    fn act_k_on_basis(&self, x: Basis, idx: usize) -> SparseVec {
        let (i, j) = self.0.coords(idx);
        act_k_basis(x, self.0, i, j)
            .into_iter()
            .map(|(c, i2, j2)| (self.0.index(i2, j2), c))
            .collect()
    }
}

/// Tensor product of two [`KRep`]s, basis index `a * dim(b) + b`.
pub struct TensorRep<'a, A: KRep, B: KRep> {
    pub left: &'a A,
    pub right: &'a B,
}

impl<A: KRep, B: KRep> KRep for TensorRep<'_, A, B> {
    fn dim(&self) -> usize {
        self.left.dim() * self.right.dim()
    }

    fn weight(&self, idx: usize) -> (i64, i64) {
        let d = self.right.dim();
        let (a, b) = (self.left.weight(idx / d), self.right.weight(idx % d));
        (a.0 + b.0, a.1 + b.1)
    }

    fn act_k_on_basis(&self, x: Basis, idx: usize) -> SparseVec {
        let d = self.right.dim();
        let (a, b) = (idx / d, idx % d);
        let mut out = SparseVec::zero();
        for (&a2, c) in &self.left.act_k_on_basis(x, a) {
            out.add_term(a2 * d + b, c.clone());
        }
        for (&b2, c) in &self.right.act_k_on_basis(x, b) {
            out.add_term(a * d + b2, c.clone());
        }
        out
    }
}

/// Basis of `{ v of weight w : E1·v = E2·v = 0 }`.
pub fn extract_hwv<R: KRep + ?Sized>(rep: &R, weight: (i64, i64)) -> Vec<SparseVec> {
    let space = rep.weight_space(weight);
    if space.is_empty() {
        return vec![];
    }
    let mut row_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (col, &idx) in space.iter().enumerate() {
        for (op, x) in [Basis::E1, Basis::E2].into_iter().enumerate() {
            for (&r, c) in &rep.act_k_on_basis(x, idx) {
                let n = row_index.len();
                let row = *row_index.entry((op, r)).or_insert(n);
                entries.push((row, col, c.clone()));
            }
        }
    }
    let mut m = SparseMatrix::zeros(row_index.len(), space.len());
    for (r, c, v) in entries {
        m.set(r, c, v);
    }
    kernel_basis(&m)
        .into_iter()
        .map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, c)| (space[i], c))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::lie;

    #[test]
    fn act_examples() {
        let l = KTypeLabel::new(3, 2);
        let v = KModuleVector::basis((0, 0));
        let f1v = act_k(&lie(Basis::F1), &v, l).unwrap();
        assert_eq!(act_k(&lie(Basis::E1), &f1v, l).unwrap(), v.scaled(&q(3)));
        assert!(act_k(&lie(Basis::E1), &v, l).unwrap().is_zero());
        let hm = lie(Basis::H1) - lie(Basis::H2);
        assert_eq!(act_k(&hm, &v, l).unwrap(), v.scaled(&q(2)));
        assert!(act_k(&lie(Basis::E3), &v, l).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d = tensor_decompose(KTypeLabel::new(1, 1), KTypeLabel::new(4, 2));
        let expected: BTreeMap<_, _> = [(5, 3), (5, 1), (3, 3), (3, 1)]
            .into_iter()
            .map(|(n, m)| (KTypeLabel::new(n, m), 1))
            .collect();
        assert_eq!(d, expected);
        let d = tensor_decompose(KTypeLabel::new(0, 0), KTypeLabel::new(2, 5));
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(KTypeLabel::new(2, 5), 1)]);
        let d = tensor_decompose(KTypeLabel::new(1, 0), KTypeLabel::new(1, 0));
        assert_eq!(d.len(), 2);
        assert!(d.contains_key(&KTypeLabel::new(2, 0)) && d.contains_key(&KTypeLabel::new(0, 0)));
    }

    #[test]
    fn label_systems_agree() {
        let l = KTypeLabel::from_ab(&qf(1, 2), &qf(1, 2)).unwrap();
        assert_eq!(l, KTypeLabel::new(1, 0));
        assert_eq!(l.to_ab(), (qf(1, 2), qf(1, 2)));
        assert!(KTypeLabel::from_ab(&qf(1, 2), &q(0)).is_none());
    }

    #[test]
    fn hwv_examples() {
        let v11 = Irreducible(KTypeLabel::new(1, 1));
        assert_eq!(extract_hwv(&v11, (1, 1)).len(), 1);
        let v10 = Irreducible(KTypeLabel::new(1, 0));
        let t = TensorRep { left: &v10, right: &v10 };
        assert_eq!(extract_hwv(&t, (0, 0)).len(), 1);
        assert_eq!(extract_hwv(&t, (2, 0)).len(), 1);
        assert!(extract_hwv(&t, (4, 0)).is_empty());
    }
}
