//! The complexified Lie algebra `g = so(5, C)` of `SO_e(4,1)` in the fixed
//! ten-element basis `H1, H2, E1, E2, F1, F2, E3, E4, F3, F4`.
//!
//! The commutator table is stored as data and cross-validated against the
//! 5×5 matrix realization and the Jacobi identity.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combo::LinComb;
use crate::linalg::{q, qf, GaussianScalar, Scalar};

/// Basis vector of `g`. The declaration order is the PBW total order
/// `E3 < E4 < F3 < F4 < H1 < H2 < E1 < E2 < F1 < F2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    E3,
    E4,
    F3,
    F4,
    H1,
    H2,
    E1,
    E2,
    F1,
    F2,
}

impl Basis {
    pub const ALL: [Basis; 10] = [
        Basis::E3,
        Basis::E4,
        Basis::F3,
        Basis::F4,
        Basis::H1,
        Basis::H2,
        Basis::E1,
        Basis::E2,
        Basis::F1,
        Basis::F2,
    ];

    /// Basis of the compact part `k`.
    pub const K: [Basis; 6] = [
        Basis::H1,
        Basis::H2,
        Basis::E1,
        Basis::E2,
        Basis::F1,
        Basis::F2,
    ];

    /// Basis of the noncompact part `p`.
    pub const P: [Basis; 4] = [Basis::E3, Basis::E4, Basis::F3, Basis::F4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Basis {
        Self::ALL[i]
    }

    pub fn is_compact(self) -> bool {
        self.index() >= 4
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::E3 => "E3",
            Basis::E4 => "E4",
            Basis::F3 => "F3",
            Basis::F4 => "F4",
            Basis::H1 => "H1",
            Basis::H2 => "H2",
            Basis::E1 => "E1",
            Basis::E2 => "E2",
            Basis::F1 => "F1",
            Basis::F2 => "F2",
        }
    }

    /// Eigenvalues of `(ad H1, ad H2)`.
    pub fn root(self) -> (i64, i64) {
        match self {
            Basis::E3 => (1, 0),
            Basis::E4 => (0, 1),
            Basis::F3 => (-1, 0),
            Basis::F4 => (0, -1),
            Basis::H1 | Basis::H2 => (0, 0),
            Basis::E1 => (1, 1),
            Basis::E2 => (1, -1),
            Basis::F1 => (-1, -1),
            Basis::F2 => (-1, 1),
        }
    }

    /// Eigenvalues of `(ad (H1+H2), ad (H1-H2))`, the `sl2 ⊕ sl2` weight.
    pub fn ktype_weight(self) -> (i64, i64) {
        let (a, b) = self.root();
        (a + b, a - b)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type LieElement = LinComb<Basis>;

pub fn lie(b: Basis) -> LieElement {
    LieElement::basis(b)
}

pub fn is_in_k(x: &LieElement) -> bool {
    x.keys().all(|b| b.is_compact())
}

/// Upper triangle of the commutator table, `[row, col] = sum of (coeff, basis)`.
const TABLE: &[(Basis, Basis, &[(i64, Basis)])] = {
    use Basis::*;
    &[
        (H1, H2, &[]),
        (H1, E1, &[(1, E1)]),
        (H1, E2, &[(1, E2)]),
        (H1, F1, &[(-1, F1)]),
        (H1, F2, &[(-1, F2)]),
        (H1, E3, &[(1, E3)]),
        (H1, E4, &[]),
        (H1, F3, &[(-1, F3)]),
        (H1, F4, &[]),
        (H2, E1, &[(1, E1)]),
        (H2, E2, &[(-1, E2)]),
        (H2, F1, &[(-1, F1)]),
        (H2, F2, &[(1, F2)]),
        (H2, E3, &[]),
        (H2, E4, &[(1, E4)]),
        (H2, F3, &[]),
        (H2, F4, &[(-1, F4)]),
        (E1, E2, &[]),
        (E1, F1, &[(1, H1), (1, H2)]),
        (E1, F2, &[]),
        (E1, E3, &[]),
        (E1, E4, &[]),
        (E1, F3, &[(-1, E4)]),
        (E1, F4, &[(1, E3)]),
        (E2, F1, &[]),
        (E2, F2, &[(1, H1), (-1, H2)]),
        (E2, E3, &[]),
        (E2, E4, &[(1, E3)]),
        (E2, F3, &[(-1, F4)]),
        (E2, F4, &[]),
        (F1, F2, &[]),
        (F1, E3, &[(1, F4)]),
        (F1, E4, &[(-1, F3)]),
        (F1, F3, &[]),
        (F1, F4, &[]),
        (F2, E3, &[(1, E4)]),
        (F2, E4, &[]),
        (F2, F3, &[]),
        (F2, F4, &[(-1, F3)]),
        (E3, E4, &[(2, E1)]),
        (E3, F3, &[(2, H1)]),
        (E3, F4, &[(2, E2)]),
        (E4, F3, &[(2, F2)]),
        (E4, F4, &[(2, H2)]),
        (F3, F4, &[(-2, F1)]),
    ]
};

/// Brackets of all ordered basis pairs.
#[derive(Debug, Clone)]
pub struct StructureTable {
    brackets: Vec<LieElement>,
}

impl StructureTable {
    fn build() -> Self {
        let mut brackets = vec![LieElement::zero(); 100];
        for &(x, y, terms) in TABLE {
            let value: LieElement = terms.iter().map(|&(c, b)| (b, q(c))).collect();
            brackets[y.index() * 10 + x.index()] = -value.clone();
            brackets[x.index() * 10 + y.index()] = value;
        }
        Self { brackets }
    }

    pub fn get() -> &'static StructureTable {
        static TABLE: OnceLock<StructureTable> = OnceLock::new();
        TABLE.get_or_init(Self::build)
    }

    pub fn basis_bracket(&self, x: Basis, y: Basis) -> &LieElement {
        &self.brackets[x.index() * 10 + y.index()]
    }

    /// Number of unordered pairs given explicitly in the table.
    pub fn listed_pairs() -> usize {
        TABLE.len()
    }
}

pub fn basis_bracket(x: Basis, y: Basis) -> &'static LieElement {
    StructureTable::get().basis_bracket(x, y)
}

pub fn bracket(x: &LieElement, y: &LieElement) -> LieElement {
    let mut out = LieElement::zero();
    for (&a, ca) in x {
        for (&b, cb) in y {
            out.add_scaled(basis_bracket(a, b), &(ca * cb));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// 5×5 matrix realization
// ---------------------------------------------------------------------------

/// Dense 5×5 matrix over `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat5(pub [[GaussianScalar; 5]; 5]);

impl Mat5 {
    pub fn zero() -> Self {
        Mat5(std::array::from_fn(|_| {
            std::array::from_fn(|_| GaussianScalar::zero())
        }))
    }

    pub fn mul(&self, other: &Mat5) -> Mat5 {
        let mut out = Mat5::zero();
        for i in 0..5 {
            for j in 0..5 {
                let mut acc = GaussianScalar::zero();
                for k in 0..5 {
                    acc = acc + self.0[i][k].clone() * other.0[k][j].clone();
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Mat5, c: &GaussianScalar) {
        for i in 0..5 {
            for j in 0..5 {
                self.0[i][j] = self.0[i][j].clone() + other.0[i][j].clone() * c.clone();
            }
        }
    }

    pub fn commutator(&self, other: &Mat5) -> Mat5 {
        let mut out = self.mul(other);
        out.add_scaled(&other.mul(self), &GaussianScalar::new(q(-1), q(0)));
        out
    }

    /// `X ↦ -Xᵀ`, the Cartan involution.
    pub fn theta(&self) -> Mat5 {
        let mut out = Mat5::zero();
        for i in 0..5 {
            for j in 0..5 {
                out.0[i][j] = -self.0[j][i].clone();
            }
        }
        out
    }

    pub fn neg(&self) -> Mat5 {
        let mut out = Mat5::zero();
        out.add_scaled(self, &GaussianScalar::new(q(-1), q(0)));
        out
    }
}

/// `(re, im)` coefficient times `e_{row,col}` (1-based).
type Entry = (i64, i64, usize, usize);

fn entries_of(b: Basis) -> (Scalar, &'static [Entry]) {
    use Basis::*;
    match b {
        H1 => (q(1), &[(0, 1, 1, 2), (0, -1, 2, 1)]),
        H2 => (q(1), &[(0, 1, 3, 4), (0, -1, 4, 3)]),
        E1 => (
            qf(1, 2),
            &[
                (1, 0, 1, 3),
                (-1, 0, 2, 4),
                (0, -1, 2, 3),
                (0, -1, 1, 4),
                (-1, 0, 3, 1),
                (1, 0, 4, 2),
                (0, 1, 3, 2),
                (0, 1, 4, 1),
            ],
        ),
        E2 => (
            qf(1, 2),
            &[
                (1, 0, 1, 3),
                (1, 0, 2, 4),
                (0, -1, 2, 3),
                (0, 1, 1, 4),
                (-1, 0, 3, 1),
                (-1, 0, 4, 2),
                (0, 1, 3, 2),
                (0, -1, 4, 1),
            ],
        ),
        F1 => (
            qf(-1, 2),
            &[
                (1, 0, 1, 3),
                (-1, 0, 2, 4),
                (0, 1, 2, 3),
                (0, 1, 1, 4),
                (-1, 0, 3, 1),
                (1, 0, 4, 2),
                (0, -1, 3, 2),
                (0, -1, 4, 1),
            ],
        ),
        F2 => (
            qf(-1, 2),
            &[
                (1, 0, 1, 3),
                (1, 0, 2, 4),
                (0, 1, 2, 3),
                (0, -1, 1, 4),
                (-1, 0, 3, 1),
                (-1, 0, 4, 2),
                (0, -1, 3, 2),
                (0, 1, 4, 1),
            ],
        ),
        E3 => (q(1), &[(1, 0, 1, 5), (0, -1, 2, 5), (1, 0, 5, 1), (0, -1, 5, 2)]),
        E4 => (q(1), &[(1, 0, 3, 5), (0, -1, 4, 5), (1, 0, 5, 3), (0, -1, 5, 4)]),
        F3 => (q(1), &[(1, 0, 1, 5), (0, 1, 2, 5), (1, 0, 5, 1), (0, 1, 5, 2)]),
        F4 => (q(1), &[(1, 0, 3, 5), (0, 1, 4, 5), (1, 0, 5, 3), (0, 1, 5, 4)]),
    }
}

/// The 5×5 matrix of a basis vector in the defining realization.
pub fn basis_matrix(b: Basis) -> Mat5 {
    let (prefactor, entries) = entries_of(b);
    let mut m = Mat5::zero();
    for &(re, im, r, c) in entries {
        let z = GaussianScalar::new(q(re) * &prefactor, q(im) * &prefactor);
        m.0[r - 1][c - 1] = m.0[r - 1][c - 1].clone() + z;
    }
    m
}

pub fn element_matrix(x: &LieElement) -> Mat5 {
    let mut m = Mat5::zero();
    for (&b, c) in x {
        m.add_scaled(&basis_matrix(b), &GaussianScalar::new(c.clone(), q(0)));
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("table mismatch at [{0}, {1}]: matrix commutator gives {2}, table gives {3}")]
    TableMismatch(Basis, Basis, String, String),
    #[error("jacobi failure at ({0}, {1}, {2}): residual {3}")]
    JacobiFailure(Basis, Basis, Basis, String),
}

/// Outcome of a family of exact checks: the number performed and the failures.
#[derive(Debug, Clone)]
pub struct CheckSummary<E> {
    pub checked: usize,
    pub failures: Vec<E>,
}

impl<E> Default for CheckSummary<E> {
    fn default() -> Self {
        Self {
            checked: 0,
            failures: Vec::new(),
        }
    }
}

impl<E> CheckSummary<E> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes all 45 unordered commutators from the matrix realization.
pub fn verify_structure_constants() -> CheckSummary<StructureError> {
    let mut summary = CheckSummary::default();
    for (i, &x) in Basis::ALL.iter().enumerate() {
        for &y in &Basis::ALL[i + 1..] {
            summary.checked += 1;
            let lhs = basis_matrix(x).commutator(&basis_matrix(y));
            let table = basis_bracket(x, y);
            if lhs != element_matrix(table) {
                summary.failures.push(StructureError::TableMismatch(
                    x,
                    y,
                    format!("{:?}", lhs.0),
                    table.to_string(),
                ));
            }
        }
    }
    summary
}

pub fn jacobi_residual(x: Basis, y: Basis, z: Basis) -> LieElement {
    let (x, y, z) = (lie(x), lie(y), lie(z));
    bracket(&x, &bracket(&y, &z)) + bracket(&y, &bracket(&z, &x)) + bracket(&z, &bracket(&x, &y))
}

/// Jacobi identity over all 120 unordered triples of distinct basis vectors.
pub fn verify_jacobi() -> CheckSummary<StructureError> {
    let mut summary = CheckSummary::default();
    for i in 0..10 {
        for j in i + 1..10 {
            for k in j + 1..10 {
                summary.checked += 1;
                let (x, y, z) = (Basis::ALL[i], Basis::ALL[j], Basis::ALL[k]);
                let r = jacobi_residual(x, y, z);
                if !r.is_zero() {
                    summary
                        .failures
                        .push(StructureError::JacobiFailure(x, y, z, r.to_string()));
                }
            }
        }
    }
    summary
}

/// Checks that `θ(X) = -Xᵀ` fixes `k` and negates `p` in the matrix realization.
pub fn verify_cartan_involution() -> CheckSummary<Basis> {
    let mut summary = CheckSummary::default();
    for b in Basis::ALL {
        summary.checked += 1;
        let m = basis_matrix(b);
        let expected = if b.is_compact() { m.clone() } else { m.neg() };
        if m.theta() != expected {
            summary.failures.push(b);
        }
    }
    summary
}

// ---------------------------------------------------------------------------
// Root data
// ---------------------------------------------------------------------------

/// Positive roots and half-sums in `ε`-coordinates (eigenvalues of `H1, H2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub compact_positive: Vec<(Scalar, Scalar)>,
    pub noncompact_positive: Vec<(Scalar, Scalar)>,
    pub rho: (Scalar, Scalar),
    pub rho_k: (Scalar, Scalar),
    pub rho_n: (Scalar, Scalar),
}

fn half_sum(roots: &[(Scalar, Scalar)]) -> (Scalar, Scalar) {
    let two = q(2);
    let (a, b) = roots
        .iter()
        .fold((Scalar::zero(), Scalar::zero()), |(a, b), (x, y)| (a + x, b + y));
    (a / &two, b / two)
}

impl RootDatum {
    pub fn standard() -> Self {
        let from = |b: Basis| {
            let (a, c) = b.root();
            (q(a), q(c))
        };
        let compact_positive = vec![from(Basis::E2), from(Basis::E1)];
        let noncompact_positive = vec![from(Basis::E3), from(Basis::E4)];
        let all: Vec<_> = compact_positive
            .iter()
            .chain(&noncompact_positive)
            .cloned()
            .collect();
        Self {
            rho: half_sum(&all),
            rho_k: half_sum(&compact_positive),
            rho_n: half_sum(&noncompact_positive),
            compact_positive,
            noncompact_positive,
        }
    }
}

/// The invariant form normalized so that `H1, H2` are orthonormal; used for
/// the `g`-Casimir.
pub fn casimir_pairs() -> Vec<(Basis, Basis, Scalar)> {
    use Basis::*;
    let half = qf(1, 2);
    vec![
        (H1, H1, Scalar::one()),
        (H2, H2, Scalar::one()),
        (E1, F1, Scalar::one()),
        (F1, E1, Scalar::one()),
        (E2, F2, Scalar::one()),
        (F2, E2, Scalar::one()),
        (E3, F3, half.clone()),
        (F3, E3, half.clone()),
        (E4, F4, half.clone()),
        (F4, E4, half),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use Basis::*;

    #[test]
    fn table_examples() {
        assert_eq!(bracket(&lie(E3), &lie(E4)), lie(E1).scaled(&q(2)));
        assert!(bracket(&lie(H1), &lie(H1)).is_zero());
        assert_eq!(bracket(&lie(F3), &lie(F4)), lie(F1).scaled(&q(-2)));
        assert_eq!(StructureTable::listed_pairs(), 45);
    }

    #[test]
    fn antisymmetry_of_stored_table() {
        for x in Basis::ALL {
            for y in Basis::ALL {
                assert_eq!(*basis_bracket(x, y), -basis_bracket(y, x));
            }
        }
    }

    #[test]
    fn matrix_examples() {
        let c = basis_matrix(E1).commutator(&basis_matrix(F1));
        assert_eq!(c, element_matrix(&(lie(H1) + lie(H2))));
        let c = basis_matrix(H1).commutator(&basis_matrix(E3));
        assert_eq!(c, basis_matrix(E3));
        let c = basis_matrix(E3).commutator(&basis_matrix(F3));
        assert_eq!(c, element_matrix(&lie(H1).scaled(&q(2))));
    }

    #[test]
    fn structure_constants_match_matrices() {
        let s = verify_structure_constants();
        assert_eq!(s.checked, 45);
        assert!(s.passed(), "{:?}", s.failures);
    }

    #[test]
    fn jacobi_holds() {
        let s = verify_jacobi();
        assert_eq!(s.checked, 120);
        assert!(s.passed(), "{:?}", s.failures);
        assert!(jacobi_residual(H1, E3, F3).is_zero());
        assert!(jacobi_residual(E1, E2, F1).is_zero());
        assert!(jacobi_residual(F2, F2, E3).is_zero());
    }

    #[test]
    fn cartan_grading() {
        for x in Basis::ALL {
            for y in Basis::ALL {
                let z = basis_bracket(x, y);
                let expect_k = x.is_compact() == y.is_compact();
                assert!(z.keys().all(|b| b.is_compact() == expect_k), "[{x},{y}] = {z}");
            }
        }
        assert!(verify_cartan_involution().passed());
    }

    #[test]
    fn roots_match_table() {
        for x in Basis::ALL {
            let (a, b) = x.root();
            assert_eq!(*basis_bracket(H1, x), lie(x).scaled(&q(a)));
            assert_eq!(*basis_bracket(H2, x), lie(x).scaled(&q(b)));
        }
        let rd = RootDatum::standard();
        assert_eq!(rd.rho, (qf(3, 2), qf(1, 2)));
        assert_eq!(rd.rho_k, (q(1), q(0)));
        assert_eq!(rd.rho_n, (qf(1, 2), qf(1, 2)));
        assert_eq!(rd.rho.0, &rd.rho_k.0 + &rd.rho_n.0);
        assert_eq!(rd.rho.1, &rd.rho_k.1 + &rd.rho_n.1);
    }
}
