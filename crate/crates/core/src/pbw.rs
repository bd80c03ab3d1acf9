//! The universal enveloping algebra `U(g)` in PBW normal form.
//!
//! Monomials are products of basis powers in the fixed order of [`Basis`].
//! Products are normal-ordered by left multiplication with single letters,
//! rewriting `x·y·m = y·(x·m) + [x,y]·m` whenever `x > y`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combo::LinComb;
use crate::lie::{basis_bracket, Basis};
use crate::linalg::{q, Echelon, Scalar, SparseVec};

/// `E3^e0 E4^e1 F3^e2 ... F2^e9`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct PbwMonomial {
    exps: [u16; 10],
}

impl PbwMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_exponents(exps: [u16; 10]) -> Self {
        Self { exps }
    }

    pub fn letter(b: Basis) -> Self {
        Self::power(b, 1)
    }

    pub fn power(b: Basis, k: u16) -> Self {
        let mut m = Self::one();
        m.exps[b.index()] = k;
        m
    }

    /// Monomial from letters already in nondecreasing order.
    pub fn from_sorted(letters: &[(Basis, u16)]) -> Self {
        let mut m = Self::one();
        let mut last = None;
        for &(b, k) in letters {
            assert!(last.map_or(true, |l| l < b), "letters out of PBW order");
            last = Some(b);
            m.exps[b.index()] += k;
        }
        m
    }

    pub fn exponents(&self) -> &[u16; 10] {
        &self.exps
    }

    pub fn exponent(&self, b: Basis) -> u16 {
        self.exps[b.index()]
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn first_letter(&self) -> Option<Basis> {
        self.exps.iter().position(|&e| e > 0).map(Basis::from_index)
    }

    /// The letters of the monomial, left to right, with repetition.
    pub fn letters(&self) -> Vec<Basis> {
        let mut out = Vec::with_capacity(self.degree());
        for (i, &e) in self.exps.iter().enumerate() {
            out.extend(std::iter::repeat(Basis::from_index(i)).take(e as usize));
        }
        out
    }

    /// `(H1, H2)`-weight under the adjoint action.
    pub fn root_weight(&self) -> (i64, i64) {
        let mut w = (0, 0);
        for (i, &e) in self.exps.iter().enumerate() {
            let (a, b) = Basis::from_index(i).root();
            w.0 += a * e as i64;
            w.1 += b * e as i64;
        }
        w
    }

    /// Product in the symmetric algebra (exponents add).
    pub fn commutative_mul(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..10 {
            m.exps[i] += other.exps[i];
        }
        m
    }

    fn bumped(&self, b: Basis, delta: i32) -> Self {
        let mut m = *self;
        m.exps[b.index()] = (m.exps[b.index()] as i32 + delta) as u16;
        m
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", Basis::from_index(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            write!(f, "1")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

pub type UEnvElement = LinComb<PbwMonomial>;

pub fn u_one() -> UEnvElement {
    UEnvElement::basis(PbwMonomial::one())
}

pub fn u_letter(b: Basis) -> UEnvElement {
    UEnvElement::basis(PbwMonomial::letter(b))
}

pub fn u_power(b: Basis, k: u16) -> UEnvElement {
    UEnvElement::basis(PbwMonomial::power(b, k))
}

pub fn u_from_lie(x: &crate::lie::LieElement) -> UEnvElement {
    x.map_keys(|&b| PbwMonomial::letter(b))
}

pub fn degree(u: &UEnvElement) -> usize {
    u.keys().map(PbwMonomial::degree).max().unwrap_or(0)
}

thread_local! {
    static LEFT_MUL_CACHE: RefCell<HashMap<(Basis, PbwMonomial), UEnvElement>> =
        RefCell::new(HashMap::new());
}

/// `x · m` in normal form.
pub fn left_mul_basis(x: Basis, m: &PbwMonomial) -> UEnvElement {
    let y = match m.first_letter() {
        Some(y) if y < x => y,
        _ => return UEnvElement::basis(m.bumped(x, 1)),
    };
    if let Some(hit) = LEFT_MUL_CACHE.with(|c| c.borrow().get(&(x, *m)).cloned()) {
        return hit;
    }
    let rest = m.bumped(y, -1);
    let mut out = UEnvElement::zero();
    for (mono, c) in &left_mul_basis(x, &rest) {
        out.add_scaled(&left_mul_basis(y, mono), c);
    }
    for (&z, c) in basis_bracket(x, y) {
        out.add_scaled(&left_mul_basis(z, &rest), c);
    }
    LEFT_MUL_CACHE.with(|cache| cache.borrow_mut().insert((x, *m), out.clone()));
    out
}

/// `x · u` in normal form.
pub fn left_mul(x: Basis, u: &UEnvElement) -> UEnvElement {
    u.map_linear(|m| left_mul_basis(x, m))
}

/// PBW normal form of the product of the letters of `word`.
pub fn normalize(word: &[Basis]) -> UEnvElement {
    word.iter().rev().fold(u_one(), |acc, &x| left_mul(x, &acc))
}

pub fn multiply(a: &UEnvElement, b: &UEnvElement) -> UEnvElement {
    let mut out = UEnvElement::zero();
    for (m, c) in a {
        let prod = m
            .letters()
            .iter()
            .rev()
            .fold(b.clone(), |acc, &x| left_mul(x, &acc));
        out.add_scaled(&prod, c);
    }
    out
}

pub fn commutator(a: &UEnvElement, b: &UEnvElement) -> UEnvElement {
    multiply(a, b) - multiply(b, a)
}

pub fn power(u: &UEnvElement, k: usize) -> UEnvElement {
    (0..k).fold(u_one(), |acc, _| multiply(&acc, u))
}

/// `(ad x)^a u`.
pub fn adjoint_power(x: Basis, a: usize, u: &UEnvElement) -> UEnvElement {
    let xu = u_letter(x);
    (0..a).fold(u.clone(), |acc, _| commutator(&xu, &acc))
}

/// Part of top filtration degree.
pub fn top_part(u: &UEnvElement) -> UEnvElement {
    let d = degree(u);
    let mut out = u.clone();
    out.retain(|m| m.degree() == d);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PbwError {
    #[error("identity failure for k = {k}: lhs {lhs}, rhs {rhs}")]
    IdentityFailure { k: u16, lhs: String, rhs: String },
    #[error("span deficiency at degree {degree}: rank {rank} of {expected} (gap {})", expected - rank)]
    SpanDeficiency {
        degree: usize,
        rank: usize,
        expected: usize,
    },
}

/// The right-hand side `-k(k-1) E3^(k-2) E2 + k E3^(k-1) F4 + E3^k F1`.
pub fn f1e3_rhs(k: u16) -> UEnvElement {
    let kk = q(k as i64);
    let mut rhs = normalize(
        &std::iter::repeat(Basis::E3)
            .take(k as usize)
            .chain([Basis::F1])
            .collect::<Vec<_>>(),
    );
    if k >= 1 {
        let word: Vec<_> = std::iter::repeat(Basis::E3)
            .take(k as usize - 1)
            .chain([Basis::F4])
            .collect();
        rhs.add_scaled(&normalize(&word), &kk);
    }
    if k >= 2 {
        let word: Vec<_> = std::iter::repeat(Basis::E3)
            .take(k as usize - 2)
            .chain([Basis::E2])
            .collect();
        rhs.add_scaled(&normalize(&word), &(-(&kk * (&kk - Scalar::one()))));
    }
    rhs
}

/// Checks `F1 E3^k = -k(k-1) E3^(k-2) E2 + k E3^(k-1) F4 + E3^k F1` exactly.
pub fn verify_f1e3_identity(k: u16) -> Result<UEnvElement, PbwError> {
    let lhs = multiply(&u_letter(Basis::F1), &u_power(Basis::E3, k));
    let rhs = f1e3_rhs(k);
    if lhs == rhs {
        Ok(lhs)
    } else {
        Err(PbwError::IdentityFailure {
            k,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    }
}

/// Number of PBW monomials of degree at most `d`, i.e. `C(d+10, 10)`.
pub fn monomial_count(d: usize) -> usize {
    (1..=10).fold(1usize, |acc, i| acc * (d + i) / i)
}

/// All monomials in the given letters of total degree exactly `d`.
pub fn monomials_of_degree(letters: &[Basis], d: usize) -> Vec<PbwMonomial> {
    fn rec(letters: &[Basis], d: usize, cur: PbwMonomial, out: &mut Vec<PbwMonomial>) {
        match letters.split_first() {
            None => {
                if d == 0 {
                    out.push(cur);
                }
            }
            Some((&b, rest)) => {
                for e in 0..=d {
                    rec(rest, d - e, cur.bumped(b, e as i32), out);
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(letters, d, PbwMonomial::one(), &mut out);
    out
}

/// `E3 F3 + E4 F4`.
pub fn p_casimir_half() -> UEnvElement {
    normalize(&[Basis::E3, Basis::F3]) + normalize(&[Basis::E4, Basis::F4])
}

/// `(ad F1)^a (ad F2)^b E3^k`, the highest-weight-generated harmonic elements.
pub fn harmonic_element(a: usize, b: usize, k: u16) -> UEnvElement {
    adjoint_power(Basis::F1, a, &adjoint_power(Basis::F2, b, &u_power(Basis::E3, k)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanReport {
    pub degree: usize,
    pub elements: usize,
    pub rank: usize,
    pub expected: usize,
}

/// Checks that `x (E3F3+E4F4)^t y` spans `U_d(g)`, with
/// `x = (ad F1)^a (ad F2)^b E3^k` (`a, b ≤ k`) and `y` a monomial in `k`.
pub fn verify_ug_span(d: usize) -> Result<SpanReport, PbwError> {
    let theta = p_casimir_half();
    let theta_pows: Vec<UEnvElement> = (0..=d / 2).map(|t| power(&theta, t)).collect();
    let k_monos: Vec<Vec<PbwMonomial>> = (0..=d)
        .map(|j| monomials_of_degree(&Basis::K, j))
        .collect();

    let mut blocks: BTreeMap<(i64, i64), (BTreeMap<PbwMonomial, usize>, Echelon)> =
        BTreeMap::new();
    let mut elements = 0;
    for k in 0..=d {
        for a in 0..=k {
            for b in 0..=k {
                let x = harmonic_element(a, b, k as u16);
                for (t, th) in theta_pows.iter().enumerate() {
                    if k + 2 * t > d {
                        break;
                    }
                    let xt = multiply(&x, th);
                    for ys in &k_monos[..=d - k - 2 * t] {
                        for y in ys {
                            let el = multiply(&xt, &UEnvElement::basis(*y));
                            elements += 1;
                            let w = el.keys().next().map(|m| m.root_weight()).unwrap_or((0, 0));
                            let (index, ech) = blocks.entry(w).or_default();
                            let row: SparseVec = el
                                .iter()
                                .map(|(m, c)| {
                                    let n = index.len();
                                    (*index.entry(*m).or_insert(n), c.clone())
                                })
                                .collect();
                            ech.insert_vec(&row);
                        }
                    }
                }
            }
        }
    }
    let rank = blocks.values().map(|(_, e)| e.rank()).sum();
    let expected = monomial_count(d);
    let report = SpanReport {
        degree: d,
        elements,
        rank,
        expected,
    };
    if rank == expected {
        Ok(report)
    } else {
        Err(PbwError::SpanDeficiency {
            degree: d,
            rank,
            expected,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Basis::*;

    fn m(letters: &[(Basis, u16)]) -> UEnvElement {
        UEnvElement::basis(PbwMonomial::from_sorted(letters))
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[F1, E3]), m(&[(E3, 1), (F1, 1)]) + m(&[(F4, 1)]));
        assert_eq!(normalize(&[E3, F1]), m(&[(E3, 1), (F1, 1)]));
        assert_eq!(normalize(&[E3, F3]), m(&[(E3, 1), (F3, 1)]));
        // E3 F3 = F3 E3 + 2 H1
        assert_eq!(
            normalize(&[F3, E3]),
            m(&[(E3, 1), (F3, 1)]) - m(&[(H1, 1)]).scaled(&q(2))
        );
    }

    #[test]
    fn multiply_examples() {
        let x = normalize(&[F2, H1, E3]);
        assert_eq!(multiply(&u_one(), &x), x);
        let lhs = multiply(&u_letter(F1), &u_power(E3, 2));
        let rhs = m(&[(E3, 2), (F1, 1)]) + m(&[(E3, 1), (F4, 1)]).scaled(&q(2))
            - m(&[(E2, 1)]).scaled(&q(2));
        assert_eq!(lhs, rhs);
        assert_eq!(commutator(&u_letter(E3), &u_letter(E4)), u_letter(E1).scaled(&q(2)));
    }

    #[test]
    fn f1e3_identity_small_k() {
        assert_eq!(verify_f1e3_identity(0).unwrap(), u_letter(F1));
        assert_eq!(
            verify_f1e3_identity(1).unwrap(),
            m(&[(E3, 1), (F1, 1)]) + m(&[(F4, 1)])
        );
        for k in 2..=8 {
            verify_f1e3_identity(k).unwrap();
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint_power(F2, 1, &u_letter(E3)), u_letter(E4));
        assert_eq!(adjoint_power(H1, 1, &u_letter(E3)), u_letter(E3));
        let u = normalize(&[F3, E1, E4]);
        assert_eq!(adjoint_power(F1, 0, &u), u);
        // (ad F2) E3^k = k E3^(k-1) E4 - k(k-1) E3^(k-2) E1 in the enveloping algebra
        // up to reordering; check k = 3 by independent normalization.
        let lhs = adjoint_power(F2, 1, &u_power(E3, 3));
        let rhs = normalize(&[E4, E3, E3]) + normalize(&[E3, E4, E3]) + normalize(&[E3, E3, E4]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(0), 1);
        assert_eq!(monomial_count(1), 11);
        assert_eq!(monomial_count(5), 3003);
        let total: usize = (0..=3).map(|j| monomials_of_degree(&Basis::ALL, j).len()).sum();
        assert_eq!(total, monomial_count(3));
    }

    #[test]
    fn ug_span_small() {
        assert_eq!(verify_ug_span(0).unwrap().rank, 1);
        assert_eq!(verify_ug_span(1).unwrap().rank, 11);
        let r = verify_ug_span(3).unwrap();
        assert_eq!(r.rank, 286);
        assert_eq!(r.elements, 286);
    }
}
