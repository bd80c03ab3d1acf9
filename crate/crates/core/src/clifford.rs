//! The Clifford algebra `C(p)`, the spin module `S`, the map `α: k → C(p)`,
//! the algebra `A = U(g) ⊗ C(p)` and the two Dirac operators.
//!
//! The Clifford relation is `xy + yx = -2B(x,y)` with `B(E3,F3) = B(E4,F4) = 1`.
//! On `S = Λ(span{E3, E4})` the vectors `E3, E4` act by exterior
//! multiplication and `F3, F4` by `-2` times contraction.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combo::LinComb;
use crate::lie::{basis_bracket, is_in_k, lie, Basis, LieElement};
use crate::linalg::{kernel_basis, q, qf, Scalar, SparseMatrix};
use crate::pbw::{self, u_from_lie, u_one, PbwMonomial, UEnvElement};

/// A product of distinct `p`-basis vectors in increasing order, encoded as a
/// bitmask with `E3 = 1, E4 = 2, F3 = 4, F4 = 8`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Blade(pub u8);

impl Blade {
    pub const ONE: Blade = Blade(0);
    pub const TOP: Blade = Blade(15);

    pub fn all() -> impl Iterator<Item = Blade> {
        (0u8..16).map(Blade)
    }

    pub fn of(letters: &[Basis]) -> Blade {
        let mut bits = 0u8;
        let mut last = None;
        for &b in letters {
            assert!(!b.is_compact(), "{b} is not in p");
            assert!(last.map_or(true, |l| l < b), "letters out of order");
            last = Some(b);
            bits |= bit(b);
        }
        Blade(bits)
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn letters(self) -> Vec<Basis> {
        Basis::P
            .iter()
            .copied()
            .filter(|&b| self.0 & bit(b) != 0)
            .collect()
    }

    fn first(self) -> Option<Basis> {
        self.letters().first().copied()
    }
}

fn bit(b: Basis) -> u8 {
    1 << b.index()
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.letters() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "1")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

pub type CliffordElement = LinComb<Blade>;

/// `B(x, y)` on the `p`-basis.
pub fn form(x: Basis, y: Basis) -> Scalar {
    use Basis::*;
    match (x, y) {
        (E3, F3) | (F3, E3) | (E4, F4) | (F4, E4) => Scalar::one(),
        _ => Scalar::zero(),
    }
}

/// Dual basis of `p` with respect to `B`.
pub fn dual(b: Basis) -> Basis {
    use Basis::*;
    match b {
        E3 => F3,
        E4 => F4,
        F3 => E3,
        F4 => E4,
        _ => panic!("{b} is not in p"),
    }
}

pub fn c_one() -> CliffordElement {
    CliffordElement::basis(Blade::ONE)
}

pub fn c_word(letters: &[Basis]) -> CliffordElement {
    letters
        .iter()
        .rev()
        .fold(c_one(), |acc, &g| generator_mul(g, &acc))
}

/// The image of `x ∈ p` in `C(p)`.
pub fn c_from_p(x: &LieElement) -> CliffordElement {
    x.map_keys(|&b| Blade::of(&[b]))
}

fn generator_mul_blade(g: Basis, blade: Blade) -> CliffordElement {
    let Some(b1) = blade.first() else {
        return CliffordElement::basis(Blade(bit(g)));
    };
    if g < b1 {
        return CliffordElement::basis(Blade(blade.0 | bit(g)));
    }
    let rest = Blade(blade.0 & !bit(b1));
    if g == b1 {
        return CliffordElement::term(rest, -form(g, g));
    }
    // g b1 rest = -b1 (g rest) - 2B(g,b1) rest
    let mut out = -generator_mul(b1, &generator_mul_blade(g, rest));
    out.add_term(rest, q(-2) * form(g, b1));
    out
}

fn generator_mul(g: Basis, c: &CliffordElement) -> CliffordElement {
    c.map_linear(|&b| generator_mul_blade(g, b))
}

fn blade_table() -> &'static Vec<CliffordElement> {
    static TABLE: OnceLock<Vec<CliffordElement>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(256);
        for a in Blade::all() {
            for b in Blade::all() {
                let prod = a
                    .letters()
                    .iter()
                    .rev()
                    .fold(CliffordElement::basis(b), |acc, &g| generator_mul(g, &acc));
                table.push(prod);
            }
        }
        table
    })
}

pub fn blade_mul(a: Blade, b: Blade) -> &'static CliffordElement {
    &blade_table()[a.0 as usize * 16 + b.0 as usize]
}

pub fn clifford_multiply(a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
    let mut out = CliffordElement::zero();
    for (&x, cx) in a {
        for (&y, cy) in b {
            out.add_scaled(blade_mul(x, y), &(cx * cy));
        }
    }
    out
}

pub fn clifford_commutator(a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
    clifford_multiply(a, b) - clifford_multiply(b, a)
}

/// Spin module basis `1, E3, E4, E3∧E4`, encoded as subsets of `{E3, E4}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinBasis(pub u8);

impl SpinBasis {
    pub const ONE: SpinBasis = SpinBasis(0);
    pub const E3: SpinBasis = SpinBasis(1);
    pub const E4: SpinBasis = SpinBasis(2);
    pub const E3E4: SpinBasis = SpinBasis(3);

    pub fn all() -> [SpinBasis; 4] {
        [Self::ONE, Self::E3, Self::E4, Self::E3E4]
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// `(H1, H2)`-weight under `α`.
    pub fn weight(self) -> (Scalar, Scalar) {
        let half = |on: bool| if on { qf(1, 2) } else { qf(-1, 2) };
        (half(self.0 & 1 != 0), half(self.0 & 2 != 0))
    }
}

impl fmt::Display for SpinBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["1", "E3", "E4", "E3^E4"][self.index()])
    }
}

impl fmt::Debug for SpinBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type SpinVector = LinComb<SpinBasis>;

fn generator_on_spin(g: Basis, s: SpinBasis) -> Option<(Scalar, SpinBasis)> {
    use Basis::*;
    match g {
        // wedge from the left
        E3 => (s.0 & 1 == 0).then(|| (Scalar::one(), SpinBasis(s.0 | 1))),
        E4 => (s.0 & 2 == 0).then(|| {
            let sign = if s.0 & 1 != 0 { -1 } else { 1 };
            (q(sign), SpinBasis(s.0 | 2))
        }),
        // -2 × contraction
        F3 => (s.0 & 1 != 0).then(|| (q(-2), SpinBasis(s.0 & !1))),
        F4 => (s.0 & 2 != 0).then(|| {
            let sign = if s.0 & 1 != 0 { -1 } else { 1 };
            (q(-2 * sign), SpinBasis(s.0 & !2))
        }),
        _ => panic!("{g} is not in p"),
    }
}

fn blade_on_spin(blade: Blade, s: SpinBasis) -> SpinVector {
    let mut cur = Some((Scalar::one(), s));
    for g in blade.letters().into_iter().rev() {
        cur = cur.and_then(|(c, v)| generator_on_spin(g, v).map(|(c2, w)| (c * c2, w)));
    }
    match cur {
        Some((c, v)) => SpinVector::term(v, c),
        None => SpinVector::zero(),
    }
}

pub fn spin_action(c: &CliffordElement, s: &SpinVector) -> SpinVector {
    let mut out = SpinVector::zero();
    for (&b, cb) in c {
        for (&v, cv) in s {
            out.add_scaled(&blade_on_spin(b, v), &(cb * cv));
        }
    }
    out
}

/// Matrix of a Clifford element on `S` (rows and columns indexed by [`SpinBasis`]).
pub fn spin_matrix(c: &CliffordElement) -> [[Scalar; 4]; 4] {
    let mut m: [[Scalar; 4]; 4] = Default::default();
    for s in SpinBasis::all() {
        for (v, x) in &spin_action(c, &SpinVector::basis(s)) {
            m[v.index()][s.index()] = x.clone();
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("not in k: {0}")]
    NotInK(String),
    #[error("identity failure in {name}: residual {residual}")]
    IdentityFailure { name: String, residual: String },
}

/// `α(X) = -¼ Σ_j [X, b_j] d_j` over dual bases `b_j, d_j` of `p`.
pub fn alpha(x: &LieElement) -> Result<CliffordElement, CliffordError> {
    if !is_in_k(x) {
        return Err(CliffordError::NotInK(x.to_string()));
    }
    let mut out = CliffordElement::zero();
    for (&b, c) in x {
        out.add_scaled(alpha_basis(b), c);
    }
    Ok(out)
}

fn alpha_basis(b: Basis) -> &'static CliffordElement {
    static TABLE: OnceLock<Vec<CliffordElement>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        Basis::ALL
            .iter()
            .map(|&x| {
                if !x.is_compact() {
                    return CliffordElement::zero();
                }
                let mut out = CliffordElement::zero();
                for bj in Basis::P {
                    let prod = clifford_multiply(
                        &c_from_p(basis_bracket(x, bj)),
                        &c_word(&[dual(bj)]),
                    );
                    out.add_scaled(&prod, &qf(-1, 4));
                }
                out
            })
            .collect()
    });
    &table[b.index()]
}

fn alpha_of(b: Basis) -> CliffordElement {
    alpha_basis(b).clone()
}

// ---------------------------------------------------------------------------
// A = U(g) ⊗ C(p)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ATerm {
    pub u: PbwMonomial,
    pub c: Blade,
}

impl fmt::Display for ATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}⊗{:?}", self.u, self.c)
    }
}

impl fmt::Debug for ATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type AElement = LinComb<ATerm>;

pub fn tensor(u: &UEnvElement, c: &CliffordElement) -> AElement {
    let mut out = AElement::zero();
    for (&m, cu) in u {
        for (&b, cc) in c {
            out.add_term(ATerm { u: m, c: b }, cu * cc);
        }
    }
    out
}

pub fn a_one() -> AElement {
    tensor(&u_one(), &c_one())
}

/// `x ⊗ 1` for `x ∈ U(g)`.
pub fn u_part(u: &UEnvElement) -> AElement {
    tensor(u, &c_one())
}

/// `1 ⊗ c` for `c ∈ C(p)`.
pub fn c_part(c: &CliffordElement) -> AElement {
    tensor(&u_one(), c)
}

pub fn a_multiply(a: &AElement, b: &AElement) -> AElement {
    let mut out = AElement::zero();
    for (x, cx) in a {
        for (y, cy) in b {
            let u = pbw::multiply(&UEnvElement::basis(x.u), &UEnvElement::basis(y.u));
            let c = blade_mul(x.c, y.c);
            let coeff = cx * cy;
            for (m, cm) in &u {
                for (bl, cb) in c {
                    out.add_term(ATerm { u: *m, c: *bl }, &coeff * cm * cb);
                }
            }
        }
    }
    out
}

pub fn a_commutator(a: &AElement, b: &AElement) -> AElement {
    a_multiply(a, b) - a_multiply(b, a)
}

pub fn a_anticommutator(a: &AElement, b: &AElement) -> AElement {
    a_multiply(a, b) + a_multiply(b, a)
}

fn lb(b: Basis) -> UEnvElement {
    pbw::u_letter(b)
}

/// `D = E3⊗F3 + E4⊗F4 + F3⊗E3 + F4⊗E4`.
pub fn build_dirac() -> AElement {
    let mut d = AElement::zero();
    for b in Basis::P {
        d += &tensor(&lb(b), &c_word(&[dual(b)]));
    }
    d
}

/// The six summands of the cubic `k`-Dirac operator.
pub fn k_dirac_summands() -> Vec<(LieElement, CliffordElement)> {
    use Basis::*;
    let two = q(2);
    let hp = lie(H1) + lie(H2);
    let hm = lie(H1) - lie(H2);
    vec![
        (lie(E1), alpha_of(F1).scaled(&two)),
        (lie(E2), alpha_of(F2).scaled(&two)),
        (lie(F1), alpha_of(E1).scaled(&two)),
        (lie(F2), alpha_of(E2).scaled(&two)),
        (hm.clone(), alpha(&hm).expect("k")),
        (hp.clone(), alpha(&hp).expect("k")),
    ]
}

pub fn build_k_dirac() -> AElement {
    let mut out = AElement::zero();
    for (x, c) in k_dirac_summands() {
        out += &tensor(&u_from_lie(&x), &c);
    }
    out
}

/// `X_Δ = X ⊗ 1 + 1 ⊗ α(X)`.
pub fn diagonal_embed(x: &LieElement) -> Result<AElement, CliffordError> {
    let a = alpha(x)?;
    Ok(u_part(&u_from_lie(x)) + c_part(&a))
}

/// `Ω_k = E1F1 + F1E1 + ½(H1+H2)² + E2F2 + F2E2 + ½(H1−H2)²`.
pub fn casimir_k() -> UEnvElement {
    use Basis::*;
    let sq = |x: &UEnvElement| pbw::multiply(x, x).scaled(&qf(1, 2));
    let hp = lb(H1) + lb(H2);
    let hm = lb(H1) - lb(H2);
    pbw::normalize(&[E1, F1])
        + pbw::normalize(&[F1, E1])
        + pbw::normalize(&[E2, F2])
        + pbw::normalize(&[F2, E2])
        + sq(&hp)
        + sq(&hm)
}

/// `Ω_k` written in the diagonal generators `X_Δ`.
pub fn casimir_k_delta() -> AElement {
    use Basis::*;
    let d = |x: &LieElement| diagonal_embed(x).expect("k");
    let sq = |x: LieElement| {
        let y = d(&x);
        a_multiply(&y, &y).scaled(&qf(1, 2))
    };
    let pair = |a: Basis, b: Basis| {
        let (x, y) = (d(&lie(a)), d(&lie(b)));
        a_anticommutator(&x, &y)
    };
    pair(E1, F1) + pair(E2, F2) + sq(lie(H1) + lie(H2)) + sq(lie(H1) - lie(H2))
}

/// `Ω_g = Ω_k + ½(E3F3 + F3E3 + E4F4 + F4E4)`.
pub fn casimir_g() -> UEnvElement {
    use Basis::*;
    let p_part = pbw::normalize(&[E3, F3])
        + pbw::normalize(&[F3, E3])
        + pbw::normalize(&[E4, F4])
        + pbw::normalize(&[F4, E4]);
    casimir_k() + p_part.scaled(&qf(1, 2))
}

/// Right-hand side of `Ω_{k_Δ} = Ω_k + D_k + ½·1⊗α(H1+H2)² + ½·1⊗α(H1−H2)²
/// + 1⊗(α(E1)α(F1) + α(F1)α(E1) + α(E2)α(F2) + α(F2)α(E2))`.
pub fn casimir_k_delta_expansion() -> AElement {
    use Basis::*;
    let sq = |x: LieElement| {
        let a = alpha(&x).expect("k");
        clifford_multiply(&a, &a).scaled(&qf(1, 2))
    };
    let pair = |x: Basis, y: Basis| {
        let (a, b) = (alpha_of(x), alpha_of(y));
        clifford_multiply(&a, &b) + clifford_multiply(&b, &a)
    };
    let c = sq(lie(H1) + lie(H2)) + sq(lie(H1) - lie(H2)) + pair(E1, F1) + pair(E2, F2);
    u_part(&casimir_k()) + build_k_dirac() + c_part(&c)
}

fn require_zero(name: &str, residual: AElement) -> Result<(), CliffordError> {
    if residual.is_zero() {
        Ok(())
    } else {
        Err(CliffordError::IdentityFailure {
            name: name.to_string(),
            residual: residual.to_string(),
        })
    }
}

pub fn verify_casimir_identity() -> Result<(), CliffordError> {
    require_zero(
        "Omega_k_delta expansion",
        casimir_k_delta() - casimir_k_delta_expansion(),
    )
}

/// Result of one named operator identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub residual: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_none()
    }
}

fn check(name: &'static str, residual: AElement) -> IdentityCheck {
    IdentityCheck {
        name,
        residual: (!residual.is_zero()).then(|| residual.to_string()),
    }
}

fn check_spin(name: &'static str, ok: bool) -> IdentityCheck {
    IdentityCheck {
        name,
        residual: (!ok).then(|| "spin-module mismatch".to_string()),
    }
}

fn t(x: Basis, y: Basis) -> AElement {
    tensor(&lb(x), &c_word(&[y]))
}

/// All operator identities used in the reduction of the induced module.
pub fn verify_operator_identities() -> Vec<IdentityCheck> {
    use Basis::*;
    let d = build_dirac();
    let dk = build_k_dirac();
    let d2 = a_multiply(&d, &d);
    let hp = u_part(&(lb(H1) + lb(H2)));
    let ef = u_part(&(pbw::normalize(&[E3, F3]) + pbw::normalize(&[E4, F4])));
    let fe = u_part(&(pbw::normalize(&[F3, E3]) + pbw::normalize(&[F4, E4])));
    let half = qf(1, 2);

    let mut out = vec![
        check(
            "connection (E3F3+E4F4)",
            ef - (dk.clone() - d2.scaled(&half) + hp.clone()),
        ),
        check(
            "connection (F3E3+F4E4)",
            fe - (dk - d2.scaled(&half) - hp),
        ),
    ];

    let e3f4 = c_part(&c_word(&[E3, F4]));
    let e4f3 = c_part(&c_word(&[E4, F3]));
    let diff = c_part(&(c_word(&[E3, F3]) - c_word(&[E4, F4])));
    let two = q(2);
    out.push(check(
        "[D, 1⊗E3F4]",
        a_commutator(&d, &e3f4) + (t(E3, F4) - t(F4, E3)).scaled(&two),
    ));
    out.push(check(
        "[D, 1⊗E4F3]",
        a_commutator(&d, &e4f3) + (t(E4, F3) - t(F3, E4)).scaled(&two),
    ));
    out.push(check(
        "[D, 1⊗(E3F3-E4F4)]",
        a_commutator(&d, &diff) + d.scaled(&two) - (t(E4, F4) + t(F3, E3)).scaled(&q(4)),
    ));
    out.push(check(
        "D split",
        d.clone() - (t(E4, F4) + t(F3, E3)) - (t(E3, F3) + t(F4, E4)),
    ));

    let vanish = [
        ("E3F4", c_word(&[E3, F4])),
        ("E4F3", c_word(&[E4, F3])),
        ("E3F3-E4F4", c_word(&[E3, F3]) - c_word(&[E4, F4])),
    ];
    let names_vanish = [
        "E3F4 kills 1 and E3^E4",
        "E4F3 kills 1 and E3^E4",
        "E3F3-E4F4 kills 1 and E3^E4",
    ];
    let names_proj = ["E3F4 p' = E3F4", "E4F3 p' = E4F3", "(E3F3-E4F4) p' = E3F3-E4F4"];
    for (i, (_, op)) in vanish.iter().enumerate() {
        let kills = [SpinBasis::ONE, SpinBasis::E3E4]
            .iter()
            .all(|&s| spin_action(op, &SpinVector::basis(s)).is_zero());
        out.push(check_spin(names_vanish[i], kills));
        let proj = |s: SpinBasis| -> SpinVector {
            if s == SpinBasis::E3 || s == SpinBasis::E4 {
                SpinVector::basis(s)
            } else {
                SpinVector::zero()
            }
        };
        let same = SpinBasis::all().iter().all(|&s| {
            spin_action(op, &proj(s)) == spin_action(op, &SpinVector::basis(s))
        });
        out.push(check_spin(names_proj[i], same));
    }
    out
}

pub fn verify_k_dirac_invariance() -> Vec<IdentityCheck> {
    let dk = build_k_dirac();
    Basis::K
        .iter()
        .map(|&x| {
            let xd = diagonal_embed(&lie(x)).unwrap();
            check(
                match x {
                    Basis::H1 => "[H1Δ, D_k]",
                    Basis::H2 => "[H2Δ, D_k]",
                    Basis::E1 => "[E1Δ, D_k]",
                    Basis::E2 => "[E2Δ, D_k]",
                    Basis::F1 => "[F1Δ, D_k]",
                    _ => "[F2Δ, D_k]",
                },
                a_commutator(&xd, &dk),
            )
        })
        .collect()
}

/// `K`-invariants of `C(p)`: the joint kernel of `c ↦ [α(x), c]`.
pub fn clifford_k_invariants() -> Vec<CliffordElement> {
    let mut m = SparseMatrix::zeros(16 * 6, 16);
    for (xi, &x) in Basis::K.iter().enumerate() {
        let ax = alpha_of(x);
        for b in Blade::all() {
            let img = clifford_commutator(&ax, &CliffordElement::basis(b));
            for (r, c) in &img {
                m.set(xi * 16 + r.0 as usize, b.0 as usize, c.clone());
            }
        }
    }
    kernel_basis(&m)
        .into_iter()
        .map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, c)| (Blade(i as u8), c))
                .collect()
        })
        .collect()
}

/// The generator of `C(p)^K` beyond scalars, normalized to have top-blade
/// coefficient one and no scalar part.
pub fn clifford_k_generator() -> Option<CliffordElement> {
    let inv = clifford_k_invariants();
    if inv.len() != 2 {
        return None;
    }
    // Find the combination with zero scalar part.
    let (a, b) = (&inv[0], &inv[1]);
    let (sa, sb) = (a.coeff(&Blade::ONE), b.coeff(&Blade::ONE));
    let g = if sb.is_zero() {
        b.clone()
    } else {
        a.clone() - b.scaled(&(sa / sb))
    };
    let top = g.coeff(&Blade::TOP);
    if top.is_zero() {
        return None;
    }
    Some(g.scaled(&(Scalar::one() / top)))
}

/// Weights and highest weight vectors of `S` as a `k`-module via `α`.
pub fn verify_spin_decomposition() -> bool {
    use Basis::*;
    let h1 = alpha_of(H1);
    let h2 = alpha_of(H2);
    let weights_ok = SpinBasis::all().iter().all(|&s| {
        let v = SpinVector::basis(s);
        let (w1, w2) = s.weight();
        spin_action(&h1, &v) == v.scaled(&w1) && spin_action(&h2, &v) == v.scaled(&w2)
    });
    let raising_kill = |s: SpinBasis| {
        [E1, E2]
            .iter()
            .all(|&e| spin_action(&alpha_of(e), &SpinVector::basis(s)).is_zero())
    };
    let lowered = spin_action(&alpha_of(F1), &SpinVector::basis(SpinBasis::E3E4));
    weights_ok
        && raising_kill(SpinBasis::E3E4)
        && raising_kill(SpinBasis::E3)
        && lowered.proportionality(&SpinVector::basis(SpinBasis::ONE)).is_some()
        && !lowered.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Basis::*;

    #[test]
    fn clifford_examples() {
        assert!(c_word(&[E3, E3]).is_zero());
        assert_eq!(c_word(&[E3, F3]) + c_word(&[F3, E3]), c_one().scaled(&q(-2)));
        let b = c_word(&[E4, F3]);
        assert_eq!(clifford_multiply(&c_one(), &b), b);
    }

    #[test]
    fn clifford_relation_on_generators() {
        for x in Basis::P {
            for y in Basis::P {
                let lhs = c_word(&[x, y]) + c_word(&[y, x]);
                assert_eq!(lhs, c_one().scaled(&(q(-2) * form(x, y))), "{x} {y}");
            }
        }
    }

    #[test]
    fn spin_examples() {
        let top = SpinVector::basis(SpinBasis::E3E4);
        assert_eq!(
            spin_action(&c_word(&[F4]), &top),
            SpinVector::term(SpinBasis::E3, q(2))
        );
        assert_eq!(
            spin_action(&c_word(&[F3]), &top),
            SpinVector::term(SpinBasis::E4, q(-2))
        );
        assert!(spin_action(&c_word(&[F3]), &SpinVector::basis(SpinBasis::ONE)).is_zero());
    }

    #[test]
    fn spin_is_a_module() {
        for a in Blade::all() {
            for b in Blade::all() {
                for s in SpinBasis::all() {
                    let v = SpinVector::basis(s);
                    let ab = clifford_multiply(&CliffordElement::basis(a), &CliffordElement::basis(b));
                    let lhs = spin_action(&ab, &v);
                    let rhs = spin_action(
                        &CliffordElement::basis(a),
                        &spin_action(&CliffordElement::basis(b), &v),
                    );
                    assert_eq!(lhs, rhs, "{a:?} {b:?} {s}");
                }
            }
        }
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(&lie(E2)).unwrap(), c_word(&[E3, F4]).scaled(&qf(-1, 2)));
        assert_eq!(alpha(&lie(F1)).unwrap(), c_word(&[F3, F4]).scaled(&qf(1, 2)));
        assert!(alpha(&lie(E3)).is_err());
    }

    #[test]
    fn alpha_is_homomorphism() {
        for (i, &x) in Basis::K.iter().enumerate() {
            for &y in &Basis::K[i + 1..] {
                let lhs = alpha(basis_bracket(x, y)).unwrap();
                let rhs = clifford_commutator(&alpha_of(x), &alpha_of(y));
                assert_eq!(lhs, rhs, "{x} {y}");
            }
        }
    }

    #[test]
    fn dirac_shape() {
        let d = build_dirac();
        assert_eq!(d.len(), 4);
        let key = |u: Basis, c: Basis| ATerm {
            u: PbwMonomial::letter(u),
            c: Blade::of(&[c]),
        };
        assert_eq!(d.coeff(&key(E3, F3)), q(1));
        assert_eq!(d.coeff(&key(F4, E4)), q(1));
        let dk = build_k_dirac();
        assert!(dk.keys().all(|k| k.c.grade() % 2 == 0));
        let (x, c) = &k_dirac_summands()[0];
        assert_eq!(*x, lie(E1));
        assert_eq!(*c, c_word(&[F3, F4]));
    }

    #[test]
    fn diagonal_embedding() {
        let e1 = diagonal_embed(&lie(E1)).unwrap();
        assert_eq!(e1.coeff(&ATerm { u: PbwMonomial::letter(E1), c: Blade::ONE }), q(1));
        let f1 = diagonal_embed(&lie(F1)).unwrap();
        let h = diagonal_embed(&(lie(H1) + lie(H2))).unwrap();
        assert_eq!(a_commutator(&e1, &f1), h);
        assert!(diagonal_embed(&LieElement::zero()).unwrap().is_zero());
        assert!(diagonal_embed(&lie(F4)).is_err());
    }

    #[test]
    fn operator_identities_hold() {
        for c in verify_operator_identities() {
            assert!(c.passed(), "{}: {:?}", c.name, c.residual);
        }
        for c in verify_k_dirac_invariance() {
            assert!(c.passed(), "{}: {:?}", c.name, c.residual);
        }
    }

    #[test]
    fn casimirs() {
        verify_casimir_identity().unwrap();
        let omega = casimir_g();
        for b in Basis::ALL {
            assert!(pbw::commutator(&omega, &lb(b)).is_zero(), "{b}");
        }
        let ok = casimir_k();
        for b in Basis::K {
            assert!(pbw::commutator(&ok, &lb(b)).is_zero(), "{b}");
        }
    }

    #[test]
    fn k_invariants_of_clifford() {
        let inv = clifford_k_invariants();
        assert_eq!(inv.len(), 2);
        let g = clifford_k_generator().unwrap();
        assert!(g.coeff(&Blade::ONE).is_zero());
        for x in Basis::K {
            assert!(clifford_commutator(&alpha_of(x), &g).is_zero());
        }
        assert!(verify_spin_decomposition());
    }
}
