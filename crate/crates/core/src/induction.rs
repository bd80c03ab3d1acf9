//! The spanning set of `Ind_D(W) = A ⊗_B W`, the action map
//! `φ(a ⊗ w) = a·w` into `X ⊗ S`, and the `A^K` generators.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::clifford::{
    a_commutator, a_multiply, build_dirac, build_k_dirac, clifford_k_generator, c_part,
    diagonal_embed, tensor, u_part, AElement,
};
use crate::cohomology::{
    act_a, act_tensor, apply_label, xs_basis_labels, xs_rank, HDSpace, SpanLabel, SpanWord,
    SpinWord, XSVector,
};
use crate::discrete::{DiscreteError, LambdaParam, ModuleTruncation};
use crate::lie::{lie, Basis};
use crate::linalg::qf;
use crate::pbw::{self, UEnvElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error(transparent)]
    Module(#[from] DiscreteError),
    #[error("truncation overflow: {label} has word degree {degree} > level {level}")]
    Overflow {
        label: String,
        degree: u32,
        level: u32,
    },
}

/// The spanning set of `A ⊗_B W` with word degree `k ≤ t`, in the order of
/// its statement: the `F2^c E3^k` block, then the `F1^a F2^b E3^k` block.
pub fn spanning_set(lambda: LambdaParam, t: u32) -> Vec<SpanLabel> {
    let (m0, n0) = (lambda.m0(), lambda.n0());
    let mut out = Vec::new();
    for spin in SpinWord::FIRST {
        for k in 0..=t {
            for c in 0..=k {
                for s in 0..m0 {
                    for l in 0..=n0 {
                        out.push(SpanLabel { word: SpanWord::F2E3 { c, k }, spin, s, l });
                    }
                }
            }
        }
    }
    for spin in SpinWord::SECOND {
        for k in 0..=t {
            for a in 0..=k {
                for b in 0..=k {
                    for l in 0..=n0 {
                        out.push(SpanLabel {
                            word: SpanWord::F1F2E3 { a, b, k },
                            spin,
                            s: m0 - 1,
                            l,
                        });
                    }
                }
            }
        }
    }
    out
}

/// `φ((x ⊗ y) ⊗ w) = (x ⊗ y)·w`.
pub fn phi(label: &SpanLabel, mt: &ModuleTruncation, hd: &HDSpace) -> Result<XSVector, InductionError> {
    let degree = label.word.degree();
    if degree > mt.level() {
        return Err(InductionError::Overflow {
            label: label.to_string(),
            degree,
            level: mt.level(),
        });
    }
    Ok(apply_label(mt, hd, label)?)
}

/// `x ⊗ y` as an element of `A`, with `x` normal-ordered.
pub fn label_element(label: &SpanLabel) -> AElement {
    tensor(&pbw::normalize(&label.word.letters()), &label.spin.element())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub count: usize,
    pub rank: usize,
    /// `dim (Z_t ⊗ S)`.
    pub slice_dim: usize,
    pub zero_images: usize,
    /// The spanning-set labels and the `X ⊗ S` basis labels agree as sets.
    pub labels_match: bool,
    /// Each `φ`-image equals the basis vector with the same label.
    pub images_match_basis: bool,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.count == self.slice_dim
            && self.rank == self.count
            && self.zero_images == 0
            && self.labels_match
            && self.images_match_basis
    }
}

/// Maps the spanning set through `φ` and checks that the images form a basis
/// of `Z_t ⊗ S`.
pub fn verify_isomorphism(mt: &ModuleTruncation, hd: &HDSpace) -> Result<IsoReport, InductionError> {
    let labels = spanning_set(mt.lambda(), mt.level());
    let images = labels
        .iter()
        .map(|l| phi(l, mt, hd))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sorted = labels.clone();
    sorted.sort();
    let mut basis_labels = xs_basis_labels(mt.lambda(), mt.level());
    basis_labels.sort();
    let labels_match = sorted == basis_labels;
    // The basis side is built from its own enumeration.
    let basis_images: std::collections::BTreeMap<SpanLabel, XSVector> = basis_labels
        .iter()
        .map(|l| Ok((*l, apply_label(mt, hd, l)?)))
        .collect::<Result<_, DiscreteError>>()?;
    let images_match_basis = labels
        .iter()
        .zip(&images)
        .all(|(l, v)| basis_images.get(l) == Some(v));
    Ok(IsoReport {
        count: images.len(),
        rank: xs_rank(mt, &images),
        slice_dim: 4 * mt.dim(),
        zero_images: images.iter().filter(|v| v.is_zero()).count(),
        labels_match,
        images_match_basis,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivarianceReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// `φ((a′ a) ⊗ w) = a′·φ(a ⊗ w)` with `a′ ⊗ 1` a randomly chosen basis
/// vector of `g`, for every spanning element of word degree `< t`. The left
/// side multiplies in `A` first.
pub fn verify_equivariance(
    mt: &ModuleTruncation,
    hd: &HDSpace,
    seed: u64,
) -> Result<EquivarianceReport, InductionError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = EquivarianceReport { checked: 0, failures: vec![] };
    for label in spanning_set(mt.lambda(), mt.level().saturating_sub(1)) {
        let x = Basis::ALL[rng.gen_range(0..Basis::ALL.len())];
        let w = hd.w(label.s as i64, label.l as i64);
        let product = a_multiply(&u_part(&pbw::u_letter(x)), &label_element(&label));
        let lhs = act_a(mt, &product, &w)?;
        let image = phi(&label, mt, hd)?;
        let rhs = act_tensor(mt, &[x], &crate::clifford::c_one(), &image)?;
        report.checked += 1;
        if lhs != rhs {
            report.failures.push(format!("{x} · {label}"));
        }
    }
    Ok(report)
}

/// `Ω_k1 = E1F1 + F1E1 + ½(H1+H2)²`.
pub fn casimir_k1() -> UEnvElement {
    use Basis::*;
    let hp = pbw::u_letter(H1) + pbw::u_letter(H2);
    pbw::normalize(&[E1, F1]) + pbw::normalize(&[F1, E1]) + pbw::multiply(&hp, &hp).scaled(&qf(1, 2))
}

/// `Ω_k2 = E2F2 + F2E2 + ½(H1−H2)²`.
pub fn casimir_k2() -> UEnvElement {
    use Basis::*;
    let hm = pbw::u_letter(H1) - pbw::u_letter(H2);
    pbw::normalize(&[E2, F2]) + pbw::normalize(&[F2, E2]) + pbw::multiply(&hm, &hm).scaled(&qf(1, 2))
}

/// The five generators of `A^K`.
pub fn ak_inventory() -> Vec<(&'static str, AElement)> {
    vec![
        ("Ω_k1 ⊗ 1", u_part(&casimir_k1())),
        ("Ω_k2 ⊗ 1", u_part(&casimir_k2())),
        ("1 ⊗ C(p)^K generator", c_part(&clifford_k_generator().expect("C(p)^K is two-dimensional"))),
        ("D", build_dirac()),
        ("D_k", build_k_dirac()),
    ]
}

/// `[g, x_Δ]` for each generator and each `k`-basis vector; the entry is
/// `None` when the commutator vanishes.
pub fn verify_ak_inventory() -> Vec<(String, Option<String>)> {
    let mut out = Vec::new();
    for (name, g) in ak_inventory() {
        for x in Basis::K {
            let xd = diagonal_embed(&lie(x)).expect("k");
            let c = a_commutator(&g, &xd);
            out.push((
                format!("[{name}, ({x})_Δ] = 0"),
                (!c.is_zero()).then(|| c.to_string()),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::compute_hd;
    use crate::discrete::build_truncation;

    #[test]
    fn spanning_counts() {
        let l = LambdaParam::new(1, 0).unwrap();
        assert_eq!(spanning_set(l, 0).len(), 32);
        for (a, b) in [(2, 1), (3, 1)] {
            let l = LambdaParam::new(a, b).unwrap();
            let (m0, n0) = (l.m0() as usize, l.n0() as usize);
            assert_eq!(spanning_set(l, 0).len(), 4 * m0 * (n0 + 1) + 4 * (n0 + 1));
        }
        let set = spanning_set(l, 3);
        assert!(!set
            .iter()
            .any(|s| matches!(s.word, SpanWord::F2E3 { c, k } if c > k)));
    }

    #[test]
    fn phi_examples_and_isomorphism() {
        let mt = build_truncation(LambdaParam::new(1, 0).unwrap(), 2).unwrap();
        let hd = compute_hd(&mt).unwrap();
        let id = SpanLabel { word: SpanWord::F2E3 { c: 0, k: 0 }, spin: SpinWord::One, s: 0, l: 0 };
        assert_eq!(phi(&id, &mt, &hd).unwrap(), hd.w(0, 0));
        let e3f4 = crate::clifford::c_word(&[Basis::E3, Basis::F4]);
        for w in hd.vectors.values() {
            assert!(act_tensor(&mt, &[], &e3f4, w).unwrap().is_zero());
        }
        let over = SpanLabel { word: SpanWord::F2E3 { c: 0, k: 3 }, spin: SpinWord::E3, s: 0, l: 0 };
        assert!(matches!(phi(&over, &mt, &hd), Err(InductionError::Overflow { .. })));
        let r = verify_isomorphism(&mt, &hd).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.count, 4 * 64);
        let e = verify_equivariance(&mt, &hd, 7).unwrap();
        assert!(e.failures.is_empty(), "{:?}", e.failures);
    }

    #[test]
    fn inventory_is_invariant() {
        for (name, residual) in verify_ak_inventory() {
            assert!(residual.is_none(), "{name}: {residual:?}");
        }
    }
}
