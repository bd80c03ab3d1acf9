use proptest::prelude::*;

use so41kit::lie::{basis_bracket, Basis};
use so41kit::linalg::q;
use so41kit::pbw::{
    degree, multiply, normalize, top_part, u_from_lie, PbwMonomial, UEnvElement,
};

fn letter() -> impl Strategy<Value = Basis> {
    (0usize..10).prop_map(Basis::from_index)
}

fn word(max: usize) -> impl Strategy<Value = Vec<Basis>> {
    prop::collection::vec(letter(), 0..=max)
}

fn element() -> impl Strategy<Value = UEnvElement> {
    prop::collection::vec((word(3), -3i64..=3), 1..=3).prop_map(|terms| {
        let mut out = UEnvElement::zero();
        for (w, c) in terms {
            out.add_scaled(&normalize(&w), &q(c));
        }
        out
    })
}

/// Commutative product of top parts, computed on exponent vectors.
fn symmetric_product(a: &UEnvElement, b: &UEnvElement) -> UEnvElement {
    let mut out = UEnvElement::zero();
    for (ma, ca) in a {
        for (mb, cb) in b {
            out.add_term(ma.commutative_mul(mb), ca * cb);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_split_independent(w in word(6), cut in 0usize..=6) {
        let cut = cut.min(w.len());
        let whole = normalize(&w);
        let split = multiply(&normalize(&w[..cut]), &normalize(&w[cut..]));
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn adjacent_swap_differs_by_bracket(w in word(6), i in 0usize..5) {
        prop_assume!(w.len() >= 2);
        let i = i % (w.len() - 1);
        let (x, y) = (w[i], w[i + 1]);
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        let bracket_term = multiply(
            &multiply(&normalize(&w[..i]), &u_from_lie(basis_bracket(x, y))),
            &normalize(&w[i + 2..]),
        );
        prop_assert_eq!(normalize(&w), normalize(&swapped) + bracket_term);
    }

    #[test]
    fn multiplication_is_associative(a in element(), b in element(), c in element()) {
        prop_assert_eq!(
            multiply(&multiply(&a, &b), &c),
            multiply(&a, &multiply(&b, &c))
        );
    }

    #[test]
    fn unit_is_neutral(a in element()) {
        let one = UEnvElement::basis(PbwMonomial::one());
        prop_assert_eq!(multiply(&one, &a), a.clone());
        prop_assert_eq!(multiply(&a, &one), a);
    }

    #[test]
    fn filtration_is_respected(a in element(), b in element()) {
        let ab = multiply(&a, &b);
        prop_assert!(degree(&ab) <= degree(&a) + degree(&b));
        let expected = symmetric_product(&top_part(&a), &top_part(&b));
        let mut top = ab.clone();
        top.retain(|m| m.degree() == degree(&a) + degree(&b));
        prop_assert_eq!(top, expected);
    }
}
