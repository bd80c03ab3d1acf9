use proptest::prelude::*;

use so41kit::discrete::{
    build_truncation, closed_form_dim, s_t_cardinality, verify_basis_family, verify_module_axioms,
    verify_nonvanishing, BasisFamily, LambdaParam, ModuleTruncation,
};

/// Sum of `(n+1)(m+1)` over the K-types the truncation actually contains.
fn ktype_dim_sum(mt: &ModuleTruncation) -> usize {
    mt.positions()
        .iter()
        .map(|&p| {
            let lab = mt.label(p);
            (lab.n as usize + 1) * (lab.m as usize + 1)
        })
        .sum()
}

#[test]
fn printed_small_case() {
    let mt = build_truncation(LambdaParam::new(1, 0).unwrap(), 2).unwrap();
    assert_eq!(mt.dim(), 64);
    assert_eq!(closed_form_dim(3, 1, 2), 64);
    let r = verify_basis_family(&mt, BasisFamily::E3E4).unwrap();
    assert_eq!((r.vectors, r.rank), (64, 64));
}

#[test]
fn lowest_ktype_and_parameters() {
    let l = LambdaParam::new(3, 1).unwrap();
    assert_eq!((l.m0(), l.n0()), (6, 2));
    assert!("0,1".parse::<LambdaParam>().unwrap_err().to_string().contains("λ1 ≥ λ2 ≥ 0 required"));
    assert!("-1,-2".parse::<LambdaParam>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn cardinality_matches_closed_form(m0 in 2u64..40, n0 in 0u64..20, extra in 0u64..20) {
        let t = n0 + extra;
        prop_assert_eq!(s_t_cardinality(m0, n0, t), closed_form_dim(m0, n0, t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn small_truncations_are_modules(l2 in 0i64..3, gap in 0i64..3, t in 2u32..4) {
        let lambda = LambdaParam::new(l2 + gap, l2).unwrap();
        let mt = build_truncation(lambda, t).unwrap();
        prop_assert_eq!(mt.dim(), ktype_dim_sum(&mt));
        if t >= lambda.n0() {
            prop_assert_eq!(mt.dim() as u64, closed_form_dim(lambda.m0() as u64, lambda.n0() as u64, t as u64));
        }
        let axioms = verify_module_axioms(&mt).unwrap();
        prop_assert!(axioms.failures.is_empty(), "{:?}", axioms.failures.first());
        prop_assert!(verify_nonvanishing(&mt).passed());
        for fam in [BasisFamily::E3E4, BasisFamily::AdF2, BasisFamily::E3F2] {
            prop_assert_eq!(verify_basis_family(&mt, fam).unwrap().rank, mt.dim());
        }
        let json = mt.to_json();
        prop_assert_eq!(ModuleTruncation::from_json(&json).unwrap().to_json(), json);
    }
}
