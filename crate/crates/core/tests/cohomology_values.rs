use so41kit::cohomology::{compute_hd, dk_eigenvalue_check, hp_character_check};
use so41kit::discrete::{build_truncation, LambdaParam};
use so41kit::linalg::q;

#[test]
fn dirac_cohomology_small_levels() {
    for (a, b) in [(1, 0), (2, 1), (2, 2)] {
        let lambda = LambdaParam::new(a, b).unwrap();
        let mt = build_truncation(lambda, 3).unwrap();
        let hd = compute_hd(&mt).unwrap();
        assert_eq!(hd.dim() as i64, (a + b + 2) * (a - b + 1));
        assert_eq!(hd.ker_d2_total(), 1);
        assert!(hd.ker_d_equals_ker_d2());
        assert!(hd.closed_form_exact());
        assert_eq!(dk_eigenvalue_check(&mt, &hd).unwrap(), q(-a - b - 4));
        let hp = hp_character_check(lambda).unwrap();
        assert!(hp.norms_equal);
    }
}
