//! Check registries shared by the command-line driver and the test suites.
//! Each function returns its checks in a fixed order.

use std::path::{Path, PathBuf};

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::clifford::{
    alpha, c_word, clifford_k_invariants, clifford_multiply, form, verify_casimir_identity,
    verify_k_dirac_invariance, verify_operator_identities, verify_spin_decomposition,
    CliffordElement,
};
use crate::cohomology::{
    compute_hd, dk_eigenvalue_check, hp_character_check, verify_dirac_equivariance,
    verify_dirac_grading, verify_reductions, verify_spanning_families, HDSpace,
};
use crate::discrete::{
    build_truncation, casimir_scalar, closed_form_dim, expected_casimir, s_t_cardinality,
    verify_adf2_identity, verify_basis_family, verify_nonvanishing, verify_module_axioms, BasisFamily,
    DiscreteError, Dir, LambdaParam, ModuleTruncation,
};
use crate::induction::{spanning_set, verify_ak_inventory, verify_equivariance, verify_isomorphism};
use crate::lie::{
    basis_bracket, basis_matrix, bracket, element_matrix, jacobi_residual, lie, verify_cartan_involution,
    Basis,
};
use crate::linalg::{fmt_scalar, q, qf};
use crate::pbw::{self, normalize, verify_f1e3_identity, verify_ug_span};
use crate::report::{Check, VerificationReport};

/// Seed for every randomized check, so reports are reproducible.
pub const SEED: u64 = 0x5041_2026;

/// Environment variable naming the module cache directory.
pub const CACHE_ENV: &str = "SO41KIT_CACHE_DIR";

// ---------------------------------------------------------------------------
// Structure and PBW
// ---------------------------------------------------------------------------

pub fn structure_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for (i, &x) in Basis::ALL.iter().enumerate() {
        for &y in &Basis::ALL[i + 1..] {
            let table = basis_bracket(x, y);
            let ok = basis_matrix(x).commutator(&basis_matrix(y)) == element_matrix(table);
            let shown = if table.is_zero() { "0".to_string() } else { table.to_string() };
            out.push(Check::new(
                format!("[{x}, {y}] from matrices"),
                ok,
                &shown,
                if ok { shown.clone() } else { "matrix commutator differs".into() },
            ));
        }
    }
    for i in 0..10 {
        for j in i + 1..10 {
            for k in j + 1..10 {
                let (x, y, z) = (Basis::ALL[i], Basis::ALL[j], Basis::ALL[k]);
                let r = jacobi_residual(x, y, z);
                let actual = if r.is_zero() { "0".to_string() } else { r.to_string() };
                out.push(Check::equal(format!("jacobi ({x}, {y}, {z})"), "0".to_string(), actual));
            }
        }
    }
    let theta = verify_cartan_involution();
    out.push(Check::equal(
        "cartan involution fixes k and negates p",
        0,
        theta.failures.len(),
    ));
    out
}

fn random_word(rng: &mut StdRng) -> Vec<Basis> {
    let len = rng.gen_range(0..=4);
    (0..len).map(|_| Basis::ALL[rng.gen_range(0..10)]).collect()
}

pub fn pbw_checks(max_span_degree: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut failures = 0;
    for _ in 0..200 {
        let (a, b, c) = (
            normalize(&random_word(&mut rng)),
            normalize(&random_word(&mut rng)),
            normalize(&random_word(&mut rng)),
        );
        let left = pbw::multiply(&pbw::multiply(&a, &b), &c);
        let right = pbw::multiply(&a, &pbw::multiply(&b, &c));
        if left != right {
            failures += 1;
        }
    }
    out.push(Check::new(
        "associativity on 200 random word triples",
        failures == 0,
        "0 failures",
        format!("{failures} failures"),
    ));
    for k in 0..=8u16 {
        let r = verify_f1e3_identity(k);
        out.push(Check::new(
            format!("F1 E3^{k} = -k(k-1) E3^(k-2) E2 + k E3^(k-1) F4 + E3^k F1"),
            r.is_ok(),
            "holds",
            r.map_or_else(|e| e.to_string(), |_| "holds".into()),
        ));
    }
    for d in 0..=max_span_degree {
        let expected = pbw::monomial_count(d);
        let actual = match verify_ug_span(d) {
            Ok(r) => r.rank.to_string(),
            Err(e) => e.to_string(),
        };
        out.push(Check::equal(
            format!("U_{d}(g) spanned by x (E3F3+E4F4)^t y"),
            expected.to_string(),
            actual,
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Clifford algebra and spin module
// ---------------------------------------------------------------------------

fn show_c(c: &CliffordElement) -> String {
    if c.is_zero() {
        "0".into()
    } else {
        c.to_string()
    }
}

pub fn clifford_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let mut bad = Vec::new();
    for &x in &Basis::P {
        for &y in &Basis::P {
            let lhs = clifford_multiply(&c_word(&[x]), &c_word(&[y]))
                + clifford_multiply(&c_word(&[y]), &c_word(&[x]));
            let rhs = c_word(&[]).scaled(&(q(-2) * form(x, y)));
            if lhs != rhs {
                bad.push(format!("{x}{y}"));
            }
        }
    }
    out.push(Check::new(
        "xy + yx = -2B(x,y) on all 16 pairs",
        bad.is_empty(),
        "16 pairs hold",
        if bad.is_empty() { "16 pairs hold".into() } else { bad.join(",") },
    ));
    let mut hom_bad = Vec::new();
    let mut pairs = 0;
    for (i, &x) in Basis::K.iter().enumerate() {
        for &y in &Basis::K[i + 1..] {
            pairs += 1;
            let ax = alpha(&lie(x)).expect("k");
            let ay = alpha(&lie(y)).expect("k");
            let lhs = alpha(&bracket(&lie(x), &lie(y))).expect("k");
            let rhs = clifford_multiply(&ax, &ay) - clifford_multiply(&ay, &ax);
            if lhs != rhs {
                hom_bad.push(format!("({x},{y})"));
            }
        }
    }
    out.push(Check::new(
        "alpha([x,y]) = [alpha(x), alpha(y)] on k-pairs",
        hom_bad.is_empty() && pairs == 15,
        "15 pairs hold",
        if hom_bad.is_empty() { format!("{pairs} pairs hold") } else { hom_bad.join(",") },
    ));
    let a_e2 = alpha(&lie(Basis::E2)).expect("k");
    let want = c_word(&[Basis::E3, Basis::F4]).scaled(&qf(-1, 2));
    out.push(Check::equal("alpha(E2) = -1/2 E3F4", show_c(&want), show_c(&a_e2)));
    let a_f1 = alpha(&lie(Basis::F1)).expect("k");
    let want = c_word(&[Basis::F3, Basis::F4]).scaled(&qf(1, 2));
    out.push(Check::equal("alpha(F1) = 1/2 F3F4", show_c(&want), show_c(&a_f1)));
    for c in verify_operator_identities() {
        out.push(Check::holds(c.name, c.passed(), c.residual.as_deref().unwrap_or("exact")));
    }
    let expansion = verify_casimir_identity();
    out.push(Check::holds(
        "Omega_k_delta expansion",
        expansion.is_ok(),
        expansion.err().map_or("exact".into(), |e| e.to_string()),
    ));
    for c in verify_k_dirac_invariance() {
        out.push(Check::holds(c.name, c.passed(), c.residual.as_deref().unwrap_or("exact")));
    }
    out.push(Check::holds(
        "S = V(1/2,1/2) + V(1/2,-1/2) under alpha",
        verify_spin_decomposition(),
        "highest weight vectors E3^E4 and E3",
    ));
    out.push(Check::equal("dim C(p)^K", 2, clifford_k_invariants().len()));
    let generator = crate::clifford::clifford_k_generator();
    out.push(Check::holds(
        "C(p)^K generator without scalar part",
        generator.is_some(),
        generator.as_ref().map_or("none".into(), show_c),
    ));
    out
}

// ---------------------------------------------------------------------------
// Module cache
// ---------------------------------------------------------------------------

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(PathBuf::from)
}

pub fn cache_path(dir: &Path, lambda: LambdaParam, t: u32) -> PathBuf {
    dir.join(format!("module_{}_{}_t{}.json", lambda.l1, lambda.l2, t))
}

/// Where a truncation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleSource {
    Solved,
    Cache,
}

/// Loads `Z_t` from the cache when present (every recorded scalar is
/// re-checked on load); otherwise solves and, with a cache directory, stores it.
pub fn obtain_module(
    lambda: LambdaParam,
    t: u32,
    cache: Option<&Path>,
) -> Result<(ModuleTruncation, ModuleSource), DiscreteError> {
    if let Some(dir) = cache {
        let path = cache_path(dir, lambda, t);
        if let Ok(text) = std::fs::read_to_string(&path) {
            return Ok((ModuleTruncation::from_json(&text)?, ModuleSource::Cache));
        }
        let mt = build_truncation(lambda, t)?;
        std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(&path, mt.to_json()))
            .map_err(|e| DiscreteError::Record(format!("cannot write {}: {e}", path.display())))?;
        return Ok((mt, ModuleSource::Solved));
    }
    Ok((build_truncation(lambda, t)?, ModuleSource::Solved))
}

// ---------------------------------------------------------------------------
// Discrete series
// ---------------------------------------------------------------------------

pub fn discrete_checks(mt: &ModuleTruncation) -> Vec<Check> {
    let lambda = mt.lambda();
    let (m0, n0, t) = (lambda.m0() as u64, lambda.n0() as u64, mt.level());
    let mut out = Vec::new();
    out.push(Check::holds(
        "transition scalars solved, unique in the tree gauge",
        true,
        format!("{} edge scalars", mt.edge_scalars().len()),
    ));
    match verify_module_axioms(mt) {
        Ok(r) => out.push(Check::new(
            format!("module axioms on Z_{}", t.saturating_sub(2)),
            r.failures.is_empty() && (t < 2 || r.vectors > 0),
            format!("{} pairs x {} vectors exact", r.pairs, r.vectors),
            if r.failures.is_empty() {
                format!("{} pairs x {} vectors exact", r.pairs, r.vectors)
            } else {
                format!("{} failures, first {:?}", r.failures.len(), r.failures[0])
            },
        )),
        Err(e) => out.push(Check::error("module axioms", "exact", e)),
    }
    out.push(Check::equal(
        "dim Z_t = (n0+1)(3m0+2t+3)(t^2+3t+2)/6",
        closed_form_dim(m0, n0, t as u64),
        mt.dim() as u64,
    ));
    out.push(Check::equal(
        "|S_t| = dim Z_t",
        closed_form_dim(m0, n0, t as u64),
        s_t_cardinality(m0, n0, t as u64),
    ));
    for (name, fam) in [
        ("basis F1^a F2^b E3^k E4^l v0 has full rank", BasisFamily::E3E4),
        ("basis F1^a F2^b (ad F2)^l E3^(k+l) v0 has full rank", BasisFamily::AdF2),
        ("basis F1^a F2^b E3^(k+l) F2^l v0 has full rank", BasisFamily::E3F2),
    ] {
        out.push(match verify_basis_family(mt, fam) {
            Ok(r) => Check::equal(name, mt.dim(), r.rank),
            Err(e) => Check::error(name, mt.dim(), e),
        });
    }
    out.push(match verify_adf2_identity(mt) {
        Ok(n) => Check::holds("(ad F2)^l E3^(k+l) v0 = (k+l)!/k! E3^k E4^l v0", true, format!("{n} instances")),
        Err(e) => Check::error("(ad F2)^l E3^(k+l) v0 = (k+l)!/k! E3^k E4^l v0", "holds", e),
    });
    let lem = verify_nonvanishing(mt);
    out.push(Check::new(
        "mu != 0 on every K-type",
        lem.mu_all_nonzero,
        format!("{} nonzero", lem.mu_checked),
        if lem.mu_all_nonzero { format!("{} nonzero", lem.mu_checked) } else { "some mu = 0".into() },
    ));
    out.push(Check::new(
        "beta != 0 where (n+1, m-1) is a K-type",
        lem.beta_all_nonzero,
        format!("{} nonzero", lem.beta_checked),
        if lem.beta_all_nonzero { format!("{} nonzero", lem.beta_checked) } else { "some beta = 0".into() },
    ));
    let products_nonzero = lem
        .mu_eta_products
        .iter()
        .chain(&lem.beta_rho_products)
        .all(|(_, p)| !p.is_zero());
    out.push(Check::holds(
        "gauge-invariant products mu*eta and beta*rho are nonzero",
        products_nonzero,
        format!("{} products", lem.mu_eta_products.len() + lem.beta_rho_products.len()),
    ));
    let scalars = mt.transition_scalars();
    let absent_zero = scalars.iter().all(|s| {
        let has = |d: Dir| d.target(s.pos, lambda.n0()).is_some();
        (has(Dir::PM) || (s.beta.is_zero() && s.delta.is_zero()))
            && (has(Dir::MP) || (s.rho.is_zero() && s.epsilon.is_zero()))
            && (has(Dir::MM) || s.eta.is_zero())
    });
    out.push(Check::holds(
        "scalars toward absent K-types are zero",
        absent_zero,
        format!("{} K-types", scalars.len()),
    ));
    out.push(match casimir_scalar(mt) {
        Ok(c) => Check::equal(
            "g-Casimir acts by |λ+ρ|^2 - |ρ|^2 on Z_{t-2}",
            fmt_scalar(&expected_casimir(lambda)),
            fmt_scalar(&c),
        ),
        Err(e) => Check::error("g-Casimir is scalar on Z_{t-2}", "scalar", e),
    });
    out
}

/// Serialize, reload and serialize again; the two documents must agree.
pub fn cache_round_trip_check(mt: &ModuleTruncation) -> Check {
    let json = mt.to_json();
    match ModuleTruncation::from_json(&json) {
        Ok(back) => {
            let same = back.to_json() == json && back.edge_scalars() == mt.edge_scalars();
            Check::holds("module record round-trips exactly", same, format!("{} bytes", json.len()))
        }
        Err(e) => Check::error("module record round-trips exactly", "identical", e),
    }
}

// ---------------------------------------------------------------------------
// Dirac cohomology
// ---------------------------------------------------------------------------

pub fn cohomology_checks(mt: &ModuleTruncation) -> (Vec<Check>, Option<HDSpace>) {
    let lambda = mt.lambda();
    let (m0, n0) = (lambda.m0(), lambda.n0());
    let mut out = Vec::new();
    let hd = match compute_hd(mt) {
        Ok(hd) => hd,
        Err(e) => {
            out.push(Check::error("Ker D^2 is a single K̃-type", "one copy", e));
            return (out, None);
        }
    };
    let found: Vec<String> = hd
        .blocks
        .iter()
        .filter(|b| b.ker_d2 > 0)
        .map(|b| format!("{:?}x{}", b.weight, b.ker_d2))
        .collect();
    out.push(Check::equal(
        "Ker D^2 on the interior is one K̃-type",
        format!("({}, {})x1", m0 - 1, n0),
        found.join(" ").replace(", ", ",").replace(",", ", "),
    ));
    out.push(Check::equal(
        "dim H^D = (λ1+λ2+2)(λ1-λ2+1)",
        (m0 * (n0 + 1)) as usize,
        hd.dim(),
    ));
    let (a, b) = hd.ktype.to_ab();
    out.push(Check::equal(
        "H^D highest weight (λ1+1/2, λ2+1/2)",
        format!("({}, {})", fmt_scalar(&(q(lambda.l1) + qf(1, 2))), fmt_scalar(&(q(lambda.l2) + qf(1, 2)))),
        format!("({}, {})", fmt_scalar(&a), fmt_scalar(&b)),
    ));
    let ratio = hd.kernel_top.proportionality(&hd.top);
    out.push(Check::holds(
        "kernel vector ∝ F1 v0 ⊗ E3^E4 + 2(λ1+λ2+2) v0 ⊗ 1",
        ratio.is_some(),
        ratio.map_or("not proportional".into(), |r| format!("ratio {}", fmt_scalar(&r))),
    ));
    let off: Vec<String> = hd
        .closed_form_ratios
        .iter()
        .filter(|(_, r)| !r.as_ref().is_some_and(|x| *x == q(1)))
        .map(|((s, l), r)| format!("w({s},{l}): {}", r.as_ref().map_or("n/a".into(), fmt_scalar)))
        .collect();
    out.push(Check::new(
        "w(s,l) = F1^(s+1) F2^l v0 ⊗ E3^E4 + 2(m0-s) F1^s F2^l v0 ⊗ 1",
        off.is_empty(),
        format!("{} exact", hd.dim()),
        if off.is_empty() { format!("{} exact", hd.dim()) } else { off.join("; ") },
    ));
    let mismatched: Vec<String> = hd
        .blocks
        .iter()
        .filter(|b| b.ker_d != b.ker_d2)
        .map(|b| format!("{:?}: {} vs {}", b.weight, b.ker_d, b.ker_d2))
        .collect();
    out.push(Check::new(
        "Ker D = Ker D^2 on every interior block",
        mismatched.is_empty(),
        format!("{} blocks agree", hd.blocks.len()),
        if mismatched.is_empty() { format!("{} blocks agree", hd.blocks.len()) } else { mismatched.join("; ") },
    ));
    out.push(match dk_eigenvalue_check(mt, &hd) {
        Ok(c) => Check::equal("D_k acts on W by -λ1-λ2-4", fmt_scalar(&q(-lambda.l1 - lambda.l2 - 4)), fmt_scalar(&c)),
        Err(e) => Check::error("D_k acts on W by -λ1-λ2-4", fmt_scalar(&q(-lambda.l1 - lambda.l2 - 4)), e),
    });
    match hp_character_check(lambda) {
        Ok(h) => {
            out.push(Check::holds(
                "γ + ρ_k = wΛ for some w in W(B2)",
                true,
                format!("w = {}", h.witness),
            ));
            out.push(Check::holds("|γ + ρ_k|^2 = |Λ|^2", h.norms_equal, "equality"));
        }
        Err(e) => out.push(Check::error("γ + ρ_k = wΛ for some w in W(B2)", "witness", e)),
    }
    match verify_dirac_grading(mt) {
        Ok((n, bad)) => out.push(Check::new("D changes level by exactly one", bad == 0, "0 violations", format!("{bad} of {n} entries"))),
        Err(e) => out.push(Check::error("D changes level by exactly one", "0 violations", e)),
    }
    match verify_dirac_equivariance(mt) {
        Ok((n, bad)) => out.push(Check::new("[D, x_Δ] = 0 and [D^2, x_Δ] = 0 on the interior", bad == 0, "0 failures", format!("{bad} of {n}"))),
        Err(e) => out.push(Check::error("[D, x_Δ] = 0 and [D^2, x_Δ] = 0 on the interior", "0 failures", e)),
    }
    match verify_reductions(mt, &hd) {
        Ok(rs) => {
            for r in rs {
                out.push(Check::new(
                    r.name,
                    r.passed(),
                    "exact",
                    r.first_failure.clone().map_or(format!("exact on {} instances", r.instances), |f| format!("fails at {f}")),
                ));
            }
        }
        Err(e) => out.push(Check::error("reductions in X ⊗ S", "exact", e)),
    }
    match verify_spanning_families(mt, &hd) {
        Ok(sets) => {
            for s in sets {
                out.push(Check::new(
                    format!("{}: size and rank", s.name),
                    s.passed(),
                    format!("{} vectors, rank {}", s.expected_count, s.expected_rank),
                    format!("{} vectors, rank {}", s.count, s.rank),
                ));
            }
        }
        Err(e) => out.push(Check::error("spanning families of X ⊗ S", "full rank", e)),
    }
    (out, Some(hd))
}

// ---------------------------------------------------------------------------
// Induction
// ---------------------------------------------------------------------------

pub fn induction_checks(mt: &ModuleTruncation, hd: &HDSpace) -> Vec<Check> {
    let lambda = mt.lambda();
    let (m0, n0) = (lambda.m0() as usize, lambda.n0() as usize);
    let mut out = Vec::new();
    out.push(Check::equal(
        "spanning elements with k = 0",
        4 * m0 * (n0 + 1) + 4 * (n0 + 1),
        spanning_set(lambda, 0).len(),
    ));
    match verify_isomorphism(mt, hd) {
        Ok(r) => {
            out.push(Check::equal("spanning-set size = dim (Z_t ⊗ S)", r.slice_dim, r.count));
            out.push(Check::equal("φ-images linearly independent (rank)", r.count, r.rank));
            out.push(Check::equal("φ-images nonzero", 0, r.zero_images));
            out.push(Check::holds("spanning-set labels = X ⊗ S basis labels", r.labels_match, "same index set"));
            out.push(Check::holds("φ-images = X ⊗ S basis vectors", r.images_match_basis, "elementwise"));
        }
        Err(e) => out.push(Check::error("φ-images form a basis", "basis", e)),
    }
    match verify_equivariance(mt, hd, SEED) {
        Ok(r) => out.push(Check::new(
            "φ((x a) ⊗ w) = x φ(a ⊗ w)",
            r.failures.is_empty(),
            format!("{} instances", r.checked),
            if r.failures.is_empty() { format!("{} instances", r.checked) } else { r.failures[0].clone() },
        )),
        Err(e) => out.push(Check::error("φ((x a) ⊗ w) = x φ(a ⊗ w)", "exact", e)),
    }
    out.extend(inventory_checks());
    out
}

pub fn inventory_checks() -> Vec<Check> {
    verify_ak_inventory()
        .into_iter()
        .map(|(name, residual)| Check::holds(name, residual.is_none(), residual.as_deref().unwrap_or("0")))
        .collect()
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

fn lambda_pair(l: LambdaParam) -> Option<[i64; 2]> {
    Some([l.l1, l.l2])
}

pub fn check_structure_report() -> VerificationReport {
    let mut r = VerificationReport::new("check-structure", None, None);
    r.run("structure", structure_checks);
    r.run("pbw", || pbw_checks(5));
    r
}

pub fn check_clifford_report() -> VerificationReport {
    let mut r = VerificationReport::new("check-clifford", None, None);
    r.run("clifford", clifford_checks);
    r
}

fn module_or_fail(
    r: &mut VerificationReport,
    lambda: LambdaParam,
    t: u32,
    cache: Option<&Path>,
) -> Option<ModuleTruncation> {
    let mut result = None;
    r.run("solve", || match obtain_module(lambda, t, cache) {
        Ok((mt, src)) => {
            let c = Check::holds(
                "obtain Z_t",
                true,
                match src {
                    ModuleSource::Solved => "solved",
                    ModuleSource::Cache => "loaded from cache",
                },
            );
            result = Some(mt);
            vec![Check { actual: c.expected.clone(), ..c }]
        }
        Err(e) => vec![Check::error("obtain Z_t", "solved", e)],
    });
    // The source differs between runs; keep the report deterministic.
    if let Some(c) = r.checks.last_mut() {
        if c.passed() {
            c.expected = "available".into();
            c.actual = "available".into();
        }
    }
    result
}

pub fn build_report(lambda: LambdaParam, t: u32, cache: Option<&Path>) -> (VerificationReport, Option<ModuleTruncation>) {
    let mut r = VerificationReport::new("build", lambda_pair(lambda), Some(t));
    let mt = module_or_fail(&mut r, lambda, t, cache);
    if let Some(mt) = &mt {
        r.run("discrete", || discrete_checks(mt));
        r.run("record", || vec![cache_round_trip_check(mt)]);
    }
    (r, mt)
}

pub fn cohomology_report(lambda: LambdaParam, t: u32, cache: Option<&Path>) -> VerificationReport {
    let mut r = VerificationReport::new("cohomology", lambda_pair(lambda), Some(t));
    if let Some(mt) = module_or_fail(&mut r, lambda, t, cache) {
        r.run("cohomology", || cohomology_checks(&mt).0);
    }
    r
}

pub fn induct_report(lambda: LambdaParam, t: u32, cache: Option<&Path>) -> VerificationReport {
    let mut r = VerificationReport::new("induct", lambda_pair(lambda), Some(t));
    if let Some(mt) = module_or_fail(&mut r, lambda, t, cache) {
        let mut hd = None;
        r.run("cohomology", || {
            let (checks, h) = cohomology_checks(&mt);
            hd = h;
            checks.into_iter().filter(|c| !c.passed()).collect()
        });
        match hd {
            Some(hd) => r.run("induction", || induction_checks(&mt, &hd)),
            None => r.checks.push(Check::error("induction", "W available", "Dirac cohomology failed")),
        }
    }
    r
}

pub fn verify_all_report(lambda: LambdaParam, t: u32, cache: Option<&Path>) -> VerificationReport {
    let mut r = VerificationReport::new("verify-all", lambda_pair(lambda), Some(t));
    r.run("structure", structure_checks);
    r.run("pbw", || pbw_checks(5));
    r.run("clifford", clifford_checks);
    if let Some(mt) = module_or_fail(&mut r, lambda, t, cache) {
        r.run("discrete", || discrete_checks(&mt));
        r.run("record", || vec![cache_round_trip_check(&mt)]);
        let mut hd = None;
        r.run("cohomology", || {
            let (checks, h) = cohomology_checks(&mt);
            hd = h;
            checks
        });
        if let Some(hd) = hd {
            r.run("induction", || induction_checks(&mt, &hd));
        }
    }
    r
}
