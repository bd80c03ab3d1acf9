//! Acceptance run: one pass/fail line per criterion, exit status nonzero on
//! any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use so41kit::cohomology::verify_reductions;
use so41kit::discrete::{build_truncation, LambdaParam, ModuleTruncation};
use so41kit::report::Check;
use so41kit::suites;

const LAMBDAS: [(i64, i64); 5] = [(1, 0), (2, 0), (2, 1), (2, 2), (3, 1)];
const LEVEL: u32 = 6;

struct Outcome {
    failures: Vec<String>,
    checks: usize,
    elapsed: Duration,
    limit: Duration,
}

impl Outcome {
    fn new(limit: Duration) -> Self {
        Self { failures: vec![], checks: 0, elapsed: Duration::ZERO, limit }
    }

    fn absorb(&mut self, prefix: &str, checks: &[Check]) {
        self.checks += checks.len();
        for c in checks.iter().filter(|c| !c.passed()) {
            self.failures
                .push(format!("{prefix}{}: expected {}, got {}", c.name, c.expected, c.actual));
        }
    }

    fn require(&mut self, name: &str, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures.push(name.to_string());
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty() && self.elapsed < self.limit
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn untimed(json: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json).expect("report is JSON");
    v.as_object_mut().expect("object").remove("elapsed_ms");
    v.to_string()
}

fn run_cli(args: &[&str], cache: Option<&std::path::Path>) -> (bool, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_so41kit"));
    cmd.args(args).env_remove(suites::CACHE_ENV);
    if let Some(dir) = cache {
        cmd.env(suites::CACHE_ENV, dir);
    }
    let out = cmd.output().expect("binary runs");
    (out.status.success(), String::from_utf8(out.stdout).expect("utf-8"))
}

fn reproducibility(modules: &[ModuleTruncation]) -> Outcome {
    let mut o = Outcome::new(Duration::from_secs(600));
    let ((), elapsed) = timed(|| {
        let args = ["verify-all", "--lambda", "1,0", "--level", "6", "--format", "json"];
        let (ok1, first) = run_cli(&args, None);
        let (ok2, second) = run_cli(&args, None);
        o.require("verify-all --lambda 1,0 --level 6 exits 0", ok1 && ok2);
        o.require("verify-all JSON identical apart from timings", untimed(&first) == untimed(&second));

        let dir = tempfile::tempdir().expect("temp dir");
        let build = ["build", "--lambda", "2,1", "--level", "6"];
        let (ok1, solved) = run_cli(&build, Some(dir.path()));
        let path = suites::cache_path(dir.path(), LambdaParam::new(2, 1).unwrap(), LEVEL);
        let written = std::fs::read(&path).unwrap_or_default();
        let (ok2, loaded) = run_cli(&build, Some(dir.path()));
        let rewritten = std::fs::read(&path).unwrap_or_default();
        o.require("build with a cache directory exits 0 twice", ok1 && ok2);
        o.require("cache file unchanged by a cached rerun", !written.is_empty() && written == rewritten);
        o.require("cached and solved build reports agree", untimed(&solved) == untimed(&loaded));

        for mt in modules {
            let json = mt.to_json();
            let back = ModuleTruncation::from_json(&json);
            let tag = format!("λ = {}: ", mt.lambda());
            match back {
                Ok(back) => {
                    o.require(&format!("{tag}record round-trips bit-exactly"), back.to_json() == json);
                    let a = suites::discrete_checks(mt);
                    let b = suites::discrete_checks(&back);
                    o.require(&format!("{tag}loaded module gives identical checks"), a == b);
                }
                Err(e) => o.require(&format!("{tag}record reloads: {e}"), false),
            }
        }
    });
    o.elapsed = elapsed;
    o
}

fn main() {
    let mut outcomes: Vec<(&str, Outcome)> = Vec::new();

    let mut c1 = Outcome::new(Duration::from_secs(1));
    let (checks, t) = timed(suites::structure_checks);
    c1.absorb("", &checks);
    c1.elapsed = t;
    outcomes.push(("1 structure: 45 commutators and 120 Jacobi triples exact", c1));

    let mut c2 = Outcome::new(Duration::from_secs(60));
    let (checks, t) = timed(|| suites::pbw_checks(5));
    c2.absorb("", &checks);
    c2.require("U_5(g) rank check present", checks.iter().any(|c| c.name.starts_with("U_5") && c.expected == "3003"));
    c2.elapsed = t;
    outcomes.push(("2 PBW: associativity, F1 E3^k for k ≤ 8, U_5(g) rank 3003", c2));

    let mut c3 = Outcome::new(Duration::from_secs(5));
    let (checks, t) = timed(suites::clifford_checks);
    c3.absorb("", &checks);
    c3.elapsed = t;
    outcomes.push(("3 Clifford and spin identities exact", c3));

    // Criteria 4 to 6 are judged per λ; the limit applies to the slowest λ.
    let per_lambda = Duration::from_secs(300);
    let mut c4 = Outcome::new(per_lambda);
    let mut c5 = Outcome::new(per_lambda);
    let mut c6 = Outcome::new(per_lambda);
    let mut modules = Vec::new();
    for (a, b) in LAMBDAS {
        let lambda = LambdaParam::new(a, b).expect("admissible");
        let tag = format!("λ = {lambda}: ");
        let (mt, t_build) = timed(|| build_truncation(lambda, LEVEL));
        let mt = match mt {
            Ok(mt) => mt,
            Err(e) => {
                c4.require(&format!("{tag}solve failed: {e}"), false);
                c5.require(&format!("{tag}no module"), false);
                c6.require(&format!("{tag}no module"), false);
                continue;
            }
        };
        let (checks, t) = timed(|| suites::discrete_checks(&mt));
        c4.absorb(&tag, &checks);
        c4.elapsed = c4.elapsed.max(t_build + t);

        let ((checks, hd), t) = timed(|| suites::cohomology_checks(&mt));
        c5.absorb(&tag, &checks);
        c5.elapsed = c5.elapsed.max(t);

        let Some(hd) = hd else {
            c6.require(&format!("{tag}no Dirac cohomology"), false);
            continue;
        };
        let (checks, t) = timed(|| {
            let mut checks = suites::induction_checks(&mt, &hd);
            match verify_reductions(&mt, &hd) {
                Ok(rs) => checks.extend(rs.into_iter().map(|r| {
                    Check::holds(r.name, r.passed(), r.first_failure.unwrap_or_else(|| "exact".into()))
                })),
                Err(e) => checks.push(Check::error("reductions", "exact", e)),
            }
            checks
        });
        c6.absorb(&tag, &checks);
        c6.elapsed = c6.elapsed.max(t);
        modules.push(mt);
    }
    outcomes.push(("4 discrete series at t = 6 for five λ", c4));
    outcomes.push(("5 Dirac cohomology at t = 6 for five λ", c5));
    outcomes.push(("6 induction at t = 6 for five λ", c6));
    outcomes.push(("7 reproducibility and cache round trip", reproducibility(&modules)));

    let mut all = true;
    for (name, o) in &outcomes {
        let status = if o.passed() { "PASS" } else { "FAIL" };
        all &= o.passed();
        println!(
            "criterion {name}: {status} ({} checks, {} ms, limit {} s)",
            o.checks,
            o.elapsed.as_millis(),
            o.limit.as_secs()
        );
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
        if o.elapsed >= o.limit {
            println!("    time limit exceeded");
        }
    }
    if !all {
        std::process::exit(1);
    }
}
