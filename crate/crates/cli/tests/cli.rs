use std::process::Command;

fn so41kit(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_so41kit"))
        .args(args)
        .env_remove("SO41KIT_CACHE_DIR")
        .output()
        .unwrap()
}

#[test]
fn inadmissible_lambda_is_a_usage_error() {
    let out = so41kit(&["build", "--lambda", "0,1", "--level", "2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("λ1 ≥ λ2 ≥ 0 required"));
    let out = so41kit(&["build", "--lambda", "-1,0", "--level", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("λ1 ≥ λ2 ≥ 0 required"));
}

#[test]
fn check_structure_lists_every_check() {
    let out = so41kit(&["check-structure", "--format", "tsv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.iter().filter(|r| r.contains("from matrices")).count(), 45);
    assert_eq!(rows.iter().filter(|r| r.starts_with("jacobi")).count(), 120);
    assert!(rows.iter().all(|r| r.split('\t').nth(1) == Some("pass")));
}

#[test]
fn json_report_schema() {
    let out = so41kit(&["build", "--lambda", "1,0", "--level", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "build");
    assert_eq!(v["lambda"], serde_json::json!([1, 0]));
    assert_eq!(v["level"], 2);
    for c in v["checks"].as_array().unwrap() {
        for key in ["name", "status", "expected", "actual"] {
            assert!(c[key].is_string());
        }
    }
    assert!(v["elapsed_ms"].is_object());
}

#[test]
fn build_writes_a_loadable_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = so41kit(&["build", "--lambda", "2,1", "--level", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mt = so41kit::discrete::ModuleTruncation::from_json(&text).unwrap();
    assert_eq!(mt.to_json(), text);
}
