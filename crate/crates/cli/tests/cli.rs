use std::path::PathBuf;
use std::process::{Command, Output};

fn chart(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../charts").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fedosov")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn cone() -> String {
    chart("cone.json").display().to_string()
}

#[test]
fn cone_build_is_flat_in_one_pass() {
    let o = run(&["build", "--chart", &cone(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["build"]["iterations"], 1);
    assert_eq!(v["build"]["omega_residual"], "0");
    assert_eq!(v["build"]["r_terms"], 0);
    assert_eq!(v["build"]["conventions"]["pi_sign"], -1);
}

#[test]
fn curved_chart_has_zero_residual() {
    let o = run(&["build", "--chart", chart("third_turn_curved.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Omega + omega  0"), "{out}");
    assert!(out.trim_end().ends_with("OK"));
}

#[test]
fn non_symplectic_generator_is_reported() {
    let o = run(&["build", "--chart", chart("swap_not_symplectic.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("not symplectic"), "{out}");
    assert!(out.contains(r#"[["0","1"],["1","0"]]"#), "{out}");
}

#[test]
fn broken_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"dim\": 2,\n \"n_max\": }").unwrap();
    let o = run(&["build", "--chart", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2 column 11"), "{}", stderr(&o));
}

#[test]
fn non_invariant_christoffel_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "generators": [[["-1","0"],["0","-1"]]], "christoffel": {"(1,1,1)": "1"}, "n_max": 4}"#,
    )
    .unwrap();
    let o = run(&["build", "--chart", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not invariant"), "{}", stdout(&o));
}

#[test]
fn bad_polynomial_is_an_input_error() {
    let o = run(&["star", "--chart", &cone(), "x1 + x9", "x2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 6"), "{}", stderr(&o));
}

#[test]
fn star_of_coordinates() {
    let o = run(&["star", "--chart", &cone(), "--json", "x1", "x2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mu"][0]["coeff"], "x1*x2");
    assert_eq!(v["mu"][1]["coeff"], "1/2*i");
    assert_eq!(v["commutator"][1]["coeff"], "i");
    assert_eq!(v["bracket_matches"], true);
}

#[test]
fn unit_star_is_trivial() {
    let o = run(&["star", "--chart", &cone(), "--json", "1", "x1^2*x2 - 3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mu = v["mu"].as_array().unwrap();
    assert_eq!(mu[0]["coeff"], "x1^2*x2 - 3");
    assert!(mu[1..].iter().all(|c| c["coeff"] == "0"));
}

#[test]
fn unsafe_orders_warn() {
    let o = run(&["star", "--chart", &cone(), "--orders", "5", "x1", "x2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning: orders 4..=5"), "{}", stderr(&o));
}

#[test]
fn strata_tables() {
    let o = run(&["strata", "--chart", &cone(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows: Vec<_> = v["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            (
                s["isotropy_order"].as_u64().unwrap(),
                s["fixed_dim"].as_u64().unwrap(),
                s["is_principal"].as_bool().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows, [(2, 0, false), (1, 2, true)]);

    let o = run(&["strata", "--chart", chart("quarter_turn.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("group of order 4"));
    assert_eq!(out.lines().filter(|l| l.ends_with("yes")).count(), 1, "{out}");
}

#[test]
fn verify_cone_passes() {
    let o = run(&["verify", "--chart", &cone(), "--seed", "0", "--samples", "50"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.starts_with("seed 0, 50 samples"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn flipped_sign_breaks_dq2() {
    let o = run(&["verify", "--chart", &cone(), "--samples", "5", "--flip-pi-sign", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<_> = v["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert!(failed.iter().any(|n| n.starts_with("DQ2")), "{failed:?}");
    assert_eq!(v["report"]["conventions"]["pi_sign"], 1);
}

#[test]
fn zeroth_truncation_passes() {
    let o = run(&["verify", "--chart", &cone(), "--n-max", "0", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--chart", &cone(), "--seed", "7", "--samples", "12", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["report"]["seed"], 7);
}
