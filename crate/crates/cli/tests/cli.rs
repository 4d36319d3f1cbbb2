use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facering"))
        .args(args)
        .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_of(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

#[test]
fn validate_exit_codes() {
    assert_eq!(run(&["validate", "posets/p1.json"]).status.code(), Some(0));
    assert_eq!(run(&["validate", "--poset", "tetrahedron_boundary"]).status.code(), Some(0));
    assert_eq!(run(&["validate", "no/such/file.json"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("chain.json");
    fs::write(&chain, r#"{"elements":["0","a","b"],"covers":[["a","0"],["b","a"]]}"#).unwrap();
    let o = run(&["validate", chain.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation"));

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{").unwrap();
    assert_eq!(run(&["validate", junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn ring_generators_and_straightening() {
    let o = run(&["ring", "--poset", "p1", "--member", "t[x]*t[z]", "--straighten", "t[y1]*t[y2]"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("t[y1]*t[y2] - t[x] - t[z]"));
    assert!(s.contains("t[x]*t[z]"));
    assert!(s.contains("member t[x]*t[z]: true"));
    assert!(s.contains("straighten t[y1]*t[y2]: t[x] + t[z]"));

    let js = json_of(&["ring", "--poset", "p1", "--member", "t[x]"]);
    assert_eq!(js["member"]["result"], false);
    assert_eq!(js["omega"], serde_json::json!([3, 3]));

    assert_eq!(run(&["ring", "--poset", "p1", "--member", "t[x]**"]).status.code(), Some(2));
    assert_eq!(run(&["ring", "--poset", "p1", "--member", "t[w]"]).status.code(), Some(2));
}

#[test]
fn envelope_annihilators_in_degree_one_one() {
    let o = run(&["envelope", "--poset", "p1", "--ann", "--deg", "1,1", "--depth", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("*E_x: annihilator dim 1"));
    assert!(s.contains("*E_z: annihilator dim 1"));
    assert!(s.contains("*E_0: annihilator dim 0"));
}

#[test]
fn cleanmap_checks() {
    assert_eq!(
        run(&["cleanmap", "--poset", "p1", "--check-linearity", "--box", "4", "--field", "F2"]).status.code(),
        Some(0)
    );
    let js = json_of(&["cleanmap", "--poset", "hollow_triangle", "--check-clean", "--depth", "2"]);
    let reports = js["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["status"] == "pass"));
    assert!(run(&["cleanmap", "--poset", "p1", "--tau", "--box", "1", "--depth", "2"]).status.success());
    assert_eq!(run(&["cleanmap", "--poset", "p1", "--field", "F4"]).status.code(), Some(2));
}

#[test]
fn complex_cohomology_and_dd() {
    let js = json_of(&["complex", "--poset", "hollow_triangle", "--a", "0,0,0", "--oracle"]);
    assert_eq!(js["match"], true);
    assert_eq!(js["dims"]["-2"], 1);

    let js = json_of(&["complex", "--poset", "tetrahedron_boundary", "--a", "-1,0,0,0", "--oracle"]);
    assert_eq!(js["match"], true);

    let js = json_of(&["complex", "--poset", "p1", "--a", "0,0", "--oracle"]);
    assert!(js["oracle"].is_null());
    assert_eq!(js["dims"]["-2"], 1);

    let o = run(&["complex", "--poset", "p1", "--dd", "--box", "1", "--depth", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("pass"));

    assert_eq!(run(&["complex", "--poset", "p1", "--a", "0,0,0"]).status.code(), Some(2));
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let o = run(&["envelope", "--poset", "double_triangle", "--ann", "--deg", "1,0,1", "--json", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
