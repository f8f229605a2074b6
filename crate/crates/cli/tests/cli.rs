use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn betaforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betaforge"))
        .args(args)
        .env_remove("BETAFORGE_MAXN")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn json_file(p: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn group_golden_ratio() {
    let o = betaforge(&["group", "1", "1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("0.618034"), "{s}");
    assert!(s.contains("carets      2"), "{s}");
    assert!(s.contains("  (1,2)\n  (2,1)\n"), "{s}");
    assert!(s.contains("λ^2 = λ + 1"), "{s}");
}

#[test]
fn group_three_shapes() {
    let o = betaforge(&["group", "2", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["caret_count"], "3");
    assert_eq!(v["carets"].as_array().unwrap().len(), 3);
    assert_eq!(v["reciprocal"], serde_json::json!(["2", "1"]));
}

#[test]
fn group_rejects_invalid_polynomials() {
    let o = betaforge(&["group", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("trivial"), "{}", stderr(&o));
    assert_eq!(code(&betaforge(&["group", "1", "-1"])), 2);
    assert_eq!(code(&betaforge(&["group", "0", "0"])), 2);
    assert_eq!(code(&betaforge(&["group", "x"])), 2);
}

#[test]
fn carets_lists_shapes() {
    let o = betaforge(&["carets", "0", "1", "0", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(2,4)\n(4,2)\n");
}

#[test]
fn obstruct_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cert = path(&dir, "cert.json");
    let o = betaforge(&["obstruct", "0", "1", "0", "1", "--vec", "-1", "0", "1", "1", "--out", &cert]);
    assert_eq!(code(&o), 3);
    let v = json_file(&cert);
    assert_eq!(v["kind"], "impossible");
    assert_eq!(v["split_at"], "1");

    let o = betaforge(&["obstruct", "0", "1", "0", "1", "--vec", "0", "0", "0", "1", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("witness: A^0 p"));

    let o = betaforge(&["obstruct", "1", "1", "--vec", "1", "-1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "witness");
    assert_eq!(v["n"], "1");
}

#[test]
fn obstruct_malformed_input() {
    assert_eq!(code(&betaforge(&["obstruct", "1", "1", "--vec", "1", "-1", "0"])), 2);
    assert_eq!(code(&betaforge(&["obstruct", "1", "1", "--vec", "0", "0"])), 2);
    assert_eq!(code(&betaforge(&["obstruct", "1", "1", "--vec", "a"])), 2);
    assert_eq!(code(&betaforge(&["obstruct", "1", "1"])), 2);
}

#[test]
fn iteration_bound_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_betaforge"))
        .args(["obstruct", "0", "1", "0", "1", "--vec", "-1", "0", "1", "1"])
        .env("BETAFORGE_MAXN", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    let o = betaforge(&["obstruct", "0", "1", "0", "1", "--vec", "-1", "0", "1", "1", "--max-n", "1"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn certificates_verify_and_tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    let cert = path(&dir, "cert.json");
    betaforge(&["obstruct", "0", "1", "0", "1", "--vec", "-1", "0", "1", "1", "-o", &cert]);
    let o = betaforge(&["verify-cert", &cert]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "valid impossible\n");

    let mut v = json_file(&cert);
    v["negative"][0] = Value::String("0000".into());
    let bad = path(&dir, "bad.json");
    fs::write(&bad, v.to_string()).unwrap();
    assert_eq!(code(&betaforge(&["verify-cert", &bad])), 1);

    fs::write(&bad, "{}").unwrap();
    assert_eq!(code(&betaforge(&["verify-cert", &bad])), 2);
}

#[test]
fn output_is_byte_stable() {
    let args = ["obstruct", "0", "1", "0", "1", "--vec", "-1", "0", "1", "1"];
    assert_eq!(betaforge(&args).stdout, betaforge(&args).stdout);
    assert_eq!(betaforge(&["group", "2", "1", "3"]).stdout, betaforge(&["group", "2", "1", "3"]).stdout);
}

#[test]
fn failed_commands_leave_no_output_file() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "report.txt");
    assert_eq!(code(&betaforge(&["group", "1", "--out", &out])), 2);
    assert!(!Path::new(&out).exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    let missing = path(&dir, "no/such/dir/x.json");
    assert_eq!(code(&betaforge(&["group", "1", "1", "--out", &missing])), 2);
}

fn new_pair(dir: &TempDir, name: &str, coeffs: &[&str], left: &str, right: &str) -> String {
    let p = path(dir, name);
    let mut args = vec!["treepair", "new"];
    args.extend_from_slice(coeffs);
    args.extend_from_slice(&["--left", left, "--right", right, "-o", &p]);
    let o = betaforge(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    p
}

fn leaf_labels(dot: &str, cluster: char) -> Vec<String> {
    dot.lines()
        .map(str::trim)
        .filter(|l| l.starts_with(cluster) && l.contains("shape=plaintext"))
        .map(|l| l.split("label=\"").nth(1).unwrap().trim_end_matches("\"];").to_string())
        .collect()
}

#[test]
fn render_x0_pair() {
    let dir = TempDir::new().unwrap();
    let x0 = new_pair(&dir, "x0.json", &["1", "1"], "(2,1)[(2,1),L]", "(2,1)[L,(2,1)]");
    let o = betaforge(&["treepair", "render", &x0]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph treepair {"));
    assert_eq!(leaf_labels(&dot, 'l'), ["4", "3", "1"]);
    assert_eq!(leaf_labels(&dot, 'r'), ["2", "3", "2"]);
    assert!(dot.contains("[minlen=2, label=\"2\", arrowhead=none]"));
    assert_eq!(dot, stdout(&betaforge(&["treepair", "render", &x0])));
}

#[test]
fn render_identity_and_equitree() {
    let dir = TempDir::new().unwrap();
    let id = new_pair(&dir, "id.json", &["1", "1"], "L", "L");
    let dot = stdout(&betaforge(&["treepair", "render", &id]));
    assert_eq!(leaf_labels(&dot, 'l'), ["0"]);
    assert_eq!(leaf_labels(&dot, 'r'), ["0"]);

    let eq = new_pair(&dir, "eq.json", &["1", "1"], "(2,1)[L,(2,1)]", "(1,2)[(1,2),L]");
    let dot = stdout(&betaforge(&["treepair", "render", &eq]));
    assert_eq!(leaf_labels(&dot, 'l'), ["2", "3", "2"]);
    assert_eq!(leaf_labels(&dot, 'r'), ["2", "3", "2"]);
}

#[test]
fn render_rejects_unparseable_pairs() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    fs::write(&bad, "{\"context\": {\"coeffs\": [\"1\", \"1\"]}, \"left\": [\"7\"]}").unwrap();
    assert_eq!(code(&betaforge(&["treepair", "render", &bad])), 2);
    fs::write(&bad, "not json").unwrap();
    assert_eq!(code(&betaforge(&["treepair", "render", &bad])), 2);
    let o = betaforge(&["treepair", "new", "1", "1", "--left", "(1,3)", "--right", "L"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn treepair_compose_reduce_equiv() {
    let dir = TempDir::new().unwrap();
    let x0 = new_pair(&dir, "x0.json", &["1", "1"], "(2,1)[(2,1),L]", "(2,1)[L,(2,1)]");
    let inv = new_pair(&dir, "inv.json", &["1", "1"], "(2,1)[L,(2,1)]", "(2,1)[(2,1),L]");
    let prod = path(&dir, "prod.json");
    assert_eq!(code(&betaforge(&["treepair", "compose", &x0, &inv, "-o", &prod])), 0);
    let red = path(&dir, "red.json");
    assert_eq!(code(&betaforge(&["treepair", "reduce", &prod, "-o", &red])), 0);
    let v = json_file(&red);
    assert_eq!(v["left"], serde_json::json!(["."]));
    assert_eq!(v["right"], serde_json::json!(["."]));

    let id = new_pair(&dir, "id.json", &["1", "1"], "L", "L");
    let o = betaforge(&["treepair", "equiv", &prod, &id]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "equivalent\n"));
    assert_eq!(code(&betaforge(&["treepair", "equiv", &x0, &id])), 1);
}

#[test]
fn plmap_operations() {
    let dir = TempDir::new().unwrap();
    let x0 = new_pair(&dir, "x0.json", &["1", "1"], "(2,1)[(2,1),L]", "(2,1)[L,(2,1)]");
    let f = path(&dir, "f.json");
    assert_eq!(code(&betaforge(&["treepair", "to-plmap", &x0, "-o", &f])), 0);
    let finv = path(&dir, "finv.json");
    assert_eq!(code(&betaforge(&["plmap", "invert", &f, "-o", &finv])), 0);
    let o = betaforge(&["plmap", "compose", &f, &finv, "--format", "text"]);
    assert_eq!(stdout(&o), "(0, 0) (1, 1)\n");

    // The first cell [0, β^4] maps onto [0, β^2]; β^4 = 2 - 3β.
    let o = betaforge(&["plmap", "eval", &f, "2,-3"]);
    assert_eq!(stdout(&o), "1-b\n");
    assert_eq!(code(&betaforge(&["plmap", "eval", &f, "0,0,0"])), 2);
    let o = betaforge(&["plmap", "eval", &f, "0"]);
    assert_eq!(stdout(&o), "0\n");
    let o = betaforge(&["plmap", "eval", &f, "1"]);
    assert_eq!(stdout(&o), "1\n");
    assert_eq!(code(&betaforge(&["plmap", "eval", &f, "2"])), 2);

    let o = betaforge(&["plmap", "validate", &f]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("verdict      member\n"));
}

#[test]
fn counterexample_is_outside_the_golden_ratio_group() {
    let o = betaforge(&["counterexample", "1", "1"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["membership"]["verdict"], false);
    assert_eq!(v["membership"]["slopes_ok"], true);
    assert!(!v["membership"]["offending"].as_array().unwrap().is_empty());
    let o = betaforge(&["counterexample", "1", "1", "--domain", "LSR", "--codomain", "LSR"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn presentation_relations() {
    let o = betaforge(&["presentation", "1", "1", "--max-index", "3"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 28);
    assert!(s.lines().any(|l| l == "x3 y1 = y1 x4"));
    let o = betaforge(&["presentation", "1", "1", "--max-index", "2", "--check"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("convention LeftToRight\n"));
    assert_eq!(code(&betaforge(&["presentation", "3", "1"])), 2);
}

fn criterion_line(out: &str, n: u8) -> String {
    out.lines()
        .find(|l| l.get(5..7).map(str::trim) == Some(&n.to_string()))
        .unwrap_or_else(|| panic!("no line for criterion {n} in\n{out}"))
        .to_string()
}

#[test]
fn verify_paper_exit_code_tracks_the_table() {
    let o = betaforge(&["verify-paper"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 12);
    let all = lines.iter().all(|l| l.starts_with("PASS"));
    assert_eq!(code(&o), if all { 0 } else { 1 });
}

#[test]
fn verify_paper_hooks_force_failures() {
    let o = betaforge(&["verify-paper", "--corrupt-matrix"]);
    assert_eq!(code(&o), 1);
    assert!(criterion_line(&stdout(&o), 1).starts_with("FAIL"));

    let o = betaforge(&["verify-paper", "--max-n", "1"]);
    assert_eq!(code(&o), 1);
    let line = criterion_line(&stdout(&o), 2);
    assert!(line.starts_with("FAIL") && line.contains("inconclusive"), "{line}");
}
