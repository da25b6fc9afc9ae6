use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn shc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shc")).args(args).env_remove("SHC_FIELD").output().expect("runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn fixture(dir: &Path, name: &str, structure: bool) -> PathBuf {
    let out = dir.join(format!("{name}{}.json", if structure { ".structure" } else { "" }));
    let mut args = vec!["fixture", name, "-o", p(&out)];
    if structure {
        args.push("--structure");
    }
    let o = shc(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn write(path: &Path, v: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

#[test]
fn builtin_hopf_verifies() {
    let o = shc(&["verify", "hopf", "builtin:kZ2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = shc(&["verify", "hopf", "builtin:sweedler4", "--json"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r["entries"].as_array().unwrap().iter().all(|e| e["pass"] == true));
}

#[test]
fn comatrix_passes_and_corrupted_counit_fails_e23b() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture(dir.path(), "comatrix", false);
    assert_eq!(code(&shc(&["verify", "squared", p(&path)])), 0);
    let mut v = read(&path);
    v["eps"][0][0] = Value::String("2".into());
    write(&path, &v);
    let o = shc(&["verify", "squared", p(&path)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL e23b ")), "{}", stdout(&o));
}

#[test]
fn kz2_coend_with_every_flag() {
    let dir = tempfile::tempdir().unwrap();
    let d = fixture(dir.path(), "kZ2", false);
    let out = dir.path().join("coend.json");
    let o = shc(&["coend", p(&d), "--monoidal", "--antipode", "--rmatrix", "--ribbon", "--check-c58", "-o", p(&out)]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let v = read(&out);
    assert_eq!(v["coalgebra"]["comodule"]["dim"], 2);
    assert_eq!(v["ribbon"]["Theta"], serde_json::json!([["1", "-1"]]));
    assert_eq!(v["quasitriangular"]["R_plus"].as_array().unwrap()[0].as_array().unwrap().len(), 4);
    let report = v["report"]["entries"].as_array().unwrap();
    for name in ["ribbon.e171c", "quasitriangular.e160f", "hopf_coalgebra.f112ii", "coend.d23a", "c58"] {
        assert!(report.iter().any(|e| e["name"] == name && e["pass"] == true), "{name}");
    }
}

#[test]
fn coend_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = fixture(dir.path(), "trivial-rigid", false);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        assert_eq!(code(&shc(&["coend", p(&d), "--antipode", "-o", p(out)])), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn antipode_without_dual_table_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = fixture(dir.path(), "kZ2", false);
    let mut v = read(&d);
    v.as_object_mut().unwrap().remove("dual_table");
    write(&d, &v);
    let o = shc(&["coend", p(&d), "--antipode", "-o", p(&dir.path().join("out.json"))]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("NotDualClosed"), "{}", stderr(&o));
    assert_eq!(code(&shc(&["coend", p(&d), "--monoidal", "-o", p(&dir.path().join("out.json"))])), 0);
}

#[test]
fn under_generating_family_reports_rank_deficit() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("unit_only.json");
    write(
        &d,
        &serde_json::json!({
            "hopf": "builtin:kZ2",
            "objects": [{ "name": "I", "coaction": [["1"], ["0"]] }],
            "morphisms": [],
        }),
    );
    let o = shc(&["coend", p(&d), "--check-c58", "-o", p(&dir.path().join("out.json"))]);
    assert_eq!(code(&o), 1);
    let o = shc(&["coend", p(&d), "--check-c58", "-o", p(&dir.path().join("out.json")), "--json"]);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c58 = r["entries"].as_array().unwrap().iter().find(|e| e["name"] == "c58").unwrap().clone();
    assert_eq!(c58["pass"], false);
    assert!(c58["note"].as_str().unwrap().contains("rank 1 of dim H = 2"));
}

#[test]
fn opposite_of_written_coend() {
    let dir = tempfile::tempdir().unwrap();
    let d = fixture(dir.path(), "trivial-comatrix", false);
    let c = dir.path().join("c.json");
    assert_eq!(code(&shc(&["coend", p(&d), "-o", p(&c)])), 0);
    // no r-form over the trivial algebra: ζ comes from the diagram
    let mut v = read(&c);
    v["diagram"]["zeta"] = serde_json::json!({ "grouplike": ["1"] });
    write(&c, &v);
    let o = shc(&["opposite", p(&c)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out["coalgebra"]["comodule"]["dim"], 4);
    let entries = out["report"]["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["name"] == "d107[M]" && e["pass"] == true));
    assert!(entries.iter().any(|e| e["name"] == "coend.matches_file" && e["pass"] == true));
}

#[test]
fn structure_levels_verify_and_corruptions_name_the_equation() {
    let dir = tempfile::tempdir().unwrap();
    let s = fixture(dir.path(), "kZ2", true);
    for kind in ["squared", "bicoalgebra", "hopf-coalgebra", "quasitriangular", "ribbon"] {
        let o = shc(&["verify", kind, p(&s)]);
        assert_eq!(code(&o), 0, "{kind}: {}", stdout(&o));
    }
    let mut v = read(&s);
    v["Theta"][0][1] = Value::String("2".into());
    let bad = dir.path().join("bad.json");
    write(&bad, &v);
    let o = shc(&["verify", "ribbon", p(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL e171"), "{}", stdout(&o));
    let mut v = read(&s);
    v["gamma_r"][1][1] = Value::String("5".into());
    write(&bad, &v);
    let o = shc(&["verify", "hopf-coalgebra", p(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL f112"), "{}", stdout(&o));
}

#[test]
fn eval_prints_realization() {
    let dir = tempfile::tempdir().unwrap();
    let c = fixture(dir.path(), "comatrix", false);
    let o = shc(&["eval", "C_{12'} (x) C_{2''3}", "--bind", &format!("C={}", p(&c))]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("level: 3"), "{text}");
    assert!(text.contains("dim: 16"), "{text}");
    let o = shc(&["eval", "C_{1'1''}", "--bind", &format!("C={}", p(&c)), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["level"], 1);
    assert_eq!(v["dim"], 4);
}

#[test]
fn eval_parse_error_has_position() {
    let o = shc(&["eval", "C_{12} (x) "]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("ParseError"), "{}", stderr(&o));
    assert!(stderr(&o).contains(" at "), "{}", stderr(&o));
}

#[test]
fn demos_pass() {
    for name in ["trivial-comatrix", "kZ2-qt", "sweedler4-hopf"] {
        let o = shc(&["demo", name]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
    assert_eq!(code(&shc(&["demo", "nope"])), 2);
}

#[test]
fn field_override_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = fixture(dir.path(), "kZ2", false);
    let out = dir.path().join("f7.json");
    let o = Command::new(env!("CARGO_BIN_EXE_shc"))
        .args(["coend", p(&d), "--antipode", "-o", p(&out)])
        .env("SHC_FIELD", "F7")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_ne!(read(&out)["field"], "Q");
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    for kind in ["hopf", "comodule", "squared"] {
        assert_eq!(code(&shc(&["verify", kind, p(&bad)])), 2);
    }
    write(&bad, &serde_json::json!({ "hopf": "builtin:kZ2", "coaction": [["1", "0"], ["0"]] }));
    assert_eq!(code(&shc(&["verify", "comodule", p(&bad)])), 2);
    assert_eq!(code(&shc(&["verify", "hopf", "builtin:nope"])), 2);
}
