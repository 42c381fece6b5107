use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn abvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abvar")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn write_tmp(dir: &tempfile::TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_string_lossy().into_owned()
}

fn input_error(o: &Output, code: &str) {
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let e = stderr_json(o);
    assert_eq!(e["code"], code, "{e}");
    assert!(e["message"].is_string());
    assert!(e.get("location").is_some());
}

#[test]
fn type_of_standard_file() {
    let o = abvar(&["type", &data("type_1122.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), r#"{"type":[1,1,2,2]}"#);
}

#[test]
fn dual_of_1222() {
    let o = abvar(&["dual", &data("type_1222.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["type"], json!([1, 1, 1, 2]));
    // the printed lattice reads back with the same type
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "dual.json", &v["lattice"]);
    assert_eq!(stdout_json(&abvar(&["type", &p]))["type"], json!([1, 1, 1, 2]));
}

#[test]
fn malformed_lattices_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let odd = write_tmp(&dir, "odd.json", &json!({"g": 1, "form": [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]}));
    input_error(&abvar(&["type", &odd]), "OddDimension");
    let sym = write_tmp(&dir, "sym.json", &json!({"g": 1, "form": [[0, 1], [1, 0]]}));
    input_error(&abvar(&["type", &sym]), "InvalidLattice");
    let frac = write_tmp(&dir, "frac.json", &json!({"g": 1, "form": [[0, 1], [-1, 0]], "basis": [["1/0", 0], [0, 1]]}));
    input_error(&abvar(&["type", &frac]), "Parse");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    input_error(&abvar(&["type", &bad.to_string_lossy()]), "Parse");
    input_error(&abvar(&["type", "/nonexistent/file.json"]), "Io");
    let t = write_tmp(&dir, "u.json", &json!({"g": 3, "form": [[0,0,0,1,0,0],[0,0,0,0,2,0],[0,0,0,0,0,6],[-1,0,0,0,0,0],[0,-2,0,0,0,0],[0,0,-6,0,0,0]]}));
    assert_eq!(stdout_json(&abvar(&["type", &t]))["type"], json!([1, 2, 6]));
    assert_eq!(stdout_json(&abvar(&["dual", &t]))["type"], json!([1, 3, 6]));
}

#[test]
fn kernel_quotient_pairing_orth() {
    let k = stdout_json(&abvar(&["kernel", &data("type_1122.json")]));
    assert_eq!(k["kernel"]["order"], 16);
    assert_eq!(k["kernel"]["invariant_factors"], json!([2, 2, 2, 2]));
    assert_eq!(k["lambda_degree"], 16);
    let q = stdout_json(&abvar(&["quotient", &data("scenario_g4.json")]));
    assert_eq!(q["type"], json!([1, 1, 2, 2]));
    assert_eq!(q["degree"], 4);
    let p = stdout_json(&abvar(&["pairing", &data("pairing_g4.json")]));
    assert_eq!(p["exponent"], "1/2");
    assert_eq!(p["trivial"], false);
    let o = stdout_json(&abvar(&["orth", &data("scenario_g4.json")]));
    assert_eq!(o["complement"]["order"], 64);
    assert_eq!(o["isotropic"], true);
}

#[test]
fn non_isotropic_quotient_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let s = json!({
        "lattice": {"g": 1, "form": [[0, 1], [-1, 0]]},
        "subgroup": [["1/2", 0], [0, "1/2"]],
        "context": {"torsion": 2}
    });
    input_error(&abvar(&["quotient", &write_tmp(&dir, "s.json", &s)]), "NotIsotropic");
    let wrong_ctx = json!({"lattice": {"g": 1, "form": [[0, 1], [-1, 0]]}, "subgroup": [["1/3", 0]], "context": {"torsion": 2}});
    input_error(&abvar(&["orth", &write_tmp(&dir, "c.json", &wrong_ctx)]), "ContextMismatch");
}

#[test]
fn verify_lemma_ker_sweep() {
    let o = abvar(&["verify", "lemma-ker", "--seed", "1", "--count", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("[100/100]") && text.contains("result: PASS"), "{text}");
}

#[test]
fn verify_degree_ledger_default() {
    let o = abvar(&["verify", "degree-ledger", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let w = &v["cases"][0]["claims"][0]["witnesses"];
    assert_eq!((&w["deg f_D"], &w["deg lambda_A"], &w["deg f_C^dual"], &w["composite"]), (&json!("64"), &json!("16"), &json!("4"), &json!("4096")));
    assert_eq!(v["cases"][0]["claims"][2]["witnesses"]["root"], "none");
    assert_eq!(v["pass"], true);
}

#[test]
fn genuine_failures_exit_1() {
    // |H| = 4 in genus 2 makes A principal, and the second identity is off by 2
    let o = abvar(&["verify", "pullback-lemmas", "--genus", "2", "--rank", "2", "--count", "3"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("result: FAIL"));
}

#[test]
fn verify_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let s = json!({"lattice": {"g": 1, "form": [[0, 1], [-1, 0]]}, "subgroup": [["1/2"]]});
    input_error(&abvar(&["verify", "lemma-ker", "--scenario", &write_tmp(&dir, "s.json", &s)]), "DimensionMismatch");
    let s = json!({"subgroup": [["1/2", 0]]});
    input_error(&abvar(&["verify", "lemma-ker", "--scenario", &write_tmp(&dir, "t.json", &s)]), "MissingField");
    input_error(&abvar(&["verify", "no-such-check"]), "UnknownCheck");
    input_error(&abvar(&["verify", "lemma-ker", "--genus", "0"]), "InvalidGenus");
    input_error(&abvar(&["verify", "lemma-ker", "--jobs", "0"]), "InvalidJobs");
    input_error(&abvar(&["verify", "prym-duality", "--branch-points", "5"]), "OddBranchCount");
}

#[test]
fn verify_scenario_and_prym() {
    for check in ["lemma-ker", "dual-quotient", "pullback-lemmas", "degree-ledger"] {
        let o = abvar(&["verify", check, "--scenario", &data("scenario_g4.json")]);
        assert_eq!(o.status.code(), Some(0), "{check}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let o = abvar(&["verify", "prym-duality", "--scenario", &data("tower_reference.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["cases"][0]["claims"][1]["witnesses"]["bigonal type"], "(1,1,2,2)");
    let o = abvar(&["verify", "prym-duality", "--count", "20"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn enumerate_isotropic() {
    let o = abvar(&["enumerate-isotropic", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "count 0\n");
    let o = abvar(&["enumerate-isotropic", "--dim", "4", "--json"]);
    assert_eq!(stdout_json(&o)["count"], 15);
    let o = abvar(&["enumerate-isotropic", "--dim", "8", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    assert!(text.ends_with("count 5355\noracle 5355\nmatch true\n"));
    assert_eq!(text.lines().count(), 5355 + 3);
    assert_eq!(text.lines().next(), Some("00000010 00000001"));
    let par = abvar(&["enumerate-isotropic", "--dim", "8", "--oracle", "--jobs", "3"]);
    assert_eq!(par.stdout, o.stdout);
    input_error(&abvar(&["enumerate-isotropic", "--dim", "7"]), "InvalidDimension");
    input_error(&abvar(&["enumerate-isotropic", "--dim", "14"]), "InvalidDimension");
    input_error(&abvar(&["enumerate-isotropic", "--dim", "0"]), "InvalidDimension");
}

#[test]
fn towers() {
    let g = stdout_json(&abvar(&["genus", &data("tower_reference.json")]));
    assert_eq!((g["genus"].as_u64(), g["tower"]["base"].as_u64()), (Some(6), Some(2)));
    let b = stdout_json(&abvar(&["bigonal", &data("tower_reference.json")]));
    assert_eq!(b["genera"]["bigonal"], json!({"top": 6, "base": 2, "ramification": 18, "relative_ramification": 6}));
    assert!(b["involution"].is_string());
    // the bigonal tower is itself a valid input
    let dir = tempfile::tempdir().unwrap();
    let p = write_tmp(&dir, "b.json", &b["bigonal"]);
    assert_eq!(abvar(&["bigonal", &p]).status.code(), Some(0));

    let bad_cycle = json!({"branch": [{"label": "a", "perm": "(15)"}, {"label": "b", "perm": "(15)"}]});
    input_error(&abvar(&["genus", &write_tmp(&dir, "c.json", &bad_cycle)]), "Parse");
    let repeated = json!({"branch": [{"label": "a", "perm": "(12)(13)"}]});
    input_error(&abvar(&["genus", &write_tmp(&dir, "r.json", &repeated)]), "Parse");
    let product = json!({"branch": [{"label": "a", "perm": "(12)"}, {"label": "b", "perm": "(34)"}]});
    input_error(&abvar(&["genus", &write_tmp(&dir, "p.json", &product)]), "InvalidMonodromy");
    let intransitive = json!({"branch": [{"label": "a", "perm": "(12)"}, {"label": "b", "perm": "(12)"}]});
    input_error(&abvar(&["genus", &write_tmp(&dir, "i.json", &intransitive)]), "InvalidMonodromy");
    // a degree-4 cover whose monodromy breaks the blocks has no bigonal
    let nonblock = json!({"branch": [{"label": "a", "perm": "(123)"}, {"label": "b", "perm": "(132)"}, {"label": "c", "perm": "(14)"}, {"label": "d", "perm": "(14)"}]});
    let p = write_tmp(&dir, "n.json", &nonblock);
    assert_eq!(stdout_json(&abvar(&["genus", &p]))["tower"]["valid"], false);
    input_error(&abvar(&["bigonal", &p]), "NoBlockSystem");
}

#[test]
fn usage() {
    assert_eq!(abvar(&["--help"]).status.code(), Some(0));
    assert_eq!(abvar(&["--version"]).status.code(), Some(0));
    input_error(&abvar(&[]), "Usage");
    input_error(&abvar(&["frobnicate"]), "Usage");
    input_error(&abvar(&["verify", "lemma-ker", "--seed", "minus-one"]), "Usage");
}

#[test]
fn demo_is_deterministic() {
    let a = abvar(&["demo-paper", "--count", "5", "--json"]);
    let b = abvar(&["demo-paper", "--count", "5", "--json", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["pass"], true);
    assert_eq!(v["steps"].as_array().unwrap().len(), 11);
    let c = abvar(&["demo-paper", "--count", "5", "--seed", "99"]);
    assert_eq!(c.status.code(), Some(0), "{}", String::from_utf8_lossy(&c.stdout));
}
