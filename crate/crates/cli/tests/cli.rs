use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbistring")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("JSON on stderr")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbistring-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn dw_table_for_s3() {
    let out = run(&["dw", "--group", "S3", "--format", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(3).collect();
    assert_eq!(rows.len(), 3);
    assert!(text.contains("3*[()] + 3*[(1,2,3)]"));
    assert!(text.contains("2*[()] + [(1,2,3)]"));
}

#[test]
fn torsion_on_klein_group_has_halves() {
    let v = stdout_json(&run(&["torsion", "--group", "Z2xZ2", "--cocycle", "nontrivial"]));
    assert_eq!(v["tau"]["denominator"], 2);
    assert_eq!(v["groupoid_law"], true);
    assert_eq!(v["regular_classes"], serde_json::json!(["(0,0)"]));
    let flat: Vec<i64> = v["tau"]["num"].as_array().unwrap().iter().flat_map(|r| r.as_array().unwrap().iter().map(|x| x.as_i64().unwrap())).collect();
    assert_eq!(flat.iter().filter(|&&x| x == 1).count(), 6);
}

#[test]
fn gcompose_mismatch_names_the_slot() {
    let w = r#"{"n":2,"chords":[[1,4,3,4]],"marks":[[1,4],[3,4]],"group":"S3","outer":"(1,3,2)","delta":["(2,3)"]}"#;
    let ih = stdout_json(&run(&["ih", "--diagram", w]));
    let first = ih["ih"][0].as_str().unwrap().to_string();
    let second = ih["ih"][1].as_str().unwrap().to_string();
    let good = |h: &str| format!(r#"{{"n":1,"chords":[],"marks":[[0,1]],"group":"S3","outer":"{h}"}}"#);
    let ok = run(&["gcompose", "--base", w, "--parts", &good(&first), &good(&second)]);
    assert_eq!(stdout_json(&ok)["ih"], ih["ih"]);
    let wrong = if second == "()" { "(1,2)" } else { "()" };
    let bad = run(&["gcompose", "--base", w, "--parts", &good(&first), &good(wrong)]);
    assert_eq!(bad.status.code(), Some(1));
    let e = stderr_json(&bad);
    assert_eq!(e["slot"], 2);
    assert!(e["message"].as_str().unwrap().contains("slot 2"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["dw"]).status.code(), Some(2));
    assert_eq!(run(&["ring"]).status.code(), Some(2));
    let unknown = run(&["dw", "--group", "Q9"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert_eq!(stderr_json(&unknown)["error"], "group");
    let missing = run(&["cactus", "--diagram", "/nonexistent/diagram.json"]);
    assert_eq!(stderr_json(&missing)["error"], "io");
    let crossing = run(&["validate", "diagram", r#"{"n":3,"chords":[[1,10,4,10],[2,10,6,10]],"marks":[[0,1],[1,4],[1,2]]}"#]);
    assert_eq!(crossing.status.code(), Some(1));
    assert_eq!(stderr_json(&crossing)["error"], "chord");
    assert_eq!(run(&["ring", "--lens", "4,2"]).status.code(), Some(1));
}

#[test]
fn cactus_round_trip_through_the_cli() {
    let d = r#"{"n":3,"chords":[[1,8,3,8],[3,8,5,8]],"marks":[[1,8],[3,8],[0,1]]}"#;
    let cactus = stdout_json(&run(&["cactus", "--diagram", d]));
    let back = stdout_json(&run(&["uncactus", "--cactus", &cactus.to_string()]));
    let canon = stdout_json(&run(&["validate", "diagram", d]))["summary"]["canonical"].clone();
    assert_eq!(back["canonical"], canon);
    // reparsing the emitted diagram gives the same canonical class
    let again = stdout_json(&run(&["validate", "diagram", &back["diagram"].to_string()]));
    assert_eq!(again["summary"]["canonical"], canon);
}

#[test]
fn compose_with_units() {
    let d = r#"{"n":2,"chords":[[1,4,3,4]],"marks":[[1,4],[3,4]]}"#;
    let unit = r#"{"n":1,"chords":[],"marks":[[0,1]]}"#;
    let out = stdout_json(&run(&["compose", "--outer", d, "--parts", unit, unit]));
    let canon = stdout_json(&run(&["validate", "diagram", d]))["summary"]["canonical"].clone();
    assert_eq!(out["canonical"], canon);
    let arity = run(&["compose", "--outer", d, "--parts", unit]);
    assert_eq!(arity.status.code(), Some(1));
}

#[test]
fn enumerate_fiber_counts() {
    let d = r#"{"n":2,"chords":[[1,4,3,4]],"marks":[[1,4],[3,4]]}"#;
    let v = stdout_json(&run(&["enumerate", "--diagram", d, "--group", "Z3", "--outer", "1", "--fiber"]));
    assert_eq!(v["classes"], 27);
    assert_eq!(v["expected"], "27");
    assert_eq!(v["free"], true);
    let capped = run(&["enumerate", "--diagram", d, "--group", "S4", "--outer", "()", "--cap", "10"]);
    assert_eq!(stderr_json(&capped)["error"], "gchord");
}

#[test]
fn ring_and_bvcheck() {
    let r = stdout_json(&run(&["ring", "--lens", "3,2", "--window", "-3,6"]));
    assert_eq!(r["basis"].as_array().unwrap().len(), 18);
    assert_eq!(r["presentation"]["relations"], serde_json::json!(["v^2 = 1"]));
    let pass = stdout_json(&run(&["bvcheck", "--lens", "3,2", "--window", "-3,6"]));
    assert_eq!(pass["verdict"], "pass");
    let fail = stdout_json(&run(&["bvcheck", "--lens", "3,2", "--window", "-3,6", "--delta", r#"{"entries":[["1","a",1]]}"#]));
    assert_eq!(fail["verdict"], "fail");
    assert!(fail["axioms"][0]["witness"].as_str().unwrap().contains("Δ(a)"));
    let unknown = run(&["bvcheck", "--lens", "3,2", "--delta", r#"{"entries":[["w","a",1]]}"#]);
    assert_eq!(stderr_json(&unknown)["error"], "bv");
    let center = stdout_json(&run(&["bvcheck", "--center", "S3"]));
    assert_eq!(center["verdict"], "pass");
}

#[test]
fn catalog_override_directory() {
    let dir = scratch("catalog");
    std::fs::create_dir_all(dir.join("groups")).unwrap();
    std::fs::create_dir_all(dir.join("cocycles/V4")).unwrap();
    let table = r#"{"name":"V4","order":4,"mult":[[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]]}"#;
    std::fs::write(dir.join("groups/V4.json"), table).unwrap();
    // α(a,b) = exp(πi a₁b₂) with a = 2a₁ + a₂
    let num: Vec<Vec<i64>> = (0..4).map(|a| (0..4).map(|b| (a / 2) * (b % 2)).collect()).collect();
    let cocycle = serde_json::json!({"group": "V4", "denominator": 2, "num": num});
    std::fs::write(dir.join("cocycles/V4/twist.json"), cocycle.to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_orbistring"))
        .args(["twisted-center", "--group", "V4", "--cocycle", "twist"])
        .env("ORBISTRING_CATALOG", &dir)
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["dim"], 1);
    let without = run(&["dw", "--group", "V4"]);
    assert_eq!(without.status.code(), Some(1));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn morita_and_string_ring() {
    let m = stdout_json(&run(&["morita", "--group", "S3", "--gens", "(1,2,3)"]));
    assert_eq!(m["isomorphic"], true);
    assert_eq!(m["dim_x"], 3);
    let s = stdout_json(&run(&["string-ring", "--group", "S4", "--cosets", "(1,2)", "(1,2,3)"]));
    assert_eq!(s["dim"], 3);
}

#[test]
fn selftest_is_deterministic_and_seeded() {
    let a = run(&["selftest", "--seed", "7"]);
    let b = run(&["selftest", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], v["total"]);
}
