use std::path::PathBuf;
use std::process::{Command, Output};

use projcoh::cohomology::{CohomologyResult, KTheory};

fn projcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projcoh"))
        .args(args)
        .env_remove("PROJCOH_SCHEME_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

/// A fresh directory under the system temp dir.
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("projcoh-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const GRID: &str = r#"{"name":"grid","rank":4,"codim":2,"families":[
  {"label":"a","direction":[[1,0,0,0],[0,1,0,0]],"offset":["0/1","0/1","0/1","0/1"]},
  {"label":"b","direction":[[0,0,1,0],[0,0,0,1]],"offset":["0/1","0/1","0/1","0/1"]}]}"#;

#[test]
fn list_schemes_has_the_whole_catalog() {
    let o = projcoh(&["list-schemes"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 14);
    assert!(text.contains("penrose N=4 n=2 ν=2"));
    assert!(text.contains("danzer N=6 n=3 ν=2"));
    let json: serde_json::Value = serde_json::from_slice(&projcoh(&["list-schemes", "--format", "json"]).stdout).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 14);
}

#[test]
fn penrose_and_ttt_rows() {
    let o = projcoh(&["cohomology", "penrose"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("H²=ℤ⁸ H¹=ℤ⁵ H⁰=ℤ"));
    let o = projcoh(&["cohomology", "--scheme", "ttt"]);
    assert!(stdout(&o).contains("H²=ℤ²⁴⊕ℤ₅² H¹=ℤ⁵ H⁰=ℤ"));
}

#[test]
fn danzer_routes_agree_and_carry_the_resolution() {
    let o = projcoh(&["cohomology", "danzer", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("routes agree"));
    assert!(text.contains("H³: ℤ²⁰ (resolved"));
}

#[test]
fn k_theory_sums() {
    assert!(stdout(&projcoh(&["ktheory", "penrose"])).contains("K⁰=ℤ⁹ K¹=ℤ⁵"));
    assert!(stdout(&projcoh(&["ktheory", "socolar"])).contains("K⁰=ℤ²⁹ K¹=ℤ⁷"));
    let danzer = stdout(&projcoh(&["ktheory", "danzer"]));
    assert!(danzer.contains("K¹=ℤ²⁷ [H³:"));
    let json: KTheory = serde_json::from_slice(&projcoh(&["ktheory", "danzer", "--format", "json"]).stdout).unwrap();
    assert!(json.k1.annotation.is_some());
}

#[test]
fn arrangement_of_a_grid_file() {
    let dir = scratch("grid");
    let path = dir.join("grid.json");
    std::fs::write(&path, GRID).unwrap();
    let o = projcoh(&["arrangement", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("L₁=2 L₀=1"));
    let json: serde_json::Value =
        serde_json::from_slice(&projcoh(&["arrangement", path.to_str().unwrap(), "--format", "json"]).stdout).unwrap();
    assert_eq!(json["counts"]["l"], serde_json::json!([1, 2]));
    assert_eq!(json["levels"][1]["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn ammann_beenker_has_four_line_classes() {
    assert!(stdout(&projcoh(&["arrangement", "ammann_beenker"])).contains("L₁=4"));
}

#[test]
fn scheme_directory_override() {
    let dir = scratch("override");
    std::fs::write(dir.join("penrose.json"), GRID).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_projcoh"))
        .args(["arrangement", "penrose"])
        .env("PROJCOH_SCHEME_DIR", &dir)
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("grid N=4"));
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(projcoh(&["arrangement", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(projcoh(&["cohomology", "no_such_scheme"]).status.code(), Some(1));
    assert_eq!(projcoh(&["frobnicate"]).status.code(), Some(1));

    // two planes meeting in a line: not a finite arrangement
    let line = dir.join("line.json");
    std::fs::write(
        &line,
        r#"{"name":"line","rank":4,"codim":2,"families":[
          {"label":"a","direction":[[1,0,0,0],[0,1,0,0]],"offset":["0/1","0/1","0/1","0/1"]},
          {"label":"b","direction":[[0,1,0,0],[0,0,1,0]],"offset":["0/1","0/1","0/1","0/1"]}]}"#,
    )
    .unwrap();
    assert_eq!(projcoh(&["cohomology", line.to_str().unwrap()]).status.code(), Some(2));

    // codimension 4
    let deep = dir.join("deep.json");
    std::fs::write(
        &deep,
        r#"{"name":"deep","rank":8,"codim":4,"families":[
          {"label":"a","direction":[[1,0,0,0,0,0,0,0],[0,1,0,0,0,0,0,0],[0,0,1,0,0,0,0,0],
                                    [0,0,0,1,0,0,0,0],[0,0,0,0,1,0,0,0],[0,0,0,0,0,1,0,0]],
           "offset":["0/1","0/1","0/1","0/1","0/1","0/1","0/1","0/1"]}]}"#,
    )
    .unwrap();
    assert_eq!(projcoh(&["cohomology", deep.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn output_is_deterministic_and_json_round_trips() {
    let a = projcoh(&["cohomology", "ammann_beenker_coloured", "--format", "json"]);
    let b = projcoh(&["cohomology", "ammann_beenker_coloured", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let r: CohomologyResult = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r.table_row(), "H²=ℤ¹⁴⊕ℤ₂ H¹=ℤ⁵ H⁰=ℤ");
    let again = serde_json::to_string_pretty(&r).unwrap();
    assert_eq!(again.trim_end(), String::from_utf8(a.stdout).unwrap().trim_end());
}

#[test]
fn gamma_override() {
    let o = projcoh(&["cohomology", "generalized_penrose", "--gamma", "2/5"]);
    assert!(stdout(&o).contains("H²=ℤ³⁴ H¹=ℤ¹⁰ H⁰=ℤ"));
    assert_eq!(projcoh(&["cohomology", "penrose", "--gamma", "2/5"]).status.code(), Some(1));
}
