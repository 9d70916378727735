use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TRIANGLE: &str = r#"{"vertices": [[0, 0], [1, 0], [0, 1]], "simplices": [[0, 1, 2]]}"#;
const ONE_SAMPLE: &str = r#"{"a": 1, "samples": [{"point": [0.25, 0.1]}]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn pushout(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pushout")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn validate_reports_auto_closed_faces() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let v = json(&pushout(&["validate", "--complex", path(&cx)]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["simplices"], 7);
    assert_eq!(v["dim"], 2);
    assert!(!v["notes"].as_array().unwrap().is_empty());
}

#[test]
fn validate_rejects_degenerate_simplices() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", r#"{"vertices": [[0, 0], [1, 0], [2, 0]], "simplices": [[0, 1, 2]]}"#);
    let out = pushout(&["validate", "--complex", path(&cx)]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["kind"], "dependent_vertices");
}

#[test]
fn malformed_json_exits_2_with_location() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", "{\"vertices\": [[0, 0],\n  oops]}");
    let out = pushout(&["validate", "--complex", path(&cx)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&pushout(&["push"])), 2);
    assert_eq!(code(&pushout(&["frobnicate"])), 2);
    assert_eq!(code(&pushout(&["validate", "--seed", "x"])), 2);
    assert_eq!(code(&pushout(&["validate", "--complex", "/nonexistent/cx.json"])), 2);
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    assert_eq!(code(&pushout(&["subdivide", "--complex", path(&cx)])), 2);
    assert_eq!(code(&pushout(&["subdivide", "--complex", path(&cx), "--epsilon", "-1"])), 2);
}

#[test]
fn q_with_unknown_simplex_exits_3() {
    let d = TempDir::new().unwrap();
    let cx = write(
        &d,
        "cx.json",
        r#"{"vertices": [[0, 0], [1, 0], [0, 1]], "simplices": [[0, 1, 2]], "Q": [4]}"#,
    );
    let out = pushout(&["constants", "--complex", path(&cx), "--a", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn carrier_mismatch_exits_3_with_sample_index() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let set = write(
        &d,
        "s.json",
        r#"{"a": 1, "samples": [{"point": [0.2, 0.2]}, {"point": [0.2, 0.2], "carrier": 1}]}"#,
    );
    let out = pushout(&["push", "--complex", path(&cx), "--set", path(&set)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sample 1"));
}

#[test]
fn exhausted_apex_budget_exits_4() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let set = write(&d, "s.json", ONE_SAMPLE);
    let out = pushout(&["push", "--complex", path(&cx), "--set", path(&set), "--budget", "0"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn push_on_empty_set_is_identity() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let set = write(&d, "s.json", r#"{"a": 1}"#);
    let v = json(&pushout(&["push", "--complex", path(&cx), "--set", path(&set)]));
    assert_eq!(v["set"]["samples"].as_array().unwrap().len(), 0);
    assert_eq!(v["transport"]["records"].as_array().unwrap().len(), 0);
    assert_eq!(v["stats"]["pushes"], 0);
}

#[test]
fn push_is_byte_deterministic_and_writes_artifacts() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let set = write(&d, "s.json", ONE_SAMPLE);
    let out_dir = d.path().join("out");
    let args = [
        "push",
        "--complex",
        path(&cx),
        "--set",
        path(&set),
        "--seed",
        "5",
        "--out",
        path(&out_dir),
        "--render",
    ];
    let first = pushout(&args);
    let svg1 = fs::read(out_dir.join("push.svg")).unwrap();
    let second = pushout(&args);
    let svg2 = fs::read(out_dir.join("push.svg")).unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(svg1, svg2);
    let v = json(&first);
    assert!(v["stats"]["pushes"].as_u64().unwrap() <= 2);
    for f in ["set.json", "transport.json", "stats.json"] {
        assert!(out_dir.join(f).exists());
    }
    let records = &v["transport"]["records"];
    assert_eq!(records[0]["rank_before"], serde_json::json!([1, 0]));
}

#[test]
fn render_without_output_dir_is_a_usage_error() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let set = write(&d, "s.json", ONE_SAMPLE);
    let out = pushout(&["push", "--complex", path(&cx), "--set", path(&set), "--render"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn constants_of_a_single_triangle() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let v = json(&pushout(&["constants", "--complex", path(&cx), "--a", "1"]));
    let (k2, psi) = (v["K2"].as_f64().unwrap(), v["psi"].as_f64().unwrap());
    assert!((k2 - 3.0 * psi).abs() <= 1e-12 * k2);
    assert_eq!(v["q"], 2);
}

#[test]
fn measure_of_points_on_a_segment() {
    let d = TempDir::new().unwrap();
    let pts: Vec<String> = (0..=400).map(|i| format!("{{\"point\": [{}, 0]}}", i as f64 / 400.0)).collect();
    let set = write(&d, "s.json", &format!("{{\"a\": 1, \"samples\": [{}]}}", pts.join(",")));
    let v = json(&pushout(&["measure", "--set", path(&set), "--ladder", "0.1,0.05,0.02"]));
    let value = v["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 0.05, "{value}");
    assert_eq!(v["delta_ladder"].as_array().unwrap().len(), 3);
    let v0 = json(&pushout(&["measure", "--set", path(&set), "--a", "0"]));
    assert_eq!(v0["value"], 401.0);
}

#[test]
fn subdivide_reports_rounds_and_thickness() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let out_dir = d.path().join("sub");
    let v = json(&pushout(&["subdivide", "--complex", path(&cx), "--epsilon", "0.4", "--out", path(&out_dir)]));
    assert!(v["rounds"].as_u64().unwrap() >= 2);
    assert!(v["t0"].as_f64().unwrap() > 0.0);
    let again = json(&pushout(&["validate", "--complex", path(&out_dir.join("complex.json"))]));
    assert_eq!(again["valid"], true);
    assert_eq!(again["simplices"], v["simplices"]);
}

#[test]
fn near_and_retract_run_end_to_end() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let set = write(&d, "s.json", ONE_SAMPLE);
    let v = json(&pushout(&["near", "--complex", path(&cx), "--set", path(&set), "--epsilon", "0.5"]));
    assert!(v["summary"]["rounds"].as_u64().unwrap() >= 1);
    assert!(v["stats"]["pushes"].as_u64().unwrap() >= 1);
    let r = json(&pushout(&["retract", "--complex", path(&cx), "--set", path(&set)]));
    let stages = r["chain"]["stages"].as_array().unwrap().len();
    assert!(stages >= 1);
    assert_eq!(r["e_samples"].as_array().unwrap().len(), stages + 1);
    assert_eq!(r["frames"].as_array().unwrap().len(), 5 * stages);
}

#[test]
fn render_scene_counts_and_projection() {
    let d = TempDir::new().unwrap();
    let cx = write(&d, "cx.json", TRIANGLE);
    let set = write(&d, "s.json", ONE_SAMPLE);
    let out = pushout(&["render", "--complex", path(&cx), "--set", path(&set)]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches(r#"class="edge"#).count(), 3);
    assert_eq!(svg.matches("<circle").count(), 2);
    assert_eq!(svg.matches(r#"class="ray""#).count(), 1);
    let bare = String::from_utf8(pushout(&["render", "--complex", path(&cx)]).stdout).unwrap();
    assert!(!bare.contains("<circle"));

    let tet = write(
        &d,
        "tet.json",
        r#"{"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]], "simplices": [[0,1,2,3]]}"#,
    );
    assert_eq!(code(&pushout(&["render", "--complex", path(&tet)])), 2);
    assert_eq!(code(&pushout(&["render", "--complex", path(&tet), "--project", "0,1,2"])), 2);
    let svg = pushout(&["render", "--complex", path(&tet), "--project", "0,2"]);
    assert!(svg.status.success());
}
