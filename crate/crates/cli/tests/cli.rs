use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxsys")).args(args).output().expect("spawn coxsys")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn minpoly_reports_psi() {
    let out = run(&["--deterministic", "minpoly", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["result"]["psi"], serde_json::json!([-1, -1, 1]));
    assert!(v.get("timestamp").is_none());
}

#[test]
fn timestamp_only_without_deterministic() {
    let v = json(&run(&["minpoly", "--k", "3"]));
    assert!(v.get("timestamp").is_some());
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["minpoly", "--k", "2"][..],
        &["reduce", "--k", "4", "--word", "1,x"],
        &["reduce", "--k", "4", "--word", "1,7"],
        &["no-such-command"],
        &["minpoly"],
        &["--format", "xml", "minpoly", "--k", "4"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn failed_checks_exit_2() {
    let out = run(&["--deterministic", "loop-reduce", "--k", "4", "--word", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verified"], false);

    let out = run(&["--deterministic", "loop-reduce", "--k", "4", "--word", "1,3,1,3,1,3,1,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_gives_canonical_word() {
    let v = json(&run(&["--deterministic", "reduce", "--k", "4", "--word", "3,1,3,1"]));
    assert_eq!(v["result"]["reduced"], "1,3,1,3");
}

#[test]
fn loop_reduce_replays_to_empty() {
    let out = run(&["--deterministic", "loop-reduce", "--k", "4", "--word", "2,1,2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified"], true);
    assert_eq!(v["result"]["moves"].as_array().map(Vec::len), Some(2));
}

#[test]
fn deterministic_output_is_byte_identical() {
    let args = ["--deterministic", "--seed", "7", "arcs", "--trials", "300", "--k", "4"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_results() {
    let base = ["--deterministic", "--seed", "3", "arcs", "--trials", "300"];
    let one = json(&run(&[&["--threads", "1"][..], &base].concat()));
    let two = json(&run(&[&["--threads", "2"][..], &base].concat()));
    assert_eq!(one["result"], two["result"]);
}

#[test]
fn bounds_tsv_has_header_and_rows() {
    let out = run(&["--deterministic", "--format", "tsv", "bounds", "--primorials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].split('\t').any(|h| h == "rootBound"));
    let k_col = lines[0].split('\t').position(|h| h == "k").unwrap();
    let ks: Vec<&str> = lines[1..4].iter().map(|l| l.split('\t').nth(k_col).unwrap()).collect();
    assert_eq!(ks, ["6", "30", "210"]);
}

#[test]
fn gram_determinant_at_three() {
    let v = json(&run(&["--deterministic", "gram", "--k", "3"]));
    assert_eq!(v["verified"], true);
    let text = v["result"].to_string();
    assert!(text.contains("-100"), "{text}");
}

#[test]
fn surface_export_and_cache() {
    let dir = std::env::temp_dir().join(format!("coxsys_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("surface.json");
    let out = run(&["--deterministic", "surface", "--k", "3", "--prime", "2", "--export", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(s["f2"], 576);
    assert_eq!(s["genus"], 145);

    let cached = |d: &std::path::Path| {
        Command::new(env!("CARGO_BIN_EXE_coxsys"))
            .env("COXSYS_CACHE_DIR", d)
            .args(["--deterministic", "ball", "--k", "4", "--radius", "3"])
            .output()
            .unwrap()
    };
    let first = cached(&dir);
    assert!(dir.join("ball_k4_r3.jsonl").exists());
    let second = cached(&dir);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json(&first)["result"]["sizes"], serde_json::json!([1, 7, 31, 121]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gated_surface_exits_2() {
    let out = run(&["--deterministic", "surface", "--k", "4", "--prime", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("CONDITION_11_2_VIOLATED"));
}
