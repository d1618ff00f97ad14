//! End-to-end tests of the `orthoverlap` binary: every subcommand, the JSON
//! and file outputs, determinism, and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orthoverlap"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) {
    fs::write(dir.join(name), content).unwrap();
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const SQUARE: &str = "ortho 4\n0 0\n1 0\n1 1\n0 1\n";
const L_SHAPE: &str = "ortho 6\n0 0\n2 0\n2 1\n1 1\n1 2\n0 2\n";

#[test]
fn solve_unit_squares() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p.poly", SQUARE);
    write(dir.path(), "q.poly", SQUARE);
    let out = run_in(
        dir.path(),
        &["solve", "--algo", "fast", "--in", "p.poly", "q.poly", "--check"],
    );
    let v = stdout_json(&out);
    assert_eq!(v["area"], 1);
    assert_eq!(v["check"], true);
    assert_eq!(v["algo"], "fast");
}

#[test]
fn solve_algos_agree_and_write_out_file() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p.poly", L_SHAPE);
    write(dir.path(), "q.poly", SQUARE);
    let mut areas = Vec::new();
    for algo in ["fast", "baseline", "brute"] {
        let out_file = format!("{algo}.json");
        let out = run_in(
            dir.path(),
            &[
                "solve", "--algo", algo, "--in", "p.poly", "q.poly", "--out", &out_file,
            ],
        );
        assert!(out.status.success());
        let v: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(&out_file)).unwrap())
                .unwrap();
        areas.push(v["area"].as_i64().unwrap());
    }
    assert_eq!(areas, vec![1, 1, 1]);
}

#[test]
fn solve_rejects_malformed_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.poly", "ortho 3\n0 0\n1 0\n1 1\n");
    write(dir.path(), "q.poly", SQUARE);
    let out = run_in(dir.path(), &["solve", "--in", "bad.poly", "q.poly"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn solve_missing_file_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "q.poly", SQUARE);
    let out = run_in(dir.path(), &["solve", "--in", "nope.poly", "q.poly"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_random_is_deterministic_and_solvable() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["p.poly", "p2.poly"] {
        let out = run_in(
            dir.path(),
            &[
                "gen", "random", "--seed", "11", "--cols", "6", "--max-extent", "9", "--out",
                name,
            ],
        );
        assert!(out.status.success());
    }
    let a = fs::read_to_string(dir.path().join("p.poly")).unwrap();
    let b = fs::read_to_string(dir.path().join("p2.poly")).unwrap();
    assert_eq!(a, b);
    assert!(a.starts_with("ortho "));

    let out = run_in(
        dir.path(),
        &[
            "gen", "random", "--seed", "12", "--cols", "5", "--max-extent", "7", "--out",
            "q.poly",
        ],
    );
    assert!(out.status.success());
    let solved = run_in(dir.path(), &["solve", "--in", "p.poly", "q.poly", "--check"]);
    let v = stdout_json(&solved);
    assert_eq!(v["check"], true);
}

#[test]
fn gen_comb_and_slabs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["gen", "comb", "--k", "3", "--out", "p.poly", "q.poly"],
    );
    assert!(out.status.success());
    let p = fs::read_to_string(dir.path().join("p.poly")).unwrap();
    assert!(p.starts_with("ortho 16\n")); // 4k+4

    let out = run_in(
        dir.path(),
        &["gen", "slabs", "--in", "p.poly", "q.poly", "--out", "slabs.tsv"],
    );
    assert!(out.status.success());
    let tsv = fs::read_to_string(dir.path().join("slabs.tsv")).unwrap();
    let mut lines = tsv.lines();
    assert_eq!(lines.next(), Some("l\tr\tb\tA\tB\tC\tD"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 10);
    assert!(rows.iter().all(|r| r.split('\t').count() == 7));
}

#[test]
fn hardness_overlap_roundtrip_certifies() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sets.json",
        r#"{"a":[4],"b":[1],"c":[1],"d":[1],"e":[1]}"#,
    );
    let out = run_in(
        dir.path(),
        &[
            "gen", "hardness", "--sets", "sets.json", "--variant", "overlap", "--out", "p.poly",
            "q.poly", "meta.json",
        ],
    );
    assert!(out.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["variant"], "overlap");
    assert_eq!(meta["p_vertices"], 24);
    assert_eq!(meta["q_vertices"], 26);
    assert_eq!(meta["threshold"], "10003/10000");

    let out = run_in(
        dir.path(),
        &[
            "verify",
            "reduction",
            "--in",
            "meta.json",
            "--unsat-samples",
            "40",
            "--outside-samples",
            "15",
            "--isolation-samples",
            "4",
        ],
    );
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["forward_ok"], true);
    assert_eq!(v["witness"]["a"], 4);
}

#[test]
fn hardness_containment_unsat_certifies() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "sets.json", r#"{"a":[5],"b":[1],"c":[1]}"#);
    let out = run_in(
        dir.path(),
        &[
            "gen",
            "hardness",
            "--sets",
            "sets.json",
            "--variant",
            "containment",
            "--out",
            "p.poly",
            "q.poly",
            "meta.json",
        ],
    );
    assert!(out.status.success());
    let q = fs::read_to_string(dir.path().join("q.poly")).unwrap();
    assert!(q.starts_with("general 19\n"));

    let out = run_in(
        dir.path(),
        &[
            "verify",
            "reduction",
            "--in",
            "meta.json",
            "--unsat-samples",
            "30",
            "--outside-samples",
            "10",
            "--isolation-samples",
            "4",
        ],
    );
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["witness"], serde_json::Value::Null);
    assert_eq!(v["sweep_reaches_threshold"], false);
}

#[test]
fn verify_rejects_tampered_meta_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sets.json",
        r#"{"a":[4],"b":[1],"c":[1],"d":[1],"e":[1]}"#,
    );
    let out = run_in(
        dir.path(),
        &[
            "gen", "hardness", "--sets", "sets.json", "--variant", "overlap", "--out", "p.poly",
            "q.poly", "meta.json",
        ],
    );
    assert!(out.status.success());
    let meta_path = dir.path().join("meta.json");
    let tampered = fs::read_to_string(&meta_path)
        .unwrap()
        .replace("10003/10000", "10007/10000");
    fs::write(&meta_path, tampered).unwrap();
    let out = run_in(dir.path(), &["verify", "reduction", "--in", "meta.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_oversized_instance_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "sets.json",
        r#"{"a":[11,12,13,14,15],"b":[1,2,3,4,5],"c":[1,2,3,4,6],"d":[1],"e":[2]}"#,
    );
    let out = run_in(
        dir.path(),
        &[
            "gen", "hardness", "--sets", "sets.json", "--variant", "overlap", "--out", "p.poly",
            "q.poly", "meta.json",
        ],
    );
    assert!(out.status.success());
    let out = run_in(dir.path(), &["verify", "reduction", "--in", "meta.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bench_run_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench", "run", "--family", "comb", "--sizes", "12,20,28", "--out", "bench.csv",
        ],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    assert!(csv.starts_with("family,k,n,m,nm,algo,"));
    assert_eq!(csv.lines().count(), 1 + 3 * 2); // header + sizes × {fast, baseline}

    let out = run_in(dir.path(), &["bench", "fit", "--in", "bench.csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("fast:") && text.contains("baseline:"));
    assert!(text.contains("ops-slope"));
}

#[test]
fn bench_trials_repeat_ops_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "bench", "run", "--family", "comb", "--sizes", "16", "--algos", "fast", "--trials",
            "3", "--out", "bench.csv",
        ],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    let ops: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap())
        .collect();
    assert_eq!(ops.len(), 3);
    assert!(ops.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn viz_is_deterministic_and_shades_intersection() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p.poly", SQUARE);
    write(dir.path(), "q.poly", SQUARE);
    let out1 = run_in(dir.path(), &["viz", "--in", "p.poly", "q.poly"]);
    let out2 = run_in(dir.path(), &["viz", "--in", "p.poly", "q.poly"]);
    assert!(out1.status.success());
    assert_eq!(out1.stdout, out2.stdout);
    let svg = String::from_utf8(out1.stdout).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.contains("viewBox="));
    assert_eq!(svg.matches("<path").count(), 3); // cells + two outlines

    // shifting Q away empties the intersection: no fill path
    let out = run_in(
        dir.path(),
        &["viz", "--in", "p.poly", "q.poly", "--tau", "5", "-3"],
    );
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("<path").count(), 2);
}

#[test]
fn viz_renders_hardness_instance() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "sets.json", r#"{"a":[2],"b":[1],"c":[1]}"#);
    let out = run_in(
        dir.path(),
        &[
            "gen",
            "hardness",
            "--sets",
            "sets.json",
            "--variant",
            "containment",
            "--out",
            "p.poly",
            "q.poly",
            "meta.json",
        ],
    );
    assert!(out.status.success());
    let out = run_in(
        dir.path(),
        &["viz", "--in", "p.poly", "q.poly", "--out", "fig.svg"],
    );
    assert!(out.status.success());
    let svg = fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.matches("<path").count() >= 2);
}
