use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn sfvs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfvs")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TRIANGLE: &str = "c triangle\np sfvs 3 3\ne 1 2\ne 1 3\ne 2 3\nt 1\n";

fn solve_json(file: &Path, extra: &[&str]) -> Value {
    let mut args = vec!["solve", s(file)];
    args.extend_from_slice(extra);
    let o = sfvs(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn solve_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.txt", TRIANGLE);
    let v = solve_json(&f, &["--weighted"]);
    assert_eq!(v["optimum_weight"], "2/1");
    assert_eq!(v["certified"], true);
    assert!(v.get("decision").is_none());
    assert!(v.get("timings").is_none());
    let v = solve_json(&f, &["--unweighted", "--timings"]);
    assert_eq!(v["optimum_weight"], "2/1");
    assert!(v["timings"]["solve_ms"].is_number());
}

#[test]
fn no_terminals_keeps_everything() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k4.txt", "p sfvs 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n");
    let v = solve_json(&f, &[]);
    assert_eq!(v["forest"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["deleted"], serde_json::json!([]));
}

#[test]
fn threshold_at_total_weight_is_yes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k.txt", "p sfvs 3 3\ne 1 2\ne 1 3\ne 2 3\nt 1\nt 2\nt 3\nw 2 5/2\nk 9/2\n");
    assert_eq!(solve_json(&f, &[])["decision"], true);
    let f = write(dir.path(), "k0.txt", "p sfvs 3 3\ne 1 2\ne 1 3\ne 2 3\nt 1\nk 0/1\n");
    // a no-answer is still a successful run
    assert_eq!(solve_json(&f, &[])["decision"], false);
}

#[test]
fn parse_errors_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.txt", "p sfvs 3 1\ne 1 4\n");
    let o = sfvs(&["solve", s(&f)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&sfvs(&["solve", "/nonexistent/file"])), 2);
}

#[test]
fn capacity_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // a star: U = two leaves, Z may hold the center, so the modulator has up to 3 vertices
    let f = write(dir.path(), "star.txt", "p sfvs 5 4\ne 1 2\ne 1 3\ne 1 4\ne 1 5\nt 1\n");
    let cfg = write(dir.path(), "cfg.toml", "[reduced_solver]\nbackend = \"dp\"\nmax_modulator = 1\n");
    let o = sfvs(&["solve", s(&f), "--config", s(&cfg)]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.txt", TRIANGLE);
    let o = sfvs(&["solve", s(&f)]);
    let good = write(dir.path(), "good.json", &String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&sfvs(&["verify", s(&f), s(&good)])), 0);

    let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
    v["forest"] = serde_json::json!([1, 2, 3]);
    v["deleted"] = serde_json::json!([]);
    v["optimum_weight"] = "3/1".into();
    v["deleted_weight"] = "0/1".into();
    let cyc = write(dir.path(), "cyc.json", &v.to_string());
    let o = sfvs(&["verify", s(&f), s(&cyc)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("cycle through terminal 1"));

    v["deleted"] = serde_json::json!([3]);
    let overlap = write(dir.path(), "overlap.json", &v.to_string());
    assert_eq!(code(&sfvs(&["verify", s(&f), s(&overlap)])), 1);

    v["n"] = 4.into();
    let wrong_n = write(dir.path(), "n.json", &v.to_string());
    assert_eq!(code(&sfvs(&["verify", s(&f), s(&wrong_n)])), 2);
}

#[test]
fn gen_is_deterministic() {
    let a = sfvs(&["gen", "--family", "random_cograph", "--seed", "1"]);
    let b = sfvs(&["gen", "--family", "random_cograph", "--seed", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&sfvs(&["gen", "--family", "nope", "--seed", "1"])), 2);
    assert_eq!(code(&sfvs(&["bench", "--suite", "nope"])), 2);
}

#[test]
fn recognize_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "pat.txt", "p sfvs 6 3\ne 3 4\ne 4 5\ne 5 6\n");
    let o = sfvs(&["recognize", "--s", "2", s(&f)]);
    assert_eq!(code(&o), 1);
    let ids: Vec<usize> = String::from_utf8_lossy(&o.stdout).split_whitespace().map(|x| x.parse().unwrap()).collect();
    assert_eq!(ids.len(), 6);
    let f = write(dir.path(), "k4.txt", "p sfvs 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n");
    let o = sfvs(&["recognize", "--s", "2", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "free");
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let o = sfvs(&["gen", "--family", "sp1p4_free_filtered", "--n", "9", "--seed", &seed.to_string(), "--weights", "rational"]);
        let f = write(dir.path(), "g.txt", &String::from_utf8_lossy(&o.stdout));
        let one = sfvs(&["solve", s(&f), "--threads", "1", "--audit"]);
        let four = sfvs(&["solve", s(&f), "--threads", "4", "--audit"]);
        assert_eq!(one.stdout, four.stdout);
    }
}

#[test]
fn solve_then_verify_on_generated_files() {
    let dir = tempfile::tempdir().unwrap();
    let families = ["random_gnp", "random_cograph", "cograph_plus_modulator", "sp1p4_free_filtered", "split_like"];
    for (i, fam) in families.iter().enumerate() {
        for seed in 0..4 {
            let o = sfvs(&["gen", "--family", fam, "--n", "8", "--seed", &(seed * 7 + i).to_string(), "--weights", "rational"]);
            assert_eq!(code(&o), 0, "{fam}");
            let f = write(dir.path(), "g.txt", &String::from_utf8_lossy(&o.stdout));
            let r = sfvs(&["solve", s(&f)]);
            assert_eq!(code(&r), 0);
            let rf = write(dir.path(), "r.json", &String::from_utf8_lossy(&r.stdout));
            assert_eq!(code(&sfvs(&["verify", s(&f), s(&rf)])), 0, "{fam} seed {seed}");
        }
    }
}
