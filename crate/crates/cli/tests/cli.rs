use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_uses_kappa_clause_count() {
    let o = lslab(&["generate", "--n", "100", "--kappa", "1.5", "--mode", "planted", "--seed", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "p cnf 100 691"));
    let clauses = text.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).count();
    assert_eq!(clauses, 691);
    // same seed, same bytes
    assert_eq!(text, stdout(&lslab(&["generate", "--n", "100", "--kappa", "1.5", "--seed", "7"])));
}

#[test]
fn generate_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("g.json");
    fs::write(&cfg, r#"{"n": 20, "rho": 2.0, "mode": "uniform", "seed": 3}"#).unwrap();
    let out = dir.path().join("f.cnf");
    let o = lslab(&["generate", "--config", p(&cfg), "--out", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("p cnf 20 40"));
}

#[test]
fn usage_errors_exit_one_with_one_line() {
    for args in [
        &["frobnicate"][..],
        &["generate", "--n", "10", "--m", "5", "--kappa", "1"],
        &["generate", "--n", "2", "--m", "1"],
        &["generate", "--n", "10", "--m", "5", "--mode", "sideways"],
        &["sweep", "--kind", "zero_flood", "--n", "20", "--trials", "1"],
    ] {
        let o = lslab(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn missing_file_exits_two() {
    let o = lslab(&["census", "--file", "/definitely/not/here.cnf"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("/definitely/not/here.cnf"));
}

#[test]
fn verify_reports_opt_and_minima() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("tiny.cnf");
    let o = lslab(&["generate", "--n", "10", "--m", "40", "--mode", "uniform", "--seed", "11", "--out", p(&f)]);
    assert!(o.status.success());
    let o = lslab(&["verify", "--file", p(&f)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let opt = v["opt"].as_u64().unwrap();
    assert!((35..=40).contains(&opt));
    let minima = &v["minima"];
    let total = minima["not_minimum"].as_u64().unwrap()
        + minima["global_minima"].as_u64().unwrap()
        + minima["proper_minima"].as_u64().unwrap();
    assert_eq!(total, 1024);
    assert_eq!(minima["global_minima"].as_u64().unwrap() > 0, opt == 40);
}

#[test]
fn solve_and_census_emit_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.cnf");
    fs::write(&f, "p cnf 9 4\n1 2 3 0\n-1 4 5 0\n-2 6 7 0\n-3 8 9 0\n").unwrap();
    let o = lslab(&["solve", "--file", p(&f), "--solver", "ls", "--initial", "zeros"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "proper_local_minimum");
    assert_eq!(v["flips"], 0);

    let o = lslab(&["census", "--file", p(&f), "--list"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["crowns"], 1);
    assert_eq!(v["crown_list"].as_array().unwrap().len(), 1);

    let o = lslab(&["solve", "--file", p(&f), "--solver", "sd", "--full", "--seed", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "satisfied");
    assert!(v["steps"].as_array().is_some());

    let o = lslab(&["solve", "--file", p(&f), "--solver", "coupled", "--initial", "111111111"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_distance"], 0);

    let o = lslab(&["solve", "--file", p(&f), "--initial", "0101"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t.json");
    fs::write(
        &cfg,
        r#"{"kind": "transition_sweep", "n": [100, 200], "kappa": [0.8, 2.0], "trials": 6, "base_seed": 42}"#,
    )
    .unwrap();
    let a = lslab(&["sweep", "--config", p(&cfg)]);
    let b = lslab(&["sweep", "--config", p(&cfg), "--threads", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1 + 4 * 6);

    let out1 = dir.path().join("1.jsonl");
    let out2 = dir.path().join("2.jsonl");
    for out in [&out1, &out2] {
        let o = lslab(&["sweep", "--config", p(&cfg), "--format", "json", "--out", p(out)]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
}

#[test]
fn sweep_resume_finishes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("census.csv");
    let args = [
        "sweep", "--kind", "structure_census", "--n", "80", "--rho", "1,2,3", "--mode", "uniform",
        "--trials", "4", "--seed", "9", "--out",
    ];
    let mut full = args.to_vec();
    full.push(p(&out));
    assert!(lslab(&full).status.success());
    let reference = fs::read_to_string(&out).unwrap();
    let truncated: Vec<&str> = reference.lines().take(1 + 4 + 2).collect();
    fs::write(&out, truncated.join("\n") + "\n").unwrap();
    full.push("--resume");
    let o = lslab(&full);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("1 resumed"));
    assert_eq!(fs::read_to_string(&out).unwrap(), reference);
}
