//! End-to-end tests of the `mincut` binary on fixture graphs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mincut_cli::report::{RunReport, Status};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn mincut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mincut"))
        .args(args)
        .env_remove("MINCUT_ORACLE_LIMIT")
        .output()
        .expect("spawn mincut")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn keys(v: &Value) -> Vec<&str> {
    v.as_object().expect("object").keys().map(String::as_str).collect()
}

fn is_uint(v: &Value) -> bool {
    v.as_u64().is_some()
}

/// Checks key order and value types of a report document.
fn validate_schema(doc: &Value) {
    let mut top = vec!["n", "m", "D", "config", "lambda", "stages_run", "cuts", "stats"];
    if doc.get("verdict").is_some() {
        top.push("verdict");
    }
    assert_eq!(keys(doc), top);
    for k in ["n", "m", "D", "stages_run"] {
        assert!(is_uint(&doc[k]), "{k}");
    }
    assert_eq!(
        keys(&doc["config"]),
        ["source", "root", "resolved_root", "max_size", "strict_bandwidth", "words_per_round", "budget_bits", "round_limit"]
    );
    assert!(doc["config"]["source"].is_string() && doc["config"]["root"].is_string());
    assert!(doc["config"]["strict_bandwidth"].is_boolean());
    let lambda = doc["lambda"].as_str().expect("lambda is a string");
    assert!(["1", "2", "3", ">1", ">2", ">3"].contains(&lambda), "{lambda}");
    let mut prev: Option<Vec<(u64, u64)>> = None;
    for c in doc["cuts"].as_array().expect("cuts") {
        assert_eq!(keys(c), ["cut_edges", "size", "case", "detected_by"]);
        let edges: Vec<(u64, u64)> = c["cut_edges"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
            .collect();
        assert!(edges.iter().all(|(u, v)| u < v));
        assert!(edges.windows(2).all(|w| w[0] < w[1]), "edges not sorted");
        assert_eq!(c["size"].as_u64().unwrap() as usize, edges.len());
        assert!(c["case"].is_string() && is_uint(&c["detected_by"]));
        if let Some(p) = &prev {
            assert!(p < &edges, "cuts not sorted");
        }
        prev = Some(edges);
    }
    let stats = &doc["stats"];
    assert_eq!(
        keys(stats),
        ["rounds_elapsed", "max_bits_per_edge_per_round", "total_messages", "total_bits", "violations", "per_phase"]
    );
    let phases = stats["per_phase"].as_array().unwrap();
    assert!(!phases.is_empty());
    let mut sum = 0;
    for p in phases {
        assert_eq!(keys(p), ["label", "rounds", "messages", "bits", "max_bits_per_edge_per_round", "violations"]);
        sum += p["rounds"].as_u64().unwrap();
    }
    assert_eq!(sum, stats["rounds_elapsed"].as_u64().unwrap());
    if let Some(v) = doc.get("verdict") {
        assert_eq!(keys(v), ["status", "oracle_lambda", "missing", "unexpected"]);
        assert!(["PASS", "FAIL"].contains(&v["status"].as_str().unwrap()));
    }
}

/// Reads, schema-checks and round-trips a report file.
fn read_report(path: &Path) -> RunReport {
    let text = std::fs::read_to_string(path).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    validate_schema(&doc);
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text, "report does not round-trip");
    report
}

#[test]
fn run_path_size1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p4.json");
    let o = mincut(&["run", "--graph", fixture("p4.txt").to_str().unwrap(), "--max-size", "1", "--report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("lambda=1 cuts=3"));
    let r = read_report(&out);
    assert_eq!((r.n, r.m, r.diameter, r.lambda.to_string(), r.cuts.len()), (4, 3, 3, "1".into(), 3));
    assert!(r.cuts.iter().all(|c| c.size == 1));
    assert_eq!(r.config.max_size, 1);
}

#[test]
fn run_cycle_skips_size3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c4.json");
    let o = mincut(&["run", "--graph", fixture("c4.txt").to_str().unwrap(), "--max-size", "3", "--report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_report(&out);
    assert_eq!((r.lambda.to_string(), r.cuts.len(), r.stages_run), ("2".into(), 6, 2));
    assert!(r.stats.per_phase.iter().all(|p| mincut::pipeline::is_small_stage_phase(&p.label)));
    let oracle = mincut::min_cut_oracle(&mincut::Graph::parse_edge_list("0 1\n1 2\n2 3\n3 0\n").unwrap()).unwrap();
    assert_eq!(r.cut_sets(), oracle.min_cuts);
}

#[test]
fn run_k4_strict_bandwidth_within_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k4.json");
    let o = mincut(&["run", "--graph", fixture("k4.txt").to_str().unwrap(), "--strict-bandwidth", "--report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_report(&out);
    assert!(r.config.strict_bandwidth);
    assert_eq!((r.lambda.to_string(), r.cuts.len()), ("3".into(), 4));
    assert!(r.stats.max_bits_per_edge_per_round <= r.config.budget_bits);
    assert_eq!(r.stats.violations, 0);
}

#[test]
fn run_family_with_explicit_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("prism.json");
    let o = mincut(&["run", "--family", "prism", "--n", "8", "--root", "5", "--report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_report(&out);
    assert_eq!((r.config.root.as_str(), r.config.resolved_root), ("5", 5));
    assert_eq!(r.config.source, "prism n=8 seed=0");
    assert_eq!(r.lambda.to_string(), "3");
}

#[test]
fn run_reports_above_when_capped() {
    let o = mincut(&["run", "--family", "complete", "--n", "5", "--max-size", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("lambda=>2 cuts=0"));
}

#[test]
fn input_errors_exit_2() {
    let (malformed, disconnected) = (fixture("malformed.txt"), fixture("disconnected.txt"));
    let cases: [&[&str]; 10] = [
        &["run", "--graph", malformed.to_str().unwrap()],
        &["run", "--graph", disconnected.to_str().unwrap()],
        &["run", "--graph", "/nonexistent/graph.txt"],
        &["run", "--family", "grid", "--n", "5"],
        &["run", "--family", "cycle", "--n", "5", "--root", "9"],
        &["run", "--family", "cycle", "--n", "5", "--max-size", "4"],
        &["run", "--family", "nope", "--n", "5"],
        &["run"],
        &["verify", "--family", "cycle", "--n", "20"],
        &["gen", "--family", "prism", "--n", "7"],
    ];
    for args in cases {
        let o = mincut(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn bandwidth_violation_exits_3() {
    let o = mincut(&["run", "--family", "cycle", "--n", "6", "--words-per-round", "1", "--strict-bandwidth"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bandwidth violation"));
    let lax = mincut(&["run", "--family", "cycle", "--n", "6", "--words-per-round", "1"]);
    assert_eq!(code(&lax), 0);
    assert!(!stdout(&lax).contains("violations=0"));
}

#[test]
fn round_limit_exits_4() {
    let o = mincut(&["run", "--graph", fixture("c4.txt").to_str().unwrap(), "--round-limit", "1"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn verify_prism_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = mincut(&["verify", "--graph", fixture("prism6.txt").to_str().unwrap(), "--report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS") && stdout(&o).contains("lambda=3"));
    let r = read_report(&out);
    let v = r.verdict.unwrap();
    assert_eq!((v.status, v.oracle_lambda), (Status::Pass, 3));
}

#[test]
fn verify_random_seed_sweep() {
    let o = mincut(&["verify", "--family", "random_connected", "--n", "10", "--seed", "100", "--trials", "25"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 25);
    assert!(text.contains("25 of 25 passed"));
}

#[test]
fn verify_above_three() {
    let o = mincut(&["verify", "--family", "complete", "--n", "6"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS") && stdout(&o).contains("lambda=>3"));
}

#[test]
fn verify_fault_injection_fails_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.json");
    let prism = fixture("prism6.txt");
    let o = mincut(&["verify", "--graph", prism.to_str().unwrap(), "--inject-fault", "drop-cut", "--report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    let text = stdout(&o);
    assert!(text.starts_with("FAIL"));
    assert!(text.contains("  - {"), "{text}");
    let v = read_report(&out).verdict.unwrap();
    assert_eq!((v.status, v.missing.len(), v.unexpected.len()), (Status::Fail, 1, 0));

    let o = mincut(&["verify", "--graph", prism.to_str().unwrap(), "--inject-fault", "extra-edge"]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("  - {") && stdout(&o).contains("  + {"));
}

#[test]
fn oracle_limit_env_override() {
    let run = |limit: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mincut"));
        cmd.args(["verify", "--family", "cycle", "--n", "18"]);
        match limit {
            Some(l) => cmd.env("MINCUT_ORACLE_LIMIT", l),
            None => cmd.env_remove("MINCUT_ORACLE_LIMIT"),
        };
        cmd.output().unwrap()
    };
    assert_eq!(code(&run(None)), 2);
    assert_eq!(code(&run(Some("8"))), 2);
    let o = run(Some("18"));
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS") && stdout(&o).contains("cuts=153"));
}

#[test]
fn gen_cycle_five_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c5.txt");
    let o = mincut(&["gen", "--family", "cycle", "--n", "5", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 5);
    let g = mincut::Graph::parse_edge_list(&text).unwrap();
    assert!((0..5).all(|v| g.degree(v) == 2));
}

#[test]
fn gen_random_is_deterministic() {
    let args = ["gen", "--family", "random_connected", "--n", "12", "--seed", "42"];
    let a = stdout(&mincut(&args));
    assert_eq!(a, stdout(&mincut(&args)));
    assert!(!a.is_empty());
    let other = stdout(&mincut(&["gen", "--family", "random_connected", "--n", "12", "--seed", "43"]));
    assert_ne!(a, other);
}

#[test]
fn gen_then_run_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.txt");
    let (from_file, from_family) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let gen = ["gen", "--family", "random_connected", "--n", "9", "--seed", "5", "--out", file.to_str().unwrap()];
    assert_eq!(code(&mincut(&gen)), 0);
    assert_eq!(code(&mincut(&["run", "--graph", file.to_str().unwrap(), "--report", from_file.to_str().unwrap()])), 0);
    let fam = ["run", "--family", "random_connected", "--n", "9", "--seed", "5", "--report", from_family.to_str().unwrap()];
    assert_eq!(code(&mincut(&fam)), 0);
    let (a, b) = (read_report(&from_file), read_report(&from_family));
    assert_eq!((a.n, a.m, a.diameter, a.lambda, &a.cuts, &a.stats), (b.n, b.m, b.diameter, b.lambda, &b.cuts, &b.stats));
}

#[test]
fn bench_tables_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let args = ["bench", "--family", "random_connected", "--sizes", "8,10", "--trials", "2", "--seed", "3", "--out", out.to_str().unwrap()];
        assert_eq!(code(&mincut(&args)), 0);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().next().unwrap(), mincut_cli::bench::HEADER);
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn bench_cycle_and_grid_columns_bounded() {
    for (family, sizes) in [("cycle", "8,16,32,64"), ("grid", "9,16,36,64")] {
        let o = mincut(&["bench", "--family", family, "--sizes", sizes]);
        assert_eq!(code(&o), 0);
        let text = stdout(&o);
        let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
        let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
        let (small, big) = (col("small_per_D"), col("size3_per_D2"));
        let rows: Vec<Vec<f64>> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').skip(1).map(|x| x.parse().unwrap()).collect())
            .collect();
        for c in [small - 1, big - 1] {
            let vals: Vec<f64> = rows.iter().map(|r| r[c]).collect();
            let (lo, hi) = (vals.iter().cloned().fold(f64::MAX, f64::min), vals.iter().cloned().fold(0.0, f64::max));
            assert!(lo > 0.0 && hi / lo <= 1.5, "{family} {}: {vals:?}", header[c + 1]);
        }
    }
}
