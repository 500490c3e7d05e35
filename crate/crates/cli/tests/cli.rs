use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_local-scores"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn capture_recapture_example() {
    let dir = TempDir::new().unwrap();
    write(&dir, "fish.csv", "value,count\n1,40\n2,18\n3,8\n");
    let out = run(&["capture-recapture", "--input", "fish.csv", "--catches", "100"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    let est = &r["result"]["estimates"];
    let score = est["score"]["theta"].as_f64().unwrap();
    assert_eq!(score, 60.0 / 66.0);
    assert_eq!(format!("{score:.6}"), "0.909091");
    assert_eq!(est["zelterman"]["theta"].as_f64().unwrap(), 0.9);
    let t = est["mle"]["theta"].as_f64().unwrap();
    assert!((66.0 * t - 100.0 * (1.0 - (-t).exp())).abs() <= 1e-10);
    assert_eq!(r["inputs"]["input"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn catch_total_must_match_counts() {
    let dir = TempDir::new().unwrap();
    write(&dir, "fish.csv", "value,count\n1,40\n2,18\n3,8\n");
    let out = run(&["capture-recapture", "--input", "fish.csv", "--catches", "99"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("catch total"));
}

#[test]
fn malformed_csv_reports_line_and_column() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.csv", "value,count\n0,4\n1,x\n");
    let out = run(&["estimate-poisson", "--input", "bad.csv", "--a", "0", "--m", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.csv:3:2:"), "{}", stderr(&out));

    write(&dir, "header.csv", "y,count\n0,4\n");
    let out = run(&["estimate-poisson", "--input", "header.csv", "--a", "0", "--m", "2"], dir.path());
    assert!(stderr(&out).contains("header.csv:1:1:"), "{}", stderr(&out));

    write(&dir, "dup.csv", "value,count\n0,4\n0,1\n");
    let out = run(&["estimate-poisson", "--input", "dup.csv", "--a", "0", "--m", "2"], dir.path());
    assert!(stderr(&out).contains("dup.csv:3:1:"), "{}", stderr(&out));
}

#[test]
fn poisson_pair_estimates() {
    let dir = TempDir::new().unwrap();
    write(&dir, "f.csv", "value,count\n0,4\n1,4\n2,2\n");
    let out = run(&["estimate-poisson", "--input", "f.csv", "--a", "0", "--m", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert!((r["result"]["theta"].as_f64().unwrap() - 45.0 / 47.0).abs() < 1e-15);
    assert_eq!(r["result"]["estimator"], "poisson-pair");

    let out = run(&["estimate-poisson", "--input", "f.csv", "--a", "2", "--m", "2"], dir.path());
    assert_eq!(report(&out)["result"]["theta"].as_f64().unwrap(), 0.8);

    let out = run(
        &["estimate-poisson", "--input", "f.csv", "--a", "-1", "--m", "-1", "--window", "1-2"],
        dir.path(),
    );
    assert_eq!(report(&out)["result"]["theta"].as_f64().unwrap(), 1.0);

    let out = run(&["estimate-poisson", "--input", "f.csv", "--a", "1", "--m", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rule_examples() {
    let dir = TempDir::new().unwrap();
    let out = run(&["verify-rule", "--rule", "brier", "--check", "properness", "--grid", "0.05"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    let check = &r["result"]["checks"][0];
    assert_eq!(check["check"], "properness");
    assert_eq!(check["passed"], true);
    assert!(check["witnesses"].as_array().unwrap().is_empty());

    let out = run(&["verify-rule", "--rule", "log", "--check", "homogeneity,key", "--outcomes", "4"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    let checks = r["result"]["checks"].as_array().unwrap();
    let homog = checks.iter().find(|c| c["check"] == "homogeneity").unwrap();
    assert_eq!(homog["passed"], false);
    assert!(!homog["witnesses"].as_array().unwrap().is_empty());
    let key = checks.iter().find(|c| c["check"] == "key").unwrap();
    assert_eq!(key["class"], "proper-with-lambda");
    assert!((key["lambda"].as_f64().unwrap() - 1.0).abs() < 1e-5);
}

#[test]
fn counterexample_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let out = run(&["verify-rule", "--rule", "coarse-brier", "--check", "properness,locality"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = run(&["verify-rule", "--rule", "coarse-brier", "--check", "condition-disjoint"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(report(&out)["result"]["checks"][0]["witness"], Value::Null);
    let out = run(&["verify-rule", "--rule", "spherical", "--check", "locality"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn decompose_on_a_path() {
    let dir = TempDir::new().unwrap();
    write(&dir, "path5.edges", "1,2\n2,3\n3,4\n4,5\n");
    let out = run(&["decompose", "--graph", "path5.edges", "--rule", "brier-pair", "--anchor", "zero"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert!(r["result"]["incomplete_residual"].as_f64().unwrap() <= 1e-9);
    assert!(r["result"]["homogeneity_violation"].as_f64().is_some());
    let terms = r["result"]["nonzero_terms"].as_array().unwrap();
    assert!(terms.iter().all(|t| t.as_array().unwrap().len() <= 2));

    let out = run(
        &["decompose", "--graph", "path5.edges", "--rule", "pair:power:a=2,m=2", "--anchor", "ones"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(report(&out)["result"]["incomplete_residual"].as_f64().unwrap() <= 1e-9);

    let out = run(
        &["decompose", "--graph", "path5.edges", "--rule", "pair:power:a=2,m=2", "--anchor", "zero"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("regular"));

    let out = run(&["decompose", "--graph", "path5.edges", "--rule", "spherical", "--anchor", "ones"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_graph_and_model() {
    let dir = TempDir::new().unwrap();
    write(&dir, "g.edges", "1,2\n2,3,4\n");
    let out = run(&["decompose", "--graph", "g.edges", "--rule", "brier", "--anchor", "ones"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("g.edges:2:4:"), "{}", stderr(&out));

    write(&dir, "m.json", "{\n  \"factor_sizes\": [2, 2],\n  \"family\": ising\n}\n");
    write(&dir, "s.csv", "x1,x2\n0,1\n");
    let out = run(
        &["mrf-fit", "--model", "m.json", "--input", "s.csv", "--score", "pl", "--tol", "1e-9"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("m.json:3:"), "{}", stderr(&out));
}

const CYCLE_MODEL: &str = r#"{
  "factor_sizes": [2, 2, 2, 2, 2],
  "edges": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 1]],
  "family": "ising",
  "parameter_box": [[-2, 2], [-2, 2]]
}
"#;

#[test]
fn sample_then_fit_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    write(&dir, "model.json", CYCLE_MODEL);
    let sample = |out: &str, report: &str| {
        run(
            &[
                "mrf-sample", "--model", "model.json", "--theta", "0.4,-0.3", "--samples", "3000",
                "--seed", "5", "--burn-in", "200", "--thin", "2", "--samples-out", out, "--output", report,
            ],
            dir.path(),
        )
    };
    assert_eq!(sample("a.csv", "ra.json").status.code(), Some(0));
    assert_eq!(sample("b.csv", "rb.json").status.code(), Some(0));
    let read = |p: &str| fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    let header = String::from_utf8(read("a.csv")).unwrap();
    assert!(header.starts_with("x1,x2,x3,x4,x5\n"));

    let fit = |score: &str, report: &str| {
        run(
            &["mrf-fit", "--model", "model.json", "--input", "a.csv", "--score", score, "--tol", "1e-9", "--output", report],
            dir.path(),
        )
    };
    for score in ["pseudo-likelihood", "rm"] {
        assert_eq!(fit(score, "f1.json").status.code(), Some(0));
        assert_eq!(fit(score, "f2.json").status.code(), Some(0));
        assert_eq!(read("f1.json"), read("f2.json"));
        let r: Value = serde_json::from_slice(&read("f1.json")).unwrap();
        let theta = r["result"]["theta"].as_array().unwrap();
        assert!((theta[0].as_f64().unwrap() - 0.4).abs() < 0.2, "{theta:?}");
        assert!((theta[1].as_f64().unwrap() + 0.3).abs() < 0.2, "{theta:?}");
        assert_eq!(r["result"]["converged"], true);
        let trace = r["result"]["trace"].as_array().unwrap();
        let objectives: Vec<f64> = trace.iter().map(|t| t["objective"].as_f64().unwrap()).collect();
        assert!(objectives.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn sample_values_are_checked_against_the_model() {
    let dir = TempDir::new().unwrap();
    write(&dir, "model.json", CYCLE_MODEL);
    write(&dir, "s.csv", "x1,x2,x3,x4,x5\n0,1,0,1,0\n0,1,2,1,0\n");
    let out = run(
        &["mrf-fit", "--model", "model.json", "--input", "s.csv", "--score", "pl", "--tol", "1e-9"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("s.csv:3:3:"), "{}", stderr(&out));
}

#[test]
fn thread_variable_is_validated() {
    let dir = TempDir::new().unwrap();
    let out = bin()
        .args(["verify-rule", "--rule", "brier", "--check", "properness"])
        .env("LOCAL_SCORES_THREADS", "0")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["verify-rule", "--rule", "brier", "--check", "properness"])
        .env("LOCAL_SCORES_THREADS", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn floats_round_trip_through_reports() {
    let dir = TempDir::new().unwrap();
    write(&dir, "fish.csv", "value,count\n1,40\n2,18\n3,8\n");
    let out = run(&["capture-recapture", "--input", "fish.csv", "--catches", "100"], dir.path());
    let r = report(&out);
    let mle = r["result"]["estimates"]["mle"]["theta"].as_f64().unwrap();
    let printed = serde_json::to_string(&r).unwrap();
    let again: Value = serde_json::from_str(&printed).unwrap();
    assert_eq!(again["result"]["estimates"]["mle"]["theta"].as_f64().unwrap().to_bits(), mle.to_bits());
}
