use std::process::{Command, Output};

use serde_json::Value;

fn tilting(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilting"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = tilting(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stdout(args: &[&str]) -> String {
    let out = tilting(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn pairs(v: &Value, key: &str, value: &str) -> Vec<(u64, String)> {
    v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let val = match &e[value] {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            (e[key].as_u64().unwrap(), val)
        })
        .collect()
}

fn owned(v: &[(u64, &str)]) -> Vec<(u64, String)> {
    v.iter().map(|(k, s)| (*k, s.to_string())).collect()
}

#[test]
fn big_multiplicities() {
    let v = json(&["mult", "big", "--l", "3", "--N", "5", "--format", "json"]);
    assert_eq!(
        pairs(&v, "k", "mult"),
        owned(&[(1, "1"), (3, "4"), (5, "1")])
    );
    assert_eq!(v["l"], 3);
    assert_eq!(v["N"], 5);
}

#[test]
fn small_multiplicities() {
    let v = json(&["mult", "small", "--l", "3", "--n", "5"]);
    assert_eq!(
        pairs(&v, "node", "mult"),
        owned(&[(1, "1"), (3, "4"), (5, "2")])
    );
    let csv = stdout(&["mult", "small", "--l", "3", "--N", "3", "--format", "csv"]);
    assert_eq!(csv, "node,family,mult\n1,T,1\n3,T+,1\n");
}

#[test]
fn restriction() {
    let v = json(&["restrict", "--l", "3", "--k", "5"]);
    assert_eq!(pairs(&v, "node", "copies"), owned(&[(5, "2")]));
    assert_eq!(v["entries"][0]["family"], "T-");
    let v = json(&["restrict", "--l", "3", "--k", "1"]);
    assert_eq!(pairs(&v, "node", "copies"), owned(&[(1, "1")]));
}

#[test]
fn measures() {
    let v = json(&["measure", "planch", "--l", "3", "--N", "5"]);
    assert_eq!(
        pairs(&v, "label", "exact"),
        owned(&[(1, "1/16"), (3, "3/4"), (5, "3/16")])
    );
    let v = json(&["measure", "small-planch", "--l", "3", "--N", "3"]);
    assert_eq!(
        pairs(&v, "label", "exact"),
        owned(&[(1, "1/4"), (3, "3/4")])
    );
    let v = json(&["measure", "qplanch", "--l", "3", "--N", "3"]);
    assert_eq!(pairs(&v, "label", "prob"), owned(&[(1, "1")]));
    let csv = stdout(&[
        "measure", "char", "--l", "3", "--N", "1", "--t", "0.7", "--format", "csv",
    ]);
    assert_eq!(csv, "label,prob\n1,1\n");
}

#[test]
fn path_counts() {
    let v = json(&["paths", "count", "--l", "3", "--N", "5", "--end", "3"]);
    assert_eq!(v["count"], "4");
    let v = json(&[
        "paths", "count", "--l", "3", "--N", "5", "--end", "5", "--group", "small",
    ]);
    assert_eq!(v["count"], "2");
    let csv = stdout(&[
        "paths", "table", "--l", "3", "--N", "2", "--group", "small", "--format", "csv",
    ]);
    assert_eq!(
        csv,
        "N,0,1,2,3,4,5,6,7\n0,1,0,0,0,0,0,0,0\n1,0,1,0,0,0,0,0,0\n2,1,0,1,0,0,0,0,0\n"
    );
}

#[test]
fn integral_rounds_to_multiplicity() {
    let v = json(&["integral", "--l", "3", "--N", "5", "--k", "3"]);
    assert_eq!(v["rounded"], "4");
    assert_eq!(v["closed_form"], "4");
    let residual: f64 = v["residual"].as_str().unwrap().parse().unwrap();
    assert!(residual < 1e-8);
}

#[test]
fn markov_commands() {
    let v = json(&[
        "markov",
        "stationary",
        "--model",
        "small-quantum",
        "--l",
        "3",
    ]);
    assert_eq!(pairs(&v, "label", "prob"), owned(&[(0, "0.5"), (1, "0.5")]));
    let v = json(&[
        "markov",
        "iterate",
        "--model",
        "big-plancherel",
        "--l",
        "3",
        "--N",
        "5",
    ]);
    assert_eq!(
        pairs(&v, "label", "exact"),
        owned(&[(1, "1/16"), (3, "3/4"), (5, "3/16")])
    );
    let csv = stdout(&[
        "markov",
        "kernel",
        "--model",
        "small-plancherel",
        "--l",
        "3",
        "--format",
        "csv",
    ]);
    assert!(csv.starts_with("from,to,prob,exact\n0,1,1,1\n"));
    let v = json(&[
        "markov",
        "stationary",
        "--model",
        "small-plancherel",
        "--l",
        "3",
    ]);
    let probs: Vec<f64> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["prob"].as_str().unwrap().parse().unwrap())
        .collect();
    let want = [
        0.0,
        0.0,
        1.0 / 6.0,
        2.0 / 9.0,
        1.0 / 9.0,
        1.0 / 6.0,
        2.0 / 9.0,
        1.0 / 9.0,
    ];
    assert_eq!(probs.len(), want.len());
    for (p, w) in probs.iter().zip(want) {
        assert!((p - w).abs() < 1e-10);
    }
}

#[test]
fn asymptotics() {
    let args = [
        "asym",
        "report",
        "--regime",
        "plancherel",
        "--l",
        "3",
        "--N",
        "300,600",
        "--omit-timing",
        "--format",
        "csv",
    ];
    let csv = stdout(&args);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "regime,l,params,N,TV,max_rel_err");
    assert_eq!(lines.len(), 3);
    let tv = |line: &str| -> f64 { line.split(',').nth(4).unwrap().parse().unwrap() };
    assert!(tv(lines[2]) < tv(lines[1]));
    let v = json(&["asym", "eval", "--l", "3", "--N", "600", "--k", "180"]);
    let rel: f64 = v["mult_rel_err"].as_str().unwrap().parse().unwrap();
    assert!(rel.abs() < 0.05);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "asym",
        "report",
        "--regime",
        "bulk",
        "--t",
        "0.4",
        "--l",
        "3",
        "--N",
        "60,120",
        "--omit-timing",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let one = Command::new(env!("CARGO_BIN_EXE_tilting"))
        .args(args)
        .env("TILTING_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(one.stdout).unwrap(), stdout(&args));
}

#[test]
fn writes_output_file() {
    let path = std::env::temp_dir().join(format!("tilting-cli-test-{}.csv", std::process::id()));
    let out = tilting(&[
        "mult",
        "big",
        "--l",
        "3",
        "--N",
        "3",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "k,k1,k0,mult\n1,0,1,1\n3,1,0,1\n"
    );
    std::fs::remove_file(path).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["mult", "big", "--l", "4", "--N", "5"],
        vec!["mult", "big", "--l", "1", "--N", "5"],
        vec!["mult", "big", "--l", "3", "--N", "-2"],
        vec!["frobnicate"],
        vec!["mult", "big", "--l", "3"],
        vec!["markov", "stationary", "--model", "nonsense", "--l", "3"],
        vec!["markov", "kernel", "--model", "big-plancherel", "--l", "3"],
        vec![
            "asym", "report", "--regime", "bulk", "--l", "3", "--N", "60",
        ],
        vec!["measure", "planch", "--l", "3", "--N", "4", "--t", "1"],
    ] {
        let out = tilting(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_tilting"))
        .args(["mult", "big", "--l", "3", "--N", "2"])
        .env("TILTING_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn big_model_has_no_stationary_vector() {
    let out = tilting(&[
        "markov",
        "stationary",
        "--model",
        "big-plancherel",
        "--l",
        "3",
        "--cutoff",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let v = json(&["selftest", "--quick"]);
    assert_eq!(v["passed"], true);
    assert!(v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["passed"] == true));
}
