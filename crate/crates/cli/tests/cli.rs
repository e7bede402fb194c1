use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nbest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn cpx(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn decompose_kernel_on_its_own_pole() {
    let v = json_of(&nbest(&["decompose", "--builtin", "szego:0.5+0i", "--poles", "0.5"]));
    assert!(v["residual_norm"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn decompose_identity_on_zero_pole_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let taylor = write(dir.path(), "f.json", "[0, 1]");
    let csv = dir.path().join("res.csv");
    let v = json_of(&nbest(&[
        "decompose",
        "--taylor-file",
        &taylor,
        "--poles",
        "0",
        "--grid-size",
        "256",
        "--csv",
        csv.to_str().unwrap(),
    ]));
    let coeffs = v["coefficients"].as_array().unwrap();
    assert_eq!(coeffs.len(), 1);
    assert_eq!(cpx(&coeffs[0]), (0.0, 0.0));
    assert!((v["residual_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,theta,abs_residual"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 256);
    for row in rows {
        let abs: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((abs - 1.0).abs() < 1e-12);
    }
}

#[test]
fn decompose_rejects_boundary_poles() {
    let out = nbest(&["decompose", "--builtin", "poly:z", "--poles", "0.2,1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn greedy_examples() {
    let v = json_of(&nbest(&["greedy", "--builtin", "szego:0.4+0.2i", "--n", "1"]));
    let (re, im) = cpx(&v["form"]["poles"][0]);
    assert!((re - 0.4).abs() < 1e-6 && (im - 0.2).abs() < 1e-6, "{re} {im}");

    let v = json_of(&nbest(&["greedy", "--builtin", "poly:z", "--n", "1"]));
    assert!((v["objective"].as_f64().unwrap() - 0.25).abs() < 1e-6);

    assert_eq!(nbest(&["greedy", "--builtin", "poly:z", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn greedy_trace_goes_next_to_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let status = nbest(&[
        "greedy",
        "--builtin",
        "poly:1,0.5,0.25,0.125",
        "--n",
        "3",
        "--trace",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let trace = std::fs::read_to_string(dir.path().join("g.json.trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 4);
    let result: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(result["strategy"], "greedy");
}

const PLANTED: &str = r#"{"poles": [[0.5, 0.0], [0.0, -0.3]], "coeffs": [[0.8, 0.3], [-0.6, 0.9]], "grid_size": 1024}"#;

#[test]
fn nbest_recovers_planted_form() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "form.json", PLANTED);
    let builtin = format!("blaschke-form:{form}");
    let v = json_of(&nbest(&["nbest", "--builtin", &builtin, "--n", "2", "--seed", "3"]));
    let total = 0.8f64.powi(2) + 0.3f64.powi(2) + 0.6f64.powi(2) + 0.9f64.powi(2);
    assert!((v["objective"].as_f64().unwrap() - total).abs() < 1e-8);
    assert_eq!(v["restarts"].as_array().unwrap().len(), 8);
}

#[test]
fn more_restarts_never_hurt() {
    let args = |r: &'static str| ["nbest", "--builtin", "poly:0.2,-1,0.5i,0.7,0.3", "--n", "3", "--seed", "7", "--restarts", r];
    let one = json_of(&nbest(&args("1")));
    let eight = json_of(&nbest(&args("8")));
    assert!(eight["objective"].as_f64().unwrap() >= one["objective"].as_f64().unwrap());
}

#[test]
fn nbest_is_reproducible_across_thread_counts() {
    let base = ["nbest", "--builtin", "poly:z^3-0.4z+0.1i", "--n", "2", "--seed", "11", "--restarts", "4"];
    let a = nbest(&base);
    let mut with_threads = base.to_vec();
    with_threads.extend(["--threads", "1"]);
    let b = nbest(&with_threads);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"n": 2, "restarts": 2}"#);
    let v = json_of(&nbest(&["nbest", "--builtin", "poly:z", "--config", &cfg, "--restarts", "3"]));
    assert_eq!(v["form"]["poles"].as_array().unwrap().len(), 2);
    assert_eq!(v["restarts"].as_array().unwrap().len(), 3);

    let bad = write(dir.path(), "bad.json", r#"{"n": 2, "colour": 1}"#);
    assert_eq!(nbest(&["nbest", "--builtin", "poly:z", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn to_rational_examples() {
    let dir = tempfile::tempdir().unwrap();
    let form = write(dir.path(), "f.json", r#"{"poles": [0, 0.5], "coeffs": [0, 1]}"#);
    let v = json_of(&nbest(&["to-rational", &form]));
    let q = v["pair"]["q"].as_array().unwrap();
    assert_eq!(q.len(), 2);
    assert_eq!(cpx(&q[0]), (1.0, 0.0));
    assert!((cpx(&q[1]).0 + 0.5).abs() < 1e-15 && cpx(&q[1]).1.abs() < 1e-15);
    assert_eq!(v["report"]["admissible"], true);

    let constant = write(dir.path(), "c.json", r#"{"poles": [0], "coeffs": ["2+1i"]}"#);
    let v = json_of(&nbest(&["to-rational", &constant]));
    assert_eq!(v["pair"]["p"].as_array().unwrap().len(), 1);
    assert_eq!(cpx(&v["pair"]["q"][0]), (1.0, 0.0));
    assert_eq!(v["pair"]["q"].as_array().unwrap().len(), 1);

    let degenerate = write(dir.path(), "d.json", r#"{"poles": [0, 0.3], "coeffs": [1, 0]}"#);
    assert_eq!(nbest(&["to-rational", &degenerate]).status.code(), Some(2));

    let no_zero = write(dir.path(), "n.json", r#"{"poles": [0.3], "coeffs": [1]}"#);
    let out = nbest(&["to-rational", &no_zero]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("constant_shift"));
}

#[test]
fn rational_and_signal_sources() {
    let dir = tempfile::tempdir().unwrap();
    // 1/(1 − 0.5z) = geom:0.5
    let pair = write(dir.path(), "r.json", r#"{"p": [1], "q": [1, -0.5]}"#);
    let a = json_of(&nbest(&["decompose", "--rational-file", &pair, "--poles", "0.5"]));
    let b = json_of(&nbest(&["decompose", "--builtin", "geom:0.5", "--poles", "0.5"]));
    assert!(a["residual_norm"].as_f64().unwrap() < 1e-12);
    assert!((a["energy"].as_f64().unwrap() - b["energy"].as_f64().unwrap()).abs() < 1e-12);

    // cos θ lifts to z/2 when sampled on 8 points
    let samples: Vec<String> = (0..8)
        .map(|j| (std::f64::consts::TAU * j as f64 / 8.0).cos().to_string())
        .collect();
    let signal = write(dir.path(), "s.csv", &samples.join("\n"));
    let v = json_of(&nbest(&["decompose", "--signal", &signal, "--poles", "0"]));
    assert!((v["norm_sqr"].as_f64().unwrap() - 0.25).abs() < 1e-12);

    let odd = write(dir.path(), "odd.csv", "1,2,3");
    assert_eq!(nbest(&["decompose", "--signal", &odd, "--poles", "0"]).status.code(), Some(2));
}

#[test]
fn source_is_required_and_exclusive() {
    assert_eq!(nbest(&["greedy", "--n", "1"]).status.code(), Some(2));
    assert_eq!(
        nbest(&["greedy", "--builtin", "poly:z", "--signal", "x.csv"]).status.code(),
        Some(2)
    );
    assert_eq!(nbest(&["decompose", "--taylor-file", "/nonexistent.json", "--poles", "0"]).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let out = nbest(&["verify", "all", "--seed", "5", "--trials", "20", "--grid-size", "1024"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<Value> = out
        .stdout
        .split(|b| *b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert!(lines.iter().all(|r| r["passed"] == true));
    let suites: std::collections::BTreeSet<_> = lines
        .iter()
        .map(|r| r["name"].as_str().unwrap().split(':').next().unwrap().to_string())
        .collect();
    assert_eq!(suites.len(), 6);

    let again = nbest(&["verify", "all", "--seed", "5", "--trials", "20", "--grid-size", "1024"]);
    assert_eq!(out.stdout, again.stdout);

    assert_eq!(nbest(&["verify", "foo"]).status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let out = nbest(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("nbest"));
}
