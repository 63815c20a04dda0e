use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SCHEMA: &str = include_str!("../schema/output.schema.json");

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mixcenter"));
    cmd.env_remove("MIXCENTER_OUT_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Parses stdout and checks it against the checked-in schema.
fn json(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    });
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    v
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn interval_for_three() {
    let out = run(&["interval", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let e = 2f64.ln() / std::f64::consts::PI;
    let r = &v["result"];
    assert!((r["hi"].as_f64().unwrap() - e).abs() < 1e-15);
    assert!((r["lo"].as_f64().unwrap() + e).abs() < 1e-15);
    assert!((r["hi"].as_f64().unwrap() - 0.2206356).abs() < 1e-7);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn sample_then_verify_passes_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("s.csv");
    let args = [
        "sample",
        "--n",
        "3",
        "--c",
        "0.15",
        "--count",
        "100000",
        "--seed",
        "7",
        "--out",
        s(&csv),
    ];
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["bound_violations"], 0);
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.meta.json")).unwrap())
            .unwrap();
    for key in ["n", "c", "tail_eps", "ra_grid_m", "seed", "mass_deficit"] {
        assert!(!meta[key].is_null(), "meta lacks {key}");
    }
    assert_eq!(meta["seed"], 7);
    let first = std::fs::read(&csv).unwrap();

    let out = run(&["verify", s(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let report = json(&out);
    let results = report["result"]["invariant_results"].as_array().unwrap();
    assert_eq!(results.len(), 19);
    assert!(results.iter().all(|r| r["pass"] == true));

    let csv2 = dir.path().join("again.csv");
    let mut args2 = args;
    args2[args2.len() - 1] = s(&csv2);
    assert_eq!(code(&run(&args2)), 0);
    assert_eq!(first, std::fs::read(&csv2).unwrap());
}

#[test]
fn verify_flags_a_tampered_sample() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("s.csv");
    let out = run(&[
        "sample",
        "--n",
        "3",
        "--c",
        "0.1",
        "--count",
        "20000",
        "--out",
        s(&csv),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[1].split(',').map(String::from).collect();
    let x: f64 = fields[0].parse().unwrap();
    fields[0] = format!("{:.16e}", x + 1.0);
    lines[1] = fields.join(",");
    std::fs::write(&csv, lines.join("\n") + "\n").unwrap();
    let out = run(&["verify", s(&csv), "--format", "csv"]);
    assert_eq!(code(&out), 1);
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("name,pass,measured,threshold"));
    assert!(
        table.lines().any(|l| l.starts_with("row_sum_bound,false")),
        "{table}"
    );
}

#[test]
fn verify_without_a_file_draws_fresh_rows() {
    let out = run(&["verify", "--n", "3", "--c", "0.0", "--count", "50000"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["result"]["target"], "mixer");
    assert_eq!(v["result"]["seed"], 42);
}

#[test]
fn ra_engine_round_trip() {
    let dir = TempDir::new().unwrap();
    let law = write(dir.path(), "u.json", r#"{"kind":"uniform","lo":0,"hi":1}"#);
    let csv = dir.path().join("ra.csv");
    let out = run(&[
        "sample",
        "--engine",
        "ra",
        "--marginal",
        s(&law),
        "--n",
        "3",
        "--ra-grid-m",
        "256",
        "--count",
        "20000",
        "--out",
        s(&csv),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["result"]["mean_row_sum"].as_f64().unwrap() - 1.5).abs() < 0.05);
    let out = run(&["verify", s(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["result"]["target"], "ra");
}

#[test]
fn default_output_directory_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let out = bin()
        .args(["sample", "--n", "3", "--c", "0.1", "--count", "1000"])
        .env("MIXCENTER_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let path = PathBuf::from(v["result"]["csv"].as_str().unwrap());
    assert!(path.starts_with(dir.path()));
    assert!(path.exists());
    assert!(path.with_extension("meta.json").exists());
}

#[test]
fn ex01_emits_both_couplings() {
    let dir = TempDir::new().unwrap();
    let out = run(&["ex01", "--K", "20", "--out-dir", s(dir.path())]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let r = &v["result"];
    assert_eq!(r["x_row_sums"], serde_json::json!([0.0]));
    assert_eq!(r["y_row_sums"], serde_json::json!([1.0]));
    assert_eq!(r["x"]["support"].as_array().unwrap().len(), 21);
    assert_eq!(r["y"]["support"].as_array().unwrap().len(), 42);
    for (name, target) in [("ex01_x.json", 0.0), ("ex01_y.json", 1.0)] {
        let c: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap();
        for row in c["support"].as_array().unwrap() {
            let sum: f64 = row
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap())
                .sum();
            assert_eq!(sum, target);
        }
    }
    let out = run(&["verify", "--ex01", "20"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn feasibility_and_coupling_verification() {
    let dir = TempDir::new().unwrap();
    let triple = write(
        dir.path(),
        "triple.json",
        r#"[{"kind":"finite","atoms":[[0,0.3333333333333333],[1,0.6666666666666666]]},
            {"kind":"finite","atoms":[[0,0.3333333333333333],[1,0.6666666666666666]]},
            {"kind":"finite","atoms":[[0,0.3333333333333333],[1,0.6666666666666666]]}]"#,
    );
    let out = run(&["feasible", "--marginals", s(&triple), "--center", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "feasible");
    let coupling = write(
        dir.path(),
        "coupling.json",
        &v["result"]["coupling"].to_string(),
    );
    let out = run(&[
        "verify",
        "--coupling",
        s(&coupling),
        "--marginals",
        s(&triple),
        "--center",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let out = run(&[
        "verify",
        "--coupling",
        s(&coupling),
        "--marginals",
        s(&triple),
        "--center",
        "1",
    ]);
    assert_eq!(code(&out), 1);

    let out = run(&[
        "feasible",
        "--marginals",
        s(&triple),
        "--center",
        "1",
        "--exact",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["verdict"], "infeasible");

    let out = run(&["centers", "--marginals", s(&triple)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["centers"], serde_json::json!([2.0]));

    let out = run(&[
        "feasible",
        "--marginals",
        s(&triple),
        "--center",
        "2",
        "--format",
        "csv",
    ]);
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("x1,x2,x3,weight"));
}

#[test]
fn bernoulli_pair_has_no_center() {
    let dir = TempDir::new().unwrap();
    let pair = write(
        dir.path(),
        "pair.json",
        r#"[{"kind":"finite","atoms":[[0,0.7],[1,0.3]]},{"kind":"finite","atoms":[[0,0.7],[1,0.3]]}]"#,
    );
    let out = run(&["centers", "--marginals", s(&pair)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["centers"], serde_json::json!([]));
}

#[test]
fn bounds_and_dual_default_to_cauchy() {
    let out = run(&["bounds", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let e = 2f64.ln() / std::f64::consts::PI;
    assert!((v["result"]["hi"].as_f64().unwrap() - e).abs() < 1e-4);
    assert!((v["result"]["lo"].as_f64().unwrap() + e).abs() < 1e-4);

    let out = run(&["dual", "--n", "3", "--c", "-0.1"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["result"]["value"].as_f64().unwrap() >= 1.0 - 1e-6);

    let dir = TempDir::new().unwrap();
    let laws = write(
        dir.path(),
        "m.json",
        r#"[{"kind":"cauchy"},{"kind":"cauchy"},{"kind":"cauchy"}]"#,
    );
    let out = run(&["bounds", "--marginals", s(&laws)]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)["result"];
    assert!(r["lo"].as_f64().unwrap() < 0.0 && r["hi"].as_f64().unwrap() > 0.0);
}

#[test]
fn repro_passes_and_is_idempotent() {
    let a = run(&["repro"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    let v = json(&a);
    assert_eq!(v["result"]["failed"], 0);
    let b = run(&["repro"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    // domain error: c outside the admissible interval
    let out = run(&["sample", "--n", "3", "--c", "0.3", "--count", "10"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));

    // usage errors
    let out = run(&["interval", "--n", "3", "--bogus"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(code(&run(&["nonsense"])), 2);
    assert_eq!(code(&run(&["sample", "--n", "3"])), 2);

    // I/O and parse errors
    assert_eq!(code(&run(&["verify", "/nonexistent/s.csv"])), 2);
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(code(&run(&["centers", "--marginals", s(&bad)])), 2);
    let csv = write(dir.path(), "s.csv", "a,b\n1,2\n");
    write(
        dir.path(),
        "s.meta.json",
        r#"{"schema_version":1,"engine":"mixer","n":3,"c":0.1,"tail_eps":1e-4,"ra_grid_m":512,"seed":42,"count":1}"#,
    );
    assert_eq!(code(&run(&["verify", s(&csv)])), 2);

    // domain error from a law
    let law = write(
        dir.path(),
        "neg.json",
        r#"[{"kind":"uniform","lo":1,"hi":0}]"#,
    );
    assert_eq!(code(&run(&["centers", "--marginals", s(&law)])), 1);
}

#[test]
fn help_documents_seed_and_environment() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("--seed 42"));
    assert!(text.contains("MIXCENTER_OUT_DIR"));
}
