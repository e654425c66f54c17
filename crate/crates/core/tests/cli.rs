use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mqra(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mqra"))
        .args(args)
        .current_dir(dir)
        .env_remove("MQRA_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_then_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = mqra(&["build", "--b", "4", "--N", "3", "--standard", "--out", "q.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let approx = read_json(&dir.path().join("q.json"));
    assert_eq!(approx["N"], 3);
    assert_eq!(approx["defect"]["defect_free"], true);
    assert_eq!(approx["manifest"]["command"], "build");
    assert_eq!(approx["manifest"]["constraints"].as_array().unwrap().len(), 15);

    let out = mqra(&["sweep", "--approximant", "q.json", "--grid", "log:0.01:100:12", "--out", "s.csv"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert!(csv.starts_with("# manifest {"));
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "lambda,e_app,e_shoot,rel_err");
    assert_eq!(rows.len(), 13);
    for row in &rows[1..] {
        let rel: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(rel < 5e-6, "{row}");
    }
    assert!(csv.lines().last().unwrap().starts_with("# summary max_rel_err="));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args =
        ["build", "--b", "4", "--N", "2", "--powers", "4", "--asymptotic", "4", "--nodes", "1,2,5", "--mu", "1.5"];
    let a = mqra(&args, dir.path());
    let b = mqra(&args, dir.path());
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn constraint_count_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mqra(
        &["build", "--b", "4", "--N", "3", "--powers", "4", "--asymptotic", "5", "--nodes", "1,2,5", "--mu", "2"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("constraints=12 unknowns=15"), "{}", stderr(&out));

    let out = mqra(&["build", "--b", "4", "--N", "1", "--powers", "2", "--nodes", "1,1.0", "--mu", "2"], dir.path());
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    let out = mqra(&["build", "--b", "5", "--N", "1", "--standard"], dir.path());
    assert_eq!(code(&out), 2);
    let out = mqra(&["build", "--N", "1"], dir.path());
    assert_eq!(code(&out), 2);
    let out = mqra(&["frobnicate"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn replacement_flag_forms() {
    let dir = tempfile::tempdir().unwrap();
    let a = mqra(&["build", "--b", "6", "--level", "1", "--N", "6", "--standard"], dir.path());
    let b = mqra(
        &["build", "--b", "6", "--level", "1", "--N", "6", "--standard", "--replace-power-4-by", "d2@0.5"],
        dir.path(),
    );
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(code(&b), 0, "{}", stderr(&b));
    let (a, b): (Value, Value) =
        (serde_json::from_slice(&a.stdout).unwrap(), serde_json::from_slice(&b.stdout).unwrap());
    // the standard recipe already carries this replacement
    assert_eq!(a["q"], b["q"]);
    assert!(b["manifest"]["constraints"].as_array().unwrap().iter().any(|c| c == "d2@0.5"));
}

#[test]
fn sweep_refuses_defective_approximant() {
    let dir = tempfile::tempdir().unwrap();
    let out = mqra(&["build", "--b", "4", "--N", "3", "--standard", "--out", "q.json"], dir.path());
    assert_eq!(code(&out), 0);
    let mut approx = read_json(&dir.path().join("q.json"));
    approx["q"] = serde_json::json!([-1.0, 0.0, 0.0]);
    std::fs::write(dir.path().join("bad.json"), approx.to_string()).unwrap();
    let out = mqra(&["sweep", "--approximant", "bad.json", "--grid", "0.5,2"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("positive"), "{}", stderr(&out));
}

#[test]
fn series_files_feed_build() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("series")).unwrap();
    let expansions: [&[&str]; 2] = [
        &["expand", "--b", "4", "--point", "0", "--terms", "5", "--exact", "--out", "series/zero.json"],
        &["expand", "--b", "4", "--point", "asymptotic", "--terms", "5", "--out", "series/tail.json"],
    ];
    for args in expansions {
        let out = mqra(args, dir.path());
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let zero = read_json(&dir.path().join("series/zero.json"));
    assert_eq!(zero["coefficients"], serde_json::json!(["1", "3/4", "-21/16", "333/64", "-30885/1024"]));

    let from_files = mqra(&["build", "--b", "4", "--N", "3", "--standard", "--series-dir", "series"], dir.path());
    let computed = mqra(&["build", "--b", "4", "--N", "3", "--standard"], dir.path());
    let (f, c): (Value, Value) =
        (serde_json::from_slice(&from_files.stdout).unwrap(), serde_json::from_slice(&computed.stdout).unwrap());
    for (x, y) in f["q"].as_array().unwrap().iter().zip(c["q"].as_array().unwrap()) {
        let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
        assert!((x - y).abs() <= 1e-8 * y.abs(), "{x} {y}");
    }
}

#[test]
fn extended_precision_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["build", "--b", "4", "--N", "3", "--standard"];
    let double = mqra(&args, dir.path());
    let extended =
        Command::new(env!("CARGO_BIN_EXE_mqra")).args(args).env("MQRA_PRECISION", "extended").output().unwrap();
    assert_eq!(code(&extended), 0, "{}", stderr(&extended));
    let (d, e): (Value, Value) =
        (serde_json::from_slice(&double.stdout).unwrap(), serde_json::from_slice(&extended.stdout).unwrap());
    assert_eq!(e["manifest"]["precision"], "extended");
    for (x, y) in d["q"].as_array().unwrap().iter().zip(e["q"].as_array().unwrap()) {
        let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
        assert!((x - y).abs() <= 1e-7 * y.abs(), "{x} {y}");
    }

    let bad = Command::new(env!("CARGO_BIN_EXE_mqra")).args(args).env("MQRA_PRECISION", "quad").output().unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn reproduce_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = mqra(&["reproduce", "--table", "I"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("I,0,E_2,-21/16,-21/16,"));
    assert!(text.contains("# verdict table I quartic_power_series: PASS"));

    let out = mqra(&["reproduce", "--table", "IV", "--out-dir", "rep"], dir.path());
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stdout).contains("table IV quartic_degree3: FAIL"));
    let csv = std::fs::read_to_string(dir.path().join("rep/table_IV.csv")).unwrap();
    assert!(csv.contains("# check level 0 denominator has no positive roots: pass"));
    let bundle = read_json(&dir.path().join("rep/reproduce.json"));
    assert_eq!(bundle["pass"], false);

    let out = mqra(&["reproduce", "--table", "IX"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_picks_a_defect_free_mu() {
    let dir = tempfile::tempdir().unwrap();
    let out = mqra(
        &["scan-mu", "--b", "4", "--N", "3", "--standard", "--mu-grid", "1,2,4", "--audit-grid", "log:0.01:100:9"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["entries"].as_array().unwrap().len(), 3);
    assert_eq!(v["best"]["defect"]["defect_free"], true);
    assert_eq!(v["best"]["mu"], v["report"]["best_mu"]);

    let out = mqra(&["scan-mu", "--b", "4", "--N", "3", "--standard", "--mu-grid", "-1"], dir.path());
    assert_ne!(code(&out), 0);
}
