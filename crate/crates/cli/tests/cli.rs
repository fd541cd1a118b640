use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn opmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opmean"))
        .args(args)
        .env_remove("OPMEAN_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("opmean-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn diag_result(v: &Value) -> Vec<f64> {
    let re = v["result"]["re"].as_array().unwrap();
    (0..re.len()).map(|i| re[i][i].as_f64().unwrap()).collect()
}

#[test]
fn mean_of_scalars() {
    let a = scratch("four.json", r#"{"dim": 1, "re": [[4]]}"#);
    let b = scratch("nine.json", r#"{"dim": 1, "re": [[9]]}"#);
    let out = opmean(&["mean", "--kind", "sharp", "--lambda", "0.5", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "opmean-report/1");
    assert!((diag_result(&v)[0] - 6.0).abs() < 1e-12);
}

#[test]
fn weighted_log_means_on_worked_pair() {
    let a = scratch("a12.json", r#"{"dim": 2, "re": [[1, 0], [0, 2]]}"#);
    let b = scratch("b21.json", r#"{"dim": 2, "re": [[2, 0], [0, 1]]}"#);
    for (kind, expect) in [("pal_log", [1.7051, 1.2088]), ("wlog_geom", [1.6964, 1.2004]), ("wlog_harm", [1.7258, 1.2228])] {
        let out = opmean(&["mean", "--kind", kind, "--lambda", "0.75", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
        assert!(out.status.success(), "{kind}");
        let d = diag_result(&json(&out));
        for (x, e) in d.iter().zip(expect) {
            assert!((x - e).abs() < 5e-4, "{kind}: {x} vs {e}");
        }
    }
}

#[test]
fn mean_reports_which_operand_is_not_positive_definite() {
    let a = scratch("pd.json", r#"{"dim": 2, "re": [[1, 0], [0, 2]]}"#);
    let b = scratch("indef.json", r#"{"dim": 2, "re": [[1, 0], [0, -1]]}"#);
    let out = opmean(&["mean", "--kind", "harm", "--lambda", "0.5", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains('B'), "{err}");
    let missing = opmean(&["mean", "--kind", "harm", "--a", a.to_str().unwrap(), "--b", a.to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--chain", "whhoi", "--trials", "0"][..],
        &["verify", "--chain", "no_such_chain"],
        &["verify", "--chain", "whhoi", "--params", "lambda=2"],
        &["verify", "--chain", "whhoi", "--f", "sin"],
        &["sweep", "--chain", "rwhhoir", "--grid", "s=0.1:0.9:0"],
        &["sweep", "--chain", "rwhhoir", "--grid", "s"],
        &["frobnicate"],
    ] {
        assert_eq!(opmean(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_whhoi_ensemble_has_no_failures() {
    let out = opmean(&["verify", "--chain", "whhoi", "--trials", "200", "--dim", "4", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 200 * 6);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn verify_beta_grid() {
    let out = opmean(&["verify", "--chain", "beta_scalar", "--trials", "36"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failures"], 0);
    let orientations: Vec<&str> = v["cases"].as_array().unwrap().iter().map(|c| c["orientation"].as_str().unwrap()).collect();
    for o in ["ascending", "descending", "equality"] {
        assert!(orientations.contains(&o), "{o}");
    }
}

#[test]
fn seed_precedence() {
    let run = |flag: Option<&str>, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_opmean"));
        cmd.args(["verify", "--chain", "nwomi1", "--trials", "3"]).env_remove("OPMEAN_SEED");
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        if let Some(s) = env {
            cmd.env("OPMEAN_SEED", s);
        }
        json(&cmd.output().unwrap())["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 42);
    assert_eq!(run(None, Some("9")), 9);
    assert_eq!(run(Some("5"), Some("9")), 5);
}

#[test]
fn single_point_sweep_equals_verify() {
    let sweep = opmean(&[
        "sweep", "--chain", "rwhhoir", "--grid", "s=0.3:0.3:1", "--grid", "lambda=0.6:0.6:1", "--f", "inv", "--dim", "3",
        "--seed", "5", "--format", "json",
    ]);
    let verify = opmean(&["verify", "--chain", "rwhhoir", "--trials", "1", "--params", "s=0.3,lambda=0.6", "--f", "inv", "--dim", "3", "--seed", "5"]);
    assert!(sweep.status.success() && verify.status.success());
    let s = json(&sweep);
    let v = json(&verify);
    assert_eq!(s["rows"][0]["margins"], v["cases"][0]["margins"]);
}

#[test]
fn rwhhoir_sweep_csv() {
    let out_path = std::env::temp_dir().join(format!("opmean-sweep-{}.csv", std::process::id()));
    let out = opmean(&[
        "sweep", "--chain", "rwhhoir", "--grid", "s=0.1:0.9:5", "--grid", "lambda=0.1:0.9:5", "--f", "inv", "--dim", "3",
        "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&out_path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    for col in ["chain", "function", "lambda", "s", "holds", "worst_margin", "gap_1", "gap_2", "width_1"] {
        assert!(header.contains(&col.to_string()), "{col}");
    }
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 25);
    let holds = header.iter().position(|h| h == "holds").unwrap();
    assert!(rows.iter().all(|r| &r[holds] == "true"));
}

#[test]
fn paper_example_command() {
    let out = opmean(&["paper-example"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["holds"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
    assert!(String::from_utf8_lossy(&out.stderr).contains("labels exchanged"));
}
