use std::fs;
use std::process::{Command, Output};

use cohomconn::process::TraceRow;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohomconn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn sample_fixture_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "# two triangles sharing vertex 1\n5 2 g\n1 2 3\n1 4 5\n").unwrap();
    let out = cli(&["sample", "--complex-file", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["f_vector"], serde_json::json!([5, 6, 2]));
    assert_eq!(v["bettis"], serde_json::json!([1, 0]));
    assert_eq!(v["mj_minus"], 6);
    assert_eq!(v["mj"], 0);
    assert_eq!(v["connected_j"], true);
}

#[test]
fn bad_fixture_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "5 2 g\n1 2 9\n").unwrap();
    let out = cli(&["sample", "--complex-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn invalid_config_exits_2() {
    for args in [
        &["window", "--k", "1"][..],
        &["window", "--j", "2"],
        &["hitting", "--n", "2"],
        &["sample", "--p", "1.5"],
    ] {
        let out = cli(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn oversized_complex_exits_2() {
    let out = cli(&["sample", "--n", "5000", "--p", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trace_csv_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let out = cli(&["sample", "--n", "9", "--seed", "3", "--trace", path.to_str().unwrap()]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, TraceRow::csv_header(1));
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 84);
    let times: Vec<f64> = rows.iter().map(|x| x[1].parse().unwrap()).collect();
    assert!(times.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(&rows[83][7], "true");
}

#[test]
fn out_dir_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("w");
    let out = cli(&["window", "--n", "12", "--trials", "7", "--seed", "1", "--out", d.to_str().unwrap()]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(d.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["kind"], "window");
    let rows = csv::Reader::from_path(d.join("trials.csv")).unwrap().records().count();
    assert_eq!(rows, 7);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    fs::write(&path, "n = [10, 14]\ntrials = 5\nseed = 4\n").unwrap();
    let a = json(&cli(&["hitting", "--config", path.to_str().unwrap()]));
    assert_eq!(a["config"]["n"], serde_json::json!([10, 14]));
    assert_eq!(a["summaries"].as_array().unwrap().len(), 2);
    let b = json(&cli(&["hitting", "--config", path.to_str().unwrap(), "--trials", "3"]));
    assert_eq!(b["config"]["trials"], 3);
    assert_eq!(b["summaries"][0]["trials"], 3);

    fs::write(&path, "n = [10]\nbogus = 1\n").unwrap();
    assert_eq!(cli(&["hitting", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn seeds_change_output() {
    let a = cli(&["window", "--n", "15", "--trials", "20", "--seed", "1"]);
    let b = cli(&["window", "--n", "15", "--trials", "20", "--seed", "2"]);
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let a = cli(&["hitting", "--n", "10", "--trials", "12", "--seed", "8", "--workers", "1"]);
    let b = cli(&["hitting", "--n", "10", "--trials", "12", "--seed", "8", "--workers", "3"]);
    let (mut a, mut b) = (json(&a), json(&b));
    a["config"]["workers"] = 0.into();
    b["config"]["workers"] = 0.into();
    assert_eq!(a, b);
}

#[test]
fn expect_negative_window_parameter() {
    let v = json(&cli(&["expect", "--n", "50", "--c", "-1"]));
    let row = &v["rows"][0];
    assert_eq!(row["c"], -1.0);
    assert!(row["window_p"].as_f64().unwrap() < row["thresholds"]["pj"].as_f64().unwrap());
}
