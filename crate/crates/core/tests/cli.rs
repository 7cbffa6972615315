use std::process::{Command, Output};

use rap_lab::harness::CSV_HEADER;

fn rap_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rap-lab")).args(args).output().expect("binary runs")
}

const SMALL_ZETA2: [&str; 7] = ["zeta2", "--seed", "9", "--n", "1,2,5", "--reps", "400"];

#[test]
fn csv_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = rap_lab(&[&SMALL_ZETA2[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("A_n[n=2],") && rows[1].contains(",1.2500000000000000e0,"));
}

#[test]
fn json_report_mirrors_csv() {
    let csv = rap_lab(&SMALL_ZETA2);
    let json = rap_lab(&[&SMALL_ZETA2[..], &["--format", "json"]].concat());
    assert_eq!(json.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(doc["config"]["seed"], 9);
    assert_eq!(doc["config"]["experiment"], "zeta2");
    assert_eq!(doc["all_pass"], true);
    let cells = doc["cells"].as_array().unwrap();
    let csv_text = String::from_utf8(csv.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(cells.len(), records.len());
    for (c, r) in cells.iter().zip(&records) {
        assert_eq!(c["cell"], r[0]);
        // serde_json's default float parser may land one ulp away
        let (j, c_val) = (c["estimate"].as_f64().unwrap(), r[1].parse::<f64>().unwrap());
        assert!((j - c_val).abs() <= 2.0 * f64::EPSILON * c_val.abs(), "{j} vs {c_val}");
        assert_eq!(c["ref_provenance"], r[4]);
        assert_eq!(c["pass"].as_bool().unwrap().to_string(), r[6]);
    }
}

#[test]
fn exit_code_reflects_pass_lines() {
    // a vanishing z threshold makes every z-test fail
    let out = rap_lab(&[&SMALL_ZETA2[..], &["--z-max", "1e-12"]].concat());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains(",false"));
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(rap_lab(&["zeta2", "--seed", "1", "--reps", "0"]).status.code(), Some(2));
    assert_eq!(rap_lab(&["edge-density", "--seed", "1", "--n", "10"]).status.code(), Some(2));
    assert_eq!(rap_lab(&["zeta2"]).status.code(), Some(2), "seed is required");
    assert_eq!(rap_lab(&["nonsense", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let base = ["pwit", "--seed", "4", "--reps", "60", "--depth", "5", "--width", "6", "--n", "50"];
    let one = rap_lab(&[&base[..], &["--threads", "1"]].concat());
    let four = rap_lab(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    assert!(!one.stdout.is_empty());
}

#[test]
fn pwit_snapshot_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("tree.tsv");
    let out = rap_lab(&[
        "pwit",
        "--seed",
        "2",
        "--reps",
        "5",
        "--depth",
        "3",
        "--width",
        "3",
        "--n",
        "50",
        "--snapshot",
        snap.to_str().unwrap(),
    ]);
    assert_ne!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&snap).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word\tchild_index\tweight\tx_forward\tx_backward\tmatched");
    assert!(lines[1].starts_with("root\t-\t-\t"));
    // 1 + 3 + 9 + 27 vertices
    assert_eq!(lines.len(), 1 + 40);
}
