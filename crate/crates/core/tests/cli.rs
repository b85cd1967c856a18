use std::fs;
use std::path::PathBuf;
use std::process::Command;

use tempfile::TempDir;
use tpmodal::cli::{self, Report};
use tpmodal::rational;
use tpmodal::seqshape;

const MATRIX_A: &str = "-1,-2,-3,-4\n-5,-6,-7,-8\n-9,-10,-11,-11\n-13,-14,-15,-11\n";

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("tpmodal").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Report) {
    let mut full = args.to_vec();
    full.push("--json");
    let (code, out, err) = run(&full);
    assert!(err.is_empty(), "{err}");
    (code, Report::from_json(&out).unwrap())
}

#[test]
fn analyze_partition_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "u.csv", "1,5,3,4,2\n");
    let (code, out, _) = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("modality: 2"));
    assert!(out.contains("s_plus: 4"));
    assert!(out.contains("partition: (1, 5, 3) (4, 2)"));
    assert!(out.contains("decomposition: (1, 5, 3) (3, 4, 2)"));
}

#[test]
fn analyze_small_inputs() {
    let dir = TempDir::new().unwrap();
    let (code, r) = run_json(&["analyze", write(&dir, "a", "7").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.results["modality"], 1);
    assert_eq!(r.results["s_plus"], 0);
    let (_, r) = run_json(&["analyze", write(&dir, "b", "0,3,3,1").to_str().unwrap()]);
    assert_eq!(r.results["modality"], 1);
    assert_eq!(r.results["mode_intervals"][0], "[2, 3]");
}

#[test]
fn analyze_reads_exact_decimals_and_fractions() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "u.json", r#"{"u": [0.1, "1/3", "-2.50", 4]}"#);
    let (_, r) = run_json(&["analyze", f.to_str().unwrap(), "--m", "1"]);
    assert_eq!(r.inputs["u"], serde_json::json!(["1/10", "1/3", "-5/2", "4"]));
    assert_eq!(r.results["1_modal_by_signs"], false);
}

#[test]
fn parse_errors_report_position() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.csv", "# comment\n1, 2, x3\n");
    let (code, _, err) = run(&["analyze", f.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert!(err.contains("line 2, column 7"), "{err}");
    let (code, _, _) = run(&["analyze", write(&dir, "empty.csv", "\n").to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
    let (code, _, _) = run(&["analyze", "/nonexistent/file"]);
    assert_eq!(code, cli::EXIT_INPUT);
}

#[test]
fn classify_matrix_a() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.csv", MATRIX_A);
    let (code, r) = run_json(&["classify", f.to_str().unwrap(), "--order", "3", "--m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["signature"], serde_json::json!(["-1", "-1", "-1"]));
    assert_eq!(r.results["totally_negative"], true);
    assert_eq!(r.results["unimodality_verdict"], "none");
    assert_eq!(r.results["modality_verdict"], "1-modality reverser");
}

#[test]
fn classify_reports_mixed_witness() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.csv", "1,2,0\n2,1,0\n0,1,1\n");
    let (code, r) = run_json(&["classify", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.results["sign_regular"], false);
    assert_eq!(r.results["mixed_witness"]["order"], 2);
    let (_, r) = run_json(&["classify", write(&dir, "i.csv", "1,0,0\n0,1,0\n0,0,1\n").to_str().unwrap()]);
    assert_eq!(r.results["totally_positive"], true);
    assert_eq!(r.results["unimodality_verdict"], "UP");
    let (code, _, _) = run(&["classify", write(&dir, "r.csv", "1,2\n3\n").to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
}

#[test]
fn quotient_golden_examples() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", MATRIX_A);
    let cases = [
        ("0,3,3,1", "1,1,1,1", ["1.9", "1.8077", "1.8049", "1.8491"], "bimodal"),
        ("6,5,6,7", "3,1,2,1", ["4.1333", "3.6744", "3.5286", "3.3511"], "unimodal"),
        ("4,2,1,2", "1,1,2,2", ["1.1176", "1.3415", "1.4127", "1.481"], "unimodal"),
    ];
    for (u, v, w, shape) in cases {
        let uf = write(&dir, "u.csv", u);
        let vf = write(&dir, "v.csv", v);
        let (code, r) = run_json(&["quotient", a.to_str().unwrap(), uf.to_str().unwrap(), vf.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(r.results["w_decimal"], serde_json::json!(w));
        assert_eq!(r.results["shape"], shape);
    }
    let (_, r) = run_json(&[
        "quotient",
        a.to_str().unwrap(),
        write(&dir, "u3", "4,2,1,2").to_str().unwrap(),
        write(&dir, "v3", "1,1,2,2").to_str().unwrap(),
    ]);
    assert_eq!(r.results["input_convexity"], "convex");
    assert_eq!(r.results["convexity"], "concave");
}

#[test]
fn quotient_envelope_and_errors() {
    let dir = TempDir::new().unwrap();
    let env = write(
        &dir,
        "e.json",
        r#"{"matrix": [[1, 0], [0, 1]], "u": [1, 4], "v": ["1/2", 2]}"#,
    );
    let (code, r) = run_json(&["quotient", env.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.results["w"], serde_json::json!(["2", "2"]));
    let zero = write(&dir, "z.json", r#"{"matrix": [[1, -1], [0, 1]], "u": [1, 4], "v": [1, 1]}"#);
    let (code, _, err) = run(&["quotient", zero.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert!(err.contains("index 1"), "{err}");
    let unmet = write(&dir, "n.json", r#"{"matrix": [[1, 0], [0, 1]], "u": [1, 4], "v": [1, -1]}"#);
    let (code, _, _) = run(&["quotient", unmet.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_HYPOTHESIS);
}

#[test]
fn dompoly_commands() {
    let dir = TempDir::new().unwrap();
    let seed = write(&dir, "s.csv", "1,2,1\n");
    let (code, r) = run_json(&["dompoly", "--m", "1", "--k", "1", "--seeds", seed.to_str().unwrap(), "--n-max", "20"]);
    assert_eq!(code, 0);
    let gens = r.results["generations"].as_array().unwrap();
    assert_eq!(gens.len(), 20);
    assert!(gens.iter().all(|g| g["modality"] == 1));
    assert_eq!(r.results["kernel_matches_recurrence"], true);

    let (code, r) = run_json(&["dompoly", "--m", "1", "--k", "0", "--seeds", write(&dir, "one", "1").to_str().unwrap(), "--n-max", "5"]);
    assert_eq!(code, 0);
    assert!(r.results["generations"].as_array().unwrap().iter().all(|g| g["coeffs"] == serde_json::json!(["1"])));

    let two = write(&dir, "two.csv", "1,1\n0,2,2\n");
    let (code, r) = run_json(&["dompoly", "--m", "2", "--k", "1", "--seeds", two.to_str().unwrap(), "--n-max", "12"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["generations"][2]["coeffs"], serde_json::json!(["0", "1", "3", "2"]));

    let broken = write(&dir, "b.csv", "2\n3\n");
    let (code, _) = run_json(&["dompoly", "--m", "2", "--k", "2", "--seeds", broken.to_str().unwrap(), "--n-max", "6"]);
    assert_eq!(code, cli::EXIT_FALSIFIED);

    let (code, _, err) = run(&["dompoly", "--m", "3", "--seeds", seed.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert!(err.contains("at least 3"), "{err}");
}

#[test]
fn reports_round_trip_and_reparse() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", MATRIX_A);
    let (_, out, _) = run(&[
        "quotient",
        a.to_str().unwrap(),
        write(&dir, "u", "0,3,3,1").to_str().unwrap(),
        write(&dir, "v", "1,1,1,1").to_str().unwrap(),
        "--json",
    ]);
    let report = Report::from_json(&out).unwrap();
    assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);
    let w: Vec<_> = report.results["w"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| rational::parse_rational(x.as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(seqshape::modality(&w).m, 2);
    let rendered: Vec<_> = report.results["w_decimal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| rational::parse_rational(x.as_str().unwrap()).unwrap())
        .collect();
    assert_eq!(seqshape::modality(&rendered).m, 2);
}

#[test]
fn selftest_passes() {
    let (code, r) = run_json(&["selftest", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["all_passed"], true);
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bin = env!("CARGO_BIN_EXE_tpmodal");
    let ok = Command::new(bin).args(["analyze", write(&dir, "u", "1,5,3,4,2").to_str().unwrap()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("modality: 2"));
    let bad = Command::new(bin).args(["analyze", "--bogus"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
