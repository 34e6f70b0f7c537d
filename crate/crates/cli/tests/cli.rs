//! End-to-end tests of the binary: determinism, metadata round-trips,
//! symmetry handling and exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mallows-avoid"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mallows-avoid-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn sample_zero_steps_min_init_is_identity() {
    let dir = tmp_dir("identity");
    let out = dir.join("id.csv");
    let o = run(&[
        "sample", "--pattern", "231", "--n", "4", "--beta", "1.5", "--steps", "0", "--seed", "1",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&out), "i,sigma_i\n1,1\n2,2\n3,3\n4,4\n");
}

#[test]
fn sample_is_deterministic_and_reproducible_from_metadata() {
    let dir = tmp_dir("determinism");
    let first = dir.join("a.csv");
    let second = dir.join("b.csv");
    let third = dir.join("c.csv");
    let args = |out: &Path| {
        vec![
            "sample".to_string(),
            "--pattern".into(), "321".into(),
            "--n".into(), "50".into(),
            "--beta".into(), "2.5".into(),
            "--steps".into(), "200000".into(),
            "--seed".into(), "42".into(),
            "--thin".into(), "50000".into(),
            "--out".into(), out.to_str().unwrap().to_string(),
        ]
    };
    assert!(bin().args(args(&first)).status().unwrap().success());
    assert!(bin().args(args(&second)).status().unwrap().success());
    assert_eq!(read(&first), read(&second), "same flags give identical bytes");
    assert_eq!(
        read(&dir.join("a.samples.txt")),
        read(&dir.join("b.samples.txt"))
    );

    // rerun from the metadata record alone
    let meta = dir.join("a.meta.json");
    let o = run(&[
        "sample",
        "--config", meta.to_str().unwrap(),
        "--out", third.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&first), read(&third), "metadata round-trip is byte-exact");
}

#[test]
fn sample_non_canonical_pattern_avoids_it_and_flips_beta() {
    let dir = tmp_dir("symmetry");
    let out = dir.join("p123.csv");
    let o = run(&[
        "sample", "--pattern", "123", "--n", "30", "--beta", "3", "--steps", "100000", "--seed",
        "5", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let meta: serde_json::Value =
        serde_json::from_str(&read(&dir.join("p123.meta.json"))).unwrap();
    assert_eq!(meta["canonical_pattern"], "321");
    assert_eq!(meta["canonical_beta"], -3.0);

    // decode the CSV and check 123-avoidance: no increasing triple
    let values: Vec<u32> = read(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let n = values.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                assert!(
                    !(values[i] < values[j] && values[j] < values[k]),
                    "found 123 at ({i},{j},{k})"
                );
            }
        }
    }
}

#[test]
fn limit_diagonal_for_nonpositive_beta() {
    let dir = tmp_dir("limit");
    let o = run(&[
        "limit", "--pattern", "231", "--beta", "-1", "--grid", "4",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let curve = read(&dir.join("curve.csv"));
    let mut lines = curve.lines();
    assert_eq!(lines.next(), Some("x,f,phi"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(cols[0], cols[1], "f(x) = x on the diagonal");
        assert_eq!(cols[2], 0.0, "phi = 0");
    }
    let summary: serde_json::Value = serde_json::from_str(&read(&dir.join("summary.json"))).unwrap();
    assert_eq!(summary["component_masses"][0], 1.0);
}

#[test]
fn limit_endpoints_exact_at_fine_grid() {
    let dir = tmp_dir("limit-endpoints");
    let o = run(&[
        "limit", "--pattern", "231", "--beta", "12", "--grid", "1000",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let curve = read(&dir.join("curve.csv"));
    let lines: Vec<&str> = curve.lines().collect();
    let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    let last: Vec<f64> = lines[1001].split(',').map(|v| v.parse().unwrap()).collect();
    assert!(first[1].abs() < 1e-10, "f(0) = 0");
    assert!((last[1] - 1.0).abs() < 1e-10, "f(1) = 1");
    let summary: serde_json::Value = serde_json::from_str(&read(&dir.join("summary.json"))).unwrap();
    let x_star = summary["x_star"].as_f64().unwrap();
    let masses = summary["component_masses"].as_array().unwrap();
    assert!((masses[1].as_f64().unwrap() - (2.0 * x_star - 1.0)).abs() < 1e-10);
}

#[test]
fn partition_table_small_values() {
    let dir = tmp_dir("partition");
    let o = run(&[
        "partition", "--pattern", "231", "--beta", "1", "--n-list", "3", "--exact",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let table = read(&dir.join("partition.csv"));
    let row: Vec<&str> = table.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "3");
    let got: f64 = row[1].parse().unwrap();
    let q = (1.0f64 / 3.0).exp();
    let expected = (1.0 + 2.0 * q + q * q + q * q * q).ln() / 3.0;
    assert!((got - expected).abs() < 1e-15);
    assert_eq!(
        read(&dir.join("poly_231_n3.csv")),
        "k,coeff\n0,1\n1,2\n2,1\n3,1\n"
    );
}

#[test]
fn partition_beta_zero_limit_is_log4() {
    let dir = tmp_dir("partition-log4");
    let o = run(&[
        "partition", "--pattern", "321", "--beta", "0", "--n-max", "16",
        "--out", dir.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let table = read(&dir.join("partition.csv"));
    for line in table.lines().skip(1) {
        let limit: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(limit, 1.3862943611198906);
    }
    // doubling sizes 2..16
    assert_eq!(table.lines().count(), 5);
}

#[test]
fn compare_identity_against_diagonal_limit() {
    let dir = tmp_dir("compare");
    let input = dir.join("id.txt");
    std::fs::write(&input, "1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20\n").unwrap();
    let report_path = dir.join("report.json");
    let o = run(&[
        "compare", "--input", input.to_str().unwrap(), "--pattern", "231", "--beta", "-1",
        "--grid", "64", "--out", report_path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(&report_path)).unwrap();
    let d = report["diagnostics"]["excursion_sup_distance"].as_f64().unwrap();
    assert!(d <= 1.0 / 40.0 + 1e-12, "sawtooth resolution: {d}");
    let g = report["diagnostics"]["permuton_cdf_distance"].as_f64().unwrap();
    assert!(g <= 0.05, "grid distance {g}");
}

#[test]
fn validate_passes_and_writes_report() {
    let dir = tmp_dir("validate");
    let report_path = dir.join("report.json");
    let o = run(&["validate", "--n-max", "5", "--out", report_path.to_str().unwrap()]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("pass catalan_counts"));
    let report: serde_json::Value = serde_json::from_str(&read(&report_path)).unwrap();
    assert!(report["suites"].as_array().unwrap().len() >= 10);
}

#[test]
fn exit_codes() {
    // usage: unknown flag value
    let o = run(&["sample", "--pattern", "999", "--n", "4", "--beta", "0", "--steps", "0",
        "--seed", "1", "--out", "/tmp/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    // usage: missing required parameter
    let o = run(&["sample", "--pattern", "231"]);
    assert_eq!(o.status.code(), Some(2));
    // usage: exclusive flags
    let o = run(&["partition", "--pattern", "231", "--beta", "1", "--n-list", "4",
        "--n-max", "8", "--out", "/tmp/p"]);
    assert_eq!(o.status.code(), Some(2));
    // I/O: input file missing
    let o = run(&["compare", "--input", "/nonexistent/perm.csv", "--pattern", "231",
        "--beta", "1", "--out", "/tmp/cmp.json"]);
    assert_eq!(o.status.code(), Some(3));
    // clap's own parse errors are also usage errors
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}
