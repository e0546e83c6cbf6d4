use std::process::{Command, Output};

use fibzeta_cli::grid::{GridRow, CSV_HEADER};
use fibzeta_cli::literal::parse_complex;
use proptest::prelude::*;

fn fibzeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibzeta"))
        .args(args)
        .env_remove("FIBZETA_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = fibzeta(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn eval_combined_at_one() {
    let v = json(&[
        "eval", "--D", "5", "--s", "1", "--parity", "combined", "--method", "binomial", "--format",
        "json",
    ]);
    assert!((v["re_z"].as_f64().unwrap() - 3.359_885_666_243_177_5).abs() < 1e-12);
    assert_eq!(v["im_z"].as_f64().unwrap(), 0.0);
}

#[test]
fn eval_even_poisson_at_minus_one() {
    let v = json(&[
        "eval", "--D", "5", "--s", "-1", "--parity", "even", "--method", "poisson", "--format",
        "json",
    ]);
    assert!((v["re_z"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!(v["im_z"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn text_output_names_the_pieces() {
    let o = fibzeta(&["eval", "--D", "5", "--s", "2+1i", "--parity", "odd"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for key in [
        "value",
        "method",
        "terms_used",
        "tail_bound",
        "nearest_pole",
    ] {
        assert!(text.contains(key), "missing {key} in\n{text}");
    }
}

#[test]
fn error_exit_codes() {
    let o = fibzeta(&["eval", "--D", "6", "--s", "1", "--parity", "odd"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NormPlusOne"));

    let o = fibzeta(&["eval", "--D", "12", "--s", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotSquarefree"));

    let o = fibzeta(&["eval", "--D", "5", "--s", "1+2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = fibzeta(&["eval", "--D", "5", "--s", "0", "--parity", "odd"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PoleProximity"));

    let o = fibzeta(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));

    let o = fibzeta(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

fn grid_rows(args: &[&str]) -> Vec<GridRow> {
    let o = fibzeta(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    lines.map(|l| GridRow::from_csv(l).unwrap()).collect()
}

#[test]
fn grid_methods_agree() {
    let rows = grid_rows(&[
        "grid",
        "--D",
        "5",
        "--re",
        "1:3:1",
        "--im",
        "0",
        "--methods",
        "binomial,poisson",
    ]);
    assert_eq!(rows.len(), 6);
    for pair in rows.chunks(2) {
        assert_eq!(pair[0].re_s, pair[1].re_s);
        let delta = (pair[0].re_z.unwrap() - pair[1].re_z.unwrap()).abs();
        assert!(delta < 1e-8, "delta {delta} at re {}", pair[0].re_s);
    }
}

#[test]
fn grid_with_three_imaginary_parts() {
    let rows = grid_rows(&[
        "grid",
        "--D",
        "5",
        "--re",
        "1:3:1",
        "--im",
        "-1:1:1",
        "--methods",
        "binomial,poisson",
    ]);
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|r| r.status == "ok"));
    let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.re_s, r.im_s)).collect();
    let mut sorted = order.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(order, sorted);
}

#[test]
fn grid_marks_the_origin() {
    let rows = grid_rows(&[
        "grid",
        "--D",
        "5",
        "--parity",
        "odd",
        "--re",
        "-0.5:0.5:0.5",
        "--im",
        "0",
        "--methods",
        "binomial",
    ]);
    assert_eq!(rows.len(), 3);
    let origin = rows.iter().find(|r| r.re_s == 0.0).unwrap();
    assert_eq!(origin.status, "pole");
    assert_eq!(origin.re_z, None);
}

#[test]
fn empty_grid_is_header_only() {
    let o = fibzeta(&["grid", "--D", "5", "--re", "3:1:1", "--im", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim_end(), CSV_HEADER);
}

#[test]
fn grid_json_is_an_array() {
    let v = json(&[
        "grid",
        "--D",
        "10",
        "--re",
        "2",
        "--im",
        "0:1:1",
        "--methods",
        "binomial",
        "--format",
        "json",
    ]);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn pole_tables() {
    let odd = json(&[
        "poles", "--D", "5", "--kmax", "1", "--mmax", "1", "--which", "odd", "--format", "json",
    ]);
    assert_eq!(odd.as_array().unwrap().len(), 6);

    let combined = json(&[
        "poles", "--D", "5", "--kmax", "1", "--mmax", "1", "--which", "combined", "--format",
        "json",
    ]);
    for p in combined.as_array().unwrap() {
        let (k, m) = (p["k"].as_i64().unwrap(), p["m"].as_i64().unwrap());
        assert_eq!((k + m).rem_euclid(2), 0);
    }

    let origin = json(&[
        "poles", "--D", "5", "--kmax", "0", "--mmax", "0", "--which", "odd", "--format", "json",
    ]);
    let origin = origin.as_array().unwrap();
    assert_eq!(origin.len(), 1);
    let log_phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let res = origin[0]["residue_odd"].as_array().unwrap()[0]
        .as_f64()
        .unwrap();
    assert!((res - 1.0 / (2.0 * log_phi)).abs() < 1e-14);

    let o = fibzeta(&["poles", "--D", "3", "--which", "odd"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sequences() {
    let last = |d: &str, n: &str| {
        let o = fibzeta(&["sequence", "--D", d, "--n", n, "--format", "csv"]);
        assert!(o.status.success());
        stdout(&o).lines().last().unwrap().to_string()
    };
    assert_eq!(last("3", "5"), "5,209,724,4,true");
    assert_eq!(last("10", "4"), "4,228,1442,4,true");
    assert_eq!(last("5", "10"), "10,55,123,4,true");
}

#[test]
fn detect_large_values() {
    // F_5(100)
    let f100 = "354224848179261915075";
    let o = fibzeta(&["detect", "--D", "5", "--n", f100, "--parity"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("member_even_index"));
    let o = fibzeta(&["detect", "--D", "5", "--n", "354224848179261915076"]);
    assert!(stdout(&o).starts_with("not_member"));
    let o = fibzeta(&["detect", "--D", "5", "--n", "-3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites_report_pass() {
    let o = fibzeta(&["verify", "--suite", "special-values", "--D", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("PASS suite special-values"));
    assert!(!text.contains("FAIL"));
    let o = fibzeta(&[
        "verify",
        "--suite",
        "pell",
        "--D",
        "5",
        "--pell-limit",
        "100000",
    ]);
    assert!(o.status.success());
}

#[test]
fn precision_sources() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "precision = 5\n").unwrap();
    let conf = conf.to_str().unwrap();
    // bad value in the file is a usage error unless a flag overrides it
    let o = fibzeta(&["--config", conf, "eval", "--D", "5", "--s", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fibzeta(&[
        "--config",
        conf,
        "--precision",
        "40",
        "eval",
        "--D",
        "5",
        "--s",
        "2",
    ]);
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_fibzeta"))
        .args(["eval", "--D", "5", "--s", "2"])
        .env("FIBZETA_PRECISION", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn csv_rows_round_trip(re in -1e3f64..1e3, im in -1e3f64..1e3, z in proptest::option::of((any::<f64>(), any::<f64>())),
                           tail in proptest::option::of(0f64..1.0), dist in 0f64..100.0) {
        let z = z.filter(|(a, b)| a.is_finite() && b.is_finite());
        let row = GridRow {
            re_s: re,
            im_s: im,
            method: fibzeta::Method::Poisson,
            status: if z.is_some() { "ok".into() } else { "pole".into() },
            re_z: z.map(|p| p.0),
            im_z: z.map(|p| p.1),
            tail_bound: tail,
            pole_distance: dist,
        };
        let back = GridRow::from_csv(&row.to_csv()).unwrap();
        prop_assert_eq!(back.re_s.to_bits(), row.re_s.to_bits());
        prop_assert_eq!(back.re_z.map(f64::to_bits), row.re_z.map(f64::to_bits));
        prop_assert_eq!(back.im_z.map(f64::to_bits), row.im_z.map(f64::to_bits));
        prop_assert_eq!(back, row);
    }

    #[test]
    fn literals_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = fibzeta::Complex::new(re, im);
        prop_assert_eq!(parse_complex(&fibzeta_cli::literal::format_complex(z)).unwrap(), z);
    }
}
