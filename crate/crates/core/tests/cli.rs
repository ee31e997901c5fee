use std::path::Path;
use std::process::{Command, Output};

fn effcond(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_effcond")).args(args).output().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn num(field: &str) -> f64 {
    field.parse().unwrap()
}

#[test]
fn solve_prints_one_row() {
    let out = effcond(&["solve", "--lattice", "square", "--f", "0.5", "--sigma", "inf", "--truncation", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("f,method,sigma11,sigma12,sigma22,order,residual,status\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], "solver");
    assert_eq!(rows[0][5], "12");
    assert_eq!(rows[0][7], "ok");
    // square array of perfect conductors at f = 0.5
    let s11 = num(&rows[0][2]);
    assert!(s11 > 3.0 && s11 < 3.2, "{s11}");
    assert_eq!(num(&rows[0][2]), num(&rows[0][4]));
}

#[test]
fn keller_beyond_threshold_is_a_row_failure() {
    let out = effcond(&["closed-form", "--formula", "keller", "--f", "0.95"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.ends_with("keller,,,,,,domain-error\n"), "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("touching bound"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(effcond(&["solve", "--lattice", "square", "--f", "0.5"]).status.code(), Some(1));
    assert_eq!(effcond(&["solve", "--frobnicate"]).status.code(), Some(1));
    assert_eq!(effcond(&["nonsense"]).status.code(), Some(1));
    assert_eq!(effcond(&[]).status.code(), Some(1));
    assert_eq!(effcond(&["--help"]).status.code(), Some(0));
    assert_eq!(effcond(&["--version"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_exits_one() {
    let out = effcond(&[
        "closed-form", "--formula", "cma", "--f", "0.3",
        "--output", "/nonexistent-dir/for/sure/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir"));
}

#[test]
fn compare_writes_csv_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.csv");
    let p = path.to_str().unwrap();
    let args = [
        "compare", "--lattice", "hex", "--rho", "1", "--f-min", "0", "--f-max", "0.9", "--steps", "90",
        "--methods", "series,perrins,matched-perfect", "--output", p,
    ];
    let out = effcond(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read(&path).unwrap();
    let rows = csv_rows(std::str::from_utf8(&first).unwrap());
    assert_eq!(rows.len(), 91 * 3);
    assert_eq!(rows[0][1], "series");
    assert_eq!(rows[1][1], "perrins");
    assert_eq!(rows[3][0], "1.0000000000000000e-2");
    let script = Path::new(&format!("{p}.plot.py")).to_path_buf();
    assert!(std::fs::read_to_string(script).unwrap().contains("matplotlib"));

    // same configuration, same bytes
    effcond(&args);
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn homogeneous_medium_rows() {
    let out = effcond(&[
        "compare", "--lattice", "hex", "--rho", "0", "--f-min", "0", "--f-max", "0.6", "--steps", "6",
        "--methods", "solver,series,cma,perrins,matched-contrast",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for row in csv_rows(&String::from_utf8(out.stdout).unwrap()) {
        assert_eq!(row[7], "ok");
        assert!((num(&row[2]) - 1.0).abs() < 1e-15, "{row:?}");
        assert!((num(&row[4]) - 1.0).abs() < 1e-15);
        assert_eq!(num(&row[3]), 0.0);
    }
}

#[test]
fn solver_and_series_agree_on_the_square_array() {
    let out = effcond(&[
        "compare", "--lattice", "square", "--rho", "0.5", "--f-min", "0", "--f-max", "0.5", "--steps", "10",
        "--methods", "solver,series",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    for pair in rows.chunks(2) {
        let d = (num(&pair[0][2]) - num(&pair[1][2])).abs();
        assert!(d < 1e-5, "f = {}: {d:e}", pair[0][0]);
    }
}

#[test]
fn matched_contrast_above_perrins_close_to_threshold() {
    let out = effcond(&[
        "compare", "--lattice", "hex", "--sigma", "inf", "--f-min", "0.89", "--f-max", "0.905", "--steps", "15",
        "--methods", "matched-contrast,perrins",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    for pair in rows.chunks(2) {
        assert!(num(&pair[0][2]) > num(&pair[1][2]), "f = {}", pair[0][0]);
    }
}

#[test]
fn sums_and_coefficients_commands() {
    let out = effcond(&["sums", "--lattice", "square", "--max-order", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let s4 = text.lines().find(|l| l.starts_with("4 ")).unwrap();
    assert!(s4.starts_with("4 3.15121200215"), "{s4}");

    let out = effcond(&["series", "--lattice", "hex", "--order", "9", "--coefficients"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("j,k,re,im\n"));
    let line = text.lines().find(|l| l.starts_with("7,3,")).unwrap();
    let c73: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
    assert!((c73 - 0.150844).abs() < 5e-6);
}

#[test]
fn rectangle_beyond_touching_reports_domain_rows() {
    // a = 4: the short period 1/2 gives touching at π/16
    let out = effcond(&[
        "sweep", "--lattice", "rect", "--aspect", "4", "--rho", "1", "--f-min", "0.1", "--f-max", "0.3",
        "--steps", "2", "--method", "solver",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let status: Vec<&str> = rows.iter().map(|r| r[7].as_str()).collect();
    assert_eq!(status, ["ok", "domain-error", "domain-error"]);
}
