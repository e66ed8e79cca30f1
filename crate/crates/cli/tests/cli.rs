use std::path::Path;
use std::process::{Command, Output};

fn qwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwt"))
        .args(args)
        .env_remove("QWT_REGISTRY_PATH")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_lines(path: &Path, values: &[f64]) {
    let text: String = values.iter().map(|v| format!("{v:.17e}\n")).collect();
    std::fs::write(path, text).unwrap();
}

fn fidelity_line(text: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix("# fidelity "))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn verify_lcu_and_single_pass() {
    let o = qwt(&["verify", "--suite", "lcu", "--filter", "db2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("check lcu"));
    let o = qwt(&[
        "verify", "--suite", "single", "--filter", "haar", "--n", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_all_suites() {
    let o = qwt(&["verify", "--filter", "db2", "--n", "4", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all 6 checks passed"));
}

#[test]
fn verify_bad_filter_file_fails_with_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    write_lines(&bad, &[0.6, 0.6]);
    let o = qwt(&["verify", "--filter-file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("sum_residual"));
    assert!(text.contains("first failing check: filter-validity"));
}

#[test]
fn simulate_constant_signal_multilevel() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("const.txt");
    write_lines(&sig, &[8f64.sqrt().recip(); 8]);
    let o = qwt(&[
        "simulate",
        "--filter",
        "haar",
        "--n",
        "3",
        "--d",
        "3",
        "--variant",
        "multilevel",
        "--signal",
        sig.to_str().unwrap(),
        "--compare",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(fidelity_line(&text) >= 1.0 - 1e-10);
    let first: Vec<f64> = text
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    assert!((first[0].abs() - 1.0).abs() < 1e-10);
}

#[test]
fn simulate_random_db2_signal_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("sig.txt");
    let values: Vec<f64> = (0..32)
        .map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0)
        .collect();
    write_lines(&sig, &values);
    let out = dir.path().join("state.txt");
    let o = qwt(&[
        "simulate",
        "--filter",
        "db2",
        "--n",
        "5",
        "--d",
        "2",
        "--variant",
        "multilevel",
        "--signal",
        sig.to_str().unwrap(),
        "--normalize",
        "--compare",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fidelity_line(&stdout(&o)) >= 1.0 - 1e-9);
    assert_eq!(std::fs::read_to_string(out).unwrap().lines().count(), 32);
}

#[test]
fn simulate_rejects_unnormalized_signal() {
    let dir = tempfile::tempdir().unwrap();
    let sig = dir.path().join("sig.txt");
    write_lines(&sig, &[1.0; 8]);
    let o = qwt(&["simulate", "--n", "3", "--signal", sig.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = qwt(&[
        "simulate",
        "--n",
        "4",
        "--signal",
        sig.to_str().unwrap(),
        "--normalize",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = head.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn diffs(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

#[test]
fn count_sweep_single_is_affine_in_n() {
    let o = qwt(&["count", "--filter", "db2", "--sweep", "n=4..10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for col in ["toffoli", "total_elementary"] {
        let d = diffs(&csv_column(&text, col));
        assert!(d.iter().all(|&x| x == d[0]), "{col}: {d:?}");
    }
}

#[test]
fn count_sweep_packet_second_difference() {
    let o = qwt(&[
        "count",
        "--filter",
        "haar",
        "--variant",
        "packet",
        "--n",
        "8",
        "--sweep",
        "d=1..8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let second = diffs(&diffs(&csv_column(&stdout(&o), "total_elementary")));
    assert!(
        second.iter().all(|&x| x == second[0] && x < 0.0),
        "{second:?}"
    );
}

#[test]
fn count_is_deterministic() {
    let a = qwt(&["count", "--filter", "db3", "--n", "5", "--csv"]);
    let b = qwt(&["count", "--filter", "db3", "--n", "5", "--csv"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn plot_data_rows() {
    let o = qwt(&["plot-data", "success-amplitude"]);
    let text = stdout(&o);
    let inv_h = csv_column(&text, "inv_h");
    assert_eq!(inv_h.len(), 10);
    assert!(inv_h.iter().all(|&x| x > 0.31));
    assert!(text.contains("haar,2,7.07106781"));
    let o = qwt(&["plot-data", "coeff-decay", "--filter", "db10"]);
    let abs_h = csv_column(&stdout(&o), "abs_h");
    let max = abs_h.iter().cloned().fold(0.0, f64::max);
    assert!(abs_h[19] < 0.01 * max);
}

#[test]
fn export_and_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwt(&["export", "--filter", "haar", "--n", "3", "--qasm"]);
    assert_eq!(o.status.code(), Some(2));

    let qasm = dir.path().join("haar.qasm");
    let o = qwt(&[
        "export",
        "--filter",
        "haar",
        "--n",
        "3",
        "--lowered",
        "--qasm",
        "--output",
        qasm.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&qasm).unwrap();
    let c = qwt_core::circuit::from_qasm(&text).unwrap();
    assert_eq!(qwt_core::circuit::to_qasm(&c).unwrap(), text);
    let o = qwt(&["import", qasm.to_str().unwrap()]);
    assert!(stdout(&o).contains("elementary true"));

    let json = dir.path().join("db2.json");
    let o = qwt(&[
        "export",
        "--filter",
        "db2",
        "--n",
        "4",
        "--output",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&json).unwrap();
    for kind in [
        "\"prep\"",
        "\"unprep\"",
        "\"add\"",
        "\"sub\"",
        "\"shuffle\"",
        "\"reflect\"",
    ] {
        assert!(text.contains(kind), "{kind}");
    }
    let o = qwt(&["import", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("elementary false"));
}

#[test]
fn registry_path_adds_filters() {
    let dir = tempfile::tempdir().unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    write_lines(&dir.path().join("myhaar.txt"), &[r, r]);
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_qwt"))
            .args(args)
            .env("QWT_REGISTRY_PATH", dir.path())
            .output()
            .unwrap()
    };
    let o = run(&[
        "verify", "--suite", "single", "--filter", "myhaar", "--n", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["plot-data", "success-amplitude"]);
    assert!(stdout(&o).contains("myhaar,2,"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qwt(&["count", "--filter", "nosuch"]).status.code(), Some(2));
    assert_eq!(
        qwt(&["count", "--filter", "db4", "--n", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(qwt(&["count", "--sweep", "x=1..2"]).status.code(), Some(2));
    assert_eq!(qwt(&["frobnicate"]).status.code(), Some(2));
}
