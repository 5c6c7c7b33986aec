use std::path::Path;
use std::process::{Command, Output};

use irs_coverage::cli::{default_scenario, parse_config, KEYS};

fn irscov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irscov"))
        .args(args)
        .output()
        .expect("spawn irscov")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows (header excluded) split into cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

fn write_cfg(dir: &Path, text: &str) -> String {
    let path = dir.join("s.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn coverage_emits_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "# defaults apart from the array\nn_elements = 6\n",
    );
    let o = irscov(&["coverage", "--config", &cfg, "--threshold-db", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(header(&out), "variable,value,p_analytic");
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "threshold_db");
    let p: f64 = r[0][2].parse().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert!(out.contains("# wavelength_m = 1.33"));
    assert!(out.contains("# method = gamma-approx"));
}

#[test]
fn zero_db_threshold_is_unit_linear_threshold() {
    use irs_coverage::coverage::coverage_general;
    use irs_coverage::CoverageQuery;
    let o = irscov(&["coverage", "--threshold-db", "0"]);
    let got: f64 = rows(&stdout(&o))[0][2].parse().unwrap();
    let want = coverage_general(&CoverageQuery::new(default_scenario(), 1.0).unwrap())
        .unwrap()
        .probability;
    assert_eq!(irs_coverage::cli::fmt_num(want), rows(&stdout(&o))[0][2]);
    assert!((got - want).abs() <= 1e-11 * want.max(1e-300));
}

#[test]
fn element_sweep_is_non_decreasing() {
    let o = irscov(&[
        "sweep",
        "--variable",
        "n_elements",
        "--start",
        "1",
        "--stop",
        "30",
        "--points",
        "30",
        "--threshold-db",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 30);
    let ps: Vec<f64> = r.iter().map(|row| row[2].parse().unwrap()).collect();
    assert!(ps.windows(2).all(|w| w[1] >= w[0]), "{ps:?}");
    assert!(ps[29] > 0.999);
}

#[test]
fn sweep_with_mc_columns() {
    let o = irscov(&[
        "sweep",
        "--variable",
        "sigma",
        "--start",
        "0.5",
        "--stop",
        "2",
        "--points",
        "4",
        "--threshold-db",
        "0",
        "--mc",
        "--trials",
        "2000",
        "--seed",
        "3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(header(&out), "variable,value,p_analytic,p_mc,ci95");
    assert!(out.contains("# trials = 2000\n# seed = 3\n"));
    assert!(rows(&out).iter().all(|r| r.len() == 5 && r[0] == "sigma"));
}

#[test]
fn ks_test_reports_small_distance() {
    let o = irscov(&[
        "ks-test", "--sigma", "1", "--trials", "100000", "--seed", "7",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(header(&out), "sigma,trials,seed,ks_gamma,ks_exact");
    let r = &rows(&out)[0];
    let ks: f64 = r[3].parse().unwrap();
    assert!(ks < 0.02, "ks={ks}");
    assert!(r[4].parse::<f64>().unwrap() < 0.01);
}

#[test]
fn grazing_angle_gives_zero_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "theta_s_deg = 90\nn_elements = 16\n");
    let o = irscov(&["coverage", "--config", &cfg, "--threshold-db", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&stdout(&o))[0][2], "0");
    let err = stderr(&o);
    assert!(err.contains("warning") && err.contains("theta_s"), "{err}");
}

#[test]
fn negative_distance_fails_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "d_s_m = -5\n");
    let o = irscov(&["coverage", "--config", &cfg, "--threshold-db", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("d_s"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn config_parse_error_carries_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "d_s_m = 50\n\nsigma1 = lots\n");
    let o = irscov(&["coverage", "--config", &cfg, "--threshold-db", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(":3"), "{}", stderr(&o));
}

#[test]
fn unknown_flag_prints_usage() {
    let o = irscov(&["coverage", "--threshold-db", "1", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("Usage"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_method_fails() {
    let o = irscov(&["coverage", "--threshold-db", "1", "--method", "guess"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("guess"));
}

#[test]
fn unreachable_target_exits_two() {
    let o = irscov(&["optimal-n", "--threshold-db", "30", "--cap", "5"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn optimal_n_rows() {
    let o = irscov(&["optimal-n", "--threshold-db", "10", "20", "30"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(header(&out), "threshold_db,n_star,p_analytic");
    let n: Vec<u64> = rows(&out).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(n, [8, 12, 19]);
}

#[test]
fn scenario_echo_reparses_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "d_s_m = 73.1\nd_r_m = 12.5\ntheta_s_deg = 33.3\ng_s_dbi = 2.1\ng_r_dbi = -1.7\n\
         p_s_dbm = 7.3\nnoise_dbm = -87.1\nn_elements = 9\nwavelength_m = 0.06\nsigma1 = 0.7\nsigma2 = 1.9\n",
    );
    let original = parse_config(Path::new(&cfg)).unwrap();
    let o = irscov(&["coverage", "--config", &cfg, "--threshold-db", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let echo: String = stdout(&o)
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter(|l| KEYS.iter().any(|k| l.starts_with(&format!("{k} ="))))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(echo.lines().count(), KEYS.len());
    let again = write_cfg(dir.path(), &echo);
    assert_eq!(parse_config(Path::new(&again)).unwrap(), original);
}

#[test]
fn validate_mc_is_worker_independent() {
    let run = |workers: &str| {
        let o = irscov(&[
            "validate-mc",
            "--points",
            "5",
            "--trials",
            "20000",
            "--seed",
            "9",
            "--workers",
            workers,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    let text = String::from_utf8(one).unwrap();
    assert!(text.contains("# method = exact-n1"));
    assert!(!text.contains("workers"));
}

#[test]
fn help_exits_zero() {
    let o = irscov(&["--help"]);
    assert!(o.status.success());
    for cmd in ["coverage", "sweep", "optimal-n", "validate-mc", "ks-test"] {
        assert!(stdout(&o).contains(cmd));
    }
}
