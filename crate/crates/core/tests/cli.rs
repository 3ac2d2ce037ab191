use std::path::{Path, PathBuf};

use frac_hardy::cli::files::ProfileFile;
use frac_hardy::cli::{run_with, ExitStatus, RunReport};
use tempfile::TempDir;

const SMALL: &[&str] = &["--nodes", "240", "--r-min", "1e-2", "--r-max", "60"];

fn run(args: &[&str]) -> (ExitStatus, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("frac-hardy").chain(args.iter().copied());
    let status = run_with(argv, &mut out, &mut err);
    (status, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn solve_small(dir: &TempDir, extra: &[&str]) -> (ExitStatus, PathBuf, PathBuf) {
    let prof = p(dir, "u.dat");
    let rep = p(dir, "solve.json");
    let mut args = vec!["solve", "--out", s(&prof), "--report", s(&rep)];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(extra);
    let (status, _, err) = run(&args);
    assert!(err.is_empty() || status != ExitStatus::Success, "{err}");
    (status, prof, rep)
}

fn read_report(path: &Path) -> RunReport {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn lines_value(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(&format!("{key} = "))).unwrap();
    line.split(" = ").nth(1).unwrap().parse().unwrap()
}

#[test]
fn constants_text_and_json() {
    let (st, out, _) = run(&["constants", "--dim", "3", "--s", "0.5", "--theta", "0.3183098861837907"]);
    assert_eq!(st, ExitStatus::Success);
    assert!((lines_value(&out, "lambda_ns") - 2.0 / std::f64::consts::PI).abs() < 1e-12);
    assert!((lines_value(&out, "gamma_theta") - 0.25798).abs() < 1e-4);
    assert_eq!(lines_value(&out, "crit_exp"), 3.0);

    let (st, out, _) = run(&["constants", "--dim", "3", "--s", "0.5", "--gamma", "1", "--json"]);
    assert_eq!(st, ExitStatus::Success);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["psi"].as_f64().unwrap() - v["lambda_ns"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn constants_domain_errors() {
    assert_eq!(run(&["constants", "--dim", "3", "--s", "0.5", "--theta", "0.7"]).0, ExitStatus::Domain);
    assert_eq!(run(&["constants", "--dim", "1", "--s", "0.75"]).0, ExitStatus::Domain);
    assert_eq!(run(&["constants", "--dim", "3"]).0, ExitStatus::Parse);
}

#[test]
fn solve_writes_profile_and_report_then_verifies() {
    let dir = TempDir::new().unwrap();
    let (st, prof, rep) = solve_small(&dir, &[]);
    assert_eq!(st, ExitStatus::Success);

    let profile = ProfileFile::parse(&std::fs::read_to_string(&prof).unwrap()).unwrap();
    assert_eq!(profile.r.len(), 240);
    assert_eq!(profile.header["format_version"], "1");
    assert_eq!(profile.header["nodes"], "240");
    assert!(profile.header.contains_key("lambda"));
    assert!(profile.u.iter().all(|&x| x >= 0.0));

    let report = read_report(&rep);
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.command, "solve");
    assert!(report.defaults_applied.contains(&"theta".to_string()));
    assert!(!report.defaults_applied.contains(&"nodes".to_string()));
    let sol = report.solution.unwrap();
    assert!(sol.converged && sol.energy_monotone);
    assert!(report.verification.unwrap().certified);

    let vrep = p(&dir, "verify.json");
    let (st, out, _) = run(&["verify", s(&prof), "--report", s(&vrep)]);
    assert_eq!(st, ExitStatus::Success, "{out}");
    let v = read_report(&vrep);
    assert_eq!(v.command, "verify");
    assert!(v.verification.unwrap().certified);

    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn config_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "run.cfg");
    std::fs::write(&cfg, "# comment\nnodes = 200\ntheta = 0.2\nr_min = 1e-2\nr_max = 60\n").unwrap();
    let prof = p(&dir, "u.dat");
    let rep = p(&dir, "r.json");
    let (st, _, err) = run(&[
        "solve", "--config", s(&cfg), "--set", "nodes=220", "--set", "theta=0.25", "--theta", "0.3", "--out", s(&prof),
        "--report", s(&rep),
    ]);
    assert_eq!(st, ExitStatus::Success, "{err}");
    let header = ProfileFile::parse(&std::fs::read_to_string(&prof).unwrap()).unwrap().header;
    assert_eq!(header["nodes"], "220");
    assert_eq!(header["theta"].parse::<f64>().unwrap(), 0.3);
    assert_eq!(header["r_max"].parse::<f64>().unwrap(), 60.0);
}

#[test]
fn config_errors_are_parse_errors() {
    let dir = TempDir::new().unwrap();
    let cfg = p(&dir, "bad.cfg");
    std::fs::write(&cfg, "nodes = 200\nbogus_key = 1\n").unwrap();
    let (st, _, err) = run(&["solve", "--config", s(&cfg)]);
    assert_eq!(st, ExitStatus::Parse);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(run(&["solve", "--set", "nodes"]).0, ExitStatus::Parse);
    assert_eq!(run(&["solve", "--set", "nodes=many"]).0, ExitStatus::Parse);
    assert_eq!(run(&["solve", "--nodes", "x"]).0, ExitStatus::Parse);
    assert_eq!(run(&["frobnicate"]).0, ExitStatus::Parse);
    assert_eq!(run(&["solve", "--config", s(&p(&dir, "missing.cfg"))]).0, ExitStatus::Io);
}

#[test]
fn critical_power_is_refused() {
    let dir = TempDir::new().unwrap();
    let (st, prof, rep) = solve_small(&dir, &["--p", "2", "--q", "5"]);
    assert_eq!(st, ExitStatus::Domain);
    assert!(!prof.exists() && !rep.exists());
    let (_, _, err) = run(&["solve", "--p", "2"]);
    assert!(err.contains("no nontrivial solution"), "{err}");
}

#[test]
fn out_of_range_parameters_are_domain_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(solve_small(&dir, &["--theta", "0.7"]).0, ExitStatus::Domain);
    assert_eq!(solve_small(&dir, &["--p", "1.5"]).0, ExitStatus::Domain);
    assert_eq!(solve_small(&dir, &["--q", "2.5"]).0, ExitStatus::Domain);
}

#[test]
fn verify_rejects_non_solutions_and_bad_files() {
    let dir = TempDir::new().unwrap();
    let (st, prof, _) = solve_small(&dir, &[]);
    assert_eq!(st, ExitStatus::Success);
    let text = std::fs::read_to_string(&prof).unwrap();
    let good = ProfileFile::parse(&text).unwrap();
    let vrep = p(&dir, "v.json");

    let mut gauss = good.clone();
    gauss.u = gauss.r.iter().map(|r| (-r * r).exp()).collect();
    let g = p(&dir, "gauss.dat");
    std::fs::write(&g, gauss.to_text()).unwrap();
    assert_eq!(run(&["verify", s(&g), "--report", s(&vrep)]).0, ExitStatus::VerificationFailed);
    assert!(!read_report(&vrep).verification.unwrap().certified);

    let mut short = good.clone();
    short.r.truncate(200);
    short.u.truncate(200);
    short.v_gamma.truncate(200);
    let f = p(&dir, "short.dat");
    std::fs::write(&f, short.to_text()).unwrap();
    assert_eq!(run(&["verify", s(&f), "--report", s(&vrep)]).0, ExitStatus::Parse);

    let mut moved = good.clone();
    moved.r[17] *= 1.001;
    std::fs::write(&f, moved.to_text()).unwrap();
    assert_eq!(run(&["verify", s(&f), "--report", s(&vrep)]).0, ExitStatus::Parse);

    std::fs::write(&f, text.replacen("\n1", "\nnot-a-number", 1)).unwrap();
    assert_eq!(run(&["verify", s(&f), "--report", s(&vrep)]).0, ExitStatus::Parse);

    assert_eq!(run(&["verify", s(&p(&dir, "absent.dat"))]).0, ExitStatus::Io);
}

#[test]
fn verify_flags_critical_header() {
    let dir = TempDir::new().unwrap();
    let (_, prof, _) = solve_small(&dir, &[]);
    let vrep = p(&dir, "v.json");
    let (st, _, _) = run(&["verify", s(&prof), "--set", "p=2", "--report", s(&vrep)]);
    assert_eq!(st, ExitStatus::VerificationFailed);
    let v = read_report(&vrep).verification.unwrap();
    assert!(!v.certified);
}

#[test]
fn sweep_table_rows() {
    let dir = TempDir::new().unwrap();
    let table = p(&dir, "sweep.tsv");
    let mut args = vec![
        "sweep", "--table", s(&table), "--set", "sweep_theta_frac=0.1,0.5", "--set", "sweep_theta=0.7", "--set", "sweep_p=2,3",
    ];
    args.extend_from_slice(SMALL);
    let (st, out, err) = run(&args);
    assert_eq!(st, ExitStatus::Success, "{out}{err}");
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# nodes=240")));
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 6);
    let status = |theta: f64, pw: f64| {
        rows.iter()
            .find(|r| (r[0].parse::<f64>().unwrap() - theta).abs() < 1e-9 && r[1].parse::<f64>().unwrap() == pw)
            .map(|r| (r[3], *r.last().unwrap()))
            .unwrap()
    };
    assert_eq!(status(0.7, 3.0).0, "SKIPPED");
    assert_eq!(status(0.7, 2.0).0, "SKIPPED");
    let lam = 2.0 / std::f64::consts::PI;
    assert_eq!(status(0.1 * lam, 2.0), ("SKIPPED", "CRITICAL_NONEXISTENT"));
    assert_eq!(status(0.1 * lam, 3.0).0, "OK");
    assert_eq!(status(0.5 * lam, 3.0).0, "OK");

    let (st, _, _) = run(&["sweep", "--table", s(&table), "--set", "sweep_theta_frac="]);
    assert_eq!(st, ExitStatus::Parse);
}
