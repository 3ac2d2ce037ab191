//! Command-line front end: `constants`, `solve`, `verify`, `sweep`.
//!
//! Exit codes: 0 success, 1 I/O, 2 parse or structural error, 3 domain
//! error, 4 non-convergence, 5 verification failure.

pub mod config;
pub mod files;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{
    a_ns, critical_exponent, extension_constant, gamma_theta, lambda_ns, psi_ns, ProblemParams, Regime,
    SpectralConstants,
};
use crate::error::Error;
use crate::forms::FormSet;
use crate::grid::RadialGrid;
use crate::solver::{self, RadialSolution};
use crate::verify::{criticality_guard, verify_all, Criticality, Refinement, VerificationReport};
use config::{ConfigError, InitKind, RunConfig, KEYS};
use files::{sweep_table, write_atomic, ProfileFile, SweepRow, GENERATOR};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "FRAC_HARDY_THREADS";
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Io = 1,
    Parse = 2,
    Domain = 3,
    NonConvergence = 4,
    VerificationFailed = 5,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: ExitStatus,
    pub message: String,
}

impl CliError {
    fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new(ExitStatus::Io, format!("{}: {e}", path.display()))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Argument(_) | Error::Dimension { .. } => ExitStatus::Parse,
            Error::Convergence { .. } | Error::Assembly(_) => ExitStatus::NonConvergence,
            Error::Domain(_) | Error::Degenerate(_) | Error::Singular { .. } => ExitStatus::Domain,
        };
        Self::new(status, e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self::new(ExitStatus::Parse, format!("config: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "frac-hardy", version, about = "Radial solver and checks for the fractional Hardy equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print Λ_{N,s}, a_{N,s}, k_s, 2*_s and γ_θ or Ψ(γ).
    Constants(ConstantsArgs),
    /// Solve the problem and write a profile and a report.
    Solve(RunArgs),
    /// Check a profile file and write a report.
    Verify(VerifyArgs),
    /// Solve and verify over a parameter sweep.
    Sweep(RunArgs),
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    s: f64,
    #[arg(long, conflicts_with = "gamma")]
    theta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args, Default)]
struct ConfigArgs {
    /// Config file of key=value lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key; repeatable. Flags below win over these.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Profile output path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Sweep table path.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Also solve on a refined grid for the origin trend.
    #[arg(long)]
    refine: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Profile file to check.
    profile: PathBuf,
    /// Profile of the same problem on a refined grid.
    #[arg(long)]
    refined: Option<PathBuf>,
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Structured run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub generator: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub defaults_applied: Vec<String>,
    pub regime: Regime,
    pub constants: Option<SpectralConstants>,
    pub solution: Option<SolutionSummary>,
    pub verification: Option<VerificationReport>,
    pub profile: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub lambda: f64,
    pub f_min: f64,
    pub iterations: usize,
    pub converged: bool,
    pub window_scale: f64,
    pub resample_fallback: bool,
    /// Energy nonincreasing within every window round.
    pub energy_monotone: bool,
    pub refined_lambda: Option<f64>,
}

/// Entry point of the binary.
pub fn run<I, T>(args: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Same as [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_workers();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { ExitStatus::Parse } else { ExitStatus::Success };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return status;
        }
    };
    let result = match cli.command {
        Command::Constants(a) => cmd_constants(&a, out),
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
    };
    match result {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.status
        }
    }
}

/// Sizes the global worker pool from [`WORKERS_ENV`] once per process.
pub fn init_workers() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| {
        if let Some(n) = std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    });
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::new(ExitStatus::Io, e.to_string()))
}

fn cmd_constants(a: &ConstantsArgs, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let mut values: BTreeMap<&str, f64> = BTreeMap::new();
    values.insert("lambda_ns", lambda_ns(a.dim, a.s)?);
    values.insert("a_ns", a_ns(a.dim, a.s)?);
    values.insert("k_s", extension_constant(a.s)?);
    values.insert("crit_exp", critical_exponent(a.dim, a.s)?);
    if let Some(t) = a.theta {
        values.insert("theta", t);
        values.insert("gamma_theta", gamma_theta(a.dim, a.s, t)?);
    }
    if let Some(g) = a.gamma {
        values.insert("gamma", g);
        values.insert("psi", psi_ns(a.dim, a.s, g)?);
    }
    let text = if a.json {
        let mut obj = serde_json::Map::new();
        obj.insert("dim".into(), a.dim.into());
        obj.insert("s".into(), a.s.into());
        for (k, v) in &values {
            obj.insert((*k).into(), (*v).into());
        }
        serde_json::to_string_pretty(&obj).expect("plain map") + "\n"
    } else {
        let mut t = format!("dim = {}\ns = {}\n", a.dim, a.s);
        for (k, v) in &values {
            t.push_str(&format!("{k} = {v:.15e}\n"));
        }
        t
    };
    emit(out, &text)?;
    Ok(ExitStatus::Success)
}

fn load_config(base: RunConfig, args: &ConfigArgs) -> CliResult<RunConfig> {
    let mut cfg = base;
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        cfg.apply_text(&text).map_err(|e| CliError::new(ExitStatus::Parse, format!("{}: {e}", path.display())))?;
    }
    for kv in &args.set {
        cfg.apply_assignment(kv)?;
    }
    Ok(cfg)
}

fn run_config(a: &RunArgs) -> CliResult<RunConfig> {
    let mut cfg = load_config(RunConfig::default(), &a.cfg)?;
    let flags: [(&str, Option<String>); 11] = [
        ("dim", a.dim.map(|v| v.to_string())),
        ("s", a.s.map(|v| v.to_string())),
        ("theta", a.theta.map(|v| v.to_string())),
        ("p", a.p.map(|v| v.to_string())),
        ("q", a.q.map(|v| v.to_string())),
        ("nodes", a.nodes.map(|v| v.to_string())),
        ("r_min", a.r_min.map(|v| v.to_string())),
        ("r_max", a.r_max.map(|v| v.to_string())),
        ("profile_out", a.out.as_ref().map(|v| v.display().to_string())),
        ("report_out", a.report.as_ref().map(|v| v.display().to_string())),
        ("table_out", a.table.as_ref().map(|v| v.display().to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    if a.refine {
        cfg.set("refine", "true")?;
    }
    Ok(cfg)
}

fn nonexistence_message(p: &ProblemParams) -> String {
    format!(
        "p = {} equals the critical power 2*_s - 1 = (N+2s)/(N-2s): the problem has no nontrivial solution (Pohozaev nonexistence), refusing",
        p.p
    )
}

fn check_solvable(params: &ProblemParams) -> CliResult<SpectralConstants> {
    if criticality_guard(params) == Criticality::Nonexistent {
        return Err(CliError::new(ExitStatus::Domain, nonexistence_message(params)));
    }
    let constants = params.validate()?;
    let regime = params.regime();
    if !regime.is_supercritical() {
        return Err(CliError::new(ExitStatus::Domain, format!("regime {regime} is not solvable")));
    }
    Ok(constants)
}

fn read_profile(path: &Path) -> CliResult<ProfileFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ProfileFile::parse(&text).map_err(|e| CliError::new(ExitStatus::Parse, format!("{}: {e}", path.display())))
}

fn solve_on(cfg: &RunConfig, r_min: f64, nodes: usize, user: Option<Vec<f64>>) -> CliResult<(FormSet, RadialSolution)> {
    let grid = RadialGrid::build_log_grid(cfg.params.dim, r_min, cfg.r_max, nodes)?;
    let forms = FormSet::assemble(&grid, cfg.params.s)?;
    let sol = solver::solve(&forms, &cfg.params, &cfg.minimizer_with(user))?;
    Ok((forms, sol))
}

fn energy_monotone(sol: &RadialSolution) -> bool {
    sol.trace.windows(2).all(|w| w[0].round != w[1].round || w[1].energy <= w[0].energy)
}

fn profile_header(cfg: &RunConfig, extra: &[(&str, String)]) -> BTreeMap<String, String> {
    let mut h = cfg.entries();
    for (k, v) in extra {
        h.insert(k.to_string(), v.clone());
    }
    h
}

fn write_report(path: &Path, report: &RunReport) -> CliResult<()> {
    let json = serde_json::to_string_pretty(report).expect("report serialises") + "\n";
    write_atomic(path, json.as_bytes()).map_err(|e| CliError::io(path, e))
}

fn cmd_solve(a: &RunArgs, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let cfg = run_config(a)?;
    let constants = check_solvable(&cfg.params)?;
    let user = match cfg.init_kind {
        InitKind::UserProfile => {
            let path = cfg
                .init_profile
                .as_ref()
                .ok_or_else(|| CliError::new(ExitStatus::Parse, "init_shape=user_profile needs init_profile"))?;
            Some(read_profile(path)?.u)
        }
        _ => None,
    };
    let (forms, sol) = solve_on(&cfg, cfg.r_min, cfg.nodes, user)?;
    let refined = if cfg.refine {
        let (r_min, nodes) = cfg.refine_grid();
        Some(solve_on(&cfg, r_min, nodes, None)?)
    } else {
        None
    };
    let verification = verify_all(
        &forms,
        &cfg.params,
        &sol.u,
        refined.as_ref().map(|(f, s)| Refinement { grid: &f.grid, u: &s.u }),
        &cfg.thresholds,
    )?;

    let header = profile_header(
        &cfg,
        &[
            ("lambda", format!("{:e}", sol.lambda)),
            ("f_min", format!("{:e}", sol.f_min)),
            ("gamma_theta", format!("{:e}", constants.gamma_theta)),
            ("iterations", sol.iterations.to_string()),
            ("converged", sol.converged.to_string()),
        ],
    );
    let profile = ProfileFile::new(header, &sol.grid.nodes, &sol.u, constants.gamma_theta);
    write_atomic(&cfg.profile_out, profile.to_text().as_bytes()).map_err(|e| CliError::io(&cfg.profile_out, e))?;
    if let Some((rf, rs)) = &refined {
        let path = refined_path(&cfg.profile_out);
        let header = profile_header(
            &cfg,
            &[("r_min", format!("{:e}", rf.grid.r_min)), ("nodes", rf.grid.len().to_string()), ("lambda", format!("{:e}", rs.lambda))],
        );
        let p = ProfileFile::new(header, &rs.grid.nodes, &rs.u, constants.gamma_theta);
        write_atomic(&path, p.to_text().as_bytes()).map_err(|e| CliError::io(&path, e))?;
    }

    let summary = SolutionSummary {
        lambda: sol.lambda,
        f_min: sol.f_min,
        iterations: sol.iterations,
        converged: sol.converged,
        window_scale: sol.window_scale,
        resample_fallback: sol.resample_fallback,
        energy_monotone: energy_monotone(&sol),
        refined_lambda: refined.as_ref().map(|(_, s)| s.lambda),
    };
    let report = RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        generator: GENERATOR.into(),
        command: "solve".into(),
        config: cfg.entries(),
        defaults_applied: cfg.defaulted.iter().cloned().collect(),
        regime: cfg.params.regime(),
        constants: Some(constants),
        solution: Some(summary),
        verification: Some(verification.clone()),
        profile: Some(cfg.profile_out.display().to_string()),
    };
    write_report(&cfg.report_out, &report)?;
    info!("wrote {} and {}", cfg.profile_out.display(), cfg.report_out.display());

    emit(
        out,
        &format!(
            "lambda = {:.12e}\nf_min = {:.12e}\niterations = {}\nconverged = {}\nweak_residual = {}\ncertified = {}\nprofile = {}\nreport = {}\n",
            sol.lambda,
            sol.f_min,
            sol.iterations,
            sol.converged,
            verification.weak_residual.map_or("NA".into(), |w| format!("{w:.3e}")),
            verification.certified,
            cfg.profile_out.display(),
            cfg.report_out.display()
        ),
    )?;
    Ok(if sol.converged { ExitStatus::Success } else { ExitStatus::NonConvergence })
}

/// `profile.dat` → `profile.refined.dat`.
pub fn refined_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.refined.{}", ext.to_string_lossy()),
        None => format!("{stem}.refined"),
    };
    path.with_file_name(name)
}

/// Grid and values of a profile, checked against the grid its header describes.
fn profile_grid(profile: &ProfileFile, base: &RunConfig) -> CliResult<(RunConfig, RadialGrid)> {
    let mut cfg = base.clone();
    for (k, v) in &profile.header {
        if KEYS.contains(&k.as_str()) && base.defaulted.contains(k) {
            cfg.set(k, v)?;
        }
    }
    let grid = RadialGrid::build_log_grid(cfg.params.dim, cfg.r_min, cfg.r_max, cfg.nodes)?;
    if profile.r.len() != grid.len() {
        return Err(CliError::new(
            ExitStatus::Parse,
            format!("profile has {} rows, header describes {} nodes", profile.r.len(), grid.len()),
        ));
    }
    if let Some(i) = (0..grid.len()).find(|&i| (profile.r[i] - grid.nodes[i]).abs() > 1e-12 * grid.nodes[i]) {
        return Err(CliError::new(ExitStatus::Parse, format!("row {}: radius {} off the grid node {}", i + 1, profile.r[i], grid.nodes[i])));
    }
    Ok((cfg, grid))
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let overrides = load_config(RunConfig::default(), &a.cfg)?;
    let profile = read_profile(&a.profile)?;
    let (mut cfg, grid) = profile_grid(&profile, &overrides)?;
    if let Some(r) = &a.report {
        cfg.set("report_out", &r.display().to_string())?;
    }
    let forms = FormSet::assemble(&grid, cfg.params.s)?;
    let refined = match &a.refined {
        Some(path) => {
            let p = read_profile(path)?;
            let (_, g) = profile_grid(&p, &RunConfig::default())?;
            Some((g, p.u))
        }
        None => None,
    };
    let report = verify_all(
        &forms,
        &cfg.params,
        &profile.u,
        refined.as_ref().map(|(g, u)| Refinement { grid: g, u }),
        &cfg.thresholds,
    )?;
    let run = RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        generator: GENERATOR.into(),
        command: "verify".into(),
        config: cfg.entries(),
        defaults_applied: cfg.defaulted.iter().cloned().collect(),
        regime: cfg.params.regime(),
        constants: cfg.params.validate().ok(),
        solution: None,
        verification: Some(report.clone()),
        profile: Some(a.profile.display().to_string()),
    };
    write_report(&cfg.report_out, &run)?;
    let flags = report.passed;
    emit(
        out,
        &format!(
            "regime = {}\npohozaev = {}\ntail = {}\norigin = {}\nmonotone = {}\nweak_residual = {}\ncertified = {}\nreport = {}\n",
            report.regime,
            flags.pohozaev,
            flags.tail,
            flags.origin,
            flags.monotone,
            flags.weak_residual,
            report.certified,
            cfg.report_out.display()
        ),
    )?;
    for n in &report.notes {
        emit(out, &format!("note: {n}\n"))?;
    }
    Ok(if report.certified { ExitStatus::Success } else { ExitStatus::VerificationFailed })
}

fn sweep_point(cfg: &RunConfig, forms: &FormSet, refined: Option<&FormSet>, params: ProblemParams) -> SweepRow {
    let mut row = SweepRow {
        theta: params.theta,
        p: params.p,
        q: params.q,
        status: "SKIPPED",
        reason: String::new(),
        lambda: None,
        f_min: None,
        gamma_theta: gamma_theta(params.dim, params.s, params.theta).ok(),
        pohozaev_ratio: None,
        tail_slope: None,
        weak_residual: None,
        certified: false,
    };
    if criticality_guard(&params) == Criticality::Nonexistent {
        row.reason = Regime::CriticalNonexistent.to_string();
        return row;
    }
    if let Err(e) = check_solvable(&params) {
        row.reason = format!("{}: {}", params.regime(), e.message);
        return row;
    }
    let mcfg = cfg.minimizer_with(None);
    let outcome = solver::solve(forms, &params, &mcfg).and_then(|sol| {
        let fine = match refined {
            Some(rf) => Some(solver::solve(rf, &params, &mcfg)?),
            None => None,
        };
        let refinement = refined.zip(fine.as_ref()).map(|(rf, s)| Refinement { grid: &rf.grid, u: &s.u });
        let rep = verify_all(forms, &params, &sol.u, refinement, &cfg.thresholds)?;
        Ok((sol, rep))
    });
    match outcome {
        Ok((sol, rep)) => {
            row.status = if sol.converged { "OK" } else { "FAILED" };
            if !sol.converged {
                row.reason = "not converged".into();
            } else if !rep.certified {
                row.reason = rep.notes.join("; ");
            }
            row.lambda = Some(sol.lambda);
            row.f_min = Some(sol.f_min);
            row.pohozaev_ratio = rep.pohozaev_ratio;
            row.tail_slope = rep.tail_slope;
            row.weak_residual = rep.weak_residual;
            row.certified = rep.certified;
        }
        Err(e) => {
            row.status = "FAILED";
            row.reason = e.to_string();
        }
    }
    row
}

fn cmd_sweep(a: &RunArgs, out: &mut dyn Write) -> CliResult<ExitStatus> {
    let cfg = run_config(a)?;
    let (dim, s) = (cfg.params.dim, cfg.params.s);
    let mut thetas = cfg.sweep_theta.clone();
    if !cfg.sweep_theta_frac.is_empty() {
        let lam = lambda_ns(dim, s)?;
        thetas.extend(cfg.sweep_theta_frac.iter().map(|f| f * lam));
    }
    let ps = if cfg.sweep_p.is_empty() { vec![cfg.params.p] } else { cfg.sweep_p.clone() };
    let qs = if cfg.sweep_q.is_empty() { vec![cfg.params.q] } else { cfg.sweep_q.clone() };
    let mut points = Vec::new();
    for &theta in &thetas {
        for &p in &ps {
            for &q in &qs {
                points.push(ProblemParams::new(dim, s, theta, p, q));
            }
        }
    }
    if points.is_empty() {
        return Err(CliError::new(ExitStatus::Parse, "empty sweep range"));
    }
    let grid = RadialGrid::build_log_grid(dim, cfg.r_min, cfg.r_max, cfg.nodes)?;
    let forms = FormSet::assemble(&grid, s)?;
    let refined = if cfg.refine {
        let (r_min, nodes) = cfg.refine_grid();
        Some(FormSet::assemble(&RadialGrid::build_log_grid(dim, r_min, cfg.r_max, nodes)?, s)?)
    } else {
        None
    };
    let rows: Vec<SweepRow> = points.par_iter().map(|pp| sweep_point(&cfg, &forms, refined.as_ref(), *pp)).collect();
    let mut header = cfg.entries();
    header.insert("defaults_applied".into(), cfg.defaulted.iter().cloned().collect::<Vec<_>>().join(","));
    let table = sweep_table(&header, &rows);
    write_atomic(&cfg.table_out, table.as_bytes()).map_err(|e| CliError::io(&cfg.table_out, e))?;

    let ok = rows.iter().filter(|r| r.status == "OK").count();
    let skipped = rows.iter().filter(|r| r.status == "SKIPPED").count();
    emit(out, &format!("points = {}\nok = {ok}\nskipped = {skipped}\ntable = {}\n", rows.len(), cfg.table_out.display()))?;
    if ok > 0 {
        Ok(ExitStatus::Success)
    } else if skipped == rows.len() {
        Err(CliError::new(ExitStatus::Domain, "every sweep point was skipped"))
    } else {
        Err(CliError::new(ExitStatus::NonConvergence, "no sweep point converged"))
    }
}
