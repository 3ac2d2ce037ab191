//! Flat `key=value` run configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use crate::constants::ProblemParams;
use crate::solver::{InitShape, MinimizerConfig};
use crate::verify::Thresholds;

/// Keys in canonical order.
pub const KEYS: &[&str] = &[
    "dim",
    "s",
    "theta",
    "p",
    "q",
    "r_min",
    "r_max",
    "nodes",
    "max_iters",
    "step_init",
    "backtrack_factor",
    "tol_rel_f",
    "tol_constraint",
    "tol_grad",
    "init_shape",
    "init_profile",
    "profile_out",
    "report_out",
    "table_out",
    "refine",
    "refine_nodes",
    "refine_r_min",
    "pohozaev_tol",
    "tail_slack",
    "tail_window_lo",
    "tail_window_hi",
    "origin_r0",
    "origin_trend_max",
    "weak_residual_max",
    "monotone_tol",
    "sweep_theta",
    "sweep_theta_frac",
    "sweep_p",
    "sweep_q",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Starting profile selector without the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    AlgebraicBump,
    Gaussian,
    UserProfile,
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ProblemParams,
    pub r_min: f64,
    pub r_max: f64,
    pub nodes: usize,
    pub minimizer: MinimizerConfig,
    pub init_kind: InitKind,
    pub init_profile: Option<PathBuf>,
    pub profile_out: PathBuf,
    pub report_out: PathBuf,
    pub table_out: PathBuf,
    pub refine: bool,
    /// `None` means twice `nodes`.
    pub refine_nodes: Option<usize>,
    /// `None` means `r_min / 10`.
    pub refine_r_min: Option<f64>,
    pub thresholds: Thresholds,
    pub sweep_theta: Vec<f64>,
    pub sweep_theta_frac: Vec<f64>,
    pub sweep_p: Vec<f64>,
    pub sweep_q: Vec<f64>,
    /// Keys never set explicitly.
    pub defaulted: BTreeSet<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ProblemParams::new(3, 0.5, std::f64::consts::FRAC_1_PI, 3.0, 6.0),
            r_min: 1e-3,
            r_max: 1e2,
            nodes: 512,
            minimizer: MinimizerConfig::default(),
            init_kind: InitKind::AlgebraicBump,
            init_profile: None,
            profile_out: PathBuf::from("profile.dat"),
            report_out: PathBuf::from("report.json"),
            table_out: PathBuf::from("sweep.tsv"),
            refine: false,
            refine_nodes: None,
            refine_r_min: None,
            thresholds: Thresholds::default(),
            sweep_theta: Vec::new(),
            sweep_theta_frac: vec![0.1, 0.5, 0.9],
            sweep_p: Vec::new(),
            sweep_q: Vec::new(),
            defaulted: KEYS.iter().map(|k| k.to_string()).collect(),
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim().parse().map_err(|_| ConfigError(format!("{key}: cannot parse '{v}'")))
}

fn list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').map(str::trim).filter(|x| !x.is_empty()).map(|x| num(key, x)).collect()
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",")
}

fn boolean(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(ConfigError(format!("{key}: expected true/false, got '{v}'"))),
    }
}

impl RunConfig {
    /// Sets one key; the key stops counting as defaulted.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "dim" => self.params.dim = num(key, v)?,
            "s" => self.params.s = num(key, v)?,
            "theta" => self.params.theta = num(key, v)?,
            "p" => self.params.p = num(key, v)?,
            "q" => self.params.q = num(key, v)?,
            "r_min" => self.r_min = num(key, v)?,
            "r_max" => self.r_max = num(key, v)?,
            "nodes" => self.nodes = num(key, v)?,
            "max_iters" => self.minimizer.max_iters = num(key, v)?,
            "step_init" => self.minimizer.step_init = num(key, v)?,
            "backtrack_factor" => self.minimizer.backtrack_factor = num(key, v)?,
            "tol_rel_f" => self.minimizer.tol_rel_f = num(key, v)?,
            "tol_constraint" => self.minimizer.tol_constraint = num(key, v)?,
            "tol_grad" => self.minimizer.tol_grad = num(key, v)?,
            "init_shape" => {
                self.init_kind = match v {
                    "algebraic_bump" => InitKind::AlgebraicBump,
                    "gaussian" => InitKind::Gaussian,
                    "user_profile" => InitKind::UserProfile,
                    _ => return Err(ConfigError(format!("init_shape: unknown shape '{v}'"))),
                }
            }
            "init_profile" => self.init_profile = if v.is_empty() { None } else { Some(PathBuf::from(v)) },
            "profile_out" => self.profile_out = PathBuf::from(v),
            "report_out" => self.report_out = PathBuf::from(v),
            "table_out" => self.table_out = PathBuf::from(v),
            "refine" => self.refine = boolean(key, v)?,
            "refine_nodes" => self.refine_nodes = if v == "auto" { None } else { Some(num(key, v)?) },
            "refine_r_min" => self.refine_r_min = if v == "auto" { None } else { Some(num(key, v)?) },
            "pohozaev_tol" => self.thresholds.pohozaev_tol = num(key, v)?,
            "tail_slack" => self.thresholds.tail_slack = num(key, v)?,
            "tail_window_lo" => self.thresholds.tail_window.0 = num(key, v)?,
            "tail_window_hi" => self.thresholds.tail_window.1 = num(key, v)?,
            "origin_r0" => self.thresholds.origin_r0 = num(key, v)?,
            "origin_trend_max" => self.thresholds.origin_trend_max = num(key, v)?,
            "weak_residual_max" => self.thresholds.weak_residual_max = num(key, v)?,
            "monotone_tol" => self.thresholds.monotone_tol = num(key, v)?,
            "sweep_theta" => self.sweep_theta = list(key, v)?,
            "sweep_theta_frac" => self.sweep_theta_frac = list(key, v)?,
            "sweep_p" => self.sweep_p = list(key, v)?,
            "sweep_q" => self.sweep_q = list(key, v)?,
            _ => return Err(ConfigError(format!("unknown key '{key}'"))),
        }
        self.defaulted.remove(key);
        Ok(())
    }

    /// Canonical text of one key; parsing it back gives the same value.
    pub fn get(&self, key: &str) -> Option<String> {
        let opt_path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        Some(match key {
            "dim" => self.params.dim.to_string(),
            "s" => format!("{:e}", self.params.s),
            "theta" => format!("{:e}", self.params.theta),
            "p" => format!("{:e}", self.params.p),
            "q" => format!("{:e}", self.params.q),
            "r_min" => format!("{:e}", self.r_min),
            "r_max" => format!("{:e}", self.r_max),
            "nodes" => self.nodes.to_string(),
            "max_iters" => self.minimizer.max_iters.to_string(),
            "step_init" => format!("{:e}", self.minimizer.step_init),
            "backtrack_factor" => format!("{:e}", self.minimizer.backtrack_factor),
            "tol_rel_f" => format!("{:e}", self.minimizer.tol_rel_f),
            "tol_constraint" => format!("{:e}", self.minimizer.tol_constraint),
            "tol_grad" => format!("{:e}", self.minimizer.tol_grad),
            "init_shape" => match self.init_kind {
                InitKind::AlgebraicBump => "algebraic_bump",
                InitKind::Gaussian => "gaussian",
                InitKind::UserProfile => "user_profile",
            }
            .to_string(),
            "init_profile" => opt_path(&self.init_profile),
            "profile_out" => self.profile_out.display().to_string(),
            "report_out" => self.report_out.display().to_string(),
            "table_out" => self.table_out.display().to_string(),
            "refine" => self.refine.to_string(),
            "refine_nodes" => self.refine_nodes.map_or("auto".into(), |n| n.to_string()),
            "refine_r_min" => self.refine_r_min.map_or("auto".into(), |r| format!("{r:e}")),
            "pohozaev_tol" => format!("{:e}", self.thresholds.pohozaev_tol),
            "tail_slack" => format!("{:e}", self.thresholds.tail_slack),
            "tail_window_lo" => format!("{:e}", self.thresholds.tail_window.0),
            "tail_window_hi" => format!("{:e}", self.thresholds.tail_window.1),
            "origin_r0" => format!("{:e}", self.thresholds.origin_r0),
            "origin_trend_max" => format!("{:e}", self.thresholds.origin_trend_max),
            "weak_residual_max" => format!("{:e}", self.thresholds.weak_residual_max),
            "monotone_tol" => format!("{:e}", self.thresholds.monotone_tol),
            "sweep_theta" => fmt_list(&self.sweep_theta),
            "sweep_theta_frac" => fmt_list(&self.sweep_theta_frac),
            "sweep_p" => fmt_list(&self.sweep_p),
            "sweep_q" => fmt_list(&self.sweep_q),
            _ => return None,
        })
    }

    /// Applies `key=value` lines; blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = BTreeSet::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key=value, got '{line}'", n + 1)))?;
            let k = k.trim();
            if !seen.insert(k.to_string()) {
                return Err(ConfigError(format!("line {}: duplicate key '{k}'", n + 1)));
            }
            self.set(k, v).map_err(|e| ConfigError(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Applies a `key=value` override.
    pub fn apply_assignment(&mut self, kv: &str) -> Result<(), ConfigError> {
        let (k, v) = kv.split_once('=').ok_or_else(|| ConfigError(format!("expected key=value, got '{kv}'")))?;
        self.set(k.trim(), v)
    }

    /// Every key in canonical order.
    pub fn entries(&self) -> BTreeMap<String, String> {
        KEYS.iter().map(|k| (k.to_string(), self.get(k).expect("known key"))).collect()
    }

    pub fn to_text(&self) -> String {
        KEYS.iter().map(|k| format!("{k}={}\n", self.get(k).expect("known key"))).collect()
    }

    pub fn refine_grid(&self) -> (f64, usize) {
        (self.refine_r_min.unwrap_or(self.r_min / 10.0), self.refine_nodes.unwrap_or(2 * self.nodes))
    }

    /// Minimiser settings with a concrete start profile.
    pub fn minimizer_with(&self, user: Option<Vec<f64>>) -> MinimizerConfig {
        let init_shape = match (self.init_kind, user) {
            (InitKind::UserProfile, Some(v)) => InitShape::UserProfile(v),
            (InitKind::Gaussian, _) => InitShape::Gaussian,
            _ => InitShape::AlgebraicBump,
        };
        MinimizerConfig { init_shape, ..self.minimizer.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let mut back = RunConfig::parse(&c.to_text()).unwrap();
        assert!(back.defaulted.is_empty());
        back.defaulted = c.defaulted.clone();
        assert_eq!(back, c);
        assert_eq!(c.params.theta, std::f64::consts::FRAC_1_PI);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = RunConfig::parse("dim=3\nnonsense\n").unwrap_err();
        assert!(e.0.contains("line 2"));
        assert!(RunConfig::parse("bogus=1").unwrap_err().0.contains("unknown key"));
        assert!(RunConfig::parse("s=abc").is_err());
        assert!(RunConfig::parse("s=0.5\ns=0.4").unwrap_err().0.contains("duplicate"));
        assert!(RunConfig::parse("refine=maybe").is_err());
        assert!(RunConfig::parse("init_shape=square").is_err());
    }

    #[test]
    fn defaults_are_tracked() {
        let c = RunConfig::parse("# comment\n\ndim = 4\ns=0.75\n").unwrap();
        assert_eq!(c.params.dim, 4);
        assert!(!c.defaulted.contains("dim") && !c.defaulted.contains("s"));
        assert!(c.defaulted.contains("theta"));
        assert_eq!(c.defaulted.len(), KEYS.len() - 2);
    }

    #[test]
    fn lists_and_auto() {
        let c = RunConfig::parse("sweep_theta_frac=\nsweep_p=3,3.5\nrefine_nodes=auto\nrefine_r_min=1e-5").unwrap();
        assert!(c.sweep_theta_frac.is_empty());
        assert_eq!(c.sweep_p, vec![3.0, 3.5]);
        assert_eq!(c.refine_grid(), (1e-5, 1024));
    }

    proptest! {
        #[test]
        fn numeric_values_round_trip(s in 0.01f64..0.99, theta in 0.0f64..1.0, r in 1e-6f64..1e-1, n in 16usize..5000) {
            let mut c = RunConfig::default();
            c.set("s", &s.to_string()).unwrap();
            c.set("theta", &format!("{theta:e}")).unwrap();
            c.set("r_min", &r.to_string()).unwrap();
            c.set("nodes", &n.to_string()).unwrap();
            let back = RunConfig::parse(&c.to_text()).unwrap();
            prop_assert_eq!(back.params, c.params);
            prop_assert_eq!(back.r_min, c.r_min);
            prop_assert_eq!(back.nodes, c.nodes);
        }
    }
}
