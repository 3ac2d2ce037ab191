//! Numerical checks on candidate solutions: Pohozaev balance, the
//! nonexistence guard at the critical power, tail decay, boundedness of
//! `r^γ u` at the origin, monotonicity and the weak residual.

use serde::{Deserialize, Serialize};

use crate::constants::{gamma_theta, ProblemParams, Regime, CRITICAL_TOL};
use crate::error::{argument, check_len, domain, Error, Result};
use crate::forms::FormSet;
use crate::grid::{fit_line, RadialGrid};
use crate::solver::{weak_residual, BOUNDARY_LAYER};

/// Minimum number of nodes in a tail-fit window.
pub const MIN_TAIL_NODES: usize = 8;

/// Pass/fail limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Relative deviation of `I_{q+1}/I_{p+1}` from `c_p/c_q`.
    pub pohozaev_tol: f64,
    /// Allowed excess of the tail slope over `-(N-2s)/2`.
    pub tail_slack: f64,
    pub tail_window: (f64, f64),
    pub origin_r0: f64,
    /// Allowed relative growth of `sup r^γ u` near the origin.
    pub origin_trend_max: f64,
    pub weak_residual_max: f64,
    /// Relative tolerance of the monotonicity count.
    pub monotone_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            pohozaev_tol: 0.05,
            tail_slack: 0.1,
            tail_window: (10.0, 50.0),
            origin_r0: 1.0,
            origin_trend_max: 0.10,
            weak_residual_max: 0.02,
            monotone_tol: 1e-10,
        }
    }
}

/// Outcome of [`criticality_guard`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Criticality {
    /// `p = 2*_s - 1`: only the trivial solution exists.
    Nonexistent,
    Clear,
}

/// How the origin trend was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendSource {
    /// Compared with a solution on a refined grid.
    Refinement,
    /// Compared with the same profile without its innermost decade.
    InnerDecade,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFlags {
    pub regime: bool,
    pub pohozaev: bool,
    pub tail: bool,
    pub origin: bool,
    pub monotone: bool,
    pub weak_residual: bool,
}

impl CheckFlags {
    pub fn all(&self) -> bool {
        self.regime && self.pohozaev && self.tail && self.origin && self.monotone && self.weak_residual
    }
}

/// Every check on one profile. Values that could not be computed are `None`
/// and the corresponding flag is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub regime: Regime,
    pub criticality: Criticality,
    pub pohozaev_residual: Option<f64>,
    pub pohozaev_ratio: Option<f64>,
    pub pohozaev_expected_ratio: Option<f64>,
    pub tail_slope: Option<f64>,
    pub tail_bound: f64,
    pub gamma_theta: Option<f64>,
    pub origin_sup: Option<f64>,
    pub origin_ratio_trend: Option<f64>,
    pub origin_trend_source: TrendSource,
    pub monotone_violations: usize,
    pub weak_residual: Option<f64>,
    pub passed: CheckFlags,
    /// All checks passed and the regime admits solutions.
    pub certified: bool,
    pub notes: Vec<String>,
}

/// `c_m = (N-2s)/2 - N/(m+1)`.
pub fn pohozaev_coefficient(dim: usize, s: f64, m: f64) -> f64 {
    let n = dim as f64;
    (n - 2.0 * s) / 2.0 - n / (m + 1.0)
}

/// Balance `c_p I_{p+1} = c_q I_{q+1}`; returns `(residual, I_{q+1}/I_{p+1})`.
pub fn pohozaev_check(grid: &RadialGrid, params: &ProblemParams, u: &[f64]) -> Result<(f64, f64)> {
    check_len(grid.len(), u.len())?;
    let ip = grid.solid_mass(u, params.p + 1.0)?;
    let iq = grid.solid_mass(u, params.q + 1.0)?;
    if ip == 0.0 && iq == 0.0 {
        return Err(Error::Degenerate("both masses vanish".into()));
    }
    let cp = pohozaev_coefficient(params.dim, params.s, params.p);
    let cq = pohozaev_coefficient(params.dim, params.s, params.q);
    let residual = (cp * ip - cq * iq).abs() / (cp.abs() * ip + cq.abs() * iq);
    let ratio = if ip > 0.0 { iq / ip } else { f64::INFINITY };
    Ok((residual, ratio))
}

/// Flags `p = (N+2s)/(N-2s)` within [`CRITICAL_TOL`]; depends on `(N, s, p)` only.
pub fn criticality_guard(params: &ProblemParams) -> Criticality {
    let n = params.dim as f64;
    if n <= 2.0 * params.s {
        return Criticality::Clear;
    }
    let crit = (n + 2.0 * params.s) / (n - 2.0 * params.s);
    if (params.p - crit).abs() <= CRITICAL_TOL {
        Criticality::Nonexistent
    } else {
        Criticality::Clear
    }
}

/// Least-squares slope of `ln u` against `ln r` over nodes inside `window`.
pub fn tail_slope(grid: &RadialGrid, u: &[f64], window: (f64, f64)) -> Result<f64> {
    check_len(grid.len(), u.len())?;
    let (lo, hi) = window;
    if !(lo > grid.r_min && hi < grid.r_max && lo < hi) {
        return Err(argument(format!("tail window [{lo}, {hi}] not inside ({}, {})", grid.r_min, grid.r_max)));
    }
    let idx: Vec<usize> = (BOUNDARY_LAYER..grid.len() - BOUNDARY_LAYER)
        .filter(|&i| grid.nodes[i] >= lo && grid.nodes[i] <= hi)
        .collect();
    if idx.len() < MIN_TAIL_NODES {
        return Err(argument(format!("tail window holds {} nodes, need {MIN_TAIL_NODES}", idx.len())));
    }
    if idx.iter().any(|&i| !(u[i] > 0.0)) {
        return Err(domain("non-positive values in the tail window"));
    }
    let x: Vec<f64> = idx.iter().map(|&i| grid.nodes[i].ln()).collect();
    let y: Vec<f64> = idx.iter().map(|&i| u[i].ln()).collect();
    Ok(fit_line(&x, &y).1)
}

fn origin_sup_from(grid: &RadialGrid, u: &[f64], gamma: f64, from: f64, r0: f64) -> Result<f64> {
    let vals: Vec<f64> = (0..grid.len())
        .filter(|&i| grid.nodes[i] >= from && grid.nodes[i] < r0)
        .map(|i| grid.nodes[i].powf(gamma) * u[i])
        .collect();
    if vals.is_empty() {
        return Err(argument(format!("no nodes in [{from}, {r0})")));
    }
    Ok(vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `sup_{r_i < r0} r_i^γ u_i`.
pub fn origin_boundedness(grid: &RadialGrid, u: &[f64], gamma: f64, r0: f64) -> Result<f64> {
    check_len(grid.len(), u.len())?;
    if !(gamma > 0.0 && gamma < 0.5 * grid.dim as f64) {
        return Err(domain(format!("gamma must be positive and below N/2, got {gamma}")));
    }
    origin_sup_from(grid, u, gamma, 0.0, r0)
}

/// Relative growth of the origin sup from `coarse` to `fine`.
pub fn origin_trend(coarse: f64, fine: f64) -> f64 {
    (fine - coarse) / coarse
}

/// Number of ascents `u_{i+1} > u_i + tol·max(u)`.
pub fn monotonicity_check(u: &[f64], tol: f64) -> usize {
    let top = u.iter().cloned().fold(0.0, f64::max);
    u.windows(2).filter(|w| w[1] > w[0] + tol * top).count()
}

/// A solution on a refined grid, used for the origin trend.
#[derive(Debug, Clone, Copy)]
pub struct Refinement<'a> {
    pub grid: &'a RadialGrid,
    pub u: &'a [f64],
}

/// Runs every check. Only structural mismatches are errors; failed checks are
/// recorded in the report.
pub fn verify_all(
    forms: &FormSet,
    params: &ProblemParams,
    u: &[f64],
    refined: Option<Refinement<'_>>,
    limits: &Thresholds,
) -> Result<VerificationReport> {
    let grid = &forms.grid;
    check_len(grid.len(), u.len())?;
    if let Some(r) = refined {
        check_len(r.grid.len(), r.u.len())?;
    }
    let mut notes = Vec::new();
    let mut passed = CheckFlags::default();
    let regime = params.regime();
    let criticality = criticality_guard(params);
    passed.regime = regime.is_supercritical() && criticality == Criticality::Clear;
    if criticality == Criticality::Nonexistent {
        notes.push("p equals the critical power: no nontrivial solution exists, certification refused".into());
    } else if !regime.is_supercritical() {
        notes.push(format!("regime {regime} does not admit the constructed solutions"));
    }

    let cp = pohozaev_coefficient(params.dim, params.s, params.p);
    let cq = pohozaev_coefficient(params.dim, params.s, params.q);
    let expected = if cq != 0.0 { Some(cp / cq) } else { None };
    let (pohozaev_residual, pohozaev_ratio) = match pohozaev_check(grid, params, u) {
        Ok((r, q)) => (Some(r), Some(q)),
        Err(e) => {
            notes.push(format!("pohozaev: {e}"));
            (None, None)
        }
    };
    passed.pohozaev = match (pohozaev_ratio, expected) {
        (Some(r), Some(e)) if e > 0.0 => ((r - e) / e).abs() <= limits.pohozaev_tol,
        _ => false,
    };

    let tail_bound = -0.5 * (params.dim as f64 - 2.0 * params.s) + limits.tail_slack;
    let tail = match tail_slope(grid, u, limits.tail_window) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("tail: {e}"));
            None
        }
    };
    passed.tail = tail.is_some_and(|v| v <= tail_bound);

    let gamma = gamma_theta(params.dim, params.s, params.theta).ok();
    let mut source = TrendSource::InnerDecade;
    let (origin_sup, trend) = match gamma {
        Some(g) if g > 0.0 => {
            let sup = origin_boundedness(grid, u, g, limits.origin_r0);
            let other = match refined {
                Some(r) => {
                    source = TrendSource::Refinement;
                    origin_boundedness(r.grid, r.u, g, limits.origin_r0)
                        .map(|fine| sup.as_ref().map(|c| origin_trend(*c, fine)).unwrap_or(f64::NAN))
                }
                None => origin_sup_from(grid, u, g, 10.0 * grid.r_min, limits.origin_r0)
                    .map(|outer| sup.as_ref().map(|c| origin_trend(outer, *c)).unwrap_or(f64::NAN)),
            };
            match (sup, other) {
                (Ok(s), Ok(t)) if s > 0.0 && t.is_finite() => (Some(s), Some(t)),
                (Ok(s), _) => {
                    notes.push("origin: trend undefined".into());
                    (Some(s), None)
                }
                (Err(e), _) => {
                    notes.push(format!("origin: {e}"));
                    (None, None)
                }
            }
        }
        _ => {
            notes.push("origin: gamma_theta unavailable or zero".into());
            (None, None)
        }
    };
    passed.origin = trend.is_some_and(|t| t < limits.origin_trend_max);

    let monotone_violations = monotonicity_check(u, limits.monotone_tol);
    let positive = u.iter().any(|&x| x > 0.0);
    passed.monotone = monotone_violations == 0 && positive;

    let weak = if forms.gamma == 0.0 && forms.grid.dim == params.dim && forms.s == params.s {
        weak_residual(forms, params, u).ok()
    } else {
        notes.push("weak residual: forms do not match the parameters".into());
        None
    };
    passed.weak_residual = positive && weak.is_some_and(|w| w <= limits.weak_residual_max);
    if !positive {
        notes.push("profile has no positive entries".into());
    }

    Ok(VerificationReport {
        regime,
        criticality,
        pohozaev_residual,
        pohozaev_ratio,
        pohozaev_expected_ratio: expected,
        tail_slope: tail,
        tail_bound,
        gamma_theta: gamma,
        origin_sup,
        origin_ratio_trend: trend,
        origin_trend_source: source,
        monotone_violations,
        weak_residual: weak,
        certified: passed.all(),
        passed,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve, MinimizerConfig};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn grid() -> RadialGrid {
        RadialGrid::build_log_grid(3, 1e-3, 1e2, 512).unwrap()
    }

    fn power(g: &RadialGrid, a: f64) -> Vec<f64> {
        g.nodes.iter().map(|r| r.powf(a)).collect()
    }

    #[test]
    fn pohozaev_coefficients() {
        assert_relative_eq!(pohozaev_coefficient(3, 0.5, 3.0), 0.25, max_relative = 1e-15);
        assert_relative_eq!(pohozaev_coefficient(3, 0.5, 6.0), 4.0 / 7.0, max_relative = 1e-15);
        assert_eq!(pohozaev_coefficient(3, 0.5, 2.0), 0.0);
        let crit = 5.5 / 2.5;
        assert!(pohozaev_coefficient(4, 0.75, crit).abs() < 1e-15);
    }

    #[test]
    fn pohozaev_zero_profile_is_degenerate() {
        let g = grid();
        let pp = ProblemParams::new(3, 0.5, 0.2, 3.0, 6.0);
        assert!(matches!(pohozaev_check(&g, &pp, &vec![0.0; g.len()]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn guard_examples() {
        assert_eq!(criticality_guard(&ProblemParams::new(3, 0.5, 0.1, 2.0, 6.0)), Criticality::Nonexistent);
        assert_eq!(criticality_guard(&ProblemParams::new(3, 0.5, 0.1, 2.0 + 1e-6, 6.0)), Criticality::Clear);
        assert_eq!(criticality_guard(&ProblemParams::new(4, 0.75, 0.1, 5.5 / 2.5, 4.0)), Criticality::Nonexistent);
    }

    #[test]
    fn tail_examples() {
        let g = grid();
        assert_relative_eq!(tail_slope(&g, &power(&g, -2.0), (10.0, 50.0)).unwrap(), -2.0, max_relative = 1e-12);
        let gauss: Vec<f64> = g.nodes.iter().map(|r| (-r * r / 2.0).exp().max(1e-300)).collect();
        assert!(tail_slope(&g, &gauss, (2.0, 5.0)).unwrap() < -5.0);
        assert!(tail_slope(&g, &power(&g, -2.0), (10.0, 10.05)).is_err());
        assert!(tail_slope(&g, &power(&g, -2.0), (10.0, 500.0)).is_err());
        assert!(tail_slope(&g, &vec![0.0; g.len()], (10.0, 50.0)).is_err());
    }

    #[test]
    fn origin_examples() {
        let g = grid();
        let fine = RadialGrid::build_log_grid(3, 1e-4, 1e2, 1024).unwrap();
        let gamma = 0.3;
        let c = origin_boundedness(&g, &power(&g, -gamma), gamma, 1.0).unwrap();
        let f = origin_boundedness(&fine, &power(&fine, -gamma), gamma, 1.0).unwrap();
        assert_relative_eq!(c, 1.0, max_relative = 1e-12);
        assert!(origin_trend(c, f).abs() < 1e-12);
        let c = origin_boundedness(&g, &power(&g, -gamma - 0.2), gamma, 1.0).unwrap();
        let f = origin_boundedness(&fine, &power(&fine, -gamma - 0.2), gamma, 1.0).unwrap();
        assert_relative_eq!(origin_trend(c, f), 10f64.powf(0.2) - 1.0, max_relative = 1e-9);
        assert!(origin_boundedness(&g, &power(&g, -gamma), gamma, 1e-4).is_err());
        assert!(origin_boundedness(&g, &power(&g, -gamma), 0.0, 1.0).is_err());
    }

    #[test]
    fn monotonicity_examples() {
        assert_eq!(monotonicity_check(&[3.0, 2.0, 1.0], 1e-10), 0);
        assert_eq!(monotonicity_check(&[3.0, 2.0, 2.5, 1.0], 1e-10), 1);
        assert_eq!(monotonicity_check(&[1.0, 1.0 + 1e-12], 1e-10), 0);
    }

    #[test]
    fn verify_all_on_zero_and_critical() {
        let g = RadialGrid::build_log_grid(3, 1e-3, 1e2, 128).unwrap();
        let f = FormSet::assemble(&g, 0.5).unwrap();
        let pp = ProblemParams::new(3, 0.5, 1.0 / PI, 3.0, 6.0);
        let rep = verify_all(&f, &pp, &vec![0.0; g.len()], None, &Thresholds::default()).unwrap();
        assert!(!rep.certified);
        assert!(!rep.passed.pohozaev && !rep.passed.tail && !rep.passed.origin && !rep.passed.weak_residual);
        let crit = ProblemParams::new(3, 0.5, 1.0 / PI, 2.0, 6.0);
        let bump = power(&g, -1.0);
        let rep = verify_all(&f, &crit, &bump, None, &Thresholds::default()).unwrap();
        assert_eq!(rep.criticality, Criticality::Nonexistent);
        assert!(!rep.certified && !rep.passed.regime);
        assert!(verify_all(&f, &pp, &bump[1..], None, &Thresholds::default()).is_err());
        let json = serde_json::to_string(&rep).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn reference_solution_passes() {
        let g = grid();
        let f = FormSet::assemble(&g, 0.5).unwrap();
        let pp = ProblemParams::new(3, 0.5, 1.0 / PI, 3.0, 6.0);
        let sol = solve(&f, &pp, &MinimizerConfig::default()).unwrap();
        let rep = verify_all(&f, &pp, &sol.u, None, &Thresholds::default()).unwrap();
        assert!(rep.certified, "{rep:#?}");
        let again = verify_all(&f, &pp, &sol.u, None, &Thresholds::default()).unwrap();
        assert_eq!(rep, again);
    }

    proptest! {
        #[test]
        fn tail_exact_on_power_laws(a in -4.0f64..-0.5) {
            let g = RadialGrid::build_log_grid(3, 1e-2, 1e2, 128).unwrap();
            let s = tail_slope(&g, &power(&g, a), (10.0, 50.0)).unwrap();
            prop_assert!((s - a).abs() < 1e-10);
        }

        #[test]
        fn pohozaev_ratio_is_dilation_invariant(b in 0.5f64..2.0, amp in 0.2f64..5.0) {
            // for u_b(r) = a u(r/b) both masses scale by the same power of b, so
            // the c-weighted residual under the solution family stays fixed
            let g = RadialGrid::build_log_grid(3, 1e-4, 1e3, 512).unwrap();
            let pp = ProblemParams::new(3, 0.5, 0.2, 3.0, 6.0);
            let u: Vec<f64> = g.nodes.iter().map(|r| (1.0 + r * r).powf(-2.0)).collect();
            let v: Vec<f64> = g.nodes.iter().map(|r| amp * (1.0 + (r / b).powi(2)).powf(-2.0)).collect();
            let (_, ru) = pohozaev_check(&g, &pp, &u).unwrap();
            let (_, rv) = pohozaev_check(&g, &pp, &v).unwrap();
            prop_assert!((rv / (ru * amp.powi(3)) - 1.0).abs() < 1e-6);
        }
    }
}
