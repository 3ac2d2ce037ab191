//! Constrained minimisation of
//! `F(u) = ½ uᵀ(A-θH)u + I_{q+1}(u)/(q+1)` on `{I_{p+1}(u) = 1}` and the
//! rescaling of the minimiser to a solution of
//! `(-Δ)^s u - θu/|x|^{2s} = u^p - u^q`.

use log::{debug, info};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::constants::ProblemParams;
use crate::error::{argument, check_len, domain, Error, Result};
use crate::forms::FormSet;
use crate::grid::RadialGrid;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;
/// Iterations between refreshes of the preconditioner.
const PRECOND_REFRESH: usize = 10;

/// Starting profile of the minimisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InitShape {
    /// `(1 + r²)^{-(N-2s)/2}`.
    AlgebraicBump,
    /// `e^{-r²/2}`.
    Gaussian,
    /// Values given on the grid.
    UserProfile(Vec<f64>),
}

impl InitShape {
    pub fn name(&self) -> &'static str {
        match self {
            InitShape::AlgebraicBump => "algebraic_bump",
            InitShape::Gaussian => "gaussian",
            InitShape::UserProfile(_) => "user_profile",
        }
    }

    pub fn sample(&self, grid: &RadialGrid, s: f64) -> Result<Vec<f64>> {
        let decay = 0.5 * (grid.dim as f64 - 2.0 * s);
        match self {
            InitShape::AlgebraicBump => Ok(grid.nodes.iter().map(|r| (1.0 + r * r).powf(-decay)).collect()),
            InitShape::Gaussian => Ok(grid.nodes.iter().map(|r| (-0.5 * r * r).exp()).collect()),
            InitShape::UserProfile(v) => {
                check_len(grid.len(), v.len())?;
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizerConfig {
    pub max_iters: usize,
    pub step_init: f64,
    pub backtrack_factor: f64,
    pub tol_rel_f: f64,
    pub tol_constraint: f64,
    /// Bound on the preconditioned norm of the projected gradient.
    pub tol_grad: f64,
    pub init_shape: InitShape,
}

impl Default for MinimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            step_init: 1.0,
            backtrack_factor: 0.5,
            tol_rel_f: 1e-8,
            tol_constraint: 1e-12,
            tol_grad: 1e-6,
            init_shape: InitShape::AlgebraicBump,
        }
    }
}

impl MinimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.step_init, self.tol_rel_f, self.tol_constraint, self.tol_grad];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(argument("step and tolerances must be positive"));
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return Err(argument(format!("backtrack_factor must lie in (0, 1), got {}", self.backtrack_factor)));
        }
        if self.max_iters == 0 {
            return Err(argument("max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// One accepted iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Window round of [`solve`]; always 0 for a single minimisation.
    pub round: usize,
    pub iteration: usize,
    pub energy: f64,
    pub step: f64,
    pub grad_norm: f64,
}

/// Outcome of [`minimize_on_manifold`].
#[derive(Debug, Clone)]
pub struct Minimizer {
    /// Minimiser on the constraint manifold.
    pub u: Vec<f64>,
    pub lambda: f64,
    pub f_min: f64,
    pub trace: Vec<TraceEntry>,
    pub converged: bool,
}

/// Rescaled solution together with its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialSolution {
    pub params: ProblemParams,
    pub grid: RadialGrid,
    pub u: Vec<f64>,
    pub lambda: f64,
    pub f_min: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Accepted iterations of every window round.
    pub trace: Vec<TraceEntry>,
    /// Dilation of the grid on which the minimiser was computed.
    pub window_scale: f64,
    /// The rescaled profile needed the linear fallback interpolation.
    pub resample_fallback: bool,
}

fn check_forms(forms: &FormSet, params: &ProblemParams) -> Result<()> {
    if forms.gamma != 0.0 {
        return Err(domain("energy needs the plain form (gamma = 0)"));
    }
    if forms.grid.dim != params.dim || forms.s != params.s {
        return Err(domain("forms were assembled for different (N, s)"));
    }
    Ok(())
}

/// `Q(u) = uᵀ(A-θH)u`.
fn hardy_shifted(forms: &FormSet, theta: f64, u: &[f64]) -> Result<(f64, Vec<f64>)> {
    let mut au = forms.apply_a(u)?;
    for ((y, h), x) in au.iter_mut().zip(&forms.h).zip(u) {
        *y -= theta * h * x;
    }
    let q = au.iter().zip(u).map(|(a, b)| a * b).sum();
    Ok((q, au))
}

/// `½ uᵀ(A-θH)u + I_{q+1}(u)/(q+1)`.
pub fn energy(forms: &FormSet, params: &ProblemParams, u: &[f64]) -> Result<f64> {
    check_forms(forms, params)?;
    let (q, _) = hardy_shifted(forms, params.theta, u)?;
    Ok(0.5 * q + forms.grid.solid_mass(u, params.q + 1.0)? / (params.q + 1.0))
}

/// Clamps negative entries to zero and normalises to `I_{p+1} = 1`.
pub fn project_constraint(grid: &RadialGrid, params: &ProblemParams, u: &[f64]) -> Result<Vec<f64>> {
    check_len(grid.len(), u.len())?;
    let mut v: Vec<f64> = u.iter().map(|x| x.max(0.0)).collect();
    let mass = grid.solid_mass(&v, params.p + 1.0)?;
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::Degenerate("profile has no positive L^{p+1} mass".into()));
    }
    let scale = mass.powf(-1.0 / (params.p + 1.0));
    v.iter_mut().for_each(|x| *x *= scale);
    Ok(v)
}

struct Preconditioner {
    chol: Cholesky<f64, Dyn>,
}

impl Preconditioner {
    fn build(forms: &FormSet, params: &ProblemParams, u: &[f64]) -> Result<Self> {
        let mut p: DMatrix<f64> = forms.a.clone();
        for (i, (h, w)) in forms.h.iter().zip(&forms.grid.solid_weights(0.0)?).enumerate() {
            p[(i, i)] += -params.theta * h + params.q * w * u[i].powf(params.q - 1.0);
        }
        let chol = p.cholesky().ok_or_else(|| Error::Degenerate("A - θH is not positive definite".into()))?;
        Ok(Self { chol })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.chol.solve(&DVector::from_column_slice(b)).data.into()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned projected gradient descent with Armijo backtracking.
pub fn minimize_on_manifold(forms: &FormSet, params: &ProblemParams, cfg: &MinimizerConfig) -> Result<Minimizer> {
    check_forms(forms, params)?;
    cfg.validate()?;
    let regime = params.regime();
    if !regime.is_supercritical() {
        return Err(domain(format!("minimisation requires a supercritical regime, got {regime}")));
    }
    let grid = &forms.grid;
    let w = &grid.solid_weights(0.0)?;
    let (p, q) = (params.p, params.q);

    let mut u = project_constraint(grid, params, &cfg.init_shape.sample(grid, params.s)?)?;
    let mut f = energy(forms, params, &u)?;
    let mut trace = vec![TraceEntry { round: 0, iteration: 0, energy: f, step: 0.0, grad_norm: f64::NAN }];
    let mut step = cfg.step_init;
    let mut precond = Preconditioner::build(forms, params, &u)?;
    let mut converged = false;

    for it in 1..=cfg.max_iters {
        if it % PRECOND_REFRESH == 0 {
            precond = Preconditioner::build(forms, params, &u)?;
        }
        let (_, mut g) = hardy_shifted(forms, params.theta, &u)?;
        for i in 0..u.len() {
            g[i] += w[i] * u[i].powf(q);
        }
        let c: Vec<f64> = (0..u.len()).map(|i| w[i] * u[i].powf(p)).collect();
        let zg = precond.solve(&g);
        let zc = precond.solve(&c);
        let mu = dot(&c, &zg) / dot(&c, &zc);
        let dir: Vec<f64> = zg.iter().zip(&zc).map(|(a, b)| -(a - mu * b)).collect();
        let slope = dot(&g, &dir);
        let grad_norm = (-slope).max(0.0).sqrt();
        if grad_norm < cfg.tol_grad {
            converged = true;
            debug!("projected gradient below tolerance at iteration {it}");
            break;
        }

        let mut t = step;
        let accepted = loop {
            let trial: Vec<f64> = u.iter().zip(&dir).map(|(a, b)| a + t * b).collect();
            if let Ok(v) = project_constraint(grid, params, &trial) {
                let fv = energy(forms, params, &v)?;
                if fv <= f + ARMIJO * t * slope {
                    break Some((v, fv));
                }
            }
            t *= cfg.backtrack_factor;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some((v, fv)) = accepted else {
            return Err(Error::Convergence { iterations: it, detail: "line search step underflow".into() });
        };
        let rel = (f - fv).abs() / fv.abs().max(f64::MIN_POSITIVE);
        u = v;
        f = fv;
        trace.push(TraceEntry { round: 0, iteration: it, energy: f, step: t, grad_norm });
        step = (t / cfg.backtrack_factor).min(cfg.step_init);
        if rel < cfg.tol_rel_f {
            converged = true;
            break;
        }
    }

    let drift = (grid.solid_mass(&u, p + 1.0)? - 1.0).abs();
    if drift > cfg.tol_constraint {
        return Err(Error::Convergence { iterations: trace.len() - 1, detail: format!("constraint drift {drift:.2e}") });
    }
    let (qf, _) = hardy_shifted(forms, params.theta, &u)?;
    let iq = grid.solid_mass(&u, q + 1.0)?;
    let lambda = qf + iq;
    info!("minimisation: F = {f:.12e}, λ = {lambda:.12e}, {} iterations, converged = {converged}", trace.len() - 1);
    Ok(Minimizer { u, lambda, f_min: f, trace, converged })
}

/// `(amp_scale, coord_scale)` of the map turning the multiplier equation into the problem.
pub fn rescale_factors(params: &ProblemParams, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(domain(format!("multiplier must be positive, got {lambda}")));
    }
    let (p, q, s) = (params.p, params.q, params.s);
    if !(q > p) {
        return Err(domain("need q > p"));
    }
    Ok((lambda.powf(-1.0 / (q - p)), lambda.powf(-(q - 1.0) / (2.0 * s * (q - p)))))
}

/// `v(r) = λ^{-1/(q-p)} u(λ^{-(q-1)/(2s(q-p))} r)` sampled on the grid.
pub fn rescale_to_solution(grid: &RadialGrid, params: &ProblemParams, u: &[f64], lambda: f64) -> Result<(Vec<f64>, bool)> {
    let (amp, coord) = rescale_factors(params, lambda)?;
    let out = grid.resample_scaled(u, coord, amp)?;
    Ok((out.values, out.fallback))
}

const WINDOW_MAX_ITERS: usize = 30;
const WINDOW_TOL: f64 = 1e-6;
const WINDOW_TIGHTEN: f64 = 1e-4;

/// Minimise, rescale and package.
///
/// The minimisation runs on the grid dilated by `b`, where `b` solves
/// `b = λ(b)^{-(q-1)/(2s(q-p))}`; the rescaled profile then lands on the
/// original nodes and both truncation windows coincide.
pub fn solve(forms: &FormSet, params: &ProblemParams, cfg: &MinimizerConfig) -> Result<RadialSolution> {
    let mut b: f64 = 1.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut run_cfg = cfg.clone();
    let mut trace = Vec::new();
    let mut last = None;
    for round in 0..WINDOW_MAX_ITERS {
        let fb = forms.dilate(b)?;
        let m = minimize_on_manifold(&fb, params, &run_cfg)?;
        trace.extend(m.trace.iter().map(|e| TraceEntry { round, ..*e }));
        let (_, coord) = rescale_factors(params, m.lambda)?;
        let (x, res) = (b.ln(), (coord / b).ln());
        debug!("window round {round}: b = {b:.9e}, λ = {:.9e}, shift {:.2e}", m.lambda, res.abs());
        let done = res.abs() <= WINDOW_TOL;
        last = Some((fb, m));
        if done {
            break;
        }
        // secant on ln b, falling back to the plain fixed-point step
        let mut next = x + res;
        if let Some((xp, rp)) = prev {
            let slope = (res - rp) / (x - xp);
            let cand = x - res / slope.min(-0.02);
            if cand.is_finite() && (cand - x).abs() <= 50.0 * res.abs() {
                next = cand;
            }
        }
        prev = Some((x, res));
        let b_next = next.exp();
        let (fb, m) = last.as_ref().expect("set above");
        let warm = fb.grid.resample_scaled(&m.u, b_next / b, 1.0)?;
        run_cfg.init_shape = InitShape::UserProfile(warm.values);
        run_cfg.tol_rel_f = cfg.tol_rel_f * WINDOW_TIGHTEN;
        b = b_next;
    }
    let (fb, m) = last.expect("at least one round");
    let (amp, coord) = rescale_factors(params, m.lambda)?;
    let b = fb.grid.r_min / forms.grid.r_min;
    let v = fb.grid.resample_scaled(&m.u, coord / b, amp)?;
    Ok(RadialSolution {
        params: *params,
        grid: forms.grid.clone(),
        u: v.values,
        lambda: m.lambda,
        f_min: m.f_min,
        iterations: trace.iter().filter(|e| e.iteration > 0).count(),
        trace,
        converged: m.converged && (coord / b).ln().abs() <= WINDOW_TOL,
        window_scale: b,
        resample_fallback: v.fallback,
    })
}

/// Number of nodes dropped at each end of residual windows.
pub const BOUNDARY_LAYER: usize = 2;

/// Relative residual of `(A-θH)v = W∘(v^p - v^q)` on interior nodes.
pub fn weak_residual(forms: &FormSet, params: &ProblemParams, v: &[f64]) -> Result<f64> {
    check_len(forms.len(), v.len())?;
    let m = v.len();
    if m <= 2 * BOUNDARY_LAYER {
        return Err(argument("grid too small for the residual window"));
    }
    let (_, lhs) = hardy_shifted(forms, params.theta, v)?;
    let w = &forms.grid.solid_weights(0.0)?;
    let (mut r2, mut l2, mut n2) = (0.0, 0.0, 0.0);
    for i in BOUNDARY_LAYER..m - BOUNDARY_LAYER {
        let x = v[i].max(0.0);
        let rhs = w[i] * (x.powf(params.p) - x.powf(params.q));
        r2 += (lhs[i] - rhs).powi(2);
        l2 += lhs[i] * lhs[i];
        n2 += rhs * rhs;
    }
    let denom = l2.sqrt() + n2.sqrt();
    Ok(if denom == 0.0 { 0.0 } else { r2.sqrt() / denom })
}
