//! Closed-form constants of the fractional Hardy problem: the sharp Hardy
//! constant, the fractional-Laplacian normalisation, the extension constant,
//! the critical Sobolev exponent, and the exponent map `Psi` with its inverse.
//!
//! Every Gamma ratio is evaluated in log space and exponentiated once.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Absolute tolerance used when deciding whether `p` sits on the critical power.
pub const CRITICAL_TOL: f64 = 1e-12;

const BISECTION_MAX_ITERS: usize = 200;

pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

fn check_dim_s(dim: usize, s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain(format!("s = {s} must lie in (0, 1)")));
    }
    if (dim as f64) <= 2.0 * s {
        return Err(domain(format!("need N > 2s, got N = {dim}, s = {s}")));
    }
    Ok(())
}

/// Fractional Sobolev exponent `2N/(N-2s)`.
pub fn critical_exponent(dim: usize, s: f64) -> Result<f64> {
    check_dim_s(dim, s)?;
    let n = dim as f64;
    Ok(2.0 * n / (n - 2.0 * s))
}

/// Sharp constant of the fractional Hardy inequality,
/// `2^{2s} Γ²((N+2s)/4) / Γ²((N-2s)/4)`.
pub fn lambda_ns(dim: usize, s: f64) -> Result<f64> {
    check_dim_s(dim, s)?;
    let n = dim as f64;
    let ln = 2.0 * s * 2f64.ln() + 2.0 * (ln_gamma((n + 2.0 * s) / 4.0) - ln_gamma((n - 2.0 * s) / 4.0));
    Ok(ln.exp())
}

/// Normalisation of the singular-integral form of `(-Δ)^s`,
/// `4^s Γ(N/2+s) / (π^{N/2} |Γ(-s)|)`.
pub fn a_ns(dim: usize, s: f64) -> Result<f64> {
    check_dim_s(dim, s)?;
    let n = dim as f64;
    // |Γ(-s)| = Γ(1-s)/s on (0,1)
    let ln_abs_gamma_neg_s = ln_gamma(1.0 - s) - s.ln();
    let ln = s * 4f64.ln() + ln_gamma(n / 2.0 + s) - 0.5 * n * PI.ln() - ln_abs_gamma_neg_s;
    Ok(ln.exp())
}

/// Constant of the degenerate-elliptic extension, `2^{1-2s} Γ(1-s)/Γ(s)`.
pub fn extension_constant(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain(format!("s = {s} must lie in (0, 1)")));
    }
    Ok(((1.0 - 2.0 * s) * 2f64.ln() + ln_gamma(1.0 - s) - ln_gamma(s)).exp())
}

/// Surface area of the unit sphere in `R^dim`.
pub fn sphere_area(dim: usize) -> f64 {
    let n = dim as f64;
    2.0 * (0.5 * n * PI.ln() - ln_gamma(0.5 * n)).exp()
}

fn half_range(dim: usize, s: f64) -> f64 {
    (dim as f64 - 2.0 * s) / 2.0
}

fn psi_unchecked(dim: usize, s: f64, gamma: f64) -> f64 {
    let n = dim as f64;
    let top = n - 2.0 * s;
    if gamma <= 0.0 || gamma >= top {
        return 0.0;
    }
    let ln = 2.0 * s * 2f64.ln() + ln_gamma((gamma + 2.0 * s) / 2.0) + ln_gamma((n - gamma) / 2.0)
        - ln_gamma((n - gamma - 2.0 * s) / 2.0)
        - ln_gamma(gamma / 2.0);
    ln.exp()
}

/// The exponent map `Psi_{N,s}` on `[0, (N-2s)/2]`.
///
/// `Psi(0) = 0` by continuity and `Psi((N-2s)/2) = Lambda_{N,s}`.
pub fn psi_ns(dim: usize, s: f64, gamma: f64) -> Result<f64> {
    check_dim_s(dim, s)?;
    let half = half_range(dim, s);
    if !(gamma >= 0.0 && gamma <= half * (1.0 + 1e-14)) {
        return Err(domain(format!("gamma = {gamma} outside [0, {half}]")));
    }
    Ok(psi_unchecked(dim, s, gamma.min(half)))
}

/// The same Gamma ratio continued to `[0, N-2s]`; symmetric under `γ ↦ N-2s-γ`.
pub fn psi_extended(dim: usize, s: f64, gamma: f64) -> Result<f64> {
    check_dim_s(dim, s)?;
    let top = 2.0 * half_range(dim, s);
    if !(gamma >= 0.0 && gamma <= top) {
        return Err(domain(format!("gamma = {gamma} outside [0, {top}]")));
    }
    Ok(psi_unchecked(dim, s, gamma))
}

/// Unique `γ ∈ (0, (N-2s)/2)` with `Psi_{N,s}(γ) = θ`, found by bisection.
pub fn gamma_theta(dim: usize, s: f64, theta: f64) -> Result<f64> {
    let lambda = lambda_ns(dim, s)?;
    if !(theta > 0.0 && theta < lambda) {
        return Err(domain(format!("theta = {theta} outside (0, Lambda = {lambda})")));
    }
    let (mut lo, mut hi) = (0.0, half_range(dim, s));
    for _ in 0..BISECTION_MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi_unchecked(dim, s, mid) < theta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (f_lo, f_hi) = (psi_unchecked(dim, s, lo), psi_unchecked(dim, s, hi));
    let gamma = if (f_lo - theta).abs() <= (f_hi - theta).abs() { lo } else { hi };
    let miss = (psi_unchecked(dim, s, gamma) - theta).abs();
    if miss > 1e-12 * lambda {
        return Err(Error::Convergence {
            iterations: BISECTION_MAX_ITERS,
            detail: format!("|Psi(gamma) - theta| = {miss:e}"),
        });
    }
    Ok(gamma)
}

/// Parameters `(N, s, θ, p, q)` of the problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub dim: usize,
    pub s: f64,
    pub theta: f64,
    pub p: f64,
    pub q: f64,
}

/// Existence/qualitative regime of a parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// `p = 2*_s - 1`: no nontrivial solution exists.
    CriticalNonexistent,
    /// `p > 2*_s - 1` and `q + 1 > (p - 1) N / (2s)`.
    SupercriticalQualitative,
    /// `p > 2*_s - 1` but `q + 1 <= (p - 1) N / (2s)`.
    SupercriticalExistenceOnly,
    Invalid,
}

impl Regime {
    pub fn is_supercritical(self) -> bool {
        matches!(self, Regime::SupercriticalQualitative | Regime::SupercriticalExistenceOnly)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::CriticalNonexistent => "CRITICAL_NONEXISTENT",
            Regime::SupercriticalQualitative => "SUPERCRITICAL_QUALITATIVE",
            Regime::SupercriticalExistenceOnly => "SUPERCRITICAL_EXISTENCE_ONLY",
            Regime::Invalid => "INVALID",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl ProblemParams {
    pub fn new(dim: usize, s: f64, theta: f64, p: f64, q: f64) -> Self {
        Self { dim, s, theta, p, q }
    }

    /// `2*_s - 1 = (N+2s)/(N-2s)`.
    pub fn critical_power(&self) -> Result<f64> {
        Ok(critical_exponent(self.dim, self.s)? - 1.0)
    }

    pub fn regime(&self) -> Regime {
        regime_classify(self)
    }

    /// Checks the structural invariants and returns the spectral constants.
    pub fn validate(&self) -> Result<SpectralConstants> {
        let constants = SpectralConstants::new(self.dim, self.s, self.theta)?;
        let crit = constants.crit_exp - 1.0;
        if !(self.q > self.p) {
            return Err(domain(format!("need q > p, got p = {}, q = {}", self.p, self.q)));
        }
        if self.p < crit - CRITICAL_TOL {
            return Err(domain(format!("need p >= 2*_s - 1 = {crit}, got p = {}", self.p)));
        }
        Ok(constants)
    }
}

/// Classifies `(N, s, θ, p, q)`; structural violations yield [`Regime::Invalid`].
pub fn regime_classify(params: &ProblemParams) -> Regime {
    if params.validate().is_err() {
        return Regime::Invalid;
    }
    let n = params.dim as f64;
    let crit = n / (n - 2.0 * params.s) * 2.0 - 1.0;
    if (params.p - crit).abs() <= CRITICAL_TOL {
        Regime::CriticalNonexistent
    } else if params.q + 1.0 > (params.p - 1.0) * n / (2.0 * params.s) {
        Regime::SupercriticalQualitative
    } else {
        Regime::SupercriticalExistenceOnly
    }
}

/// Constants attached to `(N, s, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConstants {
    pub lambda_ns: f64,
    pub a_ns: f64,
    pub k_s: f64,
    pub crit_exp: f64,
    pub gamma_theta: f64,
}

impl SpectralConstants {
    pub fn new(dim: usize, s: f64, theta: f64) -> Result<Self> {
        Ok(Self {
            lambda_ns: lambda_ns(dim, s)?,
            a_ns: a_ns(dim, s)?,
            k_s: extension_constant(s)?,
            crit_exp: critical_exponent(dim, s)?,
            gamma_theta: gamma_theta(dim, s, theta)?,
        })
    }
}
