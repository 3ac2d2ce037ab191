//! Quadratic forms on radial piecewise-linear profiles.
//!
//! A grid vector `u` is the piecewise-linear function through `(r_i, u_i)`,
//! extended by the constant `u_1` inside `r_min` and decaying linearly to zero
//! on one extra log-step beyond `r_max`. These functions lie in `Ḣ^s`, so the
//! assembled forms are exact restrictions of the continuous ones up to
//! quadrature error. The Hardy form includes the constant core inside `r_min`.

mod kernel;
mod templates;

use log::debug;
use nalgebra::{DMatrix, DVector};

pub use kernel::angular_kernel;
use kernel::RadialKernel;
use templates::Templates;

use crate::constants::psi_ns;
use crate::error::{check_len, domain, Error, Result};
use crate::grid::RadialGrid;

/// Virtual panels on each side reach this factor beyond the grid.
const VIRTUAL_REACH: f64 = 1e6;
const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 20_000;

/// Assembled Gagliardo, Hardy and (optionally) weighted Gagliardo forms.
#[derive(Debug, Clone)]
pub struct FormSet {
    /// `uᵀAu ≈ ‖u‖²_{Ḣ^s}` including the `a_{N,s}/2` factor.
    pub a: DMatrix<f64>,
    /// Diagonal of the Hardy form, `w_i r_i^{-2s}` plus the core ball at the first node.
    pub h: Vec<f64>,
    /// Weighted form `(a_{N,s}/2)∬ (v(x)-v(y))²/|x-y|^{N+2s} |x|^{-γ}|y|^{-γ}`.
    pub a_gamma: Option<DMatrix<f64>>,
    pub grid: RadialGrid,
    pub s: f64,
    pub gamma: f64,
}

impl FormSet {
    /// Plain forms (`γ = 0`).
    pub fn assemble(grid: &RadialGrid, s: f64) -> Result<Self> {
        let a = assemble_gagliardo(grid, s, 0.0)?;
        Ok(Self { a, h: hardy_diagonal(grid, s)?, a_gamma: None, grid: grid.clone(), s, gamma: 0.0 })
    }

    /// Plain forms together with the `γ`-weighted form.
    pub fn assemble_weighted(grid: &RadialGrid, s: f64, gamma: f64) -> Result<Self> {
        let (a, ag) = rayon::join(|| assemble_gagliardo(grid, s, 0.0), || assemble_gagliardo(grid, s, gamma));
        Ok(Self { a: a?, h: hardy_diagonal(grid, s)?, a_gamma: Some(ag?), grid: grid.clone(), s, gamma })
    }

    /// Forms on the grid dilated by `b` (nodes `b r_i`). Exact on
    /// logarithmic grids: `A` and `H` scale by `b^{N-2s}`, `A_γ` by `b^{N-2s-2γ}`.
    pub fn dilate(&self, b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(domain(format!("dilation factor must be positive, got {b}")));
        }
        let n = self.grid.dim as f64;
        let e = n - 2.0 * self.s;
        let mut grid = self.grid.clone();
        grid.nodes.iter_mut().for_each(|r| *r *= b);
        grid.vol_weights.iter_mut().for_each(|w| *w *= b.powf(n));
        grid.r_min *= b;
        grid.r_max *= b;
        Ok(Self {
            a: &self.a * b.powf(e),
            h: self.h.iter().map(|h| h * b.powf(e)).collect(),
            a_gamma: self.a_gamma.as_ref().map(|m| m * b.powf(e - 2.0 * self.gamma)),
            grid,
            s: self.s,
            gamma: self.gamma,
        })
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn apply_a(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), u.len())?;
        Ok((&self.a * DVector::from_column_slice(u)).data.into())
    }

    /// `uᵀAu`.
    pub fn gagliardo(&self, u: &[f64]) -> Result<f64> {
        Ok(dot(&self.apply_a(u)?, u))
    }

    /// `uᵀHu`.
    pub fn hardy(&self, u: &[f64]) -> Result<f64> {
        check_len(self.len(), u.len())?;
        Ok(self.h.iter().zip(u).map(|(h, x)| h * x * x).sum())
    }

    /// `vᵀA_γv`, if the weighted form was assembled.
    pub fn weighted(&self, v: &[f64]) -> Result<f64> {
        check_len(self.len(), v.len())?;
        let ag = self.a_gamma.as_ref().ok_or_else(|| domain("weighted form not assembled"))?;
        Ok(dot(&(ag * DVector::from_column_slice(v)).data.as_vec()[..], v))
    }

    /// Relative mismatch in the ground-state representation
    /// `uᵀAu - Ψ(γ)uᵀHu = vᵀA_γv`, `v = r^γ u`.
    pub fn groundstate_residual(&self, u: &[f64]) -> Result<f64> {
        let psi = psi_ns(self.grid.dim, self.s, self.gamma)?;
        let lhs = self.gagliardo(u)? - psi * self.hardy(u)?;
        let v: Vec<f64> = u.iter().zip(&self.grid.nodes).map(|(x, r)| x * r.powf(self.gamma)).collect();
        let rhs = self.weighted(&v)?;
        let denom = lhs.abs() + rhs.abs();
        Ok(if denom == 0.0 { 0.0 } else { (lhs - rhs).abs() / denom })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn hardy_diagonal(grid: &RadialGrid, s: f64) -> Result<Vec<f64>> {
    grid.solid_weights(-2.0 * s)
}

/// Matrix of `(a_{N,s}/2)|S^{N-1}||S^{N-2}| ∬ (u(r)-u(ρ))² J(r,ρ)(rρ)^{N-1-γ} dr dρ`
/// on the grid's piecewise-linear space.
pub fn assemble_gagliardo(grid: &RadialGrid, s: f64, gamma: f64) -> Result<DMatrix<f64>> {
    let dim = grid.dim;
    if dim < 2 {
        return Err(domain("form assembly needs N >= 2"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(domain(format!("s must lie in (0, 1), got {s}")));
    }
    let half = 0.5 * (dim as f64 - 2.0 * s);
    if !(0.0..half).contains(&gamma) {
        return Err(domain(format!("gamma must lie in [0, {half}), got {gamma}")));
    }
    let m = grid.len();
    let h = grid.log_step;
    let ratio = h.exp();
    let kernel = RadialKernel::new(dim, s, gamma)?;
    let extra = (VIRTUAL_REACH.ln() / h).ceil() as i64;
    // panels k in [lo, hi]; panel k spans [r_1 ρ^k, r_1 ρ^{k+1}]
    let (lo, hi) = (-extra, m as i64 - 1 + extra);
    let max_offset = (hi - lo) as usize;
    let t = Templates::compute(&kernel, ratio, max_offset)?;
    debug!("templates ready: {} offsets, ratio {ratio}", max_offset + 1);

    let mi = m as i64;
    let dofs = |k: i64| -> [Option<usize>; 2] {
        if k < 0 {
            [Some(0), Some(0)]
        } else if k < mi - 1 {
            [Some(k as usize), Some(k as usize + 1)]
        } else if k == mi - 1 {
            [Some(k as usize), None]
        } else {
            [None, None]
        }
    };
    let e = kernel.scaling_exponent();
    let r1 = grid.r_min;
    let scale = |k: i64| r1.powf(e) * ratio.powf(e * k as f64);

    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut add = |idx: &[Option<usize>], block: &dyn Fn(usize, usize) -> f64, factor: f64| {
        for (i, di) in idx.iter().enumerate() {
            let Some(di) = di else { continue };
            for (j, dj) in idx.iter().enumerate() {
                let Some(dj) = dj else { continue };
                a[(*di, *dj)] += factor * block(i, j);
            }
        }
    };

    for k in lo..=hi {
        if k >= mi {
            break;
        }
        let sk = scale(k);
        let pk = dofs(k);
        if k >= 0 {
            let same = |i: usize, j: usize| if i == j { t.same } else { -t.same };
            add(&pk, &same, sk);
        }
        // touching pair (k, k+1)
        if k < hi && k >= -1 {
            let idx = [pk[0], pk[1], dofs(k + 1)[1]];
            add(&idx, &|i, j| t.touching[i][j], 2.0 * sk);
        }
        let first = if k < 0 { (-k).max(2) } else { 2 };
        for d in first..=(hi - k) {
            let q = dofs(k + d);
            let idx = [pk[0], pk[1], q[0], q[1]];
            add(&idx, &|i, j| t.far[d as usize][i][j], 2.0 * sk);
        }
    }

    // interaction of every panel with the region beyond the outer virtual panels
    let big_y = r1 * ratio.powf((hi + 1) as f64);
    let decay = 2.0 * s + gamma;
    let tail = 2.0 * kernel.far_coefficient() * big_y.powf(-decay) / decay;
    let kp = kernel.radial_power + 1.0;
    for k in 0..mi {
        let idx = dofs(k);
        let w = (r1 * ratio.powf(k as f64)).powf(kp);
        add(&idx, &|i, j| t.mass[i][j], tail * w);
    }
    a[(0, 0)] += tail * r1.powf(kp) / kp;

    let asym = (&a - a.transpose()).amax();
    if asym > 1e-12 * a.amax() {
        return Err(Error::Assembly(format!("asymmetric form, defect {asym:.2e}")));
    }
    Ok(0.5 * (&a + a.transpose()))
}

/// Smallest generalized eigenvalue of `A x = μ H x` by inverse power iteration.
pub fn hardy_rayleigh_min(forms: &FormSet) -> Result<f64> {
    if forms.gamma != 0.0 {
        return Err(domain("Hardy quotient needs the plain form (gamma = 0)"));
    }
    let m = forms.len();
    let chol = forms
        .a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Degenerate("Gagliardo matrix is not positive definite".into()))?;
    let half = 0.5 * (forms.grid.dim as f64 - 2.0 * forms.s);
    let mut x = DVector::from_iterator(m, forms.grid.nodes.iter().map(|r| r.powf(-half)));
    let hd = DVector::from_column_slice(&forms.h);
    let quotient = |x: &DVector<f64>| (x.dot(&(&forms.a * x))) / x.dot(&hd.component_mul(x)) ;
    let mut mu = quotient(&x);
    for it in 1..=POWER_MAX_ITERS {
        let mut y = chol.solve(&hd.component_mul(&x));
        let norm = y.norm();
        y /= norm;
        let next = quotient(&y);
        x = y;
        if (mu - next).abs() <= POWER_TOL * next.abs() {
            debug!("inverse iteration converged in {it} steps");
            return Ok(next);
        }
        mu = next;
    }
    Err(Error::Convergence { iterations: POWER_MAX_ITERS, detail: format!("Rayleigh quotient stalled at {mu}") })
}

/// Assembles `A` and `A_γ` on `grid` and returns the ground-state
/// representation mismatch for `u`.
pub fn groundstate_residual(grid: &RadialGrid, u: &[f64], dim: usize, s: f64, gamma: f64) -> Result<f64> {
    if dim != grid.dim {
        return Err(Error::Dimension { expected: grid.dim, got: dim });
    }
    check_len(grid.len(), u.len())?;
    FormSet::assemble_weighted(grid, s, gamma)?.groundstate_residual(u)
}
