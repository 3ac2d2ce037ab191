//! Reference-panel integrals of the radial kernel.
//!
//! On a logarithmic grid with ratio `ρ = e^h` every panel is a dilate of
//! `[1, ρ]`, and the block for panels `(k, k+d)` is `σ_k T_d` with
//! `σ_k = r_k^{N-2s-2γ}`. The templates `T_d` are computed once per grid.

use rayon::prelude::*;

use super::kernel::RadialKernel;
use crate::error::{Error, Result};
use crate::quad::Rule;

const TOL: f64 = 1e-10;
const ACCEPT: f64 = 1e-8;
const MAX_POINTS: usize = 64;

pub(crate) type Block3 = [[f64; 3]; 3];
pub(crate) type Block4 = [[f64; 4]; 4];

#[derive(Debug, Clone)]
pub(crate) struct Templates {
    /// `∬_{[1,ρ]²} (X-Y)² K / ℓ²`, the coefficient of `(α₁-α₀)²`.
    pub same: f64,
    /// Touching panels, dofs `(left, shared, right)`.
    pub touching: Block3,
    /// `far[d]` for `d >= 2`, dofs `(left_k, right_k, left_{k+d}, right_{k+d})`.
    pub far: Vec<Block4>,
    /// `∫_1^ρ ψ_i ψ_j X^{N-1-γ} dX`.
    pub mass: [[f64; 2]; 2],
}

impl Templates {
    pub fn compute(kernel: &RadialKernel, ratio: f64, max_offset: usize) -> Result<Self> {
        let same = same_panel(kernel, ratio)?;
        let touching = touching_panels(kernel, ratio)?;
        let far = (0..=max_offset)
            .into_par_iter()
            .map(|d| if d < 2 { Ok([[0.0; 4]; 4]) } else { separated(kernel, ratio, d) })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { same, touching, far, mass: mass_block(kernel.radial_power, ratio) })
    }
}

fn rel_change(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Doubles the point count until the flattened result stabilises.
fn converge(what: &str, start: usize, mut eval: impl FnMut(usize) -> Vec<f64>) -> Result<Vec<f64>> {
    let mut n = start;
    let mut prev = eval(n);
    let mut change = f64::INFINITY;
    while n < MAX_POINTS {
        n *= 2;
        let next = eval(n);
        change = rel_change(&prev, &next);
        prev = next;
        if change <= TOL {
            return Ok(prev);
        }
    }
    if change <= ACCEPT {
        Ok(prev)
    } else {
        Err(Error::Assembly(format!("{what}: relative change {change:.2e} at {n} points")))
    }
}

fn same_panel(kernel: &RadialKernel, ratio: f64) -> Result<f64> {
    let l = ratio - 1.0;
    let s = kernel.s;
    let v = converge("same-panel integral", 8, |n| {
        let gx = Rule::jacobi(n, 2.0 - 2.0 * s);
        let gy = Rule::jacobi(n, 1.0 - 2.0 * s);
        let mut acc = 0.0;
        for (xi, wx) in gx.x.iter().zip(&gx.w) {
            let x = 1.0 + l * xi;
            for (eta, wy) in gy.x.iter().zip(&gy.w) {
                let y = x - l * xi * eta;
                let sing = (xi * eta).powf(1.0 + 2.0 * s);
                acc += wx * wy * sing * kernel.eval(x, y);
            }
        }
        // two triangles, Jacobian ℓ²ξ, (X-Y)² = ℓ²ξ²η², divided by ℓ²
        vec![2.0 * l * l * acc]
    })?;
    Ok(v[0])
}

fn touching_panels(kernel: &RadialKernel, ratio: f64) -> Result<Block3> {
    let l = ratio - 1.0;
    let s = kernel.s;
    let v = converge("touching-panel integral", 8, |n| {
        let gx = Rule::jacobi(n, 2.0 - 2.0 * s);
        let ge = Rule::legendre(n);
        let mut acc = [0.0; 9];
        for (xi, wx) in gx.x.iter().zip(&gx.w) {
            for (eta, we) in ge.x.iter().zip(&ge.w) {
                for lower in [true, false] {
                    // (α̂, β̂) = corner offsets scaled by the panel lengths
                    let (a, b, w) = if lower {
                        (*xi, xi * eta, [1.0, eta - 1.0, -eta])
                    } else {
                        (xi * eta, *xi, [*eta, 1.0 - eta, -1.0])
                    };
                    let x = ratio - l * a;
                    let y = ratio + ratio * l * b;
                    let f = wx * we * xi.powf(1.0 + 2.0 * s) * kernel.eval(x, y);
                    for i in 0..3 {
                        for j in 0..3 {
                            acc[3 * i + j] += f * w[i] * w[j];
                        }
                    }
                }
            }
        }
        acc.iter().map(|v| v * ratio * l * l).collect()
    })?;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = 0.5 * (v[3 * i + j] + v[3 * j + i]);
        }
    }
    Ok(out)
}

fn separated(kernel: &RadialKernel, ratio: f64, d: usize) -> Result<Block4> {
    let l = ratio - 1.0;
    let y0 = ratio.powi(d as i32);
    let ly = y0 * l;
    let v = converge(&format!("panel pair at offset {d}"), 4, |n| {
        let g = Rule::legendre(n);
        let mut acc = [0.0; 16];
        for (tx, wx) in g.x.iter().zip(&g.w) {
            let x = 1.0 + l * tx;
            let px = [1.0 - tx, *tx];
            for (ty, wy) in g.x.iter().zip(&g.w) {
                let y = y0 + ly * ty;
                let w = [px[0], px[1], -(1.0 - ty), -ty];
                let f = wx * wy * kernel.eval(x, y);
                for i in 0..4 {
                    for j in 0..4 {
                        acc[4 * i + j] += f * w[i] * w[j];
                    }
                }
            }
        }
        acc.iter().map(|v| v * l * ly).collect()
    })?;
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = 0.5 * (v[4 * i + j] + v[4 * j + i]);
        }
    }
    Ok(out)
}

fn mass_block(power: f64, ratio: f64) -> [[f64; 2]; 2] {
    let l = ratio - 1.0;
    let g = Rule::legendre(24);
    let mut m = [[0.0; 2]; 2];
    for (t, w) in g.x.iter().zip(&g.w) {
        let x = 1.0 + l * t;
        let p = [1.0 - t, *t];
        let f = w * l * x.powf(power);
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += f * p[i] * p[j];
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn same_panel_closed_form_three_half() {
        // N=3, s=1/2: (X-Y)² K = c·XY/2·(1 - ((X-Y)/(X+Y))²), smooth on the square
        let k = RadialKernel::new(3, 0.5, 0.0).unwrap();
        for ratio in [1.01, 1.2, 2.0] {
            let l: f64 = ratio - 1.0;
            let g = Rule::legendre(20);
            let mut acc = 0.0;
            for (tx, wx) in g.x.iter().zip(&g.w) {
                for (ty, wy) in g.x.iter().zip(&g.w) {
                    let (x, y) = (1.0 + l * tx, 1.0 + l * ty);
                    acc += wx * wy * x * y / 2.0 * (1.0 - ((x - y) / (x + y)).powi(2));
                }
            }
            let exact = k.prefactor * acc;
            assert_relative_eq!(same_panel(&k, ratio).unwrap(), exact, max_relative = 1e-9);
        }
    }

    #[test]
    fn far_blocks_annihilate_constants() {
        // u ≡ 1 on both panels gives zero difference
        let k = RadialKernel::new(3, 0.5, 0.0).unwrap();
        let t = Templates::compute(&k, 1.1, 6).unwrap();
        for d in 2..=6 {
            let row: f64 = (0..4).map(|j| (0..4).map(|i| t.far[d][i][j]).sum::<f64>()).sum();
            assert!(row.abs() < 1e-12 * t.far[d][0][0].abs());
        }
        let s3: f64 = t.touching.iter().flatten().sum();
        assert!(s3.abs() < 1e-10 * t.touching[0][0]);
    }

    #[test]
    fn touching_block_matches_split_quadrature() {
        // compare the (left,left) entry with a graded tensor Gauss rule
        let k = RadialKernel::new(3, 0.5, 0.0).unwrap();
        let ratio = 1.2;
        let t = touching_panels(&k, ratio).unwrap();
        let l = ratio - 1.0;
        let g = Rule::legendre(10);
        let mut acc = 0.0;
        let levels = 24;
        for lx in 0..levels {
            let (ax, bx) = (l * 0.5f64.powi(lx + 1), l * 0.5f64.powi(lx));
            for ly in 0..levels {
                let (ay, by) = (ratio * l * 0.5f64.powi(ly + 1), ratio * l * 0.5f64.powi(ly));
                for (tx, wx) in g.x.iter().zip(&g.w) {
                    let a = ax + (bx - ax) * tx;
                    for (ty, wy) in g.x.iter().zip(&g.w) {
                        let b = ay + (by - ay) * ty;
                        let psi = a / l;
                        acc += wx * wy * (bx - ax) * (by - ay) * psi * psi * k.eval(ratio - a, ratio + b);
                    }
                }
            }
        }
        assert_relative_eq!(t[0][0], acc, max_relative = 1e-6);
    }
}
