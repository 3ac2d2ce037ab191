//! Logarithmic radial mesh and volume quadrature for radial integrands.

use serde::{Deserialize, Serialize};

use crate::constants::sphere_area;
use crate::error::{argument, check_len, Result};

/// Smallest admissible number of nodes.
pub const MIN_NODES: usize = 16;

/// Nodes `r_i = r_min (r_max/r_min)^{(i-1)/(M-1)}` with weights for
/// `∫ f dV = |S^{N-1}| ∫ f(r) r^{N-1} dr` over `[r_min, r_max]`.
///
/// The weights are the trapezoid rule in `t = ln r` applied to `f(r) r^N`,
/// with the two endpoint weights corrected so that the Jacobian `e^{Nt}` on
/// its own is integrated exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub dim: usize,
    pub nodes: Vec<f64>,
    pub vol_weights: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    /// Spacing in `ln r`.
    pub log_step: f64,
}

/// Result of [`RadialGrid::resample_scaled`].
#[derive(Debug, Clone, PartialEq)]
pub struct Resampled {
    pub values: Vec<f64>,
    /// Log-log interpolation was impossible and linear interpolation with
    /// zero extension was used instead.
    pub fallback: bool,
}

impl RadialGrid {
    pub fn build_log_grid(dim: usize, r_min: f64, r_max: f64, m: usize) -> Result<Self> {
        if dim < 1 {
            return Err(argument("dimension must be positive"));
        }
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(argument(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if m < MIN_NODES {
            return Err(argument(format!("need at least {MIN_NODES} nodes, got {m}")));
        }
        let n = dim as f64;
        let (t0, t1) = (r_min.ln(), r_max.ln());
        let h = (t1 - t0) / (m - 1) as f64;
        let mut nodes: Vec<f64> = (0..m).map(|i| (t0 + h * i as f64).exp()).collect();
        nodes[0] = r_min;
        nodes[m - 1] = r_max;

        let area = sphere_area(dim);
        let mut vol_weights: Vec<f64> = nodes.iter().map(|r| area * h * r.powf(n)).collect();
        vol_weights[0] *= 0.5;
        vol_weights[m - 1] *= 0.5;
        // trapezoid sum of e^{Nt} equals the exact integral times (Nh/2) coth(Nh/2);
        // move the excess onto the endpoints
        let x = 0.5 * n * h;
        let excess = 0.5 * h / x.tanh() - 1.0 / n;
        vol_weights[0] += area * excess * r_min.powf(n);
        vol_weights[m - 1] -= area * excess * r_max.powf(n);

        Ok(Self { dim, nodes, vol_weights, r_min, r_max, log_step: h })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Exact volume of the shell `r_min <= |x| <= r_max`.
    pub fn shell_volume(&self) -> f64 {
        let n = self.dim as f64;
        sphere_area(self.dim) * (self.r_max.powf(n) - self.r_min.powf(n)) / n
    }

    /// `Σ_i w_i f_i r_i^{extra_power}`, i.e. `∫ f |x|^{extra_power} dx` over the shell.
    pub fn integrate_radial(&self, values: &[f64], extra_power: f64) -> Result<f64> {
        check_len(self.len(), values.len())?;
        let sum = if extra_power == 0.0 {
            self.vol_weights.iter().zip(values).map(|(w, f)| w * f).sum()
        } else {
            self.vol_weights
                .iter()
                .zip(values)
                .zip(&self.nodes)
                .map(|((w, f), r)| w * f * r.powf(extra_power))
                .sum()
        };
        Ok(sum)
    }

    /// `∫ |u|^m dx` over the shell.
    pub fn lp_mass(&self, values: &[f64], m: f64) -> Result<f64> {
        check_len(self.len(), values.len())?;
        Ok(self.vol_weights.iter().zip(values).map(|(w, u)| w * u.abs().powf(m)).sum())
    }

    /// Weights for `∫_{|x|<r_max} f |x|^{extra_power} dx` when `f` is extended
    /// by the constant `f_1` inside `r_min`: the shell weights with the core
    /// ball `|S^{N-1}| r_min^{N+extra}/(N+extra)` added to the first node.
    pub fn solid_weights(&self, extra_power: f64) -> Result<Vec<f64>> {
        let k = self.dim as f64 + extra_power;
        if !(k > 0.0) {
            return Err(argument(format!("core integral diverges for extra power {extra_power}")));
        }
        let mut w: Vec<f64> = self.vol_weights.iter().zip(&self.nodes).map(|(w, r)| w * r.powf(extra_power)).collect();
        w[0] += sphere_area(self.dim) * self.r_min.powf(k) / k;
        Ok(w)
    }

    /// `∫_{|x|<r_max} |u|^m dx` with the constant core extension.
    pub fn solid_mass(&self, values: &[f64], m: f64) -> Result<f64> {
        check_len(self.len(), values.len())?;
        let core = sphere_area(self.dim) * self.r_min.powf(self.dim as f64) / self.dim as f64;
        Ok(self.lp_mass(values, m)? + core * values[0].abs().powf(m))
    }

    /// Values of `r ↦ amp_scale · u(coord_scale · r)` at the nodes.
    ///
    /// Interior points interpolate `ln u` linearly in `ln r`; points outside the
    /// sampled range continue from the end value with the power-law exponent
    /// fitted to the outer (inner) tenth of the nodes. Non-positive data switches to linear interpolation with zero
    /// extension, flagged in the result.
    pub fn resample_scaled(&self, values: &[f64], coord_scale: f64, amp_scale: f64) -> Result<Resampled> {
        check_len(self.len(), values.len())?;
        if !(coord_scale > 0.0 && coord_scale.is_finite()) {
            return Err(argument(format!("coord_scale must be positive, got {coord_scale}")));
        }
        let m = self.len();
        if values.iter().all(|&u| u > 0.0) {
            let logs: Vec<f64> = values.iter().map(|u| u.ln()).collect();
            let lr: Vec<f64> = self.nodes.iter().map(|r| r.ln()).collect();
            let window = (m / 10).max(2);
            let inner = fit_line(&lr[..window], &logs[..window]);
            let outer = fit_line(&lr[m - window..], &logs[m - window..]);
            let t0 = lr[0];
            let out = lr
                .iter()
                .map(|&t| {
                    let target = t + coord_scale.ln();
                    let pos = (target - t0) / self.log_step;
                    let lu = if pos < 0.0 {
                        logs[0] + inner.1 * (target - t0)
                    } else if pos > (m - 1) as f64 {
                        logs[m - 1] + outer.1 * (target - lr[m - 1])
                    } else {
                        let k = (pos.floor() as usize).min(m - 2);
                        let frac = pos - k as f64;
                        logs[k] * (1.0 - frac) + logs[k + 1] * frac
                    };
                    amp_scale * lu.exp()
                })
                .collect();
            return Ok(Resampled { values: out, fallback: false });
        }

        let out = self
            .nodes
            .iter()
            .map(|&r| {
                let target = coord_scale * r;
                if target < self.r_min || target > self.r_max {
                    return 0.0;
                }
                let k = self.nodes.partition_point(|&x| x <= target).clamp(1, m - 1) - 1;
                let (ra, rb) = (self.nodes[k], self.nodes[k + 1]);
                let frac = (target - ra) / (rb - ra);
                amp_scale * (values[k] * (1.0 - frac) + values[k + 1] * frac)
            })
            .collect();
        Ok(Resampled { values: out, fallback: true })
    }
}

/// Least-squares line `y = a + b x`; returns `(a, b)`.
pub(crate) fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - slope * mx, slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn shell_volume_exact() {
        let g = RadialGrid::build_log_grid(3, 1.0, 2.0, 4096).unwrap();
        let ones = vec![1.0; g.len()];
        let v = g.integrate_radial(&ones, 0.0).unwrap();
        assert_relative_eq!(v, 4.0 * PI / 3.0 * 7.0, max_relative = 1e-6);
        assert_relative_eq!(v, g.shell_volume(), max_relative = 1e-10);
        for (dim, a, b, m) in [(2, 1e-3, 1e2, 512), (4, 0.5, 30.0, 64), (3, 1e-3, 1e2, 16)] {
            let g = RadialGrid::build_log_grid(dim, a, b, m).unwrap();
            let v = g.integrate_radial(&vec![1.0; m], 0.0).unwrap();
            assert_relative_eq!(v, g.shell_volume(), max_relative = 1e-10);
        }
    }

    #[test]
    fn gaussian_integral() {
        let g = RadialGrid::build_log_grid(3, 1e-3, 1e2, 2048).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|r| (-r * r).exp()).collect();
        let v = g.integrate_radial(&f, 0.0).unwrap();
        assert!((v - PI.powf(1.5)).abs() < 1e-8, "{v}");
    }

    #[test]
    fn hardy_weighted_gaussian() {
        let g = RadialGrid::build_log_grid(3, 1e-3, 1e2, 512).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|r| (-r * r).exp()).collect();
        let v = g.integrate_radial(&f, -1.0).unwrap();
        assert!((v / (2.0 * PI) - 1.0).abs() < 5e-3);
    }

    #[test]
    fn minimal_grid_and_bad_args() {
        let g = RadialGrid::build_log_grid(3, 1e-3, 1e2, 16).unwrap();
        assert_eq!(g.len(), 16);
        assert!(g.vol_weights.iter().all(|&w| w > 0.0));
        assert!(g.nodes.windows(2).all(|w| w[1] > w[0]));
        assert!(RadialGrid::build_log_grid(3, 1e-3, 1e2, 15).is_err());
        assert!(RadialGrid::build_log_grid(3, 0.0, 1e2, 64).is_err());
        assert!(RadialGrid::build_log_grid(3, 2.0, 1.0, 64).is_err());
        assert!(g.integrate_radial(&[1.0; 3], 0.0).is_err());
    }

    #[test]
    fn refinement_reduces_error() {
        // f = r has an O(h^2) quadrature error in log coordinates
        let err = |m| {
            let g = RadialGrid::build_log_grid(3, 1.0, 2.0, m).unwrap();
            let f: Vec<f64> = g.nodes.clone();
            let exact = 4.0 * PI * (16.0 - 1.0) / 4.0;
            (g.integrate_radial(&f, 0.0).unwrap() - exact).abs()
        };
        for m in [32, 64, 128, 256] {
            assert!(err(2 * m - 1) <= 0.5 * err(m), "m = {m}");
        }
    }

    #[test]
    fn mass_matches_direct_sum() {
        let g = RadialGrid::build_log_grid(3, 1e-2, 10.0, 128).unwrap();
        let u: Vec<f64> = g.nodes.iter().map(|r| 1.0 / (1.0 + r * r)).collect();
        let mut direct = 0.0;
        for i in 0..g.len() {
            direct += g.vol_weights[i] * u[i].powf(4.0);
        }
        assert_relative_eq!(g.lp_mass(&u, 4.0).unwrap(), direct, max_relative = 1e-14);
    }

    #[test]
    fn solid_weights_integrate_over_the_ball() {
        let g = RadialGrid::build_log_grid(3, 1e-2, 2.0, 256).unwrap();
        let ones = vec![1.0; g.len()];
        let w = g.solid_weights(0.0).unwrap();
        assert_relative_eq!(w.iter().sum::<f64>(), 4.0 * PI / 3.0 * 8.0, max_relative = 1e-10);
        assert_relative_eq!(g.solid_mass(&ones, 3.0).unwrap(), 4.0 * PI / 3.0 * 8.0, max_relative = 1e-10);
        // ∫_{|x|<2} |x|^{-1} dx = 2π·4
        let wh = g.solid_weights(-1.0).unwrap();
        assert_relative_eq!(wh.iter().sum::<f64>(), 8.0 * PI, max_relative = 1e-4);
        assert!(g.solid_weights(-3.0).is_err());
    }

    #[test]
    fn resample_identity_and_power_law() {
        let g = RadialGrid::build_log_grid(3, 1e-3, 1e2, 256).unwrap();
        let u: Vec<f64> = g.nodes.iter().map(|r| r.powi(-2)).collect();
        let same = g.resample_scaled(&u, 1.0, 1.0).unwrap();
        assert!(!same.fallback);
        for (a, b) in same.values.iter().zip(&u) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        let scaled = g.resample_scaled(&u, 2.0, 1.0).unwrap();
        for (v, r) in scaled.values.iter().zip(&g.nodes) {
            assert_relative_eq!(*v, 0.25 * r.powi(-2), max_relative = 1e-12);
        }
    }

    #[test]
    fn resample_gaussian() {
        let g = RadialGrid::build_log_grid(3, 1e-3, 20.0, 512).unwrap();
        let u: Vec<f64> = g.nodes.iter().map(|r| (-r * r / 2.0).exp()).collect();
        let out = g.resample_scaled(&u, 0.5, 1.0).unwrap();
        assert!(!out.fallback);
        for (i, (v, r)) in out.values.iter().zip(&g.nodes).enumerate() {
            if i < 2 || i + 2 >= g.len() || *r > 6.0 {
                continue;
            }
            let exact = (-(r / 2.0).powi(2) / 2.0).exp();
            assert_relative_eq!(*v, exact, max_relative = 1e-3);
        }
    }

    #[test]
    fn resample_fallback_on_zero_entries() {
        let g = RadialGrid::build_log_grid(3, 1e-3, 1e2, 64).unwrap();
        let mut u = vec![1.0; 64];
        u[63] = 0.0;
        let out = g.resample_scaled(&u, 1.0, 2.0).unwrap();
        assert!(out.fallback);
        assert_relative_eq!(out.values[10], 2.0);
        assert!(g.resample_scaled(&u, 0.0, 1.0).is_err());
    }
}
