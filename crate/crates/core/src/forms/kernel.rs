//! Angular reduction of the Gagliardo kernel for radial functions.

use crate::constants::{a_ns, sphere_area};
use crate::error::{domain, Error, Result};
use crate::quad::adaptive;

const REL_TOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 30;

/// `J(r, ρ) = ∫_0^π sin^{N-2}φ (r² + ρ² - 2rρ cos φ)^{-(N+2s)/2} dφ`.
///
/// The integrand peaks at `φ = 0` with width `|r-ρ|/sqrt(rρ)`; the interval is
/// split geometrically from that scale and each piece is integrated adaptively.
pub fn angular_kernel(dim: usize, s: f64, r: f64, rho: f64) -> Result<f64> {
    if dim < 2 {
        return Err(domain("angular reduction needs N >= 2"));
    }
    if !(r > 0.0 && rho > 0.0) {
        return Err(domain(format!("radii must be positive, got {r}, {rho}")));
    }
    let delta = (r - rho).abs();
    if delta < 1e-12 * r.max(rho) {
        return Err(Error::Singular { r, rho });
    }
    Ok(angular_unchecked(dim, s, r, rho))
}

pub(crate) fn angular_unchecked(dim: usize, s: f64, r: f64, rho: f64) -> f64 {
    let lam = 0.5 * (dim as f64 + 2.0 * s);
    let sin_pow = dim as i32 - 2;
    let delta = r - rho;
    let d2 = delta * delta;
    let prod = r * rho;
    let f = move |phi: f64| {
        let half = (0.5 * phi).sin();
        phi.sin().powi(sin_pow) * (d2 + 4.0 * prod * half * half).powf(-lam)
    };
    let width = delta.abs() / prod.sqrt();
    let pi = std::f64::consts::PI;
    let mut total = 0.0;
    let mut a = 0.0;
    let mut b = width.min(pi);
    loop {
        total += adaptive(&f, a, b, REL_TOL, MAX_DEPTH).0;
        if b >= pi {
            break;
        }
        a = b;
        b = (4.0 * b).min(pi);
    }
    total
}

/// `∫_0^π sin^{N-2}φ dφ = B(1/2, (N-1)/2)`.
pub(crate) fn angular_mass(dim: usize) -> f64 {
    sphere_area(dim) / sphere_area(dim - 1)
}

/// Radial Gagliardo kernel
/// `K(r, ρ) = (a_{N,s}/2) |S^{N-1}| |S^{N-2}| J(r, ρ) (rρ)^{N-1-γ}`,
/// so that `∬ (u(r)-u(ρ))² K dr dρ` is the (weighted) Gagliardo form of a radial `u`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialKernel {
    pub dim: usize,
    pub s: f64,
    pub gamma: f64,
    pub prefactor: f64,
    pub radial_power: f64,
}

impl RadialKernel {
    pub fn new(dim: usize, s: f64, gamma: f64) -> Result<Self> {
        let prefactor = 0.5 * a_ns(dim, s)? * sphere_area(dim) * sphere_area(dim - 1);
        Ok(Self { dim, s, gamma, prefactor, radial_power: dim as f64 - 1.0 - gamma })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.prefactor * angular_unchecked(self.dim, self.s, x, y) * (x * y).powf(self.radial_power)
    }

    /// Homogeneity degree of `K(x, y) dx dy`.
    pub fn scaling_exponent(&self) -> f64 {
        self.dim as f64 - 2.0 * self.s - 2.0 * self.gamma
    }

    /// Coefficient `c` in `K(x, y) ≈ c x^{N-1-γ} y^{-1-2s-γ}` for `y ≫ x`.
    pub fn far_coefficient(&self) -> f64 {
        self.prefactor * angular_mass(self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 0..10_000 {
            let k = k as f64;
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum
    }

    // Gegenbauer generating-function closed form
    fn oracle(dim: usize, s: f64, r: f64, rho: f64) -> f64 {
        let n = dim as f64;
        let (lo, hi) = if r < rho { (r, rho) } else { (rho, r) };
        let t = lo / hi;
        angular_mass(dim) * hi.powf(-(n + 2.0 * s)) * hyp2f1((n + 2.0 * s) / 2.0, 1.0 + s, n / 2.0, t * t)
    }

    #[test]
    fn closed_form_three_half() {
        let j = angular_kernel(3, 0.5, 1.0, 2.0).unwrap();
        assert!((j - 2.0 / 9.0).abs() < 1e-8);
        for (r, rho) in [(1.0f64, 1.001f64), (0.3, 7.0), (1.0, 1.0 + 1e-7)] {
            let exact = (1.0 / (2.0 * r * rho)) * ((r - rho).powi(-2) - (r + rho).powi(-2));
            assert_relative_eq!(angular_kernel(3, 0.5, r, rho).unwrap(), exact, max_relative = 1e-10);
        }
    }

    #[test]
    fn hypergeometric_oracle() {
        for dim in [2usize, 3, 4, 5] {
            for s in [0.3, 0.5, 0.75] {
                for t in [0.05, 0.3, 0.6, 0.8] {
                    let j = angular_kernel(dim, s, t, 1.0).unwrap();
                    assert_relative_eq!(j, oracle(dim, s, t, 1.0), max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn symmetry_and_homogeneity() {
        for (dim, s) in [(2, 0.3), (3, 0.5), (4, 0.75)] {
            let n = dim as f64;
            let a = angular_kernel(dim, s, 0.7, 1.9).unwrap();
            assert_relative_eq!(a, angular_kernel(dim, s, 1.9, 0.7).unwrap(), max_relative = 1e-13);
            let b = angular_kernel(dim, s, 1.4, 3.8).unwrap();
            assert_relative_eq!(b, 2f64.powf(-(n + 2.0 * s)) * a, max_relative = 1e-12);
        }
    }

    #[test]
    fn diagonal_is_rejected() {
        assert!(matches!(angular_kernel(3, 0.5, 1.0, 1.0), Err(Error::Singular { .. })));
        assert!(angular_kernel(1, 0.3, 1.0, 2.0).is_err());
    }

    #[test]
    fn leading_singularity() {
        // J ≈ ½ B((N-1)/2, (1+2s)/2) (rρ)^{-(N-1)/2} |r-ρ|^{-1-2s} near the diagonal
        for (dim, s) in [(2usize, 0.3), (3, 0.5), (5, 0.75)] {
            let n = dim as f64;
            let b = (crate::constants::ln_gamma((n - 1.0) / 2.0) + crate::constants::ln_gamma(0.5 + s)
                - crate::constants::ln_gamma(n / 2.0 + s))
            .exp();
            let d: f64 = 1e-6;
            let lead = 0.5 * b * (1.0 + d).powf(-(n - 1.0) / 2.0) * d.powf(-1.0 - 2.0 * s);
            assert_relative_eq!(angular_kernel(dim, s, 1.0, 1.0 + d).unwrap(), lead, max_relative = 1e-4);
        }
    }
}
