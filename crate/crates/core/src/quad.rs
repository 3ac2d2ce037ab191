//! Gauss rules on `[0, 1]` and an adaptive Gauss-Legendre driver.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::{GaussJacobi, GaussLegendre};

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub(crate) struct Rule {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
}

impl Rule {
    /// Gauss-Legendre with `n` points, `∫_0^1 f`.
    pub fn legendre(n: usize) -> Self {
        let q = GaussLegendre::new(NonZeroUsize::new(n).expect("n > 0"));
        let (x, w) = q.iter().map(|(t, w)| (0.5 * (t + 1.0), 0.5 * w)).unzip();
        Self { x, w }
    }

    /// Gauss-Jacobi with `n` points, `∫_0^1 ξ^beta f(ξ) dξ`.
    pub fn jacobi(n: usize, beta: f64) -> Self {
        let q = GaussJacobi::new(
            NonZeroUsize::new(n).expect("n > 0"),
            0.0.try_into().expect("alpha"),
            beta.try_into().expect("beta > -1"),
        );
        let scale = 0.5f64.powf(beta + 1.0);
        let (x, w) = q.iter().map(|(t, w)| (0.5 * (t + 1.0), scale * w)).unzip();
        Self { x, w }
    }


    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let span = b - a;
        let mut acc = 0.0;
        for (x, w) in self.x.iter().zip(&self.w) {
            acc += w * f(a + span * x);
        }
        acc * span
    }
}

fn gl16() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| Rule::legendre(16))
}

/// Adaptive bisection with a 16-point Gauss-Legendre panel rule. Returns the
/// integral and whether the tolerance was met everywhere.
pub(crate) fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> (f64, bool) {
    let rule = gl16();
    let whole = rule.integrate(a, b, f);
    refine(f, rule, a, b, whole, rel_tol, max_depth)
}

fn refine(f: &impl Fn(f64) -> f64, rule: &Rule, a: f64, b: f64, whole: f64, rel_tol: f64, depth: u32) -> (f64, bool) {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let sum = left + right;
    if (sum - whole).abs() <= rel_tol * sum.abs() || sum == 0.0 {
        return (sum, true);
    }
    if depth == 0 {
        return (sum, false);
    }
    let (l, ok_l) = refine(f, rule, a, mid, left, rel_tol, depth - 1);
    let (r, ok_r) = refine(f, rule, mid, b, right, rel_tol, depth - 1);
    (l + r, ok_l && ok_r)
}
