//! Log grid quadrature, rescaling and power-law tail fitting.

use std::f64::consts::PI;

use frac_hardy::verify::tail_slope;
use frac_hardy::RadialGrid;

fn main() -> frac_hardy::Result<()> {
    let g = RadialGrid::build_log_grid(3, 1e-3, 1e2, 512)?;
    println!("{} nodes on [{}, {}], log step {:.4e}", g.len(), g.r_min, g.r_max, g.log_step);

    // ∫ e^{-|x|²} dx = π^{3/2} in R³
    let gauss: Vec<f64> = g.nodes.iter().map(|r| (-r * r).exp()).collect();
    let shell = g.integrate_radial(&gauss, 0.0)?;
    let solid = g.solid_mass(&gauss, 1.0)?;
    println!("∫ e^(-r²): shell {shell:.10}, with core {solid:.10}, exact {:.10}", PI.powf(1.5));

    // ‖(1+r²)^{-2}‖² against a fine midpoint sum
    let bump: Vec<f64> = g.nodes.iter().map(|r| (1.0 + r * r).powi(-2)).collect();
    let mass = g.lp_mass(&bump, 2.0)?;
    let n = 400_000;
    let reference: f64 = (0..n)
        .map(|i| {
            let r = (i as f64 + 0.5) * 100.0 / n as f64;
            4.0 * PI * r * r * (1.0 + r * r).powi(-4) * 100.0 / n as f64
        })
        .sum();
    println!("∫ (1+r²)^-4 on the grid {mass:.8}, midpoint sum {reference:.8}");

    // v(r) = 2 u(r/2) sampled back on the same nodes
    let out = g.resample_scaled(&bump, 0.5, 2.0)?;
    let r = g.nodes[300];
    println!("resampled at r = {r:.4}: {:.10} vs {:.10} (fallback: {})", out.values[300], 2.0 * (1.0 + r * r / 4.0).powi(-2), out.fallback);

    for k in [1.0, 2.0, 3.5] {
        let u: Vec<f64> = g.nodes.iter().map(|r| r.powf(-k)).collect();
        println!("tail slope of r^-{k}: {:.12}", tail_slope(&g, &u, (10.0, 50.0))?);
    }
    Ok(())
}
