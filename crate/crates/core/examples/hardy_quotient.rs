//! Gagliardo and Hardy forms: Gaussian oracle and the discrete sharp constant.

use std::f64::consts::PI;
use std::time::Instant;

use frac_hardy::constants::lambda_ns;
use frac_hardy::forms::{hardy_rayleigh_min, FormSet};
use frac_hardy::RadialGrid;

fn main() -> frac_hardy::Result<()> {
    let (dim, s) = (3, 0.5);
    let lam = lambda_ns(dim, s)?;
    println!("Λ_3,1/2 = 2/π = {lam:.10}");
    for m in [128, 256, 512, 1024] {
        let t = Instant::now();
        let g = RadialGrid::build_log_grid(dim, 1e-3, 1e2, m)?;
        let f = FormSet::assemble(&g, s)?;
        let elapsed = t.elapsed();
        let u: Vec<f64> = g.nodes.iter().map(|r| (-r * r / 2.0).exp()).collect();
        let a = f.gagliardo(&u)?;
        let h = f.hardy(&u)?;
        let mu = hardy_rayleigh_min(&f)?;
        println!(
            "M = {m:4}: uᵀAu/2π = {:.8}, Hardy/2π = {:.8}, min quotient/Λ = {:.6}, assembly {elapsed:.2?}",
            a / (2.0 * PI),
            h / (2.0 * PI),
            mu / lam
        );
    }
    Ok(())
}
