//! Spectral constants and the exponent map.
//!
//! `cargo run --example constants -- 3 0.5`

use frac_hardy::constants::{a_ns, critical_exponent, extension_constant, gamma_theta, lambda_ns, psi_ns};

fn main() -> frac_hardy::Result<()> {
    let mut args = std::env::args().skip(1);
    let dim: usize = args.next().map_or(3, |a| a.parse().expect("dimension"));
    let s: f64 = args.next().map_or(0.5, |a| a.parse().expect("order s"));

    let lam = lambda_ns(dim, s)?;
    println!("N = {dim}, s = {s}");
    println!("  Λ_N,s  = {lam:.15}");
    println!("  a_N,s  = {:.15}", a_ns(dim, s)?);
    println!("  k_s    = {:.15}", extension_constant(s)?);
    println!("  2*_s   = {:.15}", critical_exponent(dim, s)?);

    let top = (dim as f64 - 2.0 * s) / 2.0;
    println!("\n  γ          Ψ(γ)");
    for k in 0..=8 {
        let g = top * k as f64 / 8.0;
        println!("  {g:<10.5} {:.10}", psi_ns(dim, s, g)?);
    }

    println!("\n  θ/Λ    γ_θ");
    for frac in [0.1, 0.25, 0.5, 0.75, 0.9, 0.99] {
        println!("  {frac:<6} {:.10}", gamma_theta(dim, s, frac * lam)?);
    }
    Ok(())
}
