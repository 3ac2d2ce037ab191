//! Ground-state representation: the Hardy-shifted energy of `u` against the
//! weighted form of `v = r^γ u`.

use frac_hardy::constants::psi_ns;
use frac_hardy::forms::FormSet;
use frac_hardy::RadialGrid;

fn main() -> frac_hardy::Result<()> {
    let (dim, s) = (3, 0.5);
    let g = RadialGrid::build_log_grid(dim, 1e-3, 1e2, 512)?;
    let bump: Vec<f64> = g
        .nodes
        .iter()
        .map(|r| {
            let x = (r - 1.0) / 0.6;
            if x.abs() < 1.0 {
                (1.0 - x * x).powi(3)
            } else {
                0.0
            }
        })
        .collect();
    let top = (dim as f64 - 2.0 * s) / 2.0;
    for frac in [0.25, 0.5, 0.75] {
        let gamma = frac * top;
        let f = FormSet::assemble_weighted(&g, s, gamma)?;
        let theta = psi_ns(dim, s, gamma)?;
        let lhs = f.gagliardo(&bump)? - theta * f.hardy(&bump)?;
        let v: Vec<f64> = g.nodes.iter().zip(&bump).map(|(r, u)| r.powf(gamma) * u).collect();
        let rhs = f.weighted(&v)?;
        println!(
            "γ = {gamma:.3} (θ = {theta:.6}): shifted energy {lhs:.8}, weighted form {rhs:.8}, residual {:.2e}",
            f.groundstate_residual(&bump)?
        );
    }
    Ok(())
}
