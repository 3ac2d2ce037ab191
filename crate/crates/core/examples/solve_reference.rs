//! Reference solve at N = 3, s = 1/2, θ = 1/π, p = 3, q = 6 with every check.

use std::f64::consts::PI;

use frac_hardy::forms::FormSet;
use frac_hardy::solver::{solve, MinimizerConfig};
use frac_hardy::verify::{verify_all, Refinement, Thresholds};
use frac_hardy::{ProblemParams, RadialGrid};

fn main() -> frac_hardy::Result<()> {
    env_logger::init();
    let params = ProblemParams::new(3, 0.5, 1.0 / PI, 3.0, 6.0);
    println!("regime {}", params.regime());
    let grid = RadialGrid::build_log_grid(3, 1e-3, 1e2, 512)?;
    let forms = FormSet::assemble(&grid, params.s)?;
    let sol = solve(&forms, &params, &MinimizerConfig::default())?;

    let mut round = usize::MAX;
    for e in &sol.trace {
        if e.round != round {
            round = e.round;
            println!("window round {round}: F starts at {:.12}", e.energy);
        }
    }
    println!("λ = {:.10}, F = {:.10}, {} iterations, window scale {:.6}", sol.lambda, sol.f_min, sol.iterations, sol.window_scale);
    for i in (0..grid.len()).step_by(64) {
        println!("  u({:.4e}) = {:.6e}", grid.nodes[i], sol.u[i]);
    }

    let fine_grid = RadialGrid::build_log_grid(3, 1e-4, 1e2, 1024)?;
    let fine = solve(&FormSet::assemble(&fine_grid, params.s)?, &params, &MinimizerConfig::default())?;
    let report = verify_all(
        &forms,
        &params,
        &sol.u,
        Some(Refinement { grid: &fine_grid, u: &fine.u }),
        &Thresholds::default(),
    )?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report"));
    Ok(())
}
