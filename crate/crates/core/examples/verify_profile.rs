//! Writing a profile file and checking it, next to a profile that is not a solution.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use frac_hardy::cli::config::RunConfig;
use frac_hardy::cli::files::{write_atomic, ProfileFile};
use frac_hardy::cli::run_with;
use frac_hardy::constants::gamma_theta;
use frac_hardy::forms::FormSet;
use frac_hardy::solver::{solve, MinimizerConfig};
use frac_hardy::RadialGrid;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("frac-hardy-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut cfg = RunConfig::default();
    for (k, v) in [("nodes", "256"), ("r_min", "1e-2"), ("r_max", "60"), ("theta", &(1.0 / PI).to_string())] {
        cfg.set(k, v)?;
    }
    let grid = RadialGrid::build_log_grid(cfg.params.dim, cfg.r_min, cfg.r_max, cfg.nodes)?;
    let sol = solve(&FormSet::assemble(&grid, cfg.params.s)?, &cfg.params, &MinimizerConfig::default())?;
    let gamma = gamma_theta(cfg.params.dim, cfg.params.s, cfg.params.theta)?;

    let header: BTreeMap<String, String> = cfg.entries();
    let good = ProfileFile::new(header.clone(), &grid.nodes, &sol.u, gamma);
    let good_path = dir.join("solution.dat");
    write_atomic(&good_path, good.to_text().as_bytes())?;

    let fake: Vec<f64> = grid.nodes.iter().map(|r| (-r * r).exp()).collect();
    let bad_path = dir.join("gaussian.dat");
    write_atomic(&bad_path, ProfileFile::new(header, &grid.nodes, &fake, gamma).to_text().as_bytes())?;

    for path in [&good_path, &bad_path] {
        let report = dir.join("report.json");
        let mut out = Vec::new();
        let status = run_with(
            ["frac-hardy", "verify", path.to_str().unwrap(), "--report", report.to_str().unwrap()],
            &mut out,
            &mut std::io::stderr(),
        );
        println!("== {} -> exit {}", path.display(), status.code());
        print!("{}", String::from_utf8_lossy(&out));
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
