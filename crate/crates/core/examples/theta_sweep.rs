//! Sweep over θ ∈ {0.1, 0.5, 0.9}·Λ and p ∈ {3, 5} through the command-line
//! front end, then print the table. Set FRAC_HARDY_THREADS to bound the
//! worker count.

use frac_hardy::cli::run_with;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("frac-hardy-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let config = dir.join("sweep.cfg");
    std::fs::write(&config, "# sweep setup\nsweep_theta_frac = 0.1, 0.5, 0.9\nsweep_p = 3, 5\nq = 6\n")?;
    let table = dir.join("sweep.tsv");
    let status = run_with(
        ["frac-hardy", "sweep", "--config", config.to_str().unwrap(), "--table", table.to_str().unwrap()],
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    println!("exit {}", status.code());
    for line in std::fs::read_to_string(&table)?.lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        println!("{}", cols[..cols.len().min(11)].join("  "));
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
