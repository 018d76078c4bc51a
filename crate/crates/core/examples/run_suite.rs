//! Runs a verification suite from configuration text, as `verify` does.

use orbit_geodesics::cli::{run_suite, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::default();
    cfg.apply_text("n = 16\nsuite = bch, certify, crossing, column-multiple, membership, obstruction\nseed = 1\n")?;
    let report = run_suite(&cfg)?;
    for c in &report.checks {
        println!("{:<12} {:?}", c.check, c.verdict);
    }
    println!("overall: {:?}", report.verdict);
    Ok(())
}
