//! Forced diagonal of a would-be competitor lift stays away from the
//! scalars by at least the parity gap of D0.

use orbit_geodesics::factory::{OperatorFamily, TruncationSpec};
use orbit_geodesics::geodesics::{obstruction_gap, s0_grid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 128;
    let z2 = OperatorFamily::build(&TruncationSpec::standard(n))?.z2;
    let t0 = std::f64::consts::LN_2 / (16.0 * z2.norm());
    let report = obstruction_gap(&z2, t0, &s0_grid(std::f64::consts::FRAC_PI_2 / z2.norm(), 10))?;
    println!("gap {:.6}, t0 {:.3e}", report.gap, report.t0);
    println!("{:>12} {:>12} {:>12}", "s0", "deviation", "threshold");
    for row in &report.rows {
        println!("{:>12.4e} {:>12.6} {:>12.6}", row.s0, row.deviation, row.threshold);
    }
    Ok(())
}
