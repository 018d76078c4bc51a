//! Builds the truncated operator family and prints its norms and the
//! parity profile of the oscillating diagonal.

use orbit_geodesics::factory::{oscillation_profile, OperatorFamily, TruncationSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(32), |s| s.parse())?;
    let spec = TruncationSpec::new(n, 0.5, 0.25)?;
    for w in spec.warnings() {
        eprintln!("warning: {w}");
    }
    let fam = OperatorFamily::build(&spec)?;
    println!("n = {n}, tail bound {:.3e}", fam.tail_bound);
    println!("|Z_dg| = {:.12}", fam.zdg.norm());
    println!("|Z_o|  = {:.12}", fam.zo.norm());
    println!("|Z2|   = {:.12}", fam.z2.norm());
    let p = oscillation_profile(&fam.d0, 0.5)?;
    println!("D0 tail: even {:.6}, odd {:.6}, gap {:.6}", p.even(), p.odd(), p.gap);
    Ok(())
}
