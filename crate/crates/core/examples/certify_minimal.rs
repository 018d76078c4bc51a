//! Column certificate for the minimal lift Z2 at several sizes.

use orbit_geodesics::factory::{OperatorFamily, TruncationSpec};
use orbit_geodesics::minimality::certify_minimal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [16, 32, 64, 128] {
        let z2 = OperatorFamily::build(&TruncationSpec::standard(n))?.z2;
        let cert = certify_minimal(&z2, 0, 1e-8)?;
        println!(
            "n={n:>3}  |Z2|={:.12}  norm residual {:.1e}  orthogonality {:.1e}  {:?}",
            z2.norm(),
            cert.norm_residual(),
            cert.max_orthogonality_residual,
            cert.verdict
        );
    }
    Ok(())
}
