//! Two minimal lifts reaching the same orbit point differ by a diagonal
//! near the base point: the lift against itself and a scalar-shifted pair.

use orbit_geodesics::factory::{build_b, OperatorFamily, TruncationSpec};
use orbit_geodesics::geodesics::{crossing_factorization_check, scalar_shift_pair, CheckSettings, CROSSING_WINDOW};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 24;
    let z2 = OperatorFamily::build(&TruncationSpec::standard(n))?.z2;
    let b = build_b(n)?;
    let checks = CheckSettings::default();
    let (z, v) = scalar_shift_pair(&z2, 0.1)?;
    for (name, z, v) in [("same lift", &z2, &z2), ("scalar shift", &z, &v)] {
        let t1 = 0.5 * CROSSING_WINDOW / z.norm();
        let r = crossing_factorization_check(z, v, t1, t1, &b, &checks)?;
        println!(
            "{name:<13} {:?}  off-diagonal of D {:.1e}  norm equality {:.1e}",
            r.verdict,
            r.residual("reconstructed_off_diagonal").unwrap_or(f64::NAN),
            r.residual("norm_equality").unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
