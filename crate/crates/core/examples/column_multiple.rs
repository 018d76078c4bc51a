//! A rescaled lift shares the certifying column up to the time ratio; a
//! small change in that column is caught.

use orbit_geodesics::factory::{build_b, OperatorFamily, TruncationSpec};
use orbit_geodesics::geodesics::{column_multiple_check, CheckSettings};
use orbit_geodesics::linalg::{AntiHermitianOp, CMat, C64};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 24;
    let z2 = OperatorFamily::build(&TruncationSpec::standard(n))?.z2;
    let b = build_b(n)?;
    let checks = CheckSettings::default();
    let t0 = 0.1 / z2.norm();
    let s0 = 0.5 * t0;
    let v = z2.scale(t0 / s0);
    let ok = column_multiple_check(&z2, &v, t0, s0, 0, &b, &checks)?;
    let mut bump = CMat::zeros(n, n);
    bump[(2, 0)] = C64::new(1e-3, 0.0);
    bump[(0, 2)] = C64::new(-1e-3, 0.0);
    let bad = column_multiple_check(&z2, &v.add(&AntiHermitianOp::project(&bump)?)?, t0, s0, 0, &b, &checks)?;
    for (name, r) in [("rescaled", &ok), ("perturbed", &bad)] {
        println!(
            "{name:<10} {:?}  column residual {:.2e}",
            r.verdict,
            r.residual("column_residual").unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
