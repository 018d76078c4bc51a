//! The orbit of a rank-one reflection traces a great circle at twice the
//! speed of the orbit curve.

use orbit_geodesics::factory::{build_b, OperatorFamily, TruncationSpec};
use orbit_geodesics::geodesics::{reflection_r0, sphere_geodesic_check, CheckSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 16;
    let z2 = OperatorFamily::build(&TruncationSpec::standard(n))?.z2;
    let s = reflection_r0(0, n)?.with_lift(&z2)?;
    let t_max = std::f64::consts::FRAC_PI_2 / z2.norm();
    let grid: Vec<f64> = (0..=4).map(|k| k as f64 * t_max / 4.0).collect();
    let report = sphere_geodesic_check(&z2, &build_b(n)?, &s, &grid, &CheckSettings::default())?;
    for (k, r) in &report.residuals {
        println!("{k:<26} {:.3e}", r.value);
    }
    println!("verdict: {:?}", report.verdict);
    Ok(())
}
