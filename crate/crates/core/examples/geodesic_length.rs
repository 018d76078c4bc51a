//! Length of the orbit curve of Z2 against its norm, plus a handful of
//! endpoint-pinned competitors.

use orbit_geodesics::factory::{build_b, OperatorFamily, TruncationSpec};
use orbit_geodesics::geodesics::{verify_short_curve, ShortCurveSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 16;
    let z2 = OperatorFamily::build(&TruncationSpec::standard(n))?.z2;
    let t = std::f64::consts::FRAC_PI_4 / z2.norm();
    let settings = ShortCurveSettings {
        competitors: 6,
        ..ShortCurveSettings::default()
    };
    let report = verify_short_curve(&z2, &build_b(n)?, t, &settings)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
