//! Minimal geodesics from the base point to random nearby orbit points,
//! and the largest radius at which every probe succeeds.

use orbit_geodesics::factory::build_b;
use orbit_geodesics::geodesics::{hopf_rinow_probe, largest_successful_radius, random_targets, ProbeSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 16;
    let b = build_b(n)?;
    let settings = ProbeSettings::default();
    for (k, target) in random_targets(n, 0.05, 5, 0).iter().enumerate() {
        let p = hopf_rinow_probe(target, &b, &settings)?;
        println!(
            "target {k}: |Z*| {:.6}  witness gap {:.1e}  endpoint {:.1e}  iterations {}",
            p.norm, p.witness_gap, p.endpoint_residual, p.iterations
        );
    }
    let (best, counts) = largest_successful_radius(&b, &[0.02, 0.05, 0.08], 3, 1, &settings)?;
    println!("largest radius with all probes passing: {best:?} ({counts:?})");
    Ok(())
}
