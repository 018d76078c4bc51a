//! Norm of log(e^a e^b) against the logarithmic bound on random pairs.

use orbit_geodesics::geodesics::{bch_log_bound, bch_random_trials, CheckSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (a, b) in [(0.01, 0.01), (0.05, 0.05), (0.1, 0.2)] {
        println!("bound at |a|={a}, |b|={b}: {:.6}", bch_log_bound(a, b)?);
    }
    let report = bch_random_trials(100, 4, 0.05, 0, &CheckSettings::default())?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
