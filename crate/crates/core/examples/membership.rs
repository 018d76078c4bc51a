//! Splits a unitary into a scalar phase times a compact perturbation of
//! the identity, and flags one whose tail oscillates.

use orbit_geodesics::factory::{OperatorFamily, TruncationSpec};
use orbit_geodesics::geodesics::{scalar_times_compact, unitary_membership_diagnostic};
use orbit_geodesics::linalg::{exp_antihermitian, AntiHermitianOp};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 64;
    let z2 = OperatorFamily::build(&TruncationSpec::standard(n))?.z2;
    let u = scalar_times_compact(&z2, 0.1, 0.2)?;
    let r = unitary_membership_diagnostic(&u, 0.5)?;
    println!(
        "scalar times compact: theta {:.6}, tail residual {:.2e}",
        r.theta, r.tail_residual
    );

    let alt: Vec<f64> = (0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let d = AntiHermitianOp::zeros(n).add_imaginary_diagonal(&alt)?;
    let r = unitary_membership_diagnostic(&exp_antihermitian(&d, 1.0)?, 0.5)?;
    println!(
        "alternating phases:   theta {:.6}, tail residual {:.2e}",
        r.theta, r.tail_residual
    );
    Ok(())
}
