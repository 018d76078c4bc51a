//! Distance to the diagonals: barrier solver, subgradient solver and a
//! grid search on a small matrix, then the closed-form value for Z_o.

use orbit_geodesics::factory::{OperatorFamily, TruncationSpec};
use orbit_geodesics::linalg::{column, vec_norm};
use orbit_geodesics::minimality::{quotient_norm, quotient_norm_bruteforce, GridSpec, QuotientMethod, SolverSettings};
use orbit_geodesics::rng::SeededRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = SeededRng::new(1).anti_hermitian(3, 1.0);
    let barrier = quotient_norm(&x, &SolverSettings::default())?;
    let subgradient = quotient_norm(&x, &SolverSettings::with_method(QuotientMethod::Subgradient))?;
    let grid = GridSpec::enclosing(&x, 0.02)?;
    let brute = quotient_norm_bruteforce(&x, &grid)?;
    println!(
        "3x3: barrier {:.10} (gap {:.1e}), subgradient {:.10}, grid {:.10} +- {:.1e}",
        barrier.value,
        barrier.certified_gap,
        subgradient.value,
        brute,
        grid.lipschitz_slack()
    );

    let zo = OperatorFamily::build(&TruncationSpec::standard(16))?.zo;
    let q = quotient_norm(&zo, &SolverSettings::default())?;
    println!(
        "Z_o at n=16: {:.12} vs first column {:.12}",
        q.value,
        vec_norm(&column(zo.as_complex(), 0)?)
    );
    Ok(())
}
