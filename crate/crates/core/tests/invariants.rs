use orbit_geodesics::factory::{build_b, OperatorFamily, TruncationSpec};
use orbit_geodesics::geodesics::{
    bch_log_bound, finsler_norm_at, obstruction_gap, s0_grid, scalar_shift_pair, tangent, OrbitPoint,
};
use orbit_geodesics::linalg::{exp_antihermitian, log_unitary, unitarity_residual, AntiHermitianOp};
use orbit_geodesics::minimality::{certify_minimal, quotient_norm, SolverSettings};
use orbit_geodesics::rng::SeededRng;
use proptest::prelude::*;

fn random_op(seed: u64, n: usize, norm: f64) -> AntiHermitianOp {
    let raw = SeededRng::new(seed).anti_hermitian(n, 1.0);
    raw.scale(norm / raw.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exp_is_unitary_and_log_inverts_it(seed in any::<u64>(), n in 2usize..9, norm in 0.01f64..3.0) {
        let a = random_op(seed, n, norm);
        let u = exp_antihermitian(&a, 1.0).unwrap();
        prop_assert!(unitarity_residual(u.matrix()) <= 1e-10);
        let back = log_unitary(&u).unwrap();
        prop_assert!((back.matrix() - a.matrix()).norm() <= 1e-10);
    }

    #[test]
    fn quotient_norm_is_diagonal_invariant_and_bracketed(seed in any::<u64>(), n in 2usize..7) {
        let x = random_op(seed, n, 1.0);
        let cfg = SolverSettings::default();
        let q = quotient_norm(&x, &cfg).unwrap();
        prop_assert!(q.value <= x.norm() + 1e-12);
        prop_assert!(q.lower_bound <= q.value);
        let mut rng = SeededRng::new(seed ^ 0x5eed);
        let shift: Vec<f64> = (0..n).map(|_| rng.range(-2.0, 2.0)).collect();
        let moved = quotient_norm(&x.add_imaginary_diagonal(&shift).unwrap(), &cfg).unwrap();
        prop_assert!((moved.value - q.value).abs() <= 1e-6);
    }

    #[test]
    fn finsler_norm_is_quotient_norm_of_pulled_back_lift(seed in any::<u64>(), n in 2usize..6) {
        let b = build_b(n).unwrap();
        let u = exp_antihermitian(&random_op(seed, n, 1.0), 1.0).unwrap();
        let c = OrbitPoint::new(u.clone(), &b).unwrap();
        let z = random_op(seed.wrapping_add(1), n, 0.7);
        let cfg = SolverSettings::default();
        let speed = finsler_norm_at(&tangent(&z, &c).unwrap(), &c, &cfg).unwrap();
        let pulled = AntiHermitianOp::project(&u.adjoint().conjugate(z.matrix())).unwrap();
        let expected = quotient_norm(&pulled, &cfg).unwrap().value;
        prop_assert!((speed - expected).abs() <= 1e-6 * expected.max(1.0));
    }

    #[test]
    fn certified_lifts_are_minimal(seed in any::<u64>(), n in 3usize..7) {
        let z = random_op(seed, n, 1.0);
        let cert = certify_minimal(&z, 0, 1e-8).unwrap();
        if cert.is_certified() {
            let q = quotient_norm(&z, &SolverSettings::default()).unwrap();
            prop_assert!(q.value >= z.norm() - 1e-6);
        }
    }

    #[test]
    fn bch_bound_holds(seed in any::<u64>(), na in 0.0f64..0.15, nb in 0.0f64..0.15) {
        let a = random_op(seed, 4, na.max(1e-9));
        let b = random_op(seed.wrapping_add(7), 4, nb.max(1e-9));
        let u = exp_antihermitian(&a, 1.0).unwrap().compose(&exp_antihermitian(&b, 1.0).unwrap()).unwrap();
        let log = log_unitary(&u).unwrap();
        prop_assert!(log.norm() <= bch_log_bound(a.norm(), b.norm()).unwrap() + 1e-10);
    }

    #[test]
    fn scalar_shift_keeps_norms_equal(seed in any::<u64>(), theta in -0.5f64..0.5) {
        let z = random_op(seed, 5, 1.0);
        let (zp, v) = scalar_shift_pair(&z, theta).unwrap();
        prop_assert!((zp.norm() - v.norm()).abs() <= 1e-12);
        prop_assert!((zp.off_diagonal().matrix() - z.off_diagonal().matrix()).norm() <= 1e-12);
    }
}

#[test]
fn obstruction_deviation_never_undercuts_threshold() {
    for n in [16, 32] {
        let z2 = OperatorFamily::build(&TruncationSpec::standard(n)).unwrap().z2;
        let t0 = std::f64::consts::LN_2 / (16.0 * z2.norm());
        let report = obstruction_gap(&z2, t0, &s0_grid(std::f64::consts::FRAC_PI_2 / z2.norm(), 12)).unwrap();
        for row in &report.rows {
            assert!(row.deviation >= row.threshold * (1.0 - 1e-9), "n={n} {row:?}");
        }
    }
}
