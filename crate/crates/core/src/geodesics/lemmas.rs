//! Checkers for the crossing factorization, the logarithm bound, the
//! column-multiple property and uniqueness of minimal lifts.

use super::{column_certificate, minimality_status, CheckSettings, MinimalityStatus};
use crate::error::{Error, Result};
use crate::factory::DiagonalOp;
use crate::linalg::{
    column, eigh, exp_antihermitian, log_unitary_with, vec_norm, AntiHermitianOp, CMat, ComplexMatrix,
};
use crate::minimality::certify_minimal;
use crate::report::CheckReport;
use crate::rng::SeededRng;

/// Window for `|t1 z|` in the crossing factorization.
pub const CROSSING_WINDOW: f64 = std::f64::consts::LN_2 / 8.0;

fn orbit_point(z: &AntiHermitianOp, t: f64, b: &DiagonalOp) -> Result<CMat> {
    let u = exp_antihermitian(z, t)?;
    Ok(u.conjugate(&b.to_matrix()))
}

fn op_norm(m: &CMat) -> Result<f64> {
    Ok(crate::linalg::spectral_norm(&ComplexMatrix::new(m.clone())?))
}

fn max_off_diagonal(m: &CMat) -> f64 {
    let n = m.nrows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| m[(i, j)].norm())
        .fold(0.0, f64::max)
}

/// Checks `e^{t1 z} = e^{s1 v} e^{-Diag(s1 v) + Diag(t1 z)}` for two lifts
/// whose curves meet at `t1` and `s1`, and `|s1 v| = |t1 z|`.
pub fn crossing_factorization_check(
    z: &AntiHermitianOp,
    v: &AntiHermitianOp,
    t1: f64,
    s1: f64,
    b: &DiagonalOp,
    checks: &CheckSettings,
) -> Result<CheckReport> {
    let tol = &checks.tolerances;
    let tz = z.scale(t1);
    let sv = v.scale(s1);
    if tz.norm() >= CROSSING_WINDOW {
        return Err(Error::Window {
            value: tz.norm(),
            window: format!("[0, {CROSSING_WINDOW})"),
        });
    }
    let endpoint = op_norm(&(orbit_point(z, t1, b)? - orbit_point(v, s1, b)?))?;
    if endpoint > tol.endpoint {
        return Err(Error::Hypothesis(format!(
            "curves do not meet: endpoint mismatch {endpoint:e}"
        )));
    }

    let mut report = CheckReport::new("lemma53");
    report.param("dim", z.dim()).param("t1", t1).param("s1", s1);
    report.measured("endpoint_mismatch", endpoint);

    let e_tz = exp_antihermitian(&tz, 1.0)?;
    let e_sv = exp_antihermitian(&sv, 1.0)?;
    let predicted = DiagonalOp::diagonal_of(&tz.sub(&sv)?);
    let d_pred = predicted.add_to(&AntiHermitianOp::zeros(z.dim()))?;
    let factor = e_sv.compose(&exp_antihermitian(&d_pred, 1.0)?)?;
    let fact_res = op_norm(&(e_tz.matrix() - factor.matrix()))?;
    report.at_most("factorization_residual", fact_res, tol.crossing);

    let d = log_unitary_with(&e_sv.adjoint().compose(&e_tz)?, tol.branch_cut_angle)?;
    report.at_most("reconstructed_off_diagonal", max_off_diagonal(d.matrix()), tol.crossing);
    report.at_most(
        "reconstructed_vs_predicted",
        op_norm(&(d.matrix() - d_pred.matrix()))?,
        tol.crossing,
    );
    report.at_most("norm_equality", (sv.norm() - tz.norm()).abs(), tol.crossing);
    report.detail(
        "reconstructed_diagonal",
        d.diagonal().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
    );
    Ok(report)
}

/// `z - i c I + i (theta/2) I` and `z - i c I - i (theta/2) I`, with `c` the
/// midpoint of the spectrum of `-i z`. Both have the same norm and
/// their curves coincide, so they cross at every equal time.
pub fn scalar_shift_pair(z: &AntiHermitianOp, theta: f64) -> Result<(AntiHermitianOp, AntiHermitianOp)> {
    let (w, _) = eigh(&z.to_hermitian())?;
    let lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let c = 0.5 * (lo + hi);
    let n = z.dim();
    let zc = z.add_imaginary_diagonal(&vec![0.5 * theta - c; n])?;
    let vc = zc.add_imaginary_diagonal(&vec![-theta; n])?;
    Ok((zc, vc))
}

/// `-(1/2) log(2 - e^{2a + 2b})`, defined for `2a + 2b < log 2`.
pub fn bch_log_bound(a_norm: f64, b_norm: f64) -> Result<f64> {
    let s = 2.0 * a_norm + 2.0 * b_norm;
    if !(s < std::f64::consts::LN_2) {
        return Err(Error::Window {
            value: s,
            window: "2|a| + 2|b| < log 2".into(),
        });
    }
    Ok(-0.5 * (2.0 - s.exp()).ln())
}

pub fn bch_log_bound_check(a: &AntiHermitianOp, b2: &AntiHermitianOp, checks: &CheckSettings) -> Result<CheckReport> {
    let bound = bch_log_bound(a.norm(), b2.norm())?;
    let lhs = bch_lhs(a, b2, checks)?;
    let mut report = CheckReport::new("bch");
    report
        .param("dim", a.dim())
        .param("norm_a", a.norm())
        .param("norm_b", b2.norm());
    report.measured("log_norm", lhs);
    report.measured("bound", bound);
    report.at_least("margin", bound - lhs + checks.tolerances.bch, 0.0);
    Ok(report)
}

fn bch_lhs(a: &AntiHermitianOp, b2: &AntiHermitianOp, checks: &CheckSettings) -> Result<f64> {
    let u = exp_antihermitian(a, 1.0)?.compose(&exp_antihermitian(b2, 1.0)?)?;
    Ok(log_unitary_with(&u, checks.tolerances.branch_cut_angle)?.norm())
}

/// `count` seeded pairs with norms uniform in `(0, max_norm]`.
pub fn bch_random_trials(
    count: usize,
    dim: usize,
    max_norm: f64,
    seed: u64,
    checks: &CheckSettings,
) -> Result<CheckReport> {
    let mut rng = SeededRng::new(seed);
    let mut report = CheckReport::new("bch");
    report
        .param("trials", count)
        .param("dim", dim)
        .param("max_norm", max_norm)
        .param("seed", seed);
    let mut worst = f64::INFINITY;
    let mut failures = 0usize;
    for _ in 0..count {
        let na = max_norm * (1.0 - rng.uniform());
        let nb = max_norm * (1.0 - rng.uniform());
        let a = rng.anti_hermitian(dim, 1.0);
        let b2 = rng.anti_hermitian(dim, 1.0);
        let a = a.scale(na / a.norm());
        let b2 = b2.scale(nb / b2.norm());
        let margin = bch_log_bound(a.norm(), b2.norm())? - bch_lhs(&a, &b2, checks)?;
        if margin + checks.tolerances.bch < 0.0 {
            failures += 1;
        }
        worst = worst.min(margin);
    }
    report.at_least("min_margin", worst + checks.tolerances.bch, 0.0);
    report.detail("failures", failures);
    Ok(report)
}

/// Checks `s0 c_j0(v) = t0 c_j0(z)` for minimal lifts whose curves meet at
/// `t0` and `s0`. A broken hypothesis makes the report inconclusive unless
/// the column residual already fails it.
pub fn column_multiple_check(
    z: &AntiHermitianOp,
    v: &AntiHermitianOp,
    t0: f64,
    s0: f64,
    j0: usize,
    b: &DiagonalOp,
    checks: &CheckSettings,
) -> Result<CheckReport> {
    let tol = &checks.tolerances;
    let mut report = CheckReport::new("lemma58");
    report
        .param("dim", z.dim())
        .param("t0", t0)
        .param("s0", s0)
        .param("j0", j0);

    let cz = column(z.as_complex(), j0)?;
    let cv = column(v.as_complex(), j0)?;
    let residual = vec_norm(&(cv * crate::linalg::C64::from(s0) - cz * crate::linalg::C64::from(t0)));
    report.at_most("column_residual", residual, tol.column);
    report.at_most("v_pivot_diagonal", v.get(j0, j0).norm(), tol.column);

    let cert_z = certify_minimal(z, j0, tol.certificate)?;
    let cert_v = certify_minimal(v, j0, tol.certificate)?;
    let crossing = op_norm(&(orbit_point(z, t0, b)? - orbit_point(v, s0, b)?))?;
    report.measured("crossing_residual", crossing);
    report.detail("z_certified", cert_z.is_certified());
    report.detail("v_certified", cert_v.is_certified());
    if !cert_z.is_certified() || !cert_v.is_certified() {
        report.inconclusive("a lift is not column-attained at j0");
    }
    if crossing > tol.endpoint {
        report.inconclusive(format!("curves do not meet: crossing residual {crossing:e}"));
    }
    Ok(report)
}

/// Two minimal lifts with the same initial velocity coincide.
pub fn unique_lift_check(
    z: &AntiHermitianOp,
    v: &AntiHermitianOp,
    b: &DiagonalOp,
    checks: &CheckSettings,
) -> Result<CheckReport> {
    if let Some((i, j)) = b.repeated_pair() {
        return Err(Error::DegenerateBase { i, j });
    }
    let tol = &checks.tolerances;
    let mut report = CheckReport::new("unique-lift");
    report.param("dim", z.dim());
    let diff = v.sub(z)?;
    let bm = b.to_matrix();
    let velocity = op_norm(&(diff.matrix() * &bm - &bm * diff.matrix()))?;
    let scale = z.norm().max(1.0);
    if !report.at_most("velocity_mismatch", velocity, tol.endpoint * scale) {
        report.note("initial velocities differ");
        return Ok(report);
    }
    // a certificate with a nonzero pivot column pins the minimizing diagonal
    let tol_c = tol.certificate;
    let unique = |op: &AntiHermitianOp| -> Result<bool> {
        Ok(column_certificate(op, tol_c)?.is_some_and(|c| c.nonzero_column_ok))
    };
    let (sz, _) = minimality_status(z, checks)?;
    let (sv, _) = minimality_status(v, checks)?;
    report.detail("z_minimality", sz).detail("v_minimality", sv);
    if sz == MinimalityStatus::NotCertified || sv == MinimalityStatus::NotCertified {
        report.inconclusive("a lift is not minimal");
        return Ok(report);
    }
    if !unique(z)? || !unique(v)? {
        report.inconclusive("no certificate of a unique minimizing diagonal");
        return Ok(report);
    }
    report.at_most("lift_difference", diff.norm(), tol.witness * scale);
    Ok(report)
}
