//! Does a unitary look like a scalar plus a compact at this truncation?

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factory::tail_range;
use crate::linalg::{
    exp_antihermitian, log_unitary, spectral_norm, AntiHermitianOp, ComplexMatrix, UnitaryMatrix, C64,
};
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    /// Argument of the mean trailing diagonal entry.
    pub theta: f64,
    /// `|u - e^{i theta} I|` on the trailing block.
    pub tail_residual: f64,
    /// `|e^K e^{i theta} - u|` with `K = log(u e^{-i theta})`.
    pub decomposition_residual: f64,
    pub tail_start: usize,
}

/// Tail residual below which the trailing block counts as scalar.
pub const SCALAR_TAIL_TOL: f64 = 1e-3;

pub fn unitary_membership_diagnostic(u: &UnitaryMatrix, tail_fraction: f64) -> Result<MembershipReport> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "tail fraction {tail_fraction} not in (0, 1]"
        )));
    }
    let n = u.dim();
    let m = u.matrix();
    let tail = tail_range(n, tail_fraction);
    let mean = tail.clone().map(|k| m[(k, k)]).sum::<C64>() / tail.len() as f64;
    let theta = mean.arg();
    let phase = C64::from_polar(1.0, theta);
    let len = tail.len();
    let block = m.view((tail.start, tail.start), (len, len)).into_owned();
    let shifted = block - crate::linalg::CMat::identity(len, len) * phase;
    let tail_residual = spectral_norm(&ComplexMatrix::new(shifted)?);

    let unphased = UnitaryMatrix::new(ComplexMatrix::new(m * phase.conj())?)?;
    let decomposition_residual = match log_unitary(&unphased) {
        Ok(k) => {
            let rebuilt = exp_antihermitian(&k, 1.0)?.matrix() * phase;
            spectral_norm(&ComplexMatrix::new(rebuilt - m)?)
        }
        // an eigenvalue on the branch cut leaves no principal logarithm
        Err(Error::BranchCut { .. }) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(MembershipReport {
        theta,
        tail_residual,
        decomposition_residual,
        tail_start: tail.start,
    })
}

impl MembershipReport {
    pub fn to_check(&self, tol: f64) -> CheckReport {
        let mut report = CheckReport::new("membership");
        report.param("tail_start", self.tail_start);
        report.measured("theta", self.theta);
        report.measured("tail_residual", self.tail_residual);
        report.at_most("decomposition_residual", self.decomposition_residual, tol);
        report.detail(
            "tail_pattern",
            if self.tail_residual <= SCALAR_TAIL_TOL {
                "scalar"
            } else {
                "non-scalar"
            },
        );
        report
    }
}

/// `exp(t (z - Diag z)) e^{i theta}`.
pub fn scalar_times_compact(z: &AntiHermitianOp, t: f64, theta: f64) -> Result<UnitaryMatrix> {
    let u = exp_antihermitian(&z.off_diagonal(), t)?;
    UnitaryMatrix::new(ComplexMatrix::new(u.matrix() * C64::from_polar(1.0, theta))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{OperatorFamily, TruncationSpec};

    #[test]
    fn scalar_unitary() {
        let theta = std::f64::consts::FRAC_PI_3;
        let u = UnitaryMatrix::new(
            ComplexMatrix::new(crate::linalg::CMat::identity(6, 6) * C64::from_polar(1.0, theta)).unwrap(),
        )
        .unwrap();
        let r = unitary_membership_diagnostic(&u, 0.5).unwrap();
        assert!((r.theta - theta).abs() < 1e-15);
        assert!(r.tail_residual < 1e-15);
        assert!(r.decomposition_residual < 1e-14);
    }

    #[test]
    fn compact_perturbation_and_oscillant_control() {
        let fam = OperatorFamily::build(&TruncationSpec::standard(64)).unwrap();
        let u = scalar_times_compact(&fam.z2, 0.1, 0.2).unwrap();
        let r = unitary_membership_diagnostic(&u, 0.5).unwrap();
        assert!((r.theta - 0.2).abs() < 1e-3);
        assert!(r.tail_residual < 1e-3);
        assert!(r.to_check(1e-10).passed());

        let alt: Vec<f64> = (0..64).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let d = AntiHermitianOp::zeros(64).add_imaginary_diagonal(&alt).unwrap();
        let r = unitary_membership_diagnostic(&exp_antihermitian(&d, 1.0).unwrap(), 0.5).unwrap();
        assert!(r.tail_residual > 0.5);
        assert_eq!(r.to_check(1e-10).details["tail_pattern"], "non-scalar");
    }
}
