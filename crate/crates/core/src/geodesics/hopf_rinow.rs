//! Minimal geodesics to nearby orbit points.
//!
//! For a target `rho = e^k b e^{-k}`, every unitary reaching `rho` from `b`
//! is `e^k e^{iD}` for a real diagonal `D`. The probe searches that fiber
//! for a `D` whose logarithm `Z = log(e^k e^{iD})` is its own minimal lift,
//! so that `t -> e^{tZ} b e^{-tZ}` is a short curve ending at `rho`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{curve_length, CheckSettings, OrbitCurve};
use crate::error::{Error, Result};
use crate::factory::DiagonalOp;
use crate::linalg::{exp_antihermitian, log_unitary_with, spectral_norm, AntiHermitianOp, ComplexMatrix};
use crate::minimality::quotient_norm;
use crate::report::CheckReport;
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMethod {
    /// Moves `D` by the minimizing diagonal of the current logarithm until
    /// that diagonal vanishes.
    #[default]
    FiberFixedPoint,
    /// Compass search on `|log(e^k e^{iD})|`. Slower, and it can stall
    /// where the largest singular value of the logarithm is repeated.
    PatternSearch,
}

impl FromStr for ProbeMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-point" | "fiber-fixed-point" => Ok(Self::FiberFixedPoint),
            "pattern" | "pattern-search" => Ok(Self::PatternSearch),
            other => Err(Error::InvalidInput(format!("unknown probe method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSettings {
    pub checks: CheckSettings,
    pub method: ProbeMethod,
    /// Largest admissible `|k|`.
    pub radius: f64,
    pub max_iter: usize,
    /// Also integrate the length of the resulting geodesic.
    pub check_length: bool,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            checks: CheckSettings::default(),
            method: ProbeMethod::default(),
            radius: std::f64::consts::LN_2 / 8.0,
            max_iter: 200,
            check_length: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub z_star: AntiHermitianOp,
    /// The real diagonal `D` with `e^{Z*} = e^k e^{iD}`.
    pub fiber_diagonal: Vec<f64>,
    pub iterations: usize,
    pub endpoint_residual: f64,
    pub norm: f64,
    pub quotient_norm: f64,
    /// `|Z*| - quotient_norm(Z*)`.
    pub witness_gap: f64,
    /// Norms of the off-diagonal and diagonal parts of `Z*`.
    pub off_diagonal_norm: f64,
    pub diagonal_norm: f64,
    pub length: Option<f64>,
    pub converged: bool,
}

fn fiber_log(k: &AntiHermitianOp, d: &[f64], branch_tol: f64) -> Result<AntiHermitianOp> {
    let diag = AntiHermitianOp::zeros(k.dim()).add_imaginary_diagonal(d)?;
    let u = exp_antihermitian(k, 1.0)?.compose(&exp_antihermitian(&diag, 1.0)?)?;
    log_unitary_with(&u, branch_tol)
}

fn endpoint_residual(z: &AntiHermitianOp, target: &ComplexMatrix, b: &DiagonalOp) -> Result<f64> {
    let reached = exp_antihermitian(z, 1.0)?.conjugate(&b.to_matrix());
    Ok(spectral_norm(&ComplexMatrix::new(reached - target.matrix())?))
}

pub fn hopf_rinow_probe(k: &AntiHermitianOp, b: &DiagonalOp, settings: &ProbeSettings) -> Result<ProbeResult> {
    if k.dim() != b.dim() {
        return Err(Error::Shape {
            left: k.dim(),
            right: b.dim(),
        });
    }
    let kn = k.norm();
    if kn > settings.radius {
        return Err(Error::Window {
            value: kn,
            window: format!("[0, {}]", settings.radius),
        });
    }
    let stray = k.diagonal().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if stray > settings.checks.tolerances.anti_hermitian {
        return Err(Error::InvalidInput(format!(
            "k must have zero diagonal, found {stray:e}"
        )));
    }
    let tol = &settings.checks.tolerances;
    let target = ComplexMatrix::new(exp_antihermitian(k, 1.0)?.conjugate(&b.to_matrix()))?;
    let n = k.dim();
    // stop well inside the witness tolerance
    let goal = 0.01 * tol.witness;

    let mut d = vec![0.0; n];
    let mut iterations = 0;
    let mut solver = settings.checks.solver.clone();
    let (z, qn) = match settings.method {
        ProbeMethod::FiberFixedPoint => {
            let mut z = fiber_log(k, &d, tol.branch_cut_angle)?;
            let mut qn = quotient_norm(&z, &solver)?;
            while z.norm() - qn.value > goal && iterations < settings.max_iter {
                let step = qn.argmin_diagonal.values();
                for (dj, sj) in d.iter_mut().zip(&step) {
                    *dj += sj;
                }
                z = fiber_log(k, &d, tol.branch_cut_angle)?;
                solver.warm_start = Some(vec![0.0; n]);
                qn = quotient_norm(&z, &solver)?;
                iterations += 1;
            }
            (z, qn)
        }
        ProbeMethod::PatternSearch => {
            let g = |d: &[f64]| -> Result<f64> { Ok(fiber_log(k, d, tol.branch_cut_angle)?.norm()) };
            let mut best = g(&d)?;
            let mut step = 0.5 * kn.max(1e-3);
            while step > 1e-12 && iterations < settings.max_iter {
                let mut improved = false;
                for j in 0..n {
                    for sign in [1.0, -1.0] {
                        d[j] += sign * step;
                        let v = g(&d)?;
                        if v < best {
                            best = v;
                            improved = true;
                            break;
                        }
                        d[j] -= sign * step;
                    }
                }
                if !improved {
                    step *= 0.5;
                }
                iterations += 1;
            }
            let z = fiber_log(k, &d, tol.branch_cut_angle)?;
            let qn = quotient_norm(&z, &solver)?;
            (z, qn)
        }
    };
    let norm = z.norm();
    let witness_gap = norm - qn.value;
    let length = if settings.check_length {
        let curve = OrbitCurve::new(z.clone(), b.clone(), 0.0, 1.0)?;
        Some(curve_length(&curve, 0.0, 1.0, &settings.checks.quadrature, &settings.checks.solver)?.value)
    } else {
        None
    };
    Ok(ProbeResult {
        endpoint_residual: endpoint_residual(&z, &target, b)?,
        off_diagonal_norm: z.off_diagonal().norm(),
        diagonal_norm: z.sub(&z.off_diagonal())?.norm(),
        converged: witness_gap <= tol.witness,
        fiber_diagonal: d,
        iterations,
        norm,
        quotient_norm: qn.value,
        witness_gap,
        length,
        z_star: z,
    })
}

impl ProbeResult {
    pub fn to_check(&self, checks: &CheckSettings) -> CheckReport {
        let tol = &checks.tolerances;
        let mut report = CheckReport::new("hopf-rinow");
        report
            .param("dim", self.z_star.dim())
            .param("iterations", self.iterations);
        report.at_most("endpoint_residual", self.endpoint_residual, tol.endpoint);
        report.at_most("witness_gap", self.witness_gap, tol.witness);
        report.measured("norm", self.norm);
        report.measured("off_diagonal_norm", self.off_diagonal_norm);
        report.measured("diagonal_norm", self.diagonal_norm);
        if let Some(l) = self.length {
            report.at_most(
                "length_error",
                (l - self.norm).abs(),
                tol.length_rtol * self.norm.max(1.0),
            );
        }
        report
    }
}

/// Random zero-diagonal `k` of norm `norm`, one per trial.
pub fn random_targets(dim: usize, norm: f64, trials: usize, seed: u64) -> Vec<AntiHermitianOp> {
    let mut rng = SeededRng::new(seed);
    (0..trials)
        .map(|_| rng.anti_hermitian_zero_diagonal(dim, norm))
        .collect()
}

/// Runs the probe on `trials` random targets at each radius and returns the
/// largest radius at which every run passed, with per-radius success counts.
pub fn largest_successful_radius(
    b: &DiagonalOp,
    radii: &[f64],
    trials: usize,
    seed: u64,
    settings: &ProbeSettings,
) -> Result<(Option<f64>, Vec<(f64, usize)>)> {
    let mut counts = Vec::with_capacity(radii.len());
    let mut best = None;
    for &r in radii {
        let cfg = ProbeSettings {
            radius: settings.radius.max(r),
            ..settings.clone()
        };
        let mut ok = 0;
        for k in random_targets(b.dim(), r, trials, seed) {
            let outcome = hopf_rinow_probe(&k, b, &cfg).map(|p| p.to_check(&cfg.checks).passed());
            if matches!(outcome, Ok(true)) {
                ok += 1;
            }
        }
        if ok == trials && best.is_none_or(|b| r > b) {
            best = Some(r);
        }
        counts.push((r, ok));
    }
    Ok((best, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{build_b, OperatorFamily, TruncationSpec};

    #[test]
    fn zero_target() {
        let b = build_b(6).unwrap();
        let p = hopf_rinow_probe(&AntiHermitianOp::zeros(6), &b, &ProbeSettings::default()).unwrap();
        assert_eq!(p.norm, 0.0);
        assert!(p.to_check(&CheckSettings::default()).passed());
    }

    #[test]
    fn random_targets_reach_minimal_geodesics() {
        let b = build_b(8).unwrap();
        let settings = ProbeSettings {
            check_length: true,
            ..ProbeSettings::default()
        };
        for k in random_targets(8, 0.05, 3, 11) {
            let p = hopf_rinow_probe(&k, &b, &settings).unwrap();
            let r = p.to_check(&settings.checks);
            assert!(r.passed(), "{r:?}");
            assert!(p.endpoint_residual < 1e-8);
        }
    }

    #[test]
    fn pattern_search_agrees() {
        let b = build_b(4).unwrap();
        let k = random_targets(4, 0.05, 1, 3).pop().unwrap();
        let fixed = hopf_rinow_probe(&k, &b, &ProbeSettings::default()).unwrap();
        let settings = ProbeSettings {
            method: ProbeMethod::PatternSearch,
            max_iter: 2000,
            ..ProbeSettings::default()
        };
        let pattern = hopf_rinow_probe(&k, &b, &settings).unwrap();
        assert!(pattern.endpoint_residual < 1e-8);
        // compass search stalls on the kinks of the norm
        assert!(pattern.norm >= fixed.norm - 1e-9);
        assert!(pattern.norm - fixed.norm < 5e-3);
    }

    #[test]
    fn column_attained_target() {
        let fam = OperatorFamily::build(&TruncationSpec::standard(8)).unwrap();
        let b = build_b(8).unwrap();
        let k = fam.z2.off_diagonal().scale(0.02);
        let p = hopf_rinow_probe(&k, &b, &ProbeSettings::default()).unwrap();
        assert!(p.witness_gap.abs() < 1e-5);
    }

    #[test]
    fn outside_radius() {
        let b = build_b(4).unwrap();
        let k = random_targets(4, 1.0, 1, 0).pop().unwrap();
        assert!(matches!(
            hopf_rinow_probe(&k, &b, &ProbeSettings::default()),
            Err(Error::Window { .. })
        ));
        let (best, counts) = largest_successful_radius(&b, &[0.02, 0.05], 2, 1, &ProbeSettings::default()).unwrap();
        assert_eq!(best, Some(0.05));
        assert_eq!(counts, vec![(0.02, 2), (0.05, 2)]);
    }
}
