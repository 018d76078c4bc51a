//! Quantitative obstruction to a second minimal lift.
//!
//! If a minimal lift `V` reached `gamma(t0)` at time `s0`, its diagonal would
//! be forced to `V_jj = (t0 z_jj - i (t0 - s0) |z|) / s0`. An admissible
//! diagonal has a single limit along the tail, so the distance of the forced
//! diagonal from every scalar measures how far such a `V` is from existing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factory::{oscillation_profile, tail_range, DiagonalOp};
use crate::linalg::{AntiHermitianOp, C64, I};
use crate::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObstructionRow {
    pub s0: f64,
    /// `min_theta max_{j in tail} |V_jj - i theta|`.
    pub deviation: f64,
    /// `(t0 / s0) * gap / 2`.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub t0: f64,
    pub gap: f64,
    pub hypothesis_met: bool,
    pub rows: Vec<ObstructionRow>,
    /// Smallest `deviation / threshold` over the grid.
    pub min_ratio: Option<f64>,
    /// Largest relative spread of `deviation * s0 / t0` over the grid.
    pub scaling_spread: f64,
    pub max_deviation: f64,
}

/// `k * s_max / count` for `k = 1..=count`.
pub fn s0_grid(s_max: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| k as f64 * s_max / count as f64).collect()
}

/// `min_theta max_k |values_k - i theta|`, by ternary search on the
/// convex function of `theta`.
fn distance_to_scalars(values: &[C64]) -> f64 {
    let worst = |theta: f64| values.iter().map(|v| (v - I * theta).norm()).fold(0.0, f64::max);
    let (mut lo, mut hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
        (l.min(v.im), h.max(v.im))
    });
    if lo > hi {
        return 0.0;
    }
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if worst(a) <= worst(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    worst(0.5 * (lo + hi))
}

/// Tail fraction shared by the deviation and the oscillation gap.
pub const OBSTRUCTION_TAIL: f64 = 0.5;

pub fn obstruction_gap(z: &AntiHermitianOp, t0: f64, s0_grid: &[f64]) -> Result<ObstructionReport> {
    let norm = z.norm();
    let t_max = std::f64::consts::LN_2 / (8.0 * norm);
    if !(t0 > 0.0 && t0 < t_max) {
        return Err(Error::Window {
            value: t0,
            window: format!("(0, {t_max})"),
        });
    }
    if s0_grid.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidInput("s0 grid must be positive".into()));
    }
    let diag = DiagonalOp::diagonal_of(z);
    let gap = oscillation_profile(&diag, OBSTRUCTION_TAIL)?.gap;
    let tail = tail_range(z.dim(), OBSTRUCTION_TAIL);
    let mut rows = Vec::with_capacity(s0_grid.len());
    for &s0 in s0_grid {
        let forced: Vec<C64> = tail
            .clone()
            .map(|j| (diag.get(j) * t0 - I * ((t0 - s0) * norm)) / s0)
            .collect();
        rows.push(ObstructionRow {
            s0,
            deviation: distance_to_scalars(&forced),
            threshold: 0.5 * gap * t0 / s0,
        });
    }
    let hypothesis_met = gap > 0.0;
    let min_ratio = hypothesis_met.then(|| {
        rows.iter()
            .map(|r| r.deviation / r.threshold)
            .fold(f64::INFINITY, f64::min)
    });
    let scaled: Vec<f64> = rows.iter().map(|r| r.deviation * r.s0 / t0).collect();
    let hi = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let scaling_spread = if hi > 0.0 { (hi - lo) / hi } else { 0.0 };
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(ObstructionReport {
        t0,
        gap,
        hypothesis_met,
        rows,
        min_ratio,
        scaling_spread,
        max_deviation,
    })
}

impl ObstructionReport {
    /// Verdict against `margin * threshold` at every grid point; zero gap
    /// leaves the report inconclusive.
    pub fn to_check(&self, margin: f64, control_tol: f64) -> CheckReport {
        let mut report = CheckReport::new("thm59");
        report
            .param("t0", self.t0)
            .param("grid_points", self.rows.len())
            .param("margin", margin);
        report.measured("gap", self.gap);
        report.detail("hypothesis_met", self.hypothesis_met);
        report.detail("rows", &self.rows);
        match self.min_ratio {
            Some(ratio) => {
                report.at_least("min_deviation_ratio", ratio, margin);
                report.at_most("scaling_spread", self.scaling_spread, 1e-2);
                report.detail("obstruction_present", ratio >= margin);
            }
            None => {
                report.at_most("control_deviation", self.max_deviation, control_tol);
                report.detail("obstruction_present", false);
                report.inconclusive("diagonal has no oscillation gap, so no obstruction is expected");
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{OperatorFamily, TruncationSpec};

    #[test]
    fn distance_to_scalars_is_half_range() {
        let v = [I * 1.0, I * 3.0, I * 2.0];
        assert!((distance_to_scalars(&v) - 1.0).abs() < 1e-12);
        assert_eq!(distance_to_scalars(&[I * 0.5; 4]), 0.0);
    }

    #[test]
    fn z2_obstruction_and_control() {
        let fam = OperatorFamily::build(&TruncationSpec::standard(64)).unwrap();
        let norm = fam.z2.norm();
        let t0 = std::f64::consts::LN_2 / (16.0 * norm);
        let grid = s0_grid(std::f64::consts::FRAC_PI_2 / norm, 20);
        let rep = obstruction_gap(&fam.z2, t0, &grid).unwrap();
        assert!(rep.hypothesis_met);
        assert!(rep.min_ratio.unwrap() >= 1.0 - 1e-12);
        assert!(rep.scaling_spread < 1e-10);
        assert!(rep.to_check(0.9, 1e-6).passed());

        let constant = fam.zo.add_imaginary_diagonal(&[0.25; 64]).unwrap();
        let rep = obstruction_gap(&constant, t0, &grid).unwrap();
        assert!(!rep.hypothesis_met);
        assert!(rep.max_deviation < 1e-12);
        let check = rep.to_check(0.9, 1e-6);
        assert_eq!(check.verdict, crate::report::Verdict::Inconclusive);

        assert!(obstruction_gap(&fam.z2, 1.0, &grid).is_err());
    }
}
