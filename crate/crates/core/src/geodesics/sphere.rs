//! Reduction of orbit curves to curves on the unit sphere.
//!
//! With `r0` the reflection fixing `e_j0` and negating its complement, the
//! map `u b u* -> u r0 u* xi` sends the orbit curve of a column-attained
//! lift to a great circle through `xi = i e_j0`.

use serde::Serialize;

use super::{curve_length, CheckSettings, OrbitCurve};
use crate::error::{Error, Result};
use crate::factory::DiagonalOp;
use crate::linalg::{column, exp_antihermitian, vec_norm, AntiHermitianOp, CMat, CVec, UnitaryMatrix, C64, I};
use crate::minimality::certify_minimal;
use crate::quadrature::integrate;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereState {
    pub j0: usize,
    #[serde(skip)]
    pub xi: CVec,
    /// `c_j0(z) / |c_j0(z)|`, once a lift is attached.
    #[serde(skip)]
    pub eta: Option<CVec>,
    #[serde(skip)]
    pub r0: CMat,
}

impl SphereState {
    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// Attaches the normalized column `j0` of `z`.
    pub fn with_lift(mut self, z: &AntiHermitianOp) -> Result<Self> {
        if z.dim() != self.dim() {
            return Err(Error::Shape {
                left: z.dim(),
                right: self.dim(),
            });
        }
        let c = column(z.as_complex(), self.j0)?;
        let nrm = vec_norm(&c);
        if nrm == 0.0 {
            return Err(Error::DegenerateColumn {
                row: self.j0,
                col: self.j0,
            });
        }
        self.eta = Some(c / C64::from(nrm));
        Ok(self)
    }
}

/// `r0 = 2P - I` with `P` the projection onto `e_j0`.
pub fn reflection_r0(j0: usize, n: usize) -> Result<SphereState> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "the sphere reduction needs n >= 2, got {n}"
        )));
    }
    if j0 >= n {
        return Err(Error::Index { index: j0, dim: n });
    }
    let r0 = CMat::from_fn(n, n, |i, j| match (i == j, i == j0) {
        (true, true) => C64::new(1.0, 0.0),
        (true, false) => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, 0.0),
    });
    let mut xi = CVec::zeros(n);
    xi[j0] = I;
    Ok(SphereState { j0, xi, eta: None, r0 })
}

/// `u r0 u* xi`.
pub fn sphere_map(u: &UnitaryMatrix, s: &SphereState) -> Result<CVec> {
    if u.dim() != s.dim() {
        return Err(Error::Shape {
            left: u.dim(),
            right: s.dim(),
        });
    }
    let m = u.matrix();
    Ok(m * (&s.r0 * (m.adjoint() * &s.xi)))
}

/// `|w'(t)|` for `w(t) = sphere_map(e^{tz})`, which equals
/// `|[z, r0] e^{-tz} xi|`.
pub fn sphere_speed(z: &AntiHermitianOp, s: &SphereState, t: f64) -> Result<f64> {
    let back = exp_antihermitian(z, -t)?;
    let comm = z.matrix() * &s.r0 - &s.r0 * z.matrix();
    Ok(vec_norm(&(comm * (back.matrix() * &s.xi))))
}

/// Distance of `v` from the real span of `a` and `b`, treating complex
/// vectors as real vectors of twice the length.
fn real_span_residual(v: &CVec, a: &CVec, b: &CVec) -> f64 {
    let dot = |x: &CVec, y: &CVec| x.iter().zip(y.iter()).map(|(p, q)| (p.conj() * q).re).sum::<f64>();
    let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
    let (va, vb) = (dot(a, v), dot(b, v));
    let det = aa * bb - ab * ab;
    let proj = if det.abs() <= 1e-300 {
        if aa > 0.0 {
            a * C64::from(va / aa)
        } else {
            CVec::zeros(v.len())
        }
    } else {
        let ca = (va * bb - vb * ab) / det;
        let cb = (vb * aa - va * ab) / det;
        a * C64::from(ca) + b * C64::from(cb)
    };
    vec_norm(&(v - proj))
}

/// Eigenvector identity, great-circle shape of the image curve, and the
/// ratio of sphere length to orbit length along `t_grid`.
pub fn sphere_geodesic_check(
    z: &AntiHermitianOp,
    b: &DiagonalOp,
    s: &SphereState,
    t_grid: &[f64],
    checks: &CheckSettings,
) -> Result<CheckReport> {
    let tol = &checks.tolerances;
    let cert = certify_minimal(z, s.j0, tol.certificate)?;
    if !cert.is_certified() {
        return Err(Error::Hypothesis(format!(
            "lift is not column-attained at {} (norm residual {:e})",
            s.j0,
            cert.norm_residual()
        )));
    }
    let s = match &s.eta {
        Some(_) => s.clone(),
        None => s.clone().with_lift(z)?,
    };
    let eta = s.eta.as_ref().expect("attached above");
    let norm = z.norm();

    let mut report = CheckReport::new("sphere");
    report.param("dim", z.dim()).param("j0", s.j0).param("t_grid", t_grid);

    let sum = &s.xi + eta;
    let eig = vec_norm(&(z.matrix() * &sum - &sum * (I * norm))) / vec_norm(&sum);
    report.at_most("eigenvector_residual", eig, tol.eigenvector);
    let r_xi = vec_norm(&(&s.r0 * &s.xi - &s.xi));
    let r_eta = vec_norm(&(&s.r0 * eta + eta));
    report.at_most("reflection_residual", r_xi.max(r_eta), 1e-12);

    let w0 = sphere_map(&UnitaryMatrix::identity(z.dim()), &s)?;
    report.at_most("start_residual", vec_norm(&(&w0 - &s.xi)), 1e-14);
    let comm = z.matrix() * &s.r0 - &s.r0 * z.matrix();
    let w0_dot = comm * &s.xi;

    let mut planarity = 0.0f64;
    let mut unit = 0.0f64;
    let mut speeds = Vec::with_capacity(t_grid.len());
    let mut fd_err = 0.0f64;
    let h = 1e-5;
    for &t in t_grid {
        let w = sphere_map(&exp_antihermitian(z, t)?, &s)?;
        planarity = planarity.max(real_span_residual(&w, &w0, &w0_dot));
        unit = unit.max((vec_norm(&w) - 1.0).abs());
        let v = sphere_speed(z, &s, t)?;
        let fd = vec_norm(
            &((sphere_map(&exp_antihermitian(z, t + h)?, &s)? - sphere_map(&exp_antihermitian(z, t - h)?, &s)?)
                / C64::from(2.0 * h)),
        );
        fd_err = fd_err.max((fd - v).abs());
        speeds.push(v);
    }
    report.at_most("planarity_residual", planarity, tol.planarity);
    report.at_most("unit_norm_residual", unit, 1e-12);
    report.at_most("speed_finite_difference", fd_err, 1e-8 * norm.max(1.0));
    report.at_most("sphere_speed_spread", spread(&speeds), tol.speed);

    // cumulative lengths between consecutive grid points
    let t_hi = t_grid.iter().cloned().fold(0.0, f64::max);
    let t_lo = t_grid.iter().cloned().fold(0.0, f64::min);
    let curve = OrbitCurve::new(z.clone(), b.clone(), t_lo, t_hi)?;
    let mut ratios = Vec::new();
    let (mut orbit_len, mut sphere_len, mut prev) = (0.0, 0.0, 0.0);
    let mut sorted: Vec<f64> = t_grid.iter().copied().filter(|t| *t > 0.0).collect();
    sorted.sort_by(f64::total_cmp);
    for t in sorted {
        orbit_len += curve_length(&curve, prev, t, &checks.quadrature, &checks.solver)?.value;
        sphere_len += integrate(|x| sphere_speed(z, &s, x), prev, t, &checks.quadrature)?.value;
        prev = t;
        ratios.push(sphere_len / orbit_len);
    }
    if let Some(&first) = ratios.first() {
        report.measured("length_ratio", first);
        let rel = spread(&ratios) / first;
        report.at_most("length_ratio_spread", rel, tol.length_rtol);
    }
    report.detail("sphere_speeds", &speeds).detail("length_ratios", &ratios);
    Ok(report)
}

fn spread(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - v.iter().cloned().fold(f64::INFINITY, f64::min)
}
