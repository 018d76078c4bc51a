//! Curves on the unitary orbit of a Hermitian diagonal `b` and their
//! Finsler lengths.
//!
//! A point of the orbit is `c = u b u*`. A tangent vector at `c` is a
//! commutator `x = y c - c y` with `y` anti-Hermitian, and its length is the
//! quotient norm `inf_D |u* y u + D|` over anti-Hermitian diagonals `D`.
//! The one-parameter curves `t -> e^{tZ} b e^{-tZ}` have constant speed,
//! and when `Z` is a minimal lift they are the short curves checked by
//! [`verify_short_curve`].

mod hopf_rinow;
mod lemmas;
mod membership;
mod obstruction;
mod sphere;

pub use hopf_rinow::{
    hopf_rinow_probe, largest_successful_radius, random_targets, ProbeMethod, ProbeResult, ProbeSettings,
};
pub use lemmas::{
    bch_log_bound, bch_log_bound_check, bch_random_trials, column_multiple_check, crossing_factorization_check,
    scalar_shift_pair, unique_lift_check, CROSSING_WINDOW,
};
pub use membership::{scalar_times_compact, unitary_membership_diagnostic, MembershipReport, SCALAR_TAIL_TOL};
pub use obstruction::{obstruction_gap, s0_grid, ObstructionReport, ObstructionRow, OBSTRUCTION_TAIL};
pub use sphere::{reflection_r0, sphere_geodesic_check, sphere_map, sphere_speed, SphereState};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factory::{DiagonalOp, HermitianKind};
use crate::linalg::{
    column, eigh, exp_antihermitian, vec_norm, AntiHermitianOp, CMat, ComplexMatrix, UnitaryMatrix, C64,
};
use crate::minimality::{certify_minimal, quotient_norm, MinimalityCertificate, QuotientNormResult, SolverSettings};
use crate::quadrature::{integrate, QuadratureResult, QuadratureSettings};
use crate::report::CheckReport;
use crate::rng::SeededRng;
use crate::tolerances::Tolerances;

/// Tolerances and numerical settings shared by the geodesic checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSettings {
    pub tolerances: Tolerances,
    pub quadrature: QuadratureSettings,
    pub solver: SolverSettings,
}

impl Default for CheckSettings {
    fn default() -> Self {
        let tolerances = Tolerances::default();
        Self {
            quadrature: QuadratureSettings {
                atol: tolerances.quadrature_atol,
                ..QuadratureSettings::default()
            },
            tolerances,
            solver: SolverSettings::default(),
        }
    }
}

/// `u m u*` for a Hermitian diagonal `m` given by its values.
fn conjugate_diagonal(u: &CMat, values: &[f64]) -> CMat {
    let mut scaled = u.clone();
    for (k, v) in values.iter().enumerate() {
        scaled.column_mut(k).scale_mut(*v);
    }
    let c = scaled * u.adjoint();
    (&c + c.adjoint()).map(|z| z * 0.5)
}

fn require_hermitian_base(b: &DiagonalOp) -> Result<()> {
    if b.kind() != HermitianKind::Hermitian {
        return Err(Error::InvalidInput(
            "the base point must be a Hermitian diagonal".into(),
        ));
    }
    Ok(())
}

/// A point `c = u b u*` of the orbit of `b`, remembered with `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    c: ComplexMatrix,
    u: UnitaryMatrix,
    base: DiagonalOp,
}

impl OrbitPoint {
    pub fn new(u: UnitaryMatrix, base: &DiagonalOp) -> Result<Self> {
        require_hermitian_base(base)?;
        if u.dim() != base.dim() {
            return Err(Error::Shape {
                left: u.dim(),
                right: base.dim(),
            });
        }
        let c = ComplexMatrix::new(conjugate_diagonal(u.matrix(), &base.values()))?;
        Ok(Self {
            c,
            u,
            base: base.clone(),
        })
    }

    /// `b` itself.
    pub fn base_point(base: &DiagonalOp) -> Result<Self> {
        Self::new(UnitaryMatrix::identity(base.dim()), base)
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn u(&self) -> &UnitaryMatrix {
        &self.u
    }

    pub fn base(&self) -> &DiagonalOp {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// Largest distance between the sorted eigenvalues of `c` and of `b`.
    pub fn spectrum_residual(&self) -> Result<f64> {
        let (w, _) = eigh(self.c.matrix())?;
        let mut ours: Vec<f64> = w.iter().copied().collect();
        let mut theirs = self.base.values();
        ours.sort_by(f64::total_cmp);
        theirs.sort_by(f64::total_cmp);
        Ok(ours.iter().zip(&theirs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }
}

/// `t -> e^{tZ} b e^{-tZ}` on `[t_lo, t_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitCurve {
    pub z: AntiHermitianOp,
    pub b: DiagonalOp,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl OrbitCurve {
    pub fn new(z: AntiHermitianOp, b: DiagonalOp, t_lo: f64, t_hi: f64) -> Result<Self> {
        require_hermitian_base(&b)?;
        if z.dim() != b.dim() {
            return Err(Error::Shape {
                left: z.dim(),
                right: b.dim(),
            });
        }
        if !(t_lo <= t_hi) {
            return Err(Error::InvalidInput(format!("empty domain [{t_lo}, {t_hi}]")));
        }
        Ok(Self { z, b, t_lo, t_hi })
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t < self.t_lo || t > self.t_hi {
            return Err(Error::Window {
                value: t,
                window: format!("[{}, {}]", self.t_lo, self.t_hi),
            });
        }
        Ok(())
    }
}

pub fn curve_point(curve: &OrbitCurve, t: f64) -> Result<OrbitPoint> {
    curve.check_domain(t)?;
    OrbitPoint::new(exp_antihermitian(&curve.z, t)?, &curve.b)
}

/// `z c - c z`, Hermitian when `z` is anti-Hermitian and `c` Hermitian.
pub fn tangent(z: &AntiHermitianOp, c: &OrbitPoint) -> Result<ComplexMatrix> {
    if z.dim() != c.dim() {
        return Err(Error::Shape {
            left: z.dim(),
            right: c.dim(),
        });
    }
    let x = ComplexMatrix::new(z.matrix() * c.c().matrix() - c.c().matrix() * z.matrix())?;
    let scale = z.as_complex().max_abs() * c.c().max_abs();
    let r = x.hermitian_residual();
    if r > 1e-12 * scale.max(1.0) {
        return Err(Error::Numerical(format!("tangent vector has Hermitian residual {r:e}")));
    }
    Ok(x)
}

/// `gamma'(t) = e^{tZ} (Zb - bZ) e^{-tZ}` together with `gamma(t)`.
pub fn velocity(curve: &OrbitCurve, t: f64) -> Result<(OrbitPoint, ComplexMatrix)> {
    let p = curve_point(curve, t)?;
    let at_base = tangent(&curve.z, &OrbitPoint::base_point(&curve.b)?)?;
    let x = ComplexMatrix::new(p.u().conjugate(at_base.matrix()))?;
    Ok((p, x))
}

/// The zero-diagonal anti-Hermitian `y` with `u* x u = y b - b y`.
pub fn tangent_lift(x: &ComplexMatrix, c: &OrbitPoint) -> Result<AntiHermitianOp> {
    let b = c.base().values();
    if let Some((i, j)) = c.base().repeated_pair() {
        return Err(Error::DegenerateBase { i, j });
    }
    if x.dim() != c.dim() {
        return Err(Error::Shape {
            left: x.dim(),
            right: c.dim(),
        });
    }
    let u = c.u().matrix();
    let h = u.adjoint() * x.matrix() * u;
    let n = h.nrows();
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let stray = (0..n).map(|k| h[(k, k)].norm()).fold(0.0, f64::max);
    if stray > 1e-8 * scale {
        return Err(Error::InvalidInput(format!(
            "not a tangent vector at this point: pulled-back diagonal reaches {stray:e}"
        )));
    }
    let y = CMat::from_fn(n, n, |j, k| {
        if j == k {
            C64::new(0.0, 0.0)
        } else {
            h[(j, k)] / (b[k] - b[j])
        }
    });
    AntiHermitianOp::project(&y)
}

/// Quotient-norm solve behind the Finsler length of `x` at `c`.
pub fn finsler_solve_at(x: &ComplexMatrix, c: &OrbitPoint, solver: &SolverSettings) -> Result<QuotientNormResult> {
    quotient_norm(&tangent_lift(x, c)?, solver)
}

pub fn finsler_norm_at(x: &ComplexMatrix, c: &OrbitPoint, solver: &SolverSettings) -> Result<f64> {
    Ok(finsler_solve_at(x, c, solver)?.value)
}

/// Finsler speed of `curve` at `t`.
pub fn curve_speed(curve: &OrbitCurve, t: f64, solver: &SolverSettings) -> Result<QuotientNormResult> {
    let (p, x) = velocity(curve, t)?;
    finsler_solve_at(&x, &p, solver)
}

/// Integrates a speed function whose quotient-norm solves warm-start from
/// the previous minimizer.
fn integrate_speed(
    mut speed: impl FnMut(f64, &SolverSettings) -> Result<QuotientNormResult>,
    t0: f64,
    t1: f64,
    quad: &QuadratureSettings,
    solver: &SolverSettings,
) -> Result<QuadratureResult> {
    let mut cfg = solver.clone();
    integrate(
        |t| {
            let r = speed(t, &cfg)?;
            cfg.warm_start = Some(r.argmin_diagonal.values());
            Ok(r.value)
        },
        t0,
        t1,
        quad,
    )
}

/// Finsler length of `curve` over `[t0, t1]`.
pub fn curve_length(
    curve: &OrbitCurve,
    t0: f64,
    t1: f64,
    quad: &QuadratureSettings,
    solver: &SolverSettings,
) -> Result<QuadratureResult> {
    curve.check_domain(t0)?;
    curve.check_domain(t1)?;
    integrate_speed(|t, cfg| curve_speed(curve, t, cfg), t0, t1, quad, solver)
}

/// Endpoint-pinned deformation of the lift `sZ`:
/// `L(s) = sZ + eps phi(s) P` with `phi(s) = (s/T)(1 - s/T)(alpha + beta s/T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedPath {
    pub z: AntiHermitianOp,
    pub direction: AntiHermitianOp,
    pub eps: f64,
    pub alpha: f64,
    pub beta: f64,
    pub t_end: f64,
}

impl PerturbedPath {
    fn phi(&self, s: f64) -> (f64, f64) {
        let r = s / self.t_end;
        let cubic = r * (1.0 - r) * (self.alpha + self.beta * r);
        // d/ds of r(1-r)(alpha + beta r)
        let slope = ((1.0 - 2.0 * r) * (self.alpha + self.beta * r) + r * (1.0 - r) * self.beta) / self.t_end;
        (cubic, slope)
    }

    pub fn lift(&self, s: f64) -> Result<AntiHermitianOp> {
        let (p, _) = self.phi(s);
        self.z.scale(s).add(&self.direction.scale(self.eps * p))
    }

    pub fn lift_derivative(&self, s: f64) -> Result<AntiHermitianOp> {
        let (_, dp) = self.phi(s);
        self.z.add(&self.direction.scale(self.eps * dp))
    }

    /// `e^{-L} d/ds e^{L}`, from the divided differences of the exponential
    /// in the eigenbasis of `L`.
    pub fn pulled_back_velocity(&self, s: f64) -> Result<AntiHermitianOp> {
        let l = self.lift(s)?;
        let dl = self.lift_derivative(s)?;
        let (lam, q) = eigh(&l.to_hermitian())?;
        let n = lam.len();
        let g = q.adjoint() * dl.matrix() * &q;
        let m = CMat::from_fn(n, n, |j, k| {
            let (a, b) = (lam[j], lam[k]);
            let half = 0.5 * (a - b);
            let sinc = if half.abs() < 1e-8 {
                1.0 - half * half / 6.0
            } else {
                half.sin() / half
            };
            // e^{-i a} (e^{i a} - e^{i b}) / (i (a - b))
            g[(j, k)] * C64::from_polar(sinc, 0.5 * (b - a))
        });
        AntiHermitianOp::project(&(&q * m * q.adjoint()))
    }

    pub fn speed(&self, s: f64, solver: &SolverSettings) -> Result<QuotientNormResult> {
        quotient_norm(&self.pulled_back_velocity(s)?.off_diagonal(), solver)
    }

    pub fn point(&self, s: f64, b: &DiagonalOp) -> Result<OrbitPoint> {
        OrbitPoint::new(exp_antihermitian(&self.lift(s)?, 1.0)?, b)
    }

    pub fn length(&self, quad: &QuadratureSettings, solver: &SolverSettings) -> Result<QuadratureResult> {
        integrate_speed(|s, cfg| self.speed(s, cfg), 0.0, self.t_end, quad, solver)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortCurveSettings {
    pub checks: CheckSettings,
    pub competitors: usize,
    pub seed: u64,
    /// Deformation size relative to `t |z|`.
    pub amplitude: f64,
    pub speed_samples: usize,
}

impl Default for ShortCurveSettings {
    fn default() -> Self {
        Self {
            checks: CheckSettings::default(),
            competitors: 20,
            seed: 0,
            amplitude: 0.1,
            speed_samples: 5,
        }
    }
}

/// Columns whose norm reaches `|z|` within `tol`, largest first.
pub fn attaining_columns(z: &AntiHermitianOp, tol: f64) -> Result<Vec<usize>> {
    let norm = z.norm();
    let mut cols = Vec::new();
    for j in 0..z.dim() {
        let c = vec_norm(&column(z.as_complex(), j)?);
        if c >= norm - tol {
            cols.push((j, c));
        }
    }
    cols.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(cols.into_iter().map(|(j, _)| j).collect())
}

/// The first certifying column among those attaining the norm.
pub fn column_certificate(z: &AntiHermitianOp, tol: f64) -> Result<Option<MinimalityCertificate>> {
    for j0 in attaining_columns(z, tol * z.norm().max(1.0))? {
        let cert = certify_minimal(z, j0, tol)?;
        if cert.is_certified() {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalityStatus {
    CertifiedMinimal,
    /// The quotient norm matches `|z|` although no column certificate holds.
    Witnessed,
    NotCertified,
}

/// Column certificate first, quotient-norm witness second. Returns the
/// status and `|z| - quotient_norm(z)`, or the certificate's norm
/// residual when a column certifies.
pub fn minimality_status(z: &AntiHermitianOp, checks: &CheckSettings) -> Result<(MinimalityStatus, f64)> {
    if let Some(cert) = column_certificate(z, checks.tolerances.certificate)? {
        return Ok((MinimalityStatus::CertifiedMinimal, cert.norm_residual()));
    }
    let qn = quotient_norm(z, &checks.solver)?;
    let deficit = z.norm() - qn.value;
    if deficit <= checks.tolerances.witness {
        Ok((MinimalityStatus::Witnessed, deficit))
    } else {
        Ok((MinimalityStatus::NotCertified, deficit))
    }
}

/// Checks that `t -> e^{tz} b e^{-tz}` on `[0, t]` has length `t |z|` and
/// constant speed, and that randomly deformed paths with the same
/// endpoints are no shorter.
pub fn verify_short_curve(
    z: &AntiHermitianOp,
    b: &DiagonalOp,
    t: f64,
    settings: &ShortCurveSettings,
) -> Result<CheckReport> {
    let norm = z.norm();
    let t_max = std::f64::consts::FRAC_PI_2 / norm;
    if !(t > 0.0 && t <= t_max) {
        return Err(Error::Window {
            value: t,
            window: format!("(0, {t_max}]"),
        });
    }
    let tol = &settings.checks.tolerances;
    let mut report = CheckReport::new("short-curve");
    report
        .param("dim", z.dim())
        .param("t", t)
        .param("norm_z", norm)
        .param("competitors", settings.competitors)
        .param("seed", settings.seed);

    let (status, deficit) = minimality_status(z, &settings.checks)?;
    report.detail("minimality", status);
    report.measured("minimality_deficit", deficit);
    if status == MinimalityStatus::NotCertified {
        report.fail("lift is not minimal: its quotient norm is below its norm");
        return Ok(report);
    }

    let curve = OrbitCurve::new(z.clone(), b.clone(), 0.0, t)?;
    let solver = &settings.checks.solver;
    let quad = &settings.checks.quadrature;
    let length = curve_length(&curve, 0.0, t, quad, solver)?;
    report.require("quadrature_converged", length.converged);
    report.measured("length", length.value);
    report.measured("t_norm_z", t * norm);
    report.at_most(
        "length_relative_error",
        (length.value - t * norm).abs() / (t * norm),
        tol.length_rtol,
    );

    let samples = settings.speed_samples.max(2);
    let mut speeds = Vec::with_capacity(samples);
    let mut cfg = solver.clone();
    for k in 0..samples {
        let s = t * k as f64 / (samples - 1) as f64;
        let r = curve_speed(&curve, s, &cfg)?;
        cfg.warm_start = Some(r.argmin_diagonal.values());
        speeds.push(r.value);
    }
    let spread =
        speeds.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - speeds.iter().cloned().fold(f64::INFINITY, f64::min);
    report.at_most("speed_spread", spread, tol.speed);
    report.detail("speeds", &speeds);

    if settings.competitors > 0 {
        // competitor lengths only need resolving to the slack
        let coarse = QuadratureSettings {
            atol: quad.atol.max(tol.competitor_slack),
            ..*quad
        };
        let loose = SolverSettings {
            ftol: solver.ftol.max(0.01 * tol.competitor_slack / (t * norm)),
            ..solver.clone()
        };
        let paths = random_competitors(z, t, settings)?;
        let results: Vec<Result<QuadratureResult>> = paths.par_iter().map(|p| p.length(&coarse, &loose)).collect();
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        let lengths: Vec<f64> = results.iter().map(|r| r.value).collect();
        let excess = lengths.iter().map(|l| l - length.value).fold(f64::INFINITY, f64::min);
        let quad_err = results.iter().map(|r| r.error_estimate).fold(0.0, f64::max);
        report.at_least("min_competitor_excess", excess, -tol.competitor_slack);
        report.measured("competitor_quadrature_error", quad_err);
        report.detail("competitor_lengths", &lengths);
    }
    Ok(report)
}

/// Deformations drawn from `seed`: a unit-norm anti-Hermitian direction,
/// cubic coefficients in `[-1, 1]` and a size in `[0.2, 1] * amplitude * t |z|`.
pub fn random_competitors(z: &AntiHermitianOp, t: f64, settings: &ShortCurveSettings) -> Result<Vec<PerturbedPath>> {
    let mut rng = SeededRng::new(settings.seed);
    let norm = z.norm();
    (0..settings.competitors)
        .map(|_| {
            let raw = rng.anti_hermitian(z.dim(), 1.0);
            let direction = raw.scale(1.0 / raw.norm());
            let alpha = rng.range(-1.0, 1.0);
            let beta = rng.range(-1.0, 1.0);
            let eps = settings.amplitude * t * norm * rng.range(0.2, 1.0);
            Ok(PerturbedPath {
                z: z.clone(),
                direction,
                eps,
                alpha,
                beta,
                t_end: t,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::{build_b, OperatorFamily, TruncationSpec};

    fn family(n: usize) -> OperatorFamily {
        OperatorFamily::build(&TruncationSpec::standard(n)).unwrap()
    }

    #[test]
    fn curve_point_basics() {
        let fam = family(8);
        let b = build_b(8).unwrap();
        let curve = OrbitCurve::new(fam.z2.clone(), b.clone(), 0.0, 1.0).unwrap();
        let p0 = curve_point(&curve, 0.0).unwrap();
        for k in 0..8 {
            assert!((p0.c().get(k, k).re - b.values()[k]).abs() < 1e-15);
        }
        for t in [0.1, 0.5, 1.0] {
            assert!(curve_point(&curve, t).unwrap().spectrum_residual().unwrap() < 1e-10);
        }
        assert!(matches!(curve_point(&curve, 1.5), Err(Error::Window { .. })));

        let diag = DiagonalOp::anti_hermitian(&[0.3; 8])
            .unwrap()
            .add_to(&AntiHermitianOp::zeros(8))
            .unwrap();
        let still = OrbitCurve::new(diag, b.clone(), 0.0, 1.0).unwrap();
        let p = curve_point(&still, 0.7).unwrap();
        assert!((p.c().matrix() - p0.c().matrix()).norm() < 1e-14);
    }

    #[test]
    fn tangent_matches_finite_difference() {
        let fam = family(6);
        let b = build_b(6).unwrap();
        let curve = OrbitCurve::new(fam.z2.clone(), b.clone(), -1.0, 1.0).unwrap();
        let h = 1e-5;
        let fd = (curve_point(&curve, h).unwrap().c().matrix() - curve_point(&curve, -h).unwrap().c().matrix())
            / C64::from(2.0 * h);
        let x = tangent(&fam.z2, &OrbitPoint::base_point(&b).unwrap()).unwrap();
        assert!((fd - x.matrix()).norm() < 1e-8);
        assert!(x.hermitian_residual() < 1e-12);
        let z_diag = DiagonalOp::anti_hermitian(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let zd = z_diag.add_to(&AntiHermitianOp::zeros(6)).unwrap();
        assert_eq!(
            tangent(&zd, &OrbitPoint::base_point(&b).unwrap()).unwrap().max_abs(),
            0.0
        );
    }

    #[test]
    fn finsler_norm_of_minimal_lift() {
        let fam = family(16);
        let b = build_b(16).unwrap();
        let base = OrbitPoint::base_point(&b).unwrap();
        let s = SolverSettings::default();
        assert_eq!(finsler_norm_at(&ComplexMatrix::zeros(16), &base, &s).unwrap(), 0.0);
        let x = tangent(&fam.z2, &base).unwrap();
        let v = finsler_norm_at(&x, &base, &s).unwrap();
        assert!((v - fam.z2.norm()).abs() < 1e-6);
        let curve = OrbitCurve::new(fam.z2.clone(), b, 0.0, 1.0).unwrap();
        let (p, xt) = velocity(&curve, 0.4).unwrap();
        assert!((finsler_norm_at(&xt, &p, &s).unwrap() - v).abs() < 1e-8);
    }

    #[test]
    fn tangent_lift_rejects_bad_input() {
        let b = DiagonalOp::hermitian(&[1.0, 0.5, 1.0]).unwrap();
        let p = OrbitPoint::base_point(&b).unwrap();
        assert!(matches!(
            tangent_lift(&ComplexMatrix::zeros(3), &p),
            Err(Error::DegenerateBase { i: 0, j: 2 })
        ));
        let b = build_b(3).unwrap();
        let p = OrbitPoint::base_point(&b).unwrap();
        assert!(tangent_lift(&ComplexMatrix::identity(3), &p).is_err());
    }

    #[test]
    fn length_basics() {
        let fam = family(8);
        let b = build_b(8).unwrap();
        let q = QuadratureSettings::default();
        let s = SolverSettings::default();
        let curve = OrbitCurve::new(fam.z2.clone(), b.clone(), 0.0, 2.0).unwrap();
        assert_eq!(curve_length(&curve, 0.3, 0.3, &q, &s).unwrap().value, 0.0);
        let t = 0.25;
        let l = curve_length(&curve, 0.0, t, &q, &s).unwrap();
        assert!((l.value - t * fam.z2.norm()).abs() <= 1e-6 * t * fam.z2.norm());
        // doubling the lift halves the time
        let double = OrbitCurve::new(fam.z2.scale(2.0), b, 0.0, 2.0).unwrap();
        let l2 = curve_length(&double, 0.0, t / 2.0, &q, &s).unwrap();
        assert!((l2.value - l.value).abs() < 1e-8);
        // additivity
        let a = curve_length(&curve, 0.0, 0.1, &q, &s).unwrap().value;
        let c = curve_length(&curve, 0.1, t, &q, &s).unwrap().value;
        assert!((a + c - l.value).abs() < 2e-8);
    }

    #[test]
    fn perturbed_path_velocity_matches_finite_difference() {
        let fam = family(5);
        let b = build_b(5).unwrap();
        let mut rng = SeededRng::new(2);
        let dir = rng.anti_hermitian(5, 1.0);
        let path = PerturbedPath {
            z: fam.z2.clone(),
            direction: dir.scale(1.0 / dir.norm()),
            eps: 0.1,
            alpha: 0.4,
            beta: -0.7,
            t_end: 0.5,
        };
        let s = 0.2;
        let h = 1e-5;
        let fd = (path.point(s + h, &b).unwrap().c().matrix() - path.point(s - h, &b).unwrap().c().matrix())
            / C64::from(2.0 * h);
        let p = path.point(s, &b).unwrap();
        let omega = path.pulled_back_velocity(s).unwrap();
        let analytic = p
            .u()
            .conjugate(&(omega.matrix() * b.to_matrix() - b.to_matrix() * omega.matrix()));
        assert!((fd - &analytic).norm() < 1e-8);
        let via_point =
            finsler_norm_at(&ComplexMatrix::new(analytic).unwrap(), &p, &SolverSettings::default()).unwrap();
        let direct = path.speed(s, &SolverSettings::default()).unwrap().value;
        assert!((via_point - direct).abs() < 1e-9);
        // pinned endpoints
        assert!(path.lift(0.0).unwrap().norm() < 1e-15);
        assert!(path.lift(0.5).unwrap().sub(&fam.z2.scale(0.5)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn short_curve_passes_for_z2_and_fails_for_shifted_lift() {
        let fam = family(8);
        let b = build_b(8).unwrap();
        let t = std::f64::consts::FRAC_PI_4 / fam.z2.norm();
        let settings = ShortCurveSettings {
            competitors: 3,
            ..ShortCurveSettings::default()
        };
        let r = verify_short_curve(&fam.z2, &b, t, &settings).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!((r.residual("length").unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-6);

        let mut wrong = vec![0.0; 8];
        wrong[3] = 0.5;
        let bad = fam.zo.add_imaginary_diagonal(&wrong).unwrap();
        let t_bad = std::f64::consts::FRAC_PI_4 / bad.norm();
        let r = verify_short_curve(&bad, &b, t_bad, &settings).unwrap();
        assert!(!r.passed());
        assert_eq!(r.details["minimality"], "not-certified");

        assert!(matches!(
            verify_short_curve(&fam.z2, &b, 4.0 * t, &settings),
            Err(Error::Window { .. })
        ));
    }
}
