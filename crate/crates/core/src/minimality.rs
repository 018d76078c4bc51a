//! Minimal anti-Hermitian lifts.
//!
//! A lift `z` is minimal when `|z| <= |z + D|` for every anti-Hermitian
//! diagonal `D`. The quotient norm `inf_D |z + D|` is computed by
//! [`quotient_norm`]; the column-attained case, where the norm equals the
//! norm of one column that is orthogonal to all the others, is certified
//! directly by [`certify_minimal`].

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factory::{DiagonalOp, HermitianKind};
use crate::linalg::{column, eigh, inner, spectral_norm, vec_norm, AntiHermitianOp, CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalityVerdict {
    CertifiedMinimal,
    NotCertified,
    /// The column norm exceeds the spectral norm, or the norm is attained
    /// on a column that fails orthogonality. Both are impossible in exact
    /// arithmetic and point to a numerical fault.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityCertificate {
    pub j0: usize,
    pub column_norm: f64,
    pub spectral_norm: f64,
    pub max_orthogonality_residual: f64,
    pub diagonal_entry_j0: [f64; 2],
    /// Every entry of column `j0` off the diagonal is nonzero, which makes
    /// the minimizing diagonal unique.
    pub nonzero_column_ok: bool,
    pub verdict: MinimalityVerdict,
    pub tol: f64,
}

impl MinimalityCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == MinimalityVerdict::CertifiedMinimal
    }

    pub fn norm_residual(&self) -> f64 {
        (self.spectral_norm - self.column_norm).abs()
    }
}

/// Checks `|v| = |c_j0(v)|`, `c_j0(v)` orthogonal to every other column and
/// `v[j0, j0] = 0`, all within `tol`.
pub fn certify_minimal(v: &AntiHermitianOp, j0: usize, tol: f64) -> Result<MinimalityCertificate> {
    let n = v.dim();
    let c0 = column(v.as_complex(), j0)?;
    let column_norm = vec_norm(&c0);
    let norm = v.norm();
    let mut max_orth = 0.0f64;
    for j in (0..n).filter(|&j| j != j0) {
        let cj = column(v.as_complex(), j)?;
        max_orth = max_orth.max(inner(&cj, &c0).norm());
    }
    let diag = v.get(j0, j0);
    let nonzero_column_ok = (0..n).filter(|&j| j != j0).all(|j| v.get(j, j0).norm() > 0.0);

    let attained = (norm - column_norm).abs() <= tol;
    let verdict = if column_norm > norm + tol || (attained && max_orth > tol) {
        MinimalityVerdict::Violated
    } else if attained && max_orth <= tol && diag.norm() <= tol {
        MinimalityVerdict::CertifiedMinimal
    } else {
        MinimalityVerdict::NotCertified
    };
    Ok(MinimalityCertificate {
        j0,
        column_norm,
        spectral_norm: norm,
        max_orthogonality_residual: max_orth,
        diagonal_entry_j0: [diag.re, diag.im],
        nonzero_column_ok,
        verdict,
        tol,
    })
}

/// The unique minimizing diagonal of a column-attained lift.
///
/// Entry `j != j0` is `-<c_j(v), c_j0(v)> / conj(v[j, j0])` with row `j`
/// left out of the inner product; entry `j0` is zero. The result is the
/// diagonal the minimal representative carries, so for zero-diagonal `v`
/// it is added to `v` directly.
pub fn minimizing_diagonal_formula(v: &AntiHermitianOp, j0: usize) -> Result<DiagonalOp> {
    let n = v.dim();
    let c0 = column(v.as_complex(), j0)?;
    let mut entries = vec![C64::new(0.0, 0.0); n];
    for j in (0..n).filter(|&j| j != j0) {
        let pivot = c0[j];
        if pivot.norm() == 0.0 {
            return Err(Error::DegenerateColumn { row: j, col: j0 });
        }
        let cj = column(v.as_complex(), j)?.remove_row(j);
        let value = -inner(&cj, &c0.clone().remove_row(j)) / pivot.conj();
        if value.re.abs() > 1e-9 * value.norm() && value.re.abs() > 1e-14 {
            return Err(Error::Numerical(format!(
                "minimizing diagonal entry {j} = {value} is not purely imaginary"
            )));
        }
        entries[j] = C64::new(0.0, value.im);
    }
    DiagonalOp::new(entries, HermitianKind::AntiHermitian)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuotientMethod {
    /// Log-barrier interior point on the semidefinite form of the problem.
    #[default]
    Barrier,
    /// Polyak-step subgradient descent with iterate averaging.
    Subgradient,
}

impl std::str::FromStr for QuotientMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "barrier" => Ok(Self::Barrier),
            "subgradient" => Ok(Self::Subgradient),
            other => Err(Error::InvalidInput(format!("unknown quotient-norm method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub method: QuotientMethod,
    /// Relative accuracy the solver aims for before stopping.
    pub ftol: f64,
    /// The result counts as converged when the certified gap is at most
    /// `gap_rtol * |x|`.
    pub gap_rtol: f64,
    pub max_iter: usize,
    /// Externally known lower bounds on the quotient norm.
    pub lower_bounds: Vec<f64>,
    /// Starting diagonal for the barrier method, typically the minimizer of
    /// a nearby problem.
    pub warm_start: Option<Vec<f64>>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            method: QuotientMethod::Barrier,
            ftol: 1e-10,
            gap_rtol: 1e-6,
            max_iter: 5000,
            lower_bounds: Vec::new(),
            warm_start: None,
        }
    }
}

impl SolverSettings {
    pub fn with_method(method: QuotientMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientNormResult {
    /// `|x + i Diag(d)|` at the returned diagonal, hence an upper bound.
    pub value: f64,
    pub argmin_diagonal: DiagonalOp,
    pub iterations: usize,
    /// `value - lower_bound`.
    pub certified_gap: f64,
    pub lower_bound: f64,
    pub converged: bool,
    pub method: QuotientMethod,
}

#[derive(Serialize)]
struct QuotientNormRecord<'a> {
    value: f64,
    gap: f64,
    lower_bound: f64,
    iterations: usize,
    converged: bool,
    method: QuotientMethod,
    argmin: &'a [f64],
}

impl QuotientNormResult {
    pub fn to_json(&self) -> serde_json::Value {
        let argmin = self.argmin_diagonal.values();
        serde_json::to_value(QuotientNormRecord {
            value: self.value,
            gap: self.certified_gap,
            lower_bound: self.lower_bound,
            iterations: self.iterations,
            converged: self.converged,
            method: self.method,
            argmin: &argmin,
        })
        .expect("plain record serializes")
    }
}

/// `h + Diag(d)` for Hermitian `h`.
fn shifted(h: &CMat, d: &[f64]) -> CMat {
    let mut a = h.clone();
    for (k, v) in d.iter().enumerate() {
        a[(k, k)] += C64::new(*v, 0.0);
    }
    a
}

fn spectral_radius(w: &DVector<f64>) -> f64 {
    w.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_off_diagonal(h: &CMat) -> f64 {
    let n = h.nrows();
    let mut m = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m = m.max(h[(i, j)].norm());
            }
        }
    }
    m
}

/// `sigma_max(x + i Diag(d))`.
pub fn shifted_norm(x: &AntiHermitianOp, d: &[f64]) -> Result<f64> {
    let (w, _) = eigh(&shifted(&x.to_hermitian(), d))?;
    Ok(spectral_radius(&w))
}

struct Outcome {
    value: f64,
    d: Vec<f64>,
    lower: f64,
    iterations: usize,
}

/// `inf_d |x + i Diag(d)|` over real `d`.
pub fn quotient_norm(x: &AntiHermitianOp, cfg: &SolverSettings) -> Result<QuotientNormResult> {
    let h = x.to_hermitian();
    let n = h.nrows();
    let norm_x = x.norm();
    let mut lower = max_off_diagonal(&h);
    for &lb in &cfg.lower_bounds {
        lower = lower.max(lb);
    }
    let out = if lower == 0.0 && cfg.lower_bounds.is_empty() {
        // diagonal input: the quotient collapses
        Outcome {
            value: 0.0,
            d: (0..n).map(|a| -h[(a, a)].re).collect(),
            lower: 0.0,
            iterations: 0,
        }
    } else {
        match cfg.method {
            QuotientMethod::Barrier => barrier(&h, cfg)?,
            QuotientMethod::Subgradient => subgradient(&h, cfg, lower)?,
        }
    };
    let lower = lower.max(out.lower).min(out.value);
    let gap = (out.value - lower).max(0.0);
    Ok(QuotientNormResult {
        value: out.value,
        argmin_diagonal: DiagonalOp::anti_hermitian(&out.d)?,
        iterations: out.iterations,
        certified_gap: gap,
        lower_bound: lower,
        converged: gap <= cfg.gap_rtol * norm_x.max(f64::MIN_POSITIVE),
        method: cfg.method,
    })
}

/// Barrier state at one `(t, d)`: resolvents of `t -+ A` in the eigenbasis.
struct Resolvents {
    /// `(t - A)^-1`.
    m1: CMat,
    /// `(t + A)^-1`.
    m2: CMat,
    r1: Vec<f64>,
    r2: Vec<f64>,
    q: CMat,
}

impl Resolvents {
    fn new(w: &DVector<f64>, q: CMat, t: f64) -> Self {
        let r1: Vec<f64> = w.iter().map(|l| 1.0 / (t - l)).collect();
        let r2: Vec<f64> = w.iter().map(|l| 1.0 / (t + l)).collect();
        let apply = |r: &[f64]| {
            let mut s = q.clone();
            for (k, rk) in r.iter().enumerate() {
                s.column_mut(k).scale_mut(*rk);
            }
            s * q.adjoint()
        };
        let m1 = apply(&r1);
        let m2 = apply(&r2);
        Self { m1, m2, r1, r2, q }
    }

    /// Lower bound from the dual matrix `Y = m1 - m2`: with its diagonal
    /// removed, `Re tr(Y h) / |Y|_1` bounds `|h + D|` from below for every
    /// diagonal `D`.
    fn dual_bound(&self, h: &CMat) -> Result<f64> {
        let n = h.nrows();
        let mut y = &self.m1 - &self.m2;
        for a in 0..n {
            y[(a, a)] = C64::new(0.0, 0.0);
        }
        let mut num = 0.0;
        for a in 0..n {
            for b in 0..n {
                num += (y[(a, b)] * h[(a, b)].conj()).re;
            }
        }
        let (w, _) = eigh(&y)?;
        let trace_norm: f64 = w.iter().map(|v| v.abs()).sum();
        Ok(if trace_norm > 0.0 { num / trace_norm } else { 0.0 })
    }
}

/// `-log det(t - A) - log det(t + A)` from the eigenvalues of `A`, or
/// `None` outside the feasible region. The linear term `tau t` is kept
/// separate so that line searches compare it by differences.
fn log_barrier(w: &DVector<f64>, t: f64) -> Option<f64> {
    let mut phi = 0.0;
    for l in w.iter() {
        let (a, b) = (t - l, t + l);
        if a <= 0.0 || b <= 0.0 {
            return None;
        }
        phi -= a.ln() + b.ln();
    }
    Some(phi)
}

/// Assumed relative suboptimality of a warm start.
const WARM_GAP: f64 = 1e-3;

/// Factor by which the barrier weight grows between centering phases.
const TAU_GROWTH: f64 = 10.0;

/// Minimizes `t` subject to `-t <= h + Diag(d) <= t` with the log barrier
/// `tau t - log det(t - A) - log det(t + A)`, following the central path.
fn barrier(h: &CMat, cfg: &SolverSettings) -> Result<Outcome> {
    let n = h.nrows();
    let mut d: Vec<f64> = (0..n).map(|a| -h[(a, a)].re).collect();
    let mut eig = eigh(&shifted(h, &d))?;
    let mut f0 = spectral_radius(&eig.0);
    let mut initial_gap = 0.5 * f0;
    if let Some(ws) = cfg.warm_start.as_ref().filter(|ws| ws.len() == n) {
        let eig_ws = eigh(&shifted(h, ws))?;
        let f_ws = spectral_radius(&eig_ws.0);
        if f_ws < f0 {
            d = ws.clone();
            eig = eig_ws;
            f0 = f_ws;
            initial_gap = WARM_GAP * f0;
        }
    }
    let mut best_value = f0;
    let mut best_d = d.clone();
    let mut lower = 0.0f64;
    let scale = f0.max(f64::MIN_POSITIVE);
    let target = cfg.ftol * scale;
    let mut t = f0 + initial_gap;
    let mut tau = 2.0 * n as f64 / initial_gap;
    let mut iterations = 0usize;

    'outer: for _ in 0..60 {
        let mut centered = None;
        let mut stalled = true;
        for _ in 0..50 {
            if iterations >= cfg.max_iter {
                break 'outer;
            }
            iterations += 1;
            let phi = log_barrier(&eig.0, t)
                .ok_or_else(|| Error::Numerical("barrier iterate left the feasible region".into()))?;
            let res = Resolvents::new(&eig.0, eig.1.clone(), t);

            // gradient and Hessian in (t, d)
            let mut grad = DVector::<f64>::zeros(n + 1);
            let mut hess = DMatrix::<f64>::zeros(n + 1, n + 1);
            grad[0] = tau - res.r1.iter().sum::<f64>() - res.r2.iter().sum::<f64>();
            hess[(0, 0)] = res.r1.iter().map(|r| r * r).sum::<f64>() + res.r2.iter().map(|r| r * r).sum::<f64>();
            for a in 0..n {
                grad[a + 1] = res.m1[(a, a)].re - res.m2[(a, a)].re;
                let mut s1 = 0.0;
                let mut s2 = 0.0;
                for k in 0..n {
                    let p = res.q[(a, k)].norm_sqr();
                    s1 += p * res.r1[k] * res.r1[k];
                    s2 += p * res.r2[k] * res.r2[k];
                }
                hess[(0, a + 1)] = -s1 + s2;
                hess[(a + 1, 0)] = -s1 + s2;
                for b in a..n {
                    let v = res.m1[(a, b)].norm_sqr() + res.m2[(a, b)].norm_sqr();
                    hess[(a + 1, b + 1)] = v;
                    hess[(b + 1, a + 1)] = v;
                }
            }
            let step = solve_spd(hess, &grad)?;
            let decrement = grad.dot(&step);
            if decrement / 2.0 <= 1e-10 {
                centered = Some(res);
                stalled = false;
                break;
            }

            let mut s = 1.0;
            let mut moved = false;
            while s > 1e-6 {
                let t_new = t - s * step[0];
                let d_new: Vec<f64> = d.iter().enumerate().map(|(a, v)| v - s * step[a + 1]).collect();
                let eig_new = eigh(&shifted(h, &d_new))?;
                if let Some(phi_new) = log_barrier(&eig_new.0, t_new) {
                    if tau * (t_new - t) + (phi_new - phi) <= -0.25 * s * decrement {
                        t = t_new;
                        d = d_new;
                        eig = eig_new;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                // a tiny decrement that the line search cannot realize is
                // rounding noise around the center
                stalled = decrement > 1e-6;
                centered = Some(res);
                break;
            }
        }

        let value = spectral_radius(&eig.0);
        if value < best_value {
            best_value = value;
            best_d = d.clone();
        }
        let res = centered.unwrap_or_else(|| Resolvents::new(&eig.0, eig.1.clone(), t));
        lower = lower.max(res.dual_bound(h)?);
        // past the first uncentered step the Newton systems are too
        // ill-conditioned for further progress
        if best_value - lower <= target || stalled || 2.0 * n as f64 / tau <= target {
            break;
        }
        tau *= TAU_GROWTH;
    }
    Ok(Outcome {
        value: best_value,
        d: best_d,
        lower,
        iterations,
    })
}

/// Solves `hess x = g` for symmetric positive definite `hess`, adding a
/// small ridge when the factorization fails.
fn solve_spd(hess: DMatrix<f64>, g: &DVector<f64>) -> Result<DVector<f64>> {
    let scale = hess.diagonal().amax().max(f64::MIN_POSITIVE);
    let mut ridge = 0.0;
    for _ in 0..12 {
        let mut m = hess.clone();
        for k in 0..m.nrows() {
            m[(k, k)] += ridge;
        }
        if let Some(ch) = m.cholesky() {
            return Ok(ch.solve(g));
        }
        ridge = if ridge == 0.0 { 1e-14 * scale } else { ridge * 100.0 };
    }
    Err(Error::Numerical("Newton system is not positive definite".into()))
}

/// Subgradient of `sigma_max(h + Diag(d))` averaged over the top
/// eigenvalues by magnitude; also returns their multiplicity.
fn top_subgradient(w: &DVector<f64>, q: &CMat, f: f64, width: f64) -> (Vec<f64>, usize) {
    let n = w.len();
    let thresh = f - width.max(1e-10 * f.max(1.0));
    let mut g = vec![0.0; n];
    let mut count = 0;
    for k in 0..n {
        let sign = if w[k] >= thresh {
            1.0
        } else if -w[k] >= thresh {
            -1.0
        } else {
            continue;
        };
        count += 1;
        for a in 0..n {
            g[a] += sign * q[(a, k)].norm_sqr();
        }
    }
    for v in &mut g {
        *v /= count as f64;
    }
    (g, count)
}

/// Target-level Polyak method: step to the level `best - delta`, halve
/// `delta` once the path length since the last sufficient descent exceeds
/// a budget, and restart from the best point seen (or the running average
/// of the segment, when that is better).
fn subgradient(h: &CMat, cfg: &SolverSettings, lower: f64) -> Result<Outcome> {
    let n = h.nrows();
    let eval = |d: &[f64]| -> Result<(f64, DVector<f64>, CMat)> {
        let (w, q) = eigh(&shifted(h, d))?;
        Ok((spectral_radius(&w), w, q))
    };
    let mut d = vec![0.0; n];
    let (mut f, mut w, mut q) = eval(&d)?;
    let budget = f.max(f64::MIN_POSITIVE);
    let mut best_value = f;
    let mut best_d = d.clone();
    let mut delta = 0.5 * (f - lower).max(1e-3 * f);
    let mut segment_start = best_value;
    let mut path = 0.0;
    let mut avg = d.clone();
    let mut avg_count = 1.0;
    let mut iterations = 0;
    for k in 0..cfg.max_iter {
        iterations = k + 1;
        let (g, _) = top_subgradient(&w, &q, f, 0.1 * delta);
        let gg: f64 = g.iter().map(|v| v * v).sum();
        if gg > 1e-20 {
            let alpha = (f - (best_value - delta)) / gg;
            for (v, gv) in d.iter_mut().zip(&g) {
                *v -= alpha * gv;
            }
            path += alpha * gg.sqrt();
            (f, w, q) = eval(&d)?;
        } else {
            // subgradients of opposite sign cancel: coordinate search
            let mut improved = false;
            for a in 0..n {
                for sign in [1.0, -1.0] {
                    let mut trial = d.clone();
                    trial[a] += sign * delta;
                    let (ft, wt, qt) = eval(&trial)?;
                    if ft < f {
                        (d, f, w, q) = (trial, ft, wt, qt);
                        improved = true;
                    }
                }
            }
            if !improved {
                path = f64::INFINITY;
            }
        }
        for (s, v) in avg.iter_mut().zip(&d) {
            *s = (*s * avg_count + v) / (avg_count + 1.0);
        }
        avg_count += 1.0;
        if f < best_value {
            best_value = f;
            best_d = d.clone();
        }
        if best_value <= segment_start - 0.5 * delta {
            segment_start = best_value;
            path = 0.0;
        } else if path > budget {
            let (fa, _, _) = eval(&avg)?;
            if fa < best_value {
                best_value = fa;
                best_d = avg.clone();
            }
            delta *= 0.5;
            path = 0.0;
            d = best_d.clone();
            (f, w, q) = eval(&d)?;
            avg = d.clone();
            avg_count = 1.0;
            segment_start = best_value;
        }
        if delta <= cfg.ftol * best_value.max(1.0) || best_value - lower <= cfg.ftol * best_value.max(1.0) {
            break;
        }
    }
    Ok(Outcome {
        value: best_value,
        d: best_d,
        lower,
        iterations,
    })
}

/// Box `center +- radius` sampled with spacing `step` in every coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub center: Vec<f64>,
    pub radius: f64,
    pub step: f64,
}

impl GridSpec {
    /// The box `[-radius, radius]^dim`.
    pub fn symmetric(dim: usize, radius: f64, step: f64) -> Self {
        Self {
            center: vec![0.0; dim],
            radius,
            step,
        }
    }

    /// A box guaranteed to contain a minimizer: centered at `-Im diag(x)`
    /// with radius `|x + i Diag(center)|`, since any minimizer satisfies
    /// `|x_aa + i d_a| <= inf`.
    pub fn enclosing(x: &AntiHermitianOp, step: f64) -> Result<Self> {
        let center: Vec<f64> = x.diagonal().iter().map(|z| -z.im).collect();
        let radius = shifted_norm(x, &center)?;
        Ok(Self { center, radius, step })
    }

    /// Worst-case distance from the grid minimum to the true minimum over
    /// the box; the objective is 1-Lipschitz in the Euclidean norm of `d`.
    pub fn lipschitz_slack(&self) -> f64 {
        self.step * (self.center.len() as f64).sqrt()
    }
}

/// Largest eigenvalue magnitude of a small Hermitian matrix.
fn small_spectral_radius(a: &CMat) -> f64 {
    match a.nrows() {
        1 => a[(0, 0)].re.abs(),
        2 => {
            let m = 0.5 * (a[(0, 0)].re + a[(1, 1)].re);
            let hd = 0.5 * (a[(0, 0)].re - a[(1, 1)].re);
            let r = (hd * hd + a[(0, 1)].norm_sqr()).sqrt();
            m.abs() + r
        }
        3 => {
            let (a11, a22, a33) = (a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re);
            let (a12, a13, a23) = (a[(0, 1)], a[(0, 2)], a[(1, 2)]);
            let p1 = a12.norm_sqr() + a13.norm_sqr() + a23.norm_sqr();
            let qm = (a11 + a22 + a33) / 3.0;
            let p2 = (a11 - qm).powi(2) + (a22 - qm).powi(2) + (a33 - qm).powi(2) + 2.0 * p1;
            if p2 == 0.0 {
                return qm.abs();
            }
            let p = (p2 / 6.0).sqrt();
            let (b11, b22, b33) = ((a11 - qm) / p, (a22 - qm) / p, (a33 - qm) / p);
            let (b12, b13, b23) = (a12 / p, a13 / p, a23 / p);
            let det = b11 * b22 * b33 + 2.0 * (b12 * b23 * b13.conj()).re
                - b11 * b23.norm_sqr()
                - b22 * b13.norm_sqr()
                - b33 * b12.norm_sqr();
            let phi = (0.5 * det).clamp(-1.0, 1.0).acos() / 3.0;
            let hi = qm + 2.0 * p * phi.cos();
            let lo = qm + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
            hi.abs().max(lo.abs())
        }
        _ => eigh(a).map(|(w, _)| spectral_radius(&w)).unwrap_or(f64::INFINITY),
    }
}

/// Exhaustive grid minimum of `|x + i Diag(d)|`, for `dim <= 4`.
pub fn quotient_norm_bruteforce(x: &AntiHermitianOp, grid: &GridSpec) -> Result<f64> {
    let n = x.dim();
    if n > 4 {
        return Err(Error::Size {
            dim: n,
            reason: "grid search is limited to dim <= 4".into(),
        });
    }
    if grid.center.len() != n {
        return Err(Error::Shape {
            left: n,
            right: grid.center.len(),
        });
    }
    if !(grid.step > 0.0 && grid.radius >= 0.0) {
        return Err(Error::InvalidInput(
            "grid needs positive step and nonnegative radius".into(),
        ));
    }
    let h = x.to_hermitian();
    let half = (grid.radius / grid.step).floor() as i64;
    let axis: Vec<f64> = (-half..=half).map(|k| k as f64 * grid.step).collect();
    let m = axis.len();
    let total = m.pow(n as u32);
    let best = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut a = h.clone();
            let mut best = f64::INFINITY;
            let inner_count = total / m;
            for idx in 0..inner_count {
                let mut rest = idx;
                for coord in 0..n {
                    let k = if coord == 0 {
                        first
                    } else {
                        let k = rest % m;
                        rest /= m;
                        k
                    };
                    a[(coord, coord)] = C64::new(h[(coord, coord)].re + grid.center[coord] + axis[k], 0.0);
                }
                best = best.min(small_spectral_radius(&a));
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfimumReport {
    /// Infimum over all anti-Hermitian diagonals.
    pub full: f64,
    /// `(theta, infimum over d + i theta I)` with `d` optimized freely.
    pub shifted: Vec<(f64, f64)>,
    pub max_discrepancy: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Compares the infimum over all diagonals with the infima over the classes
/// `d + i theta I`. In finite dimension every class is the full diagonal
/// algebra, so all of them coincide.
pub fn infimum_equality_check(k: &AntiHermitianOp, thetas: &[f64], cfg: &SolverSettings) -> Result<InfimumReport> {
    let full = quotient_norm(k, cfg)?.value;
    let n = k.dim();
    let mut shifted_values = Vec::with_capacity(thetas.len());
    let mut max_disc = 0.0f64;
    for &theta in thetas {
        // fix the scalar part, optimize the remainder
        let kt = k.add_imaginary_diagonal(&vec![theta; n])?;
        let v = quotient_norm(&kt, cfg)?.value;
        max_disc = max_disc.max((v - full).abs());
        shifted_values.push((theta, v));
    }
    let tol = 1e-6 * k.norm().max(1.0);
    Ok(InfimumReport {
        full,
        shifted: shifted_values,
        max_discrepancy: max_disc,
        tol,
        passed: max_disc <= tol,
    })
}

/// Lower bound on `|x + i Diag(d)|` that holds for every `d`: the largest
/// off-diagonal entry.
pub fn off_diagonal_lower_bound(x: &AntiHermitianOp) -> f64 {
    max_off_diagonal(x.matrix())
}

/// `sigma_max` of `x` via the singular value decomposition, for callers
/// that want a check independent of the Hermitian eigensolver.
pub fn norm_by_svd(x: &AntiHermitianOp) -> f64 {
    spectral_norm(x.as_complex())
}
