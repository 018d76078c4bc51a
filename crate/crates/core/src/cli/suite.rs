//! The verification suite behind `verify`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2};

use serde::Serialize;

use super::config::{CheckName, RunConfig};
use crate::error::Result;
use crate::factory::{build_b, DiagonalOp, OperatorFamily};
use crate::geodesics::{
    bch_random_trials, column_multiple_check, crossing_factorization_check, hopf_rinow_probe, obstruction_gap,
    random_targets, reflection_r0, s0_grid, scalar_shift_pair, scalar_times_compact, sphere_geodesic_check,
    unitary_membership_diagnostic, verify_short_curve, CheckSettings, ProbeSettings, ShortCurveSettings,
    CROSSING_WINDOW,
};
use crate::linalg::{column, exp_antihermitian, vec_norm, AntiHermitianOp, CMat, C64};
use crate::minimality::{certify_minimal, quotient_norm, SolverSettings};
use crate::report::{CheckReport, Verdict};

/// Operators shared by the checks of one run.
pub struct SuiteContext {
    pub config: RunConfig,
    pub family: OperatorFamily,
    pub b: DiagonalOp,
    pub checks: CheckSettings,
}

impl SuiteContext {
    pub fn new(config: &RunConfig) -> Result<Self> {
        let spec = config.spec()?;
        let mut checks = CheckSettings {
            tolerances: config.tolerances,
            solver: SolverSettings::with_method(config.method),
            ..CheckSettings::default()
        };
        checks.quadrature.atol = config.tolerances.quadrature_atol;
        Ok(Self {
            family: OperatorFamily::build(&spec)?,
            b: config.base()?,
            config: config.clone(),
            checks,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub config: RunConfig,
    pub verdict: Verdict,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Runs every check of the configured suite in name order. A check that
/// errors out is recorded as failed with the error as a note.
pub fn run_suite(config: &RunConfig) -> Result<SuiteReport> {
    let ctx = SuiteContext::new(config)?;
    let mut checks = Vec::with_capacity(config.suite.len());
    let mut suite = config.suite.clone();
    suite.sort();
    suite.dedup();
    for name in suite {
        let report = run_check(name, &ctx).unwrap_or_else(|e| {
            let mut r = CheckReport::new(name.as_str());
            r.fail(format!("error: {e}"));
            r
        });
        checks.push(report);
    }
    let verdict = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if checks.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(SuiteReport {
        config: config.clone(),
        verdict,
        checks,
    })
}

pub fn run_check(name: CheckName, ctx: &SuiteContext) -> Result<CheckReport> {
    match name {
        CheckName::Bch => bch(ctx),
        CheckName::Certify => certify(ctx),
        CheckName::HopfRinow => hopf_rinow(ctx),
        CheckName::Crossing => crossing(ctx),
        CheckName::ColumnMultiple => column_multiple(ctx),
        CheckName::Membership => membership(ctx),
        CheckName::Qnorm => qnorm(ctx),
        CheckName::ShortCurve => short_curve(ctx),
        CheckName::Sphere => sphere(ctx),
        CheckName::Obstruction => obstruction(ctx),
    }
}

fn certify(ctx: &SuiteContext) -> Result<CheckReport> {
    let tol = &ctx.checks.tolerances;
    let cert = certify_minimal(&ctx.family.z2, 0, tol.certificate)?;
    let mut r = CheckReport::new("certify");
    r.param("dim", ctx.config.n).param("j0", 0);
    r.at_most("norm_residual", cert.norm_residual(), tol.certificate);
    r.at_most(
        "orthogonality_residual",
        cert.max_orthogonality_residual,
        tol.orthogonality,
    );
    r.at_most(
        "pivot_diagonal",
        cert.diagonal_entry_j0[0].hypot(cert.diagonal_entry_j0[1]),
        tol.certificate,
    );
    r.require("nonzero_column", cert.nonzero_column_ok);
    r.detail("verdict", cert.verdict);
    if !cert.is_certified() {
        r.fail("certificate did not hold");
    }
    Ok(r)
}

fn qnorm(ctx: &SuiteContext) -> Result<CheckReport> {
    let zo = &ctx.family.zo;
    let target = vec_norm(&column(zo.as_complex(), 0)?);
    let q = quotient_norm(zo, &ctx.checks.solver)?;
    let mut r = CheckReport::new("qnorm");
    r.param("dim", ctx.config.n).param("method", ctx.config.method);
    r.measured("value", q.value);
    r.measured("column_norm", target);
    r.at_most("value_error", (q.value - target).abs(), 1e-6);
    r.at_most("certified_gap", q.certified_gap, 1e-6);
    Ok(r)
}

fn short_curve(ctx: &SuiteContext) -> Result<CheckReport> {
    let z2 = &ctx.family.z2;
    let settings = ShortCurveSettings {
        checks: ctx.checks.clone(),
        competitors: ctx.config.competitors,
        seed: ctx.config.seed,
        ..ShortCurveSettings::default()
    };
    verify_short_curve(z2, &ctx.b, FRAC_PI_4 / z2.norm(), &settings)
}

fn sphere(ctx: &SuiteContext) -> Result<CheckReport> {
    let z2 = &ctx.family.z2;
    let s = reflection_r0(0, ctx.config.n)?.with_lift(z2)?;
    let t_max = FRAC_PI_2 / z2.norm();
    let grid: Vec<f64> = (0..=4).map(|k| k as f64 * t_max / 4.0).collect();
    sphere_geodesic_check(z2, &ctx.b, &s, &grid, &ctx.checks)
}

fn bch(ctx: &SuiteContext) -> Result<CheckReport> {
    bch_random_trials(
        ctx.config.bch_trials,
        ctx.config.bch_dim,
        0.05,
        ctx.config.seed,
        &ctx.checks,
    )
}

fn crossing(ctx: &SuiteContext) -> Result<CheckReport> {
    let z2 = &ctx.family.z2;
    let mut r = CheckReport::new("lemma53");
    r.param("dim", ctx.config.n);
    let t1 = 0.5 * CROSSING_WINDOW / z2.norm();
    r.absorb(
        "same-lift",
        crossing_factorization_check(z2, z2, t1, t1, &ctx.b, &ctx.checks)?,
    );
    let (z, v) = scalar_shift_pair(z2, 0.1)?;
    let t1 = 0.5 * CROSSING_WINDOW / z.norm();
    r.absorb(
        "scalar-shift",
        crossing_factorization_check(&z, &v, t1, t1, &ctx.b, &ctx.checks)?,
    );
    Ok(r)
}

/// Rescaled lift must pass; a `1e-3` change of column `j0` must be caught.
fn column_multiple(ctx: &SuiteContext) -> Result<CheckReport> {
    let z2 = &ctx.family.z2;
    let n = ctx.config.n;
    let t0 = 0.1 / z2.norm();
    let s0 = 0.5 * t0;
    let v = z2.scale(t0 / s0);
    let mut r = CheckReport::new("lemma58");
    r.param("dim", n);
    r.absorb(
        "rescaled",
        column_multiple_check(z2, &v, t0, s0, 0, &ctx.b, &ctx.checks)?,
    );
    let row = n.min(3) - 1;
    let mut bump = CMat::zeros(n, n);
    bump[(row, 0)] = C64::new(1e-3, 0.0);
    bump[(0, row)] = C64::new(-1e-3, 0.0);
    let bumped = v.add(&AntiHermitianOp::project(&bump)?)?;
    let perturbed = column_multiple_check(z2, &bumped, t0, s0, 0, &ctx.b, &ctx.checks)?;
    r.measured(
        "perturbed.column_residual",
        perturbed.residual("column_residual").unwrap_or(f64::NAN),
    );
    r.require("perturbation_detected", perturbed.verdict == Verdict::Fail);
    Ok(r)
}

fn obstruction(ctx: &SuiteContext) -> Result<CheckReport> {
    let z2 = &ctx.family.z2;
    let norm = z2.norm();
    let t0 = LN_2 / (16.0 * norm);
    let grid = s0_grid(FRAC_PI_2 / norm, 20);
    let mut r = obstruction_gap(z2, t0, &grid)?.to_check(0.9, 1e-6);
    let constant = ctx.family.zo.add_imaginary_diagonal(&vec![0.25; ctx.config.n])?;
    let control = obstruction_gap(&constant, t0, &grid)?;
    r.at_most("control_deviation", control.max_deviation, 1e-6);
    r.detail("control_hypothesis_met", control.hypothesis_met);
    Ok(r)
}

fn hopf_rinow(ctx: &SuiteContext) -> Result<CheckReport> {
    let n = ctx.config.probe_dim;
    let b = build_b(n)?;
    let settings = ProbeSettings {
        checks: ctx.checks.clone(),
        radius: ctx.config.probe_radius,
        ..ProbeSettings::default()
    };
    let mut r = CheckReport::new("hopf-rinow");
    r.param("dim", n)
        .param("trials", ctx.config.probe_trials)
        .param("norm_k", ctx.config.probe_norm)
        .param("radius", ctx.config.probe_radius);
    let targets = random_targets(n, ctx.config.probe_norm, ctx.config.probe_trials, ctx.config.seed);
    let (mut worst_end, mut worst_gap) = (0.0f64, f64::NEG_INFINITY);
    for k in &targets {
        let p = hopf_rinow_probe(k, &b, &settings)?;
        worst_end = worst_end.max(p.endpoint_residual);
        worst_gap = worst_gap.max(p.witness_gap);
    }
    let tol = &ctx.checks.tolerances;
    r.at_most("max_endpoint_residual", worst_end, tol.endpoint);
    if !targets.is_empty() {
        r.at_most("max_witness_gap", worst_gap, tol.witness);
    }
    Ok(r)
}

fn membership(ctx: &SuiteContext) -> Result<CheckReport> {
    let n = ctx.config.n;
    let u = scalar_times_compact(&ctx.family.z2, 0.1, 0.2)?;
    let mut r = CheckReport::new("membership");
    r.param("dim", n);
    let scalar = unitary_membership_diagnostic(&u, 0.5)?;
    r.absorb("compact", scalar.to_check(1e-8));
    r.at_most("compact.theta_error", (scalar.theta - 0.2).abs(), 1e-2);
    let alt: Vec<f64> = (0..n).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let d = AntiHermitianOp::zeros(n).add_imaginary_diagonal(&alt)?;
    let control = unitary_membership_diagnostic(&exp_antihermitian(&d, 1.0)?, 0.5)?;
    r.measured("oscillant.tail_residual", control.tail_residual);
    r.require(
        "oscillant_flagged",
        control.tail_residual > crate::geodesics::SCALAR_TAIL_TOL,
    );
    Ok(r)
}
