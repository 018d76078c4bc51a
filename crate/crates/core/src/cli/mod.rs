//! Command-line front end: `build | verify | curve | qnorm | probe`.
//!
//! Settings come from built-in defaults, then the config file named by
//! `--config` or `ORBIT_GEODESICS_CONFIG`, then command-line flags.

mod config;
mod suite;

pub use config::{parse_suite, BaseRule, CheckName, RunConfig, CONFIG_ENV};
pub use suite::{run_check, run_suite, SuiteContext, SuiteReport};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::factory::build_b;
use crate::factory::OperatorFamily;
use crate::geodesics::{
    curve_length, hopf_rinow_probe, largest_successful_radius, random_targets, reflection_r0, sphere_speed,
    CheckSettings, OrbitCurve, ProbeMethod, ProbeSettings,
};
use crate::io::{read_json, write_json, DiagonalDocument, OperatorDocument};
use crate::linalg::{exp_antihermitian, vec_norm, AntiHermitianOp, I};
use crate::minimality::{quotient_norm, SolverSettings};

#[derive(Debug, Parser)]
#[command(
    name = "orbit-geodesics",
    version,
    about = "Minimal lifts and Finsler geodesics on unitary orbits"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Flat key = value config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Comma-separated check names.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedOperator {
    Z2,
    Zo,
    Zdg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write z_dg.json, z_o.json, z2.json, b.json and d0.json.
    Build,
    /// Run the verification suite and write report.json.
    Verify,
    /// Sample the orbit curve of Z2 and write curve.csv.
    Curve {
        /// End time; defaults to pi / (2 |Z2|).
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Quotient norm of an operator.
    Qnorm {
        #[arg(long, value_enum, default_value = "zo")]
        operator: NamedOperator,
        /// Read the operator from a JSON document instead.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Minimal geodesics to random nearby orbit points.
    Probe {
        /// Dimension of the targets; defaults to `probe_dim` from the config.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        /// Norm of the random targets.
        #[arg(long)]
        norm: Option<f64>,
        /// Comma-separated radii to scan.
        #[arg(long)]
        radii: Option<String>,
        #[arg(long, default_value = "fixed-point")]
        method: String,
    },
}

/// Resolves the configuration from file and flags.
pub fn resolve_config(args: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let path = args
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    if let Some(p) = path {
        cfg.apply_file(&p)?;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(g) = args.gamma {
        cfg.gamma = g;
    }
    if let Some(d) = args.delta {
        cfg.delta = d;
    }
    if let Some(s) = &args.suite {
        cfg.suite = parse_suite(s)?;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = &args.out {
        cfg.output_dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))
}

/// Writes the five operator documents and returns their paths.
pub fn cmd_build(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let spec = cfg.spec()?;
    let fam = OperatorFamily::build(&spec)?;
    let dir = &cfg.output_dir;
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for (name, op) in [("z_dg.json", &fam.zdg), ("z_o.json", &fam.zo), ("z2.json", &fam.z2)] {
        let path = dir.join(name);
        write_json(&path, &OperatorDocument::from_anti_hermitian(op, &spec, fam.tail_bound))?;
        written.push(path);
    }
    for (name, d) in [("b.json", &cfg.base()?), ("d0.json", &fam.d0)] {
        let path = dir.join(name);
        write_json(&path, &DiagonalDocument::from(d))?;
        written.push(path);
    }
    Ok(written)
}

/// Runs the suite and writes `report.json` into the output directory.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(SuiteReport, PathBuf)> {
    let report = run_suite(cfg)?;
    ensure_dir(&cfg.output_dir)?;
    let path = cfg.output_dir.join("report.json");
    write_json(&path, &report)?;
    Ok((report, path))
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CURVE_HEADER: &str = "t,cumulative_length,speed,t_norm_z,sphere_speed,eigenvector_residual,in_window";

/// CSV samples of the orbit curve of `Z2` on `[0, t_max]`.
pub fn cmd_curve(cfg: &RunConfig, t_max: Option<f64>, samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(Error::Usage("curve needs at least 2 samples".into()));
    }
    let spec = cfg.spec()?;
    let fam = OperatorFamily::build(&spec)?;
    let z = fam.z2;
    let b = cfg.base()?;
    let norm = z.norm();
    let window = std::f64::consts::FRAC_PI_2 / norm;
    let t_max = t_max.unwrap_or(window);
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Usage(format!("t_max must be positive, got {t_max}")));
    }
    let checks = CheckSettings {
        tolerances: cfg.tolerances,
        solver: SolverSettings::with_method(cfg.method),
        ..CheckSettings::default()
    };
    let curve = OrbitCurve::new(z.clone(), b, 0.0, t_max)?;
    let sphere = reflection_r0(0, cfg.n)?.with_lift(&z)?;
    let eta = sphere.eta.clone().expect("attached");
    let pair = &sphere.xi + &eta;
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    let mut length = 0.0;
    let mut prev = 0.0;
    let mut solver = checks.solver.clone();
    for k in 0..samples {
        let t = t_max * k as f64 / (samples - 1) as f64;
        if k > 0 {
            length += curve_length(&curve, prev, t, &checks.quadrature, &solver)?.value;
        }
        let speed = crate::geodesics::curve_speed(&curve, t, &solver)?;
        solver.warm_start = Some(speed.argmin_diagonal.values());
        let moved = exp_antihermitian(&z, t)?.matrix() * &pair;
        let eig = vec_norm(&(z.matrix() * &moved - &moved * (I * norm))) / vec_norm(&moved);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt17(t),
            fmt17(length),
            fmt17(speed.value),
            fmt17(t * norm),
            fmt17(sphere_speed(&z, &sphere, t)?),
            fmt17(eig),
            u8::from(t <= window)
        )
        .expect("write to string");
        prev = t;
    }
    Ok(out)
}

pub fn cmd_qnorm(cfg: &RunConfig, operator: NamedOperator, file: Option<&Path>) -> Result<serde_json::Value> {
    let (x, label): (AntiHermitianOp, String) = match file {
        Some(p) => (
            read_json::<OperatorDocument>(p)?.to_anti_hermitian()?,
            p.display().to_string(),
        ),
        None => {
            let fam = OperatorFamily::build(&cfg.spec()?)?;
            let op = match operator {
                NamedOperator::Z2 => fam.z2,
                NamedOperator::Zo => fam.zo,
                NamedOperator::Zdg => fam.zdg,
            };
            (op, format!("{operator:?}").to_lowercase())
        }
    };
    let q = quotient_norm(&x, &SolverSettings::with_method(cfg.method))?;
    let mut doc = q.to_json();
    doc["operator"] = json!(label);
    doc["dim"] = json!(x.dim());
    doc["norm"] = json!(x.norm());
    Ok(doc)
}

pub fn cmd_probe(
    cfg: &RunConfig,
    trials: Option<usize>,
    norm: Option<f64>,
    radii: Option<&str>,
    method: ProbeMethod,
) -> Result<(serde_json::Value, bool)> {
    let n = cfg.probe_dim;
    let b = build_b(n)?;
    let settings = ProbeSettings {
        checks: CheckSettings {
            tolerances: cfg.tolerances,
            solver: SolverSettings::with_method(cfg.method),
            ..CheckSettings::default()
        },
        method,
        radius: cfg.probe_radius,
        ..ProbeSettings::default()
    };
    let trials = trials.unwrap_or(cfg.probe_trials);
    let norm = norm.unwrap_or(cfg.probe_norm);
    let mut runs = Vec::new();
    let mut all_ok = true;
    for k in random_targets(n, norm, trials, cfg.seed) {
        let p = hopf_rinow_probe(&k, &b, &settings)?;
        let r = p.to_check(&settings.checks);
        all_ok &= r.passed();
        runs.push(r);
    }
    let mut doc = json!({ "dim": n, "norm_k": norm, "seed": cfg.seed, "runs": runs });
    if let Some(list) = radii {
        let radii = list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Usage(format!("bad radius {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let (best, counts) = largest_successful_radius(&b, &radii, trials, cfg.seed, &settings)?;
        doc["radius_scan"] = json!({ "largest_successful_radius": best, "successes": counts, "trials": trials });
    }
    Ok((doc, all_ok))
}

/// Runs a parsed command line and returns the process exit code: 0 when
/// every verdict passes, 1 when a check fails, 2 for usage errors.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let cfg = resolve_config(&cli.global)?;
    let json_out = cli.global.json;
    match cli.command {
        Command::Build => {
            let paths = cmd_build(&cfg)?;
            if json_out {
                let list: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
                println!("{}", json!({ "written": list, "warnings": cfg.spec()?.warnings() }));
            } else {
                for w in cfg.spec()?.warnings() {
                    eprintln!("warning: {w}");
                }
                for p in paths {
                    println!("wrote {}", p.display());
                }
            }
            Ok(0)
        }
        Command::Verify => {
            let (report, path) = cmd_verify(&cfg)?;
            if json_out {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                for c in &report.checks {
                    println!("{:<12} {:?}", c.check, c.verdict);
                }
                println!("wrote {}", path.display());
            }
            Ok(i32::from(report.failed()))
        }
        Command::Curve { t_max, samples } => {
            let csv = cmd_curve(&cfg, t_max, samples)?;
            ensure_dir(&cfg.output_dir)?;
            let path = cfg.output_dir.join("curve.csv");
            std::fs::write(&path, &csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            if json_out {
                println!("{}", json!({ "written": path.display().to_string(), "rows": samples }));
            } else {
                print!("{csv}");
            }
            Ok(0)
        }
        Command::Qnorm { operator, file } => {
            let doc = cmd_qnorm(&cfg, operator, file.as_deref())?;
            if json_out {
                println!("{doc}");
            } else {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            }
            Ok(0)
        }
        Command::Probe {
            dim,
            trials,
            norm,
            radii,
            method,
        } => {
            let method: ProbeMethod = method.parse().map_err(|e: Error| Error::Usage(e.to_string()))?;
            let mut cfg = cfg;
            if let Some(d) = dim {
                if d < 2 {
                    return Err(Error::Usage(format!("probe dimension must be at least 2, got {d}")));
                }
                cfg.probe_dim = d;
            }
            let (doc, ok) = cmd_probe(&cfg, trials, norm, radii.as_deref(), method)?;
            if json_out {
                println!("{doc}");
            } else {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            }
            Ok(i32::from(!ok))
        }
    }
}
