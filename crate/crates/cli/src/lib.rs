//! Command implementations for the `cylbif` binary.
//!
//! Every command renders its artifact into a `String` (CSV or JSON with a
//! top-level `"schema": 1` field); identical flags produce byte-identical
//! output. Exit codes: 0 success, 2 validation error, 3 numerical failure,
//! 1 I/O failure.

use clap::{Parser, Subcommand, ValueEnum};
use cylbif_core::bessel::Order;
use cylbif_core::error::Error as CoreError;
use cylbif_core::{bifurcation, cylinder, dispersion, inequality, shooting, spectrum};
use serde_json::{json, Value};
use std::fmt::Write as _;

#[derive(Debug, Parser)]
#[command(
    name = "cylbif",
    about = "Dispersion, bifurcation and eigenvalue analysis for overdetermined \
             eigenvalue problems on perturbed cylinders",
    version
)]
pub struct Cli {
    /// Write the artifact to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Output format; each command has a natural default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ball spectrum data for dimension N (JSON).
    Spectrum {
        #[arg(long)]
        n: u32,
    },
    /// Scan sigma(T) over a period range (CSV: T,sigma,branch,arg).
    /// Points inside the delta margin are skipped.
    SigmaScan {
        #[arg(long)]
        n: u32,
        #[arg(long = "t-min")]
        t_min: f64,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
    /// Locate and certify both bifurcation periods (JSON report).
    Bifurcate {
        #[arg(long)]
        n: u32,
        /// Tolerance on |T^*/T_* - m| for reporting a resonance.
        #[arg(long, default_value_t = bifurcation::RESONANCE_RATIO_TOL)]
        resonance_tol: f64,
    },
    /// Compare dispersion sigma_k against the shooting oracle
    /// (CSV: T,sigma_dispersion,sigma_shoot,abs_diff).
    OracleDiff {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long = "t-min")]
        t_min: f64,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Turan margin scan on (0, sqrt(lambda_2)) (JSON ScanReport).
    Turan {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1e-6)]
        lo: f64,
        /// Upper end of the scan; defaults to sqrt(lambda_2) - 1e-9.
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        points: usize,
    },
    /// Solve the perturbed cylinder v = eps cos(k theta) and emit the
    /// deviation F (CSV: t,F), the full grid (--grid), or a JSON summary.
    Perturb {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 256)]
        nr: usize,
        #[arg(long, default_value_t = 64)]
        nt: usize,
        /// Emit the eigenfunction grid (CSV: theta,rho,u) instead of F.
        #[arg(long, default_value_t = false)]
        grid: bool,
    },
    /// Nodal line of the second eigenfunction (CSV: t,r).
    Nodal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 128)]
        nr: usize,
        #[arg(long, default_value_t = 32)]
        nt: usize,
    },
}

/// Failure classes mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs; exit code 2.
    Validation(String),
    /// Numerical failure (bracket, convergence, resonance...); exit code 3.
    Numerical(String),
    /// I/O failure writing the artifact; exit code 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        match e {
            CoreError::Domain(_) | CoreError::UnsupportedDimension(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn with_schema(mut value: Value) -> Value {
    let obj = value.as_object_mut().expect("summaries are objects");
    obj.insert("schema".into(), json!(1));
    // Rebuild with schema first for stable field order.
    let mut ordered = serde_json::Map::new();
    ordered.insert("schema".into(), obj.remove("schema").unwrap());
    for (k, v) in obj.iter() {
        ordered.insert(k.clone(), v.clone());
    }
    Value::Object(ordered)
}

fn render_json(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&with_schema(value)).expect("serializable");
    s.push('\n');
    s
}

fn format_of(cli_format: Option<OutputFormat>, default: OutputFormat) -> OutputFormat {
    cli_format.unwrap_or(default)
}

fn validate_points(points: usize) -> Result<(), CliError> {
    if points < 2 {
        return Err(CliError::Validation(format!(
            "need at least 2 points, got {points}"
        )));
    }
    if points > 10_000_000 {
        return Err(CliError::Validation(format!("{points} points is above the cap")));
    }
    Ok(())
}

fn validate_range(t_min: f64, t_max: f64) -> Result<(), CliError> {
    if !(t_min > 0.0) || !(t_max > t_min) {
        return Err(CliError::Validation(format!(
            "need 0 < t-min < t-max, got {t_min}, {t_max}"
        )));
    }
    Ok(())
}

/// Runs one command and renders its artifact.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Spectrum { n } => {
            let spec = spectrum::ball_spectrum(*n)?;
            if format_of(cli.format, OutputFormat::Json) == OutputFormat::Csv {
                return Err(CliError::Validation(
                    "spectrum emits json only".into(),
                ));
            }
            Ok(render_json(serde_json::to_value(spec).expect("serializable")))
        }
        Command::SigmaScan {
            n,
            t_min,
            t_max,
            points,
        } => {
            validate_points(*points)?;
            validate_range(*t_min, *t_max)?;
            let spec = spectrum::ball_spectrum(*n)?;
            let mut rows = Vec::with_capacity(*points);
            for i in 0..*points {
                let t = t_min + (t_max - t_min) * i as f64 / (*points as f64 - 1.0);
                match dispersion::sigma(&spec, t) {
                    Ok(p) => rows.push(p),
                    // The delta margin is excluded automatically.
                    Err(CoreError::SingularPoint { .. }) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            match format_of(cli.format, OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut out = String::from("T,sigma,branch,arg\n");
                    for p in rows {
                        let _ = writeln!(
                            out,
                            "{},{},{},{}",
                            p.t,
                            p.sigma,
                            p.branch.token(),
                            p.arg
                        );
                    }
                    Ok(out)
                }
                OutputFormat::Json => {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|p| {
                            json!({
                                "t": p.t,
                                "sigma": p.sigma,
                                "branch": p.branch.token(),
                                "arg": p.arg,
                            })
                        })
                        .collect();
                    Ok(render_json(json!({ "n": n, "rows": rows })))
                }
            }
        }
        Command::Bifurcate { n, resonance_tol } => {
            if !(*resonance_tol > 0.0) {
                return Err(CliError::Validation(format!(
                    "resonance tolerance must be positive, got {resonance_tol}"
                )));
            }
            let spec = spectrum::ball_spectrum(*n)?;
            let report = bifurcation::bifurcation_report_with_tol(&spec, *resonance_tol)?;
            if format_of(cli.format, OutputFormat::Json) == OutputFormat::Csv {
                return Err(CliError::Validation("bifurcate emits json only".into()));
            }
            Ok(render_json(
                serde_json::to_value(report).expect("serializable"),
            ))
        }
        Command::OracleDiff {
            n,
            k,
            t_min,
            t_max,
            points,
        } => {
            validate_points(*points)?;
            validate_range(*t_min, *t_max)?;
            if *k == 0 {
                return Err(CliError::Validation("mode k must be >= 1".into()));
            }
            let spec = spectrum::ball_spectrum(*n)?;
            let mut rows = Vec::new();
            let mut max_abs = 0.0f64;
            let mut max_scaled = 0.0f64;
            for i in 0..*points {
                let t = t_min + (t_max - t_min) * i as f64 / (*points as f64 - 1.0);
                let disp = match dispersion::sigma_k(&spec, *k, t) {
                    Ok(v) => v,
                    Err(CoreError::SingularPoint { .. }) => continue,
                    Err(e) => return Err(e.into()),
                };
                let shot = match shooting::shoot_c(&spec, *k, t) {
                    Ok(r) => r.sigma_value,
                    Err(CoreError::Resonance { .. }) => continue,
                    Err(e) => return Err(e.into()),
                };
                let diff = (disp - shot).abs();
                max_abs = max_abs.max(diff);
                max_scaled = max_scaled.max(diff / (1.0 + disp.abs()));
                rows.push((t, disp, shot, diff));
            }
            match format_of(cli.format, OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut out = String::from("T,sigma_dispersion,sigma_shoot,abs_diff\n");
                    for (t, d, s, diff) in rows {
                        let _ = writeln!(out, "{t},{d},{s},{diff}");
                    }
                    Ok(out)
                }
                OutputFormat::Json => Ok(render_json(json!({
                    "n": n,
                    "k": k,
                    "points": rows.len(),
                    "max_abs_diff": max_abs,
                    "max_scaled_diff": max_scaled,
                }))),
            }
        }
        Command::Turan { n, lo, hi, points } => {
            validate_points(*points)?;
            let spec = spectrum::ball_spectrum(*n)?;
            let hi = hi.unwrap_or(spec.lambda2.sqrt() - 1e-9);
            match format_of(cli.format, OutputFormat::Json) {
                OutputFormat::Json => {
                    let report = inequality::turan_margin_scan(&spec, *lo, hi, *points)?;
                    Ok(render_json(
                        serde_json::to_value(report).expect("serializable"),
                    ))
                }
                OutputFormat::Csv => {
                    let mut out = String::from("s,margin\n");
                    for i in 0..*points {
                        let s = lo + (hi - lo) * i as f64 / (*points as f64 - 1.0);
                        let m = inequality::turan_margin(spec.nu, s)?;
                        let _ = writeln!(out, "{s},{m}");
                    }
                    Ok(out)
                }
            }
        }
        Command::Perturb {
            n,
            t,
            k,
            eps,
            nr,
            nt,
            grid,
        } => {
            let spec = spectrum::ball_spectrum(*n)?;
            let problem = if *eps == 0.0 {
                cylinder::CylinderProblem::straight(*n, *t, *nr, *nt)
            } else {
                cylinder::CylinderProblem::single_mode(*n, *t, *k, *eps, *nr, *nt)
            };
            let result = cylinder::solve_lambda2(&problem)?;
            if *grid {
                if format_of(cli.format, OutputFormat::Csv) != OutputFormat::Csv {
                    return Err(CliError::Validation("--grid emits csv only".into()));
                }
                let mut out = String::from("theta,rho,u\n");
                let g = &result.u_grid;
                for j in 0..g.n_theta {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / g.n_theta as f64;
                    for i in 0..g.n_rho {
                        let rho = i as f64 / (g.n_rho - 1) as f64;
                        let _ = writeln!(out, "{theta},{rho},{}", g.at(i, j));
                    }
                }
                return Ok(out);
            }
            match format_of(cli.format, OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut out = String::from("t,F\n");
                    for &(theta, f) in &result.f_samples {
                        let _ = writeln!(out, "{theta},{f}");
                    }
                    Ok(out)
                }
                OutputFormat::Json => {
                    let f_max = result
                        .f_samples
                        .iter()
                        .fold(0.0f64, |m, &(_, f)| m.max(f.abs()));
                    let radii: Vec<f64> = result.nodal_radius.iter().map(|&(_, r)| r).collect();
                    let (mut rmin, mut rmax, mut rsum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
                    for &r in &radii {
                        rmin = rmin.min(r);
                        rmax = rmax.max(r);
                        rsum += r;
                    }
                    let mut summary = json!({
                        "n": n,
                        "t": t,
                        "k": k,
                        "eps": eps,
                        "lambda2v": result.lambda2v,
                        "residual_norm": result.residual_norm,
                        "f_max": f_max,
                        "nodal": {
                            "min": rmin,
                            "max": rmax,
                            "mean": rsum / radii.len() as f64,
                        },
                    });
                    if *eps != 0.0 {
                        let sigma_k = dispersion::sigma_k(&spec, *k, *t)?;
                        let obj = summary.as_object_mut().unwrap();
                        obj.insert("sigma_k".into(), json!(sigma_k));
                        let amp = cylinder::cosine_modes(
                            &result
                                .f_samples
                                .iter()
                                .map(|&(_, f)| f / eps)
                                .collect::<Vec<_>>(),
                        )[*k as usize];
                        obj.insert("mode_amplitude".into(), json!(amp));
                    }
                    Ok(render_json(summary))
                }
            }
        }
        Command::Nodal {
            n,
            t,
            k,
            eps,
            nr,
            nt,
        } => {
            let problem = if *eps == 0.0 {
                cylinder::CylinderProblem::straight(*n, *t, *nr, *nt)
            } else {
                cylinder::CylinderProblem::single_mode(*n, *t, *k, *eps, *nr, *nt)
            };
            let result = cylinder::solve_lambda2(&problem)?;
            match format_of(cli.format, OutputFormat::Csv) {
                OutputFormat::Csv => {
                    let mut out = String::from("t,r\n");
                    for &(ti, r) in &result.nodal_radius {
                        let _ = writeln!(out, "{ti},{r}");
                    }
                    Ok(out)
                }
                OutputFormat::Json => {
                    let samples: Vec<Value> = result
                        .nodal_radius
                        .iter()
                        .map(|&(ti, r)| json!([ti, r]))
                        .collect();
                    Ok(render_json(json!({
                        "n": n,
                        "t": t,
                        "lambda2v": result.lambda2v,
                        "samples": samples,
                    })))
                }
            }
        }
    }
}
