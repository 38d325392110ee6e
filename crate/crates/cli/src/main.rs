//! Command-line front end: builds profiles, exports CSV/OBJ/JSON
//! artifacts, and re-verifies exported data.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical/verification
//! failure (with a diagnostic JSON object on stderr).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use solitons_core::asymptotics::{
    asymptotic_offset, measured_threshold, model_f, model_offset, psi_lower_bound,
    psi_upper_bound, solve_phi,
};
use solitons_core::export::{
    mesh_revolution, profile_rows, read_profile_csv, write_json, write_obj, write_profile_csv,
    CsvRow, Model,
};
use solitons_core::phase::portrait;
use solitons_core::verify::{report_from_samples, verify_profile, CurvatureSample};
use solitons_core::{
    build_bowl, build_catenoid, solve_rotational_dirichlet, tau_from_bowl, IntegratorConfig,
    SolitonProfile,
};

#[derive(Parser)]
#[command(
    name = "solitons",
    about = "Translating solitons of mean curvature flow in H^2 x R: \
             construction, phase analysis, asymptotics and verification",
    version
)]
struct Cli {
    /// Directory for relative output paths.
    #[arg(long, env = "SOLITONS_OUT_DIR", default_value = ".", global = true)]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Tolerances {
    /// Absolute integration tolerance.
    #[arg(long, default_value_t = 1e-10)]
    abs_tol: f64,
    /// Relative integration tolerance.
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    /// Series hand-off radius at the rotation axis.
    #[arg(long, default_value_t = 1e-3)]
    r_min_axis: f64,
}

impl Tolerances {
    fn config(&self) -> solitons_core::Result<IntegratorConfig> {
        let cfg = IntegratorConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            r_min_axis: self.r_min_axis,
            ..IntegratorConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "r_min_axis": self.r_min_axis,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshModel {
    Poincare,
    Hyperboloid,
}

impl From<MeshModel> for Model {
    fn from(m: MeshModel) -> Self {
        match m {
            MeshModel::Poincare => Model::Poincare,
            MeshModel::Hyperboloid => Model::Hyperboloid,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the bowl soliton and export its profile, mesh and report.
    Bowl {
        #[arg(long, default_value_t = 12.0)]
        rmax: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "poincare")]
        model: MeshModel,
        #[arg(long, default_value_t = 64)]
        ntheta: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Build a translating catenoid (both wings) by neck radius.
    Catenoid {
        #[arg(long)]
        neck: f64,
        #[arg(long, default_value_t = 12.0)]
        rmax: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        mesh: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "poincare")]
        model: MeshModel,
        #[arg(long, default_value_t = 64)]
        ntheta: usize,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Sample the phase plane: direction field, region tags, Gamma curve.
    PhasePortrait {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        eps: i8,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, default_value_t = 0.05)]
        rmin: f64,
        #[arg(long, default_value_t = 4.0)]
        rmax: f64,
        #[arg(long, default_value_t = -0.995, allow_hyphen_values = true)]
        ymin: f64,
        #[arg(long, default_value_t = 0.995)]
        ymax: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tail behavior of the bowl: offset of the linear asymptote,
    /// comparison with the closed-form model, correction bounds.
    Asymptotics {
        #[arg(long, default_value_t = 8.0)]
        window_lo: f64,
        #[arg(long, default_value_t = 12.0)]
        window_hi: f64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Radial solution of the Dirichlet problem with constant boundary
    /// value on a disk.
    Dirichlet {
        #[arg(long)]
        radius: f64,
        #[arg(long, allow_hyphen_values = true)]
        boundary: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Re-read an exported profile CSV and verify all identities.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Height of the bowl cap over the circle of radius sigma.
    Tau {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        let diagnostic = json!({
            "status": "error",
            "error": err.to_string(),
        });
        eprintln!("{diagnostic}");
        std::process::exit(3);
    }
}

fn resolve(out_dir: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        out_dir.join(p)
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let out_dir = cli.out_dir.clone();
    match cli.command {
        Command::Bowl {
            rmax,
            out,
            mesh,
            model,
            ntheta,
            report,
            tol,
        } => {
            let cfg = tol.config()?;
            let bowl = build_bowl(rmax, &cfg)?;
            export_profile(&out_dir, &bowl, out.as_deref(), mesh.as_deref(), model, ntheta)?;
            let verdict = verify_profile("bowl", &bowl)?;
            let body = json!({
                "profile": "bowl",
                "rmax": rmax,
                "samples": bowl.samples.len(),
                "verification": verdict,
                "config": tol.echo(),
            });
            emit_report(&out_dir, report.as_deref(), &body)?;
            Ok(())
        }
        Command::Catenoid {
            neck,
            rmax,
            out,
            mesh,
            model,
            ntheta,
            report,
            tol,
        } => {
            let cfg = tol.config()?;
            let cat = build_catenoid(neck, rmax, &cfg)?;
            if let Some(path) = out.as_deref() {
                // one CSV, lower wing first in traversal order
                let mut rows = profile_rows(&cat.lower)?;
                rows.reverse();
                rows.extend(profile_rows(&cat.upper)?.into_iter().skip(1));
                write_profile_csv(&resolve(&out_dir, path), &rows)?;
            }
            if let Some(path) = mesh.as_deref() {
                let m = mesh_revolution(&cat.upper, ntheta, model.into())?;
                write_obj(&resolve(&out_dir, path), &m)?;
            }
            let upper = verify_profile("catenoid-upper", &cat.upper)?;
            let lower = verify_profile("catenoid-lower", &cat.lower)?;
            let body = json!({
                "profile": "catenoid",
                "neck_radius": cat.neck_radius,
                "turning_radius": cat.turning_radius,
                "gamma_crossing_r": cat.gamma_crossing.r,
                "rmax": rmax,
                "verification": { "upper": upper, "lower": lower },
                "config": tol.echo(),
            });
            emit_report(&out_dir, report.as_deref(), &body)?;
            Ok(())
        }
        Command::PhasePortrait {
            eps,
            grid,
            rmin,
            rmax,
            ymin,
            ymax,
            out,
        } => {
            let p = portrait(eps, (rmin, rmax), (ymin, ymax), grid)?;
            let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
            wtr.write_record(["kind", "r", "y", "dir_r", "dir_y", "region"])?;
            for s in &p.field {
                wtr.write_record([
                    "grid".into(),
                    s.r.to_string(),
                    s.y.to_string(),
                    s.dir_r.to_string(),
                    s.dir_y.to_string(),
                    format!("{:?}", s.region),
                ])?;
            }
            for (r, y) in &p.gamma {
                wtr.write_record([
                    "gamma".into(),
                    r.to_string(),
                    y.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?;
            }
            for y in p.asymptotes {
                wtr.write_record([
                    "asymptote".into(),
                    String::new(),
                    y.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?;
            }
            let bytes = wtr.into_inner()?;
            solitons_core::export::atomic_write(&resolve(&out_dir, &out), &bytes)?;
            Ok(())
        }
        Command::Asymptotics {
            window_lo,
            window_hi,
            report,
            tol,
        } => {
            let cfg = tol.config()?;
            let bowl = build_bowl(window_hi, &cfg)?;
            let offset = asymptotic_offset(
                |r| bowl.graph(r).map(|(f, _)| f).unwrap_or(f64::NAN),
                (window_lo, window_hi),
                256,
            )?;
            let model_off = asymptotic_offset(model_f, (window_lo, window_hi), 256)?;
            let phi = solve_phi(1.0, bowl.graph(1.0)?.1, window_hi, &cfg)?;
            let lower_ok = measured_threshold(
                |r| -phi.psi(r) > psi_lower_bound(r),
                1.0,
                window_hi.min(10.0),
                400,
            );
            let eps0 = 0.01;
            let upper_ok = measured_threshold(
                |r| -phi.psi(r) < psi_upper_bound(r, eps0),
                1.0,
                window_hi.min(10.0),
                400,
            );
            let body = json!({
                "window": [window_lo, window_hi],
                "offset_k": offset.k,
                "offset_variation": offset.variation,
                "model_offset_exact": model_offset(),
                "model_offset_windowed": model_off.k,
                "psi_lower_bound_holds_from": lower_ok,
                "psi_upper_bound_holds_from": upper_ok,
                "psi_upper_bound_eps0": eps0,
                "config": tol.echo(),
            });
            emit_report(&out_dir, report.as_deref(), &body)?;
            Ok(())
        }
        Command::Dirichlet {
            radius,
            boundary,
            samples,
            out,
            report,
            tol,
        } => {
            let cfg = tol.config()?;
            let sol = solve_rotational_dirichlet(radius, boundary, &cfg)?;
            let mut max_residual = 0.0f64;
            let mut records = Vec::new();
            for i in 0..=samples {
                let r = radius * i as f64 / samples as f64;
                let u = sol.u(r.max(1e-12))?;
                let res = if r > 0.08 && r < radius - 0.125 {
                    let v = sol.residual_fd(r, 2e-2)?;
                    max_residual = max_residual.max(v.abs());
                    v
                } else {
                    0.0
                };
                records.push((r, u, res));
            }
            if let Some(path) = out.as_deref() {
                let mut wtr = csv::WriterBuilder::new().from_writer(Vec::new());
                wtr.write_record(["r", "u", "residual_fd"])?;
                for (r, u, res) in &records {
                    wtr.write_record([r.to_string(), u.to_string(), res.to_string()])?;
                }
                let bytes = wtr.into_inner()?;
                solitons_core::export::atomic_write(&resolve(&out_dir, path), &bytes)?;
            }
            let body = json!({
                "radius": radius,
                "boundary_value": boundary,
                "u_at_boundary": sol.u(radius)?,
                "u_at_center": sol.u(1e-12)?,
                "max_interior_residual_fd": max_residual,
                "config": tol.echo(),
            });
            emit_report(&out_dir, report.as_deref(), &body)?;
            Ok(())
        }
        Command::Verify { input, report } => {
            let rows = read_profile_csv(&resolve(&out_dir, &input))?;
            let samples: Vec<CurvatureSample> = rows
                .iter()
                .map(|r| CurvatureSample::from_state(&r.state()))
                .collect::<solitons_core::Result<_>>()?;
            let verdict = report_from_samples(&input.display().to_string(), &samples);
            let passed = verdict.passes();
            let body = json!({
                "input": input.display().to_string(),
                "verification": verdict,
                "passed": passed,
            });
            emit_report(&out_dir, report.as_deref(), &body)?;
            if !passed {
                anyhow::bail!("verification failed for {}", input.display());
            }
            Ok(())
        }
        Command::Tau { sigma, report, tol } => {
            let cfg = tol.config()?;
            let bowl = build_bowl(sigma.max(1.0).min(solitons_core::R_MAX_SUPPORTED), &cfg)?;
            let value = tau_from_bowl(&bowl, sigma)?;
            let body = json!({
                "sigma": sigma,
                "tau": value,
                "config": tol.echo(),
            });
            emit_report(&out_dir, report.as_deref(), &body)?;
            Ok(())
        }
    }
}

fn export_profile(
    out_dir: &Path,
    profile: &SolitonProfile,
    out: Option<&Path>,
    mesh: Option<&Path>,
    model: MeshModel,
    ntheta: usize,
) -> anyhow::Result<()> {
    if let Some(path) = out {
        let rows: Vec<CsvRow> = profile_rows(profile)?;
        write_profile_csv(&resolve(out_dir, path), &rows)?;
    }
    if let Some(path) = mesh {
        let m = mesh_revolution(profile, ntheta, model.into())?;
        write_obj(&resolve(out_dir, path), &m)?;
    }
    Ok(())
}

/// Writes the report JSON to a file when requested, and always echoes it
/// on stdout so pipelines can consume it directly.
fn emit_report(
    out_dir: &Path,
    path: Option<&Path>,
    body: &serde_json::Value,
) -> anyhow::Result<()> {
    if let Some(p) = path {
        write_json(&resolve(out_dir, p), body)?;
    }
    println!("{}", serde_json::to_string_pretty(body)?);
    Ok(())
}
