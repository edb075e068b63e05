use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use sksphere::kahler::{chart_metric, levi_civita_curvature};
use sksphere::numerics::signature;
use sksphere::sphere::{immerse, immerse_points, metric_g, paraboloid_congruence, flags, Immersion};
use sksphere::{certify, CertifyOptions, Geometry, Prepotential, ResidualKind, ResidualReport, SKPoint, Screening};

use crate::config::RunConfig;
use crate::output::{samples_csv, surface_obj};
use crate::{json, CliError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 3;

/// A plan is rejected when more than this fraction of its nodes is degenerate.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.5;

/// Realization is limited to this arity.
pub const MAX_REALIZE_ARITY: usize = 4;

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub tol_scale: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tol_scale: 1.0 }
    }
}

fn residual_entries(report: &ResidualReport, out: &mut Map<String, Value>) {
    for (kind, max, tol, pass) in report.entries() {
        out.insert(kind.name().into(), json!({"max": max, "tolerance": tol, "pass": pass}));
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_report(cfg: &RunConfig, report: &Map<String, Value>) -> Result<(), CliError> {
    let text = json::to_string(report).map_err(|e| CliError::Io(e.to_string()))?;
    write_file(&cfg.out.report_path(), &text)
}

fn status_name(code: i32) -> &'static str {
    match code {
        EXIT_PASS => "pass",
        EXIT_RESIDUAL => "fail",
        _ => "degenerate",
    }
}

/// Ratio `h / g′` of the Hermitian form `2 Im Hess F` to the realized metric
/// on the `∂x` directions; a convention constant.
fn hermitian_factor(p: &SKPoint) -> f64 {
    p.hermitian_form()[0].re / chart_metric(p)[(0, 0)]
}

fn first_accepted(prep: &Prepotential, points: &[Vec<Complex64>], screening: Screening) -> Option<Vec<Complex64>> {
    points
        .iter()
        .find(|z| SKPoint::new(prep, z).is_ok_and(|p| screening.accepts(&p)))
        .cloned()
}

/// Full residual suite over the plan. Writes the JSON report and returns the exit code.
pub fn run_check(cfg: &RunConfig, opts: RunOptions) -> Result<i32, CliError> {
    let prep = cfg.prepotential()?;
    let points = cfg.points()?;
    let (tolerances, screening) = cfg.tolerances(opts.tol_scale);
    let geom = Geometry::new(&prep);
    let options = CertifyOptions {
        screening,
        tolerances,
        ..CertifyOptions::default()
    };
    let cert = certify(&geom, &points, &options);
    for (i, msg) in &cert.errors {
        log::warn!("plan point {i}: {msg}");
    }

    let code = if cert.degenerate_fraction() > MAX_DEGENERATE_FRACTION || cert.evaluated() == 0 {
        EXIT_DEGENERATE
    } else if cert.passes() {
        EXIT_PASS
    } else {
        EXIT_RESIDUAL
    };

    let mut report = Map::new();
    residual_entries(&cert.report, &mut report);
    report.insert(
        "counts".into(),
        json!({
            "plan_points": cert.plan_points,
            "evaluated": cert.evaluated(),
            "degenerate": cert.degenerate.len(),
            "errors": cert.errors.len(),
        }),
    );
    report.insert(
        "errors".into(),
        Value::Array(cert.errors.iter().map(|(i, m)| json!({"index": i, "message": m})).collect()),
    );
    let mut notes = Vec::new();
    if let Some(z) = first_accepted(&prep, &points, screening) {
        let p = SKPoint::new(&prep, &z).map_err(|e| CliError::Config(e.to_string()))?;
        report.insert("hermitian_factor".into(), json!(hermitian_factor(&p)));
    }
    if code == EXIT_DEGENERATE {
        notes.push(format!(
            "{} of {} plan points are degenerate (limit {:.0}%)",
            cert.degenerate.len(),
            cert.plan_points,
            100.0 * MAX_DEGENERATE_FRACTION
        ));
    }
    report.insert("notes".into(), json!(notes));
    report.insert("degenerate_margin".into(), json!(screening.margin));
    report.insert("tol_scale".into(), json!(opts.tol_scale));
    report.insert("status".into(), json!(status_name(code)));
    report.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    write_report(cfg, &report)?;
    Ok(code)
}

fn resolve_base(
    cfg: &RunConfig,
    prep: &Prepotential,
    points: &[Vec<Complex64>],
    screening: Screening,
) -> Result<Vec<Complex64>, CliError> {
    cfg.base()
        .or_else(|| first_accepted(prep, points, screening))
        .ok_or_else(|| CliError::Degenerate("no nondegenerate plan point to use as base".into()))
}

/// Realizes the immersion: CSV for any arity, OBJ mesh for `m = 1` grids.
pub fn run_realize(cfg: &RunConfig, opts: RunOptions) -> Result<i32, CliError> {
    if cfg.m > MAX_REALIZE_ARITY {
        return Err(CliError::Config(format!("realize supports m ≤ {MAX_REALIZE_ARITY}")));
    }
    let prep = cfg.prepotential()?;
    let points = cfg.points()?;
    let grid = cfg.grid()?;
    let (tolerances, screening) = cfg.tolerances(opts.tol_scale);
    let base = resolve_base(cfg, &prep, &points, screening)?;
    let geometry_error = |e: sksphere::GeometryError| match e {
        sksphere::GeometryError::Degenerate { .. } => CliError::Degenerate(format!("base point: {e}")),
        other => CliError::Config(other.to_string()),
    };
    let immersion: Immersion = match &grid {
        Some(g) => immerse(&prep, g, &base, screening),
        None => immerse_points(&prep, &points, &base, screening),
    }
    .map_err(geometry_error)?;
    for w in &immersion.warnings {
        log::warn!("{w}");
    }

    let degenerate_fraction = immersion.degenerate.len() as f64 / points.len() as f64;
    let mut residuals = ResidualReport::new(tolerances);
    residuals.samples = immersion.samples.len();
    for s in &immersion.samples {
        residuals.record(ResidualKind::MongeAmpere, s.det_g - 1.0);
    }
    let code = if degenerate_fraction > MAX_DEGENERATE_FRACTION || immersion.samples.is_empty() {
        EXIT_DEGENERATE
    } else if residuals.all_pass() {
        EXIT_PASS
    } else {
        EXIT_RESIDUAL
    };

    let mut notes = Vec::new();
    if code != EXIT_DEGENERATE {
        let csv = samples_csv(cfg.m, &immersion.samples).map_err(|e| CliError::Io(e.to_string()))?;
        write_file(&cfg.out.csv_path(), &csv)?;
        match (&grid, cfg.m) {
            (Some(g), 1) => write_file(&cfg.out.obj_path(), &surface_obj(g, &immersion.samples))?,
            (None, 1) => notes.push("no OBJ mesh: random plans have no cell structure".to_string()),
            _ => notes.push(format!("no OBJ mesh: surface export needs m = 1, got m = {}", cfg.m)),
        }
    } else {
        notes.push(format!(
            "{} of {} plan points are degenerate (limit {:.0}%); no samples written",
            immersion.degenerate.len(),
            points.len(),
            100.0 * MAX_DEGENERATE_FRACTION
        ));
    }

    let mut report = Map::new();
    residual_entries(&residuals, &mut report);
    let separate = immersion.samples.iter().filter(|s| s.flags & flags::SEPARATE_SHEET != 0).count();
    report.insert(
        "counts".into(),
        json!({
            "plan_points": points.len(),
            "samples": immersion.samples.len(),
            "degenerate": immersion.degenerate.len(),
            "separate_sheet": separate,
            "warnings": immersion.warnings.len(),
        }),
    );
    report.insert("warnings".into(), json!(immersion.warnings));
    report.insert(
        "base".into(),
        Value::Array(base.iter().map(|z| json!([z.re, z.im])).collect()),
    );
    report.insert("notes".into(), json!(notes));
    report.insert("tol_scale".into(), json!(opts.tol_scale));
    report.insert("status".into(), json!(status_name(code)));
    report.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    write_report(cfg, &report)?;
    Ok(code)
}

/// Parses `re1,im1,re2,im2,…`.
pub fn parse_base(text: &str, m: usize) -> Result<Vec<Complex64>, CliError> {
    let vals = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("--base: {e}")))?;
    if vals.len() != 2 * m {
        return Err(CliError::Config(format!("--base needs {} reals (re, im per coordinate), got {}", 2 * m, vals.len())));
    }
    Ok(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
}

/// Prints a summary of the geometry at the base point.
pub fn run_info(cfg: &RunConfig, base: Option<Vec<Complex64>>, out: &mut dyn Write) -> Result<i32, CliError> {
    let prep = cfg.prepotential()?;
    let (_, screening) = cfg.tolerances(1.0);
    let base = match base {
        Some(b) => b,
        None => resolve_base(cfg, &prep, &cfg.points()?, screening)?,
    };
    let p = SKPoint::new(&prep, &base).map_err(|e| CliError::Config(e.to_string()))?;
    if !p.is_nondegenerate() {
        return Err(CliError::Degenerate(format!(
            "base point is degenerate: |det Im Hess F| ≤ {:e}",
            p.degeneracy_tolerance()
        )));
    }
    let sig_b = p.sig_b().expect("nondegenerate point has a signature");
    let g = metric_g(&p).map_err(|e| CliError::Degenerate(e.to_string()))?;
    let sig_g = signature(&g, 1e-12).map_err(|e| CliError::Degenerate(e.to_string()))?;
    let geom = Geometry::new(&prep);
    let curvature = levi_civita_curvature(&geom, &p).map_err(|e| CliError::Config(e.to_string()))?;
    let congruence = paraboloid_congruence(&prep, &base, &[]).map_err(|e| CliError::Config(e.to_string()))?;

    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let coords: Vec<String> = base.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
    writeln!(out, "arity: {}", prep.arity()).map_err(io)?;
    writeln!(out, "base: {}", coords.join(", ")).map_err(io)?;
    writeln!(out, "sigB: {sig_b}").map_err(io)?;
    writeln!(out, "sigG: {sig_g}").map_err(io)?;
    writeln!(out, "scalar_curvature: {:.9}", clean_zero(curvature.scalar)).map_err(io)?;
    if let Some(k) = curvature.gauss {
        writeln!(out, "gauss_curvature: {:.9}", clean_zero(k)).map_err(io)?;
    }
    writeln!(out, "hermitian_factor: {}", hermitian_factor(&p)).map_err(io)?;
    let applicability = if congruence.applicable { "applicable" } else { "not applicable" };
    writeln!(out, "congruence: {applicability} ({})", congruence.note).map_err(io)?;
    Ok(EXIT_PASS)
}

fn clean_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}
