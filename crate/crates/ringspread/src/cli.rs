//! Command implementations behind the `ringspread` binary: spec loading,
//! report serialization (json/csv/text) and figure-data emission.
//!
//! Serialization conventions: schema field `1`, angles in [-π, π) radians,
//! scalar measures printed with 10 significant digits, +∞ as the literal
//! string `inf`, CSV with `\n` line endings and full-precision values.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::circle_state::{catalog, catalog_spec, CircleState, StateSpec};
use crate::error::{Error, Result};
use crate::measures::{
    measure_report, relation_report, Centers, MeasureReport, RelationReport,
};
use crate::numerics::ScanGrid;
use crate::windowed_moments::WindowEngine;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid_n: usize,
    pub quad_panels: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub normalize: bool,
    pub mmax: Option<i64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid_n: 720,
            quad_panels: 64,
            format: OutputFormat::Text,
            out: None,
            normalize: false,
            mmax: None,
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> ScanGrid {
        ScanGrid::with_n(self.grid_n)
    }
}

/// Resolve a spec argument: a catalog name (`psi_s`, `cs`, ...) or a path to
/// a JSON spec file.
pub fn load_spec(arg: &str) -> Result<StateSpec> {
    if let Some(spec) = catalog_spec(arg) {
        return Ok(spec);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Error::Parse(format!(
            "'{arg}' is neither a catalog state ({}) nor an existing spec file",
            catalog().iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path)?;
    StateSpec::parse(&text)
}

pub fn load_state(arg: &str, cfg: &RunConfig) -> Result<CircleState> {
    let mut spec = load_spec(arg)?;
    if let Some(mmax) = cfg.mmax {
        spec.truncation = Some(mmax);
    }
    spec.build(cfg.normalize)
}

// --- formatting helpers ---------------------------------------------------

/// Round to 10 significant digits; report values carry this precision.
fn sig10(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().unwrap()
}

/// Textual scalar: 10 significant digits, `inf` for +∞.
pub fn fmt_value(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{}", sig10(x))
    }
}

fn json_value(x: f64) -> Value {
    if x.is_infinite() {
        Value::String("inf".to_string())
    } else {
        json!(sig10(x))
    }
}

fn json_angles(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_value(x)).collect())
}

fn centers_json(centers: &Centers) -> Value {
    match centers {
        Centers::AllPoints => json!({ "all_points": true, "points": [] }),
        Centers::Points(p) => json!({ "all_points": false, "points": json_angles(p) }),
    }
}

// --- state ------------------------------------------------------------------

pub fn cmd_state(spec_arg: &str, cfg: &RunConfig) -> Result<String> {
    let state = load_state(spec_arg, cfg)?;
    let engine = WindowEngine::new(&state);
    let n_samples = 16;
    let densities: Vec<(f64, f64)> = (0..n_samples)
        .map(|i| {
            let phi = -PI + 2.0 * PI * i as f64 / n_samples as f64;
            (phi, state.density(phi))
        })
        .collect();
    match cfg.format {
        OutputFormat::Json => {
            let coeffs: Vec<Value> = state
                .coeffs()
                .map(|(m, c)| json!([m, c.re, c.im]))
                .collect();
            let v = json!({
                "schema": SCHEMA_VERSION,
                "state_label": state.label(),
                "m_min": state.m_min(),
                "m_max": state.m_max(),
                "coeffs": coeffs,
                "norm_sq": state.norm_sq(),
                "lz_mean": json_value(engine.lz_mean()),
                "lz_variance": json_value(engine.lz_variance()),
                "density_samples": densities.iter()
                    .map(|&(p, d)| json!([json_value(p), json_value(d)]))
                    .collect::<Vec<_>>(),
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()))
        }
        OutputFormat::Csv => {
            let mut out = String::from("m,re,im\n");
            for (m, c) in state.coeffs() {
                writeln!(out, "{m},{},{}", c.re, c.im).unwrap();
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            writeln!(out, "state: {}", state.label().unwrap_or("<unlabeled>")).unwrap();
            writeln!(out, "m range: [{}, {}]", state.m_min(), state.m_max()).unwrap();
            writeln!(out, "norm_sq = {}", fmt_value(state.norm_sq())).unwrap();
            writeln!(out, "<l_z> = {}", fmt_value(engine.lz_mean())).unwrap();
            writeln!(out, "var l_z = {}", fmt_value(engine.lz_variance())).unwrap();
            writeln!(out, "coefficients:").unwrap();
            for (m, c) in state.coeffs() {
                if c.norm() > 0.0 {
                    writeln!(out, "  m = {m:>4}: {:+.12} {:+.12}i", c.re, c.im).unwrap();
                }
            }
            writeln!(out, "density samples (phi, p):").unwrap();
            for (phi, d) in densities {
                writeln!(out, "  {:+.6}  {}", phi, fmt_value(d)).unwrap();
            }
            Ok(out)
        }
    }
}

/// List the built-in catalog states with their specs.
pub fn cmd_catalog() -> String {
    let mut out = String::new();
    for (name, spec) in catalog() {
        writeln!(out, "{name:<8} {}", spec.to_json()).unwrap();
    }
    out
}

// --- measure ----------------------------------------------------------------

pub fn cmd_measure(spec_arg: &str, cfg: &RunConfig) -> Result<String> {
    let state = load_state(spec_arg, cfg)?;
    let report = measure_report(&state, &cfg.grid())?;
    Ok(render_measure(&report, cfg.format))
}

fn measure_fields(r: &MeasureReport) -> Vec<(&'static str, f64)> {
    vec![
        ("tilde_sq", r.tilde_sq),
        ("kr_phi", r.kr_phi),
        ("kr_lz", r.kr_lz),
        ("a_measure", r.a_measure),
        ("b_measure", r.b_measure),
        ("c_measure", r.c_measure),
        ("lz_mean", r.lz_mean),
        ("lz_variance", r.lz_variance),
        ("mean_sq_cov", r.mean_sq_cov),
        ("mean_sq_img", r.mean_sq_img),
    ]
}

fn render_measure(r: &MeasureReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut measures = serde_json::Map::new();
            for (k, v) in measure_fields(r) {
                measures.insert(k.to_string(), json_value(v));
            }
            measures.insert("b_argmins".into(), json_angles(&r.b_argmins));
            measures.insert("b_degenerate".into(), json!(r.b_degenerate));
            let v = json!({
                "schema": SCHEMA_VERSION,
                "state_label": r.label,
                "measures": Value::Object(measures),
                "centers": centers_json(&r.centers),
                "selected_centers": centers_json(&r.selected_centers),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
        OutputFormat::Csv => {
            let mut out = String::from("field,value\n");
            for (k, v) in measure_fields(r) {
                writeln!(out, "{k},{}", fmt_value(v)).unwrap();
            }
            out
        }
        OutputFormat::Text => {
            let mut out = String::new();
            writeln!(out, "state: {}", r.label.as_deref().unwrap_or("<unlabeled>")).unwrap();
            for (k, v) in measure_fields(r) {
                writeln!(out, "{k:<12} = {}", fmt_value(v)).unwrap();
            }
            match &r.centers {
                Centers::AllPoints => writeln!(out, "centers: all points equivalent").unwrap(),
                Centers::Points(p) => {
                    let list: Vec<String> = p.iter().map(|&x| fmt_value(x)).collect();
                    writeln!(out, "centers: {}", list.join(", ")).unwrap();
                }
            }
            if let Centers::Points(p) = &r.selected_centers {
                let list: Vec<String> = p.iter().map(|&x| fmt_value(x)).collect();
                writeln!(out, "selected: {}", list.join(", ")).unwrap();
            }
            if !r.b_argmins.is_empty() {
                let list: Vec<String> = r.b_argmins.iter().map(|&x| fmt_value(x)).collect();
                writeln!(out, "b argmins: {}", list.join(", ")).unwrap();
            }
            out
        }
    }
}

// --- scan ---------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanQuantity {
    Mean,
    Variance,
    CovRe,
    CovIm,
}

impl ScanQuantity {
    pub fn name(&self) -> &'static str {
        match self {
            ScanQuantity::Mean => "mean",
            ScanQuantity::Variance => "variance",
            ScanQuantity::CovRe => "cov_re",
            ScanQuantity::CovIm => "cov_im",
        }
    }
}

/// φ₀ scan of one windowed quantity; always a CSV table.
pub fn cmd_scan(spec_arg: &str, quantity: ScanQuantity, cfg: &RunConfig) -> Result<String> {
    let state = load_state(spec_arg, cfg)?;
    let engine = WindowEngine::new(&state);
    let grid = cfg.grid();
    grid.validate()?;
    let label = state.label().unwrap_or("state").to_string();
    let mut out = format!("phi0,{}[{}]\n", quantity.name(), label);
    for phi0 in grid.points() {
        let v = match quantity {
            ScanQuantity::Mean => engine.mean_phi(phi0),
            ScanQuantity::Variance => engine.variance_phi(phi0),
            ScanQuantity::CovRe => engine.covariance_lz_phi(phi0).0,
            ScanQuantity::CovIm => engine.covariance_lz_phi(phi0).1,
        };
        writeln!(out, "{phi0},{v}").unwrap();
    }
    Ok(out)
}

// --- centers -------------------------------------------------------------

pub fn cmd_centers(spec_arg: &str, cfg: &RunConfig) -> Result<String> {
    let state = load_state(spec_arg, cfg)?;
    let grid = cfg.grid();
    let engine = WindowEngine::new(&state);
    let report = measure_report(&state, &grid)?;
    match (&report.centers, cfg.format) {
        (Centers::AllPoints, OutputFormat::Json) => Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "schema": SCHEMA_VERSION,
                "state_label": report.label,
                "all_points": true,
                "centers": [],
            }))
            .unwrap()
        )),
        (Centers::AllPoints, OutputFormat::Csv) => {
            Ok("center,dvar,selected\nall points equivalent,,\n".to_string())
        }
        (Centers::AllPoints, OutputFormat::Text) => Ok(format!(
            "state: {}\nall points equivalent (uniform density); Dphi = {}\n",
            report.label.as_deref().unwrap_or("<unlabeled>"),
            fmt_value(report.c_measure)
        )),
        (Centers::Points(points), format) => {
            let selected: Vec<f64> = match &report.selected_centers {
                Centers::Points(s) => s.clone(),
                Centers::AllPoints => Vec::new(),
            };
            let is_selected = |p: f64| selected.iter().any(|&s| (s - p).abs() < 1e-9);
            match format {
                OutputFormat::Json => {
                    let rows: Vec<Value> = points
                        .iter()
                        .map(|&p| {
                            json!({
                                "phi": json_value(p),
                                "dvar": json_value(engine.variance_phi(p)),
                                "selected": is_selected(p),
                            })
                        })
                        .collect();
                    Ok(format!(
                        "{}\n",
                        serde_json::to_string_pretty(&json!({
                            "schema": SCHEMA_VERSION,
                            "state_label": report.label,
                            "all_points": false,
                            "centers": rows,
                        }))
                        .unwrap()
                    ))
                }
                OutputFormat::Csv => {
                    let mut out = String::from("center,dvar,selected\n");
                    for &p in points {
                        writeln!(
                            out,
                            "{},{},{}",
                            fmt_value(p),
                            fmt_value(engine.variance_phi(p)),
                            is_selected(p)
                        )
                        .unwrap();
                    }
                    Ok(out)
                }
                OutputFormat::Text => {
                    let mut out = format!(
                        "state: {}\n",
                        report.label.as_deref().unwrap_or("<unlabeled>")
                    );
                    for &p in points {
                        writeln!(
                            out,
                            "  phi_c = {:<18} Dphi = {:<18}{}",
                            fmt_value(p),
                            fmt_value(engine.variance_phi(p)),
                            if is_selected(p) { " [selected]" } else { "" }
                        )
                        .unwrap();
                    }
                    Ok(out)
                }
            }
        }
    }
}

// --- relations -------------------------------------------------------------

pub fn cmd_relations(spec_arg: &str, cfg: &RunConfig) -> Result<String> {
    let state = load_state(spec_arg, cfg)?;
    let grid = cfg.grid();
    // windowed relation sampled at 8 evenly spaced φ₀
    let samples: Vec<f64> = (0..8).map(|i| -PI + 2.0 * PI * i as f64 / 8.0).collect();
    let rows = relation_report(&state, &grid, &samples)?;
    Ok(render_relations(state.label(), &rows, cfg.format))
}

fn render_relations(label: Option<&str>, rows: &[RelationReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id.name(),
                        "phi0": r.phi0.map(json_value),
                        "lhs": json_value(r.lhs),
                        "rhs": json_value(r.rhs),
                        "slack": json_value(r.slack),
                        "satisfied": r.satisfied,
                    })
                })
                .collect();
            let v = json!({
                "schema": SCHEMA_VERSION,
                "state_label": label,
                "relations": rows,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
        OutputFormat::Csv => {
            let mut out = String::from("id,phi0,lhs,rhs,slack,satisfied\n");
            for r in rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.id.name(),
                    r.phi0.map(fmt_value).unwrap_or_default(),
                    fmt_value(r.lhs),
                    fmt_value(r.rhs),
                    fmt_value(r.slack),
                    r.satisfied
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Text => {
            let mut out = format!("state: {}\n", label.unwrap_or("<unlabeled>"));
            for r in rows {
                let at = r
                    .phi0
                    .map(|p| format!(" @ phi0={}", fmt_value(p)))
                    .unwrap_or_default();
                writeln!(
                    out,
                    "{:<20} lhs={:<18} rhs={:<18} slack={:<18} {}{}",
                    r.id.name(),
                    fmt_value(r.lhs),
                    fmt_value(r.rhs),
                    fmt_value(r.slack),
                    if r.satisfied { "ok" } else { "VIOLATED" },
                    at
                )
                .unwrap();
            }
            out
        }
    }
}

// --- figure -----------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
}

impl Figure {
    fn stem(&self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
        }
    }

    fn states(&self) -> Vec<(&'static str, &'static str)> {
        // (catalog name, density column)
        match self {
            Figure::Fig1 => vec![("psi_s", "p_s"), ("psi_s2", "p_s2"), ("uniform", "p_0")],
            Figure::Fig2 => vec![("cs", "p_cs"), ("psi_s4", "p_s4")],
        }
    }
}

/// Emit per-state density samples plus a sidecar measure table; returns the
/// written paths.
pub fn cmd_figure(which: Figure, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)?;
    let grid = cfg.grid();
    grid.validate()?;

    let states: Vec<(&str, &str, CircleState)> = which
        .states()
        .into_iter()
        .map(|(name, col)| load_state(name, cfg).map(|s| (name, col, s)))
        .collect::<Result<_>>()?;

    let mut density = String::from("phi");
    for &(_, col, _) in &states {
        write!(density, ",{col}").unwrap();
    }
    density.push('\n');
    for phi in grid.points() {
        write!(density, "{phi}").unwrap();
        for (_, _, s) in &states {
            write!(density, ",{}", s.density(phi)).unwrap();
        }
        density.push('\n');
    }

    let mut sidecar =
        String::from("state,tilde_sq,kr_phi,kr_lz,a_measure,b_measure,c_measure\n");
    for (name, _, s) in &states {
        let r = measure_report(s, &grid)?;
        writeln!(
            sidecar,
            "{name},{},{},{},{},{},{}",
            fmt_value(r.tilde_sq),
            fmt_value(r.kr_phi),
            fmt_value(r.kr_lz),
            fmt_value(r.a_measure),
            fmt_value(r.b_measure),
            fmt_value(r.c_measure)
        )
        .unwrap();
    }

    let density_path = out_dir.join(format!("{}_densities.csv", which.stem()));
    let sidecar_path = out_dir.join(format!("{}_measures.csv", which.stem()));
    std::fs::write(&density_path, density)?;
    std::fs::write(&sidecar_path, sidecar)?;
    Ok(vec![density_path, sidecar_path])
}

/// Exit-status convention: 0 success, 2 spec/parse, 3 numerical domain, 4 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::NotNormalized { .. } => 2,
        Error::ParameterRange(_)
        | Error::DegenerateState(_)
        | Error::ExpMomentOverflow { .. }
        | Error::NumericalDomain(_)
        | Error::ContractViolation(_) => 3,
        Error::Io(_) => 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig10_rounding() {
        assert_eq!(fmt_value(f64::INFINITY), "inf");
        assert_eq!(fmt_value(1.0), "1");
        let v = fmt_value(std::f64::consts::PI * std::f64::consts::PI / 3.0);
        assert!(v.starts_with("3.28986813"), "{v}");
    }

    #[test]
    fn catalog_resolves_and_files_parse() {
        assert!(load_spec("psi_s").is_ok());
        assert!(load_spec("/no/such/file.json").is_err());
    }

    #[test]
    fn measure_uniform_text_reports_inf_and_all_points() {
        let cfg = RunConfig::default();
        let out = cmd_measure("uniform", &cfg).unwrap();
        assert!(out.contains("kr_phi       = inf"), "{out}");
        assert!(out.contains("all points equivalent"), "{out}");
    }

    #[test]
    fn scan_header_names_quantity_and_state() {
        let cfg = RunConfig {
            grid_n: 16,
            ..RunConfig::default()
        };
        let out = cmd_scan("psi_s", ScanQuantity::Variance, &cfg).unwrap();
        assert!(out.starts_with("phi0,variance[psi_s]\n"), "{out}");
        assert_eq!(out.lines().count(), 17);
    }

    #[test]
    fn unknown_spec_is_parse_error() {
        let err = load_spec("definitely_not_a_state").unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }
}
