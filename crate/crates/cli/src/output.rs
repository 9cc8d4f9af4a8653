//! Result records (TOML) and field/trace CSV files.
//!
//! Floats in CSV files are written with 17 significant digits, which
//! round-trips every `f64` exactly. Records embed the resolved config so a
//! result can be re-evaluated without its original config file.

use std::fs;
use std::path::{Path, PathBuf};

use dnls_core::solver::TraceRow;
use dnls_core::{Field, Graph, GroundStateResult, StopReason};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

pub const SCHEMA: &str = "dnls-result-1";

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Summary of one ground-state solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub iterations: usize,
    pub energy: f64,
    pub pointwise_residual: f64,
    pub nehari_residual: f64,
    pub grad_norm: f64,
    pub u_sup: f64,
    pub wall_time_s: f64,
    /// File name of the solution CSV, relative to the record.
    pub solution_csv: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_csv: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub result: Summary,
    pub config: RunConfig,
}

pub fn write_toml<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = toml::to_string(value)
        .map_err(|e| CliError::Run(format!("cannot serialise {}: {e}", path.display())))?;
    fs::write(path, text)?;
    Ok(())
}

pub fn read_record(path: &Path) -> Result<ResultRecord, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let value: toml::Value = text
        .parse()
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_path_to_error::deserialize(value)
        .map_err(|e| CliError::Input(format!("{}: {}: {}", path.display(), e.path(), e.inner())))
}

/// `vertex_index, <coordinates>, value`.
pub fn write_field_csv(path: &Path, g: &Graph, u: &Field) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["vertex_index".to_string()];
    header.extend(g.coordinate_names());
    header.push("value".into());
    w.write_record(&header)?;
    for x in 0..g.vertex_count() {
        let mut row = vec![x.to_string()];
        row.extend(g.coordinates(x).iter().map(|c| c.to_string()));
        row.push(fmt(u[x]));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field_csv(path: &Path, g: &Graph) -> Result<Field, CliError> {
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut values = vec![f64::NAN; g.vertex_count()];
    let mut seen = 0;
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad =
            |what: &str| CliError::Input(format!("{}: row {}: {what}", path.display(), line + 1));
        let x: usize = rec
            .get(0)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad vertex index"))?;
        let v: f64 = rec
            .get(rec.len().saturating_sub(1))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad value"))?;
        if x >= values.len() {
            return Err(bad("vertex index outside the graph"));
        }
        values[x] = v;
        seen += 1;
    }
    if seen != g.vertex_count() {
        return Err(CliError::Input(format!(
            "{}: {seen} rows for {} vertices",
            path.display(),
            g.vertex_count()
        )));
    }
    Field::from_values(g, values).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn write_trace_csv(path: &Path, trace: &[TraceRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["iter", "s_w", "psi", "tangent_grad_norm"])?;
    for r in trace {
        w.write_record([
            r.iter.to_string(),
            fmt(r.s_w),
            fmt(r.psi),
            fmt(r.tangent_grad_norm),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<name>.toml`, `<name>_solution.csv` and optionally
/// `<name>_trace.csv` into `dir`; returns the record path.
pub fn write_result(
    dir: &Path,
    name: &str,
    command: &str,
    config: &RunConfig,
    g: &Graph,
    r: &GroundStateResult,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    let solution = format!("{name}_solution.csv");
    write_field_csv(&dir.join(&solution), g, &r.u_star)?;
    let trace = if config.output.trace {
        let t = format!("{name}_trace.csv");
        write_trace_csv(&dir.join(&t), &r.trace)?;
        Some(t)
    } else {
        None
    };
    let record = ResultRecord {
        result: Summary {
            schema: SCHEMA.into(),
            command: command.into(),
            seed: config.solver.seed,
            converged: r.converged,
            stop_reason: r.stop_reason,
            iterations: r.iterations,
            energy: r.energy,
            pointwise_residual: r.residuals.pointwise_sup,
            nehari_residual: r.residuals.nehari.unwrap_or(f64::INFINITY),
            grad_norm: r.residuals.grad_norm,
            u_sup: r.u_star.sup_norm(),
            wall_time_s: r.wall_time.as_secs_f64(),
            solution_csv: solution,
            trace_csv: trace,
        },
        config: config.clone(),
    };
    let path = dir.join(format!("{name}.toml"));
    write_toml(&path, &record)?;
    Ok(path)
}
