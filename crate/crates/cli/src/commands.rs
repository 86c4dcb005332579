use std::io::Write;
use std::path::Path;
use std::time::Instant;

use evm_core::{empirical_evm, evaluate, McConfig, PrecisionPolicy};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::ScenarioFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub sweep_value: Option<f64>,
    pub analytic_evm: f64,
    pub mc_evm: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub abs_diff: Option<f64>,
    /// max(1% of analytic, 3 stderr)
    pub band: Option<f64>,
    pub formula_used: String,
    pub eval_time_ms: f64,
}

impl ResultRow {
    pub fn agrees(&self) -> bool {
        match (self.abs_diff, self.band) {
            (Some(d), Some(b)) => d <= b,
            _ => true,
        }
    }
}

pub const CSV_HEADER: [&str; 7] = [
    "sweep_value",
    "analytic_evm",
    "mc_evm",
    "mc_stderr",
    "abs_diff",
    "band",
    "formula_used",
];

pub fn agreement_band(analytic: f64, stderr: f64) -> f64 {
    (0.01 * analytic).max(3.0 * stderr)
}

pub fn analytic_rows(file: &ScenarioFile, perturb: Option<f64>) -> Result<Vec<ResultRow>, CliError> {
    let policy = PrecisionPolicy::default();
    file.sweep_points()
        .into_iter()
        .map(|v| {
            let s = file.scenario_at(v)?;
            let t = Instant::now();
            let r = evaluate(&s, &policy)?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            Ok(ResultRow {
                sweep_value: v,
                analytic_evm: r.value * perturb.unwrap_or(1.0),
                mc_evm: None,
                mc_stderr: None,
                abs_diff: None,
                band: None,
                formula_used: r.formula_used.name().to_string(),
                eval_time_ms: ms,
            })
        })
        .collect()
}

pub fn validate_rows(file: &ScenarioFile, cfg: &McConfig, perturb: Option<f64>) -> Result<Vec<ResultRow>, CliError> {
    let mut rows = analytic_rows(file, perturb)?;
    for row in &mut rows {
        let s = file.scenario_at(row.sweep_value)?;
        let e = empirical_evm(&s, cfg)?;
        row.mc_evm = Some(e.mean);
        row.mc_stderr = Some(e.stderr);
        row.abs_diff = Some((row.analytic_evm - e.mean).abs());
        row.band = Some(agreement_band(row.analytic_evm, e.stderr));
    }
    Ok(rows)
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], w: W) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record([
            fmt_opt(r.sweep_value),
            r.analytic_evm.to_string(),
            fmt_opt(r.mc_evm),
            fmt_opt(r.mc_stderr),
            fmt_opt(r.abs_diff),
            fmt_opt(r.band),
            r.formula_used.clone(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema: u32,
    command: &'a str,
    scenario: &'a ScenarioFile,
    rows: &'a [ResultRow],
}

pub fn write_rows(
    rows: &[ResultRow],
    command: &str,
    file: &ScenarioFile,
    format: Format,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match out {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    match format {
        Format::Csv => write_csv(rows, &mut sink)?,
        Format::Json => {
            let report = JsonReport {
                schema: 1,
                command,
                scenario: file,
                rows,
            };
            serde_json::to_writer_pretty(&mut sink, &report).map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}
