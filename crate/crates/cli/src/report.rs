//! Report types and artifact emission.
//!
//! Every command builds a self-describing report: the echoed effective
//! config, a derived summary, and the result rows. JSON serializes the whole
//! report with stable key order; CSV emits the rows alone with one header
//! line, 15-significant-digit floats, and a trailing newline. Files are
//! written to a temporary sibling and renamed into place so a failed run
//! never leaves partial output.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

/// Explicit --output wins; otherwise the output-directory environment
/// variable names a default file per command; otherwise standard output.
pub fn resolve(output: Option<PathBuf>, command: &str, format: Format) -> Destination {
    match output {
        Some(path) => Destination::File(path),
        None => match std::env::var_os("MULTIGROVER_OUTPUT_DIR") {
            Some(dir) => Destination::File(
                PathBuf::from(dir).join(format!("{command}.{}", format.extension())),
            ),
            None => Destination::Stdout,
        },
    }
}

pub fn emit(artifact: &str, destination: &Destination) -> Result<()> {
    match destination {
        Destination::Stdout => {
            std::io::stdout()
                .write_all(artifact.as_bytes())
                .context("writing to standard output")?;
        }
        Destination::File(path) => {
            let dir = path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .unwrap_or_else(|| Path::new("."));
            let mut tmp = tempfile::Builder::new()
                .prefix(".multigrover-")
                .tempfile_in(dir)
                .with_context(|| format!("creating temporary file in {}", dir.display()))?;
            tmp.write_all(artifact.as_bytes())
                .context("writing artifact")?;
            tmp.flush().context("flushing artifact")?;
            tmp.persist(path)
                .with_context(|| format!("renaming into {}", path.display()))?;
        }
    }
    Ok(())
}

/// 15 significant digits, enough to reconstruct every checked tolerance.
pub fn float(x: f64) -> String {
    format!("{x:.14e}")
}

fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

pub fn to_json<T: Serialize>(report: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).context("serializing report")?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
pub struct CurveRow {
    pub t: f64,
    pub p_analytic: f64,
    pub p_full: f64,
    pub abs_err: f64,
}

#[derive(Serialize)]
pub struct ContinuousConfig {
    pub command: &'static str,
    pub n: usize,
    pub marked: Vec<usize>,
    pub energy: f64,
    pub t_max: f64,
    pub steps: usize,
    pub format: Format,
}

#[derive(Serialize)]
pub struct ContinuousSummary {
    pub optimal_time: f64,
    pub overlap: f64,
    pub max_abs_err: f64,
}

#[derive(Serialize)]
pub struct ContinuousReport {
    pub config: ContinuousConfig,
    pub summary: ContinuousSummary,
    pub rows: Vec<CurveRow>,
}

impl ContinuousReport {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut out = String::from("t,p_analytic,p_full,abs_err\n");
                for row in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        float(row.t),
                        float(row.p_analytic),
                        float(row.p_full),
                        float(row.abs_err)
                    ));
                }
                Ok(out)
            }
        }
    }
}

#[derive(Serialize)]
pub struct IterationRow {
    pub m: usize,
    pub p_closed: f64,
    pub p_full: f64,
    pub abs_err: f64,
}

#[derive(Serialize)]
pub struct DiscreteConfig {
    pub command: &'static str,
    pub n: usize,
    pub marked: Vec<usize>,
    pub iterations: usize,
    pub format: Format,
}

#[derive(Serialize)]
pub struct DiscreteSummary {
    pub theta: f64,
    pub alpha: f64,
    pub m_star: u64,
    pub p_at_m_star: f64,
    pub max_abs_err: f64,
}

#[derive(Serialize)]
pub struct DiscreteReport {
    pub config: DiscreteConfig,
    pub summary: DiscreteSummary,
    pub rows: Vec<IterationRow>,
}

impl DiscreteReport {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut out = String::from("m,p_closed,p_full,abs_err\n");
                for row in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        row.m,
                        float(row.p_closed),
                        float(row.p_full),
                        float(row.abs_err)
                    ));
                }
                Ok(out)
            }
        }
    }
}

#[derive(Serialize)]
pub struct StoppingConfig {
    pub command: &'static str,
    pub n: usize,
    pub marked: Vec<usize>,
    pub format: Format,
}

#[derive(Serialize)]
pub struct StoppingSummary {
    pub theta: f64,
    pub alpha: f64,
    pub j_real: Option<f64>,
    pub j_first_order: Option<f64>,
    pub j_int: u64,
    pub e_at_j_int: f64,
    pub residual: Option<f64>,
    pub certificate: Option<f64>,
}

#[derive(Serialize)]
pub struct StoppingReport {
    pub config: StoppingConfig,
    pub summary: StoppingSummary,
}

fn optional_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

impl StoppingReport {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => Ok(format!(
                "theta,alpha,j_real,j_first_order,j_int,e_at_j_int,residual,certificate\n{},{},{},{},{},{},{},{}\n",
                float(self.summary.theta),
                float(self.summary.alpha),
                optional_float(self.summary.j_real),
                optional_float(self.summary.j_first_order),
                self.summary.j_int,
                float(self.summary.e_at_j_int),
                optional_float(self.summary.residual),
                optional_float(self.summary.certificate),
            )),
        }
    }
}

#[derive(Serialize)]
pub struct ClassicalConfig {
    pub command: &'static str,
    pub n: u64,
    pub ell: u64,
    pub trials: u64,
    pub seed: u64,
    pub format: Format,
}

#[derive(Serialize)]
pub struct ClassicalSummary {
    pub expectation: f64,
    pub expectation_pmf: Option<f64>,
    pub with_replacement: f64,
    pub mc_mean: f64,
    pub mc_standard_error: f64,
}

#[derive(Serialize)]
pub struct ClassicalReport {
    pub config: ClassicalConfig,
    pub summary: ClassicalSummary,
}

impl ClassicalReport {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => Ok(format!(
                "n,ell,expectation,expectation_pmf,with_replacement,mc_mean,mc_standard_error,trials,seed\n{},{},{},{},{},{},{},{},{}\n",
                self.config.n,
                self.config.ell,
                float(self.summary.expectation),
                optional_float(self.summary.expectation_pmf),
                float(self.summary.with_replacement),
                float(self.summary.mc_mean),
                float(self.summary.mc_standard_error),
                self.config.trials,
                self.config.seed,
            )),
        }
    }
}

#[derive(Serialize)]
pub struct VerifyRow {
    pub suite: String,
    pub property: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyConfig {
    pub command: &'static str,
    pub suite: String,
    pub n: usize,
    pub ell: usize,
    pub energy: f64,
    pub format: Format,
}

#[derive(Serialize)]
pub struct VerifySummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub summary: VerifySummary,
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut out = String::from("suite,property,passed,detail\n");
                for row in &self.rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        csv_field(&row.suite),
                        csv_field(&row.property),
                        row.passed,
                        csv_field(&row.detail)
                    ));
                }
                Ok(out)
            }
        }
    }
}
