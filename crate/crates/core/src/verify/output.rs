use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ResidualReport;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(reports: &[ResidualReport]) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        Summary {
            total: reports.len(),
            passed,
            failed: reports.len() - passed,
        }
    }
}

/// The JSON report document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteDocument {
    pub summary: Summary,
    pub reports: Vec<ResidualReport>,
}

impl SuiteDocument {
    pub fn new(reports: Vec<ResidualReport>) -> Self {
        SuiteDocument {
            summary: Summary::of(&reports),
            reports,
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    family: &'a str,
    alpha_re: Option<f64>,
    alpha_im: Option<f64>,
    epsilon: Option<f64>,
    step: Option<f64>,
    max_abs_residual: f64,
    relative_residual: f64,
    tolerance: f64,
    pass: bool,
    fitted_re: Option<f64>,
    fitted_im: Option<f64>,
    detail: &'a str,
}

fn io_err(path: &str, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    }
}

/// Write the report document as pretty JSON.
pub fn write_json<W: Write>(mut out: W, reports: &[ResidualReport]) -> Result<()> {
    let doc = SuiteDocument::new(reports.to_vec());
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| io_err("<json>", e))?;
    writeln!(out).map_err(|e| io_err("<json>", e))
}

/// Write one CSV row per report, header included.
pub fn write_csv<W: Write>(out: W, reports: &[ResidualReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        let m = &r.metadata;
        w.serialize(CsvRow {
            name: &r.name,
            family: m.family.as_deref().unwrap_or(""),
            alpha_re: m.alpha.map(|a| a.re),
            alpha_im: m.alpha.map(|a| a.im),
            epsilon: m.epsilon,
            step: m.step,
            max_abs_residual: r.max_abs_residual,
            relative_residual: r.relative_residual,
            tolerance: r.tolerance,
            pass: r.pass,
            fitted_re: r.fitted_eigenvalue.map(|v| v.re),
            fitted_im: r.fitted_eigenvalue.map(|v| v.im),
            detail: m.detail.as_deref().unwrap_or(""),
        })
        .map_err(|e| io_err("<csv>", e))?;
    }
    w.flush().map_err(|e| io_err("<csv>", e))
}

/// Write to a file path, creating or truncating it.
pub(crate) fn to_file(path: &Path, write: impl FnOnce(std::fs::File) -> Result<()>) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| io_err(&path.display().to_string(), e))?;
    write(file)
}

/// Human-readable table: one line per check.
pub fn render_table(reports: &[ResidualReport]) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        s.push_str(&format!(
            "{status}  {:<width$}  rel={:.3e}  tol={:.1e}\n",
            r.name, r.relative_residual, r.tolerance
        ));
        if let (false, Some(detail)) = (r.pass, &r.metadata.detail) {
            s.push_str(&format!("      {detail}\n"));
        }
    }
    let sum = Summary::of(reports);
    s.push_str(&format!(
        "{} checks, {} passed, {} failed\n",
        sum.total, sum.passed, sum.failed
    ));
    s
}

/// Write the JSON and CSV outputs named in the config, if any.
pub fn write_outputs(paths: &super::OutputPaths, reports: &[ResidualReport]) -> Result<()> {
    if let Some(p) = &paths.json {
        to_file(p, |f| write_json(std::io::BufWriter::new(f), reports))?;
    }
    if let Some(p) = &paths.csv {
        to_file(p, |f| write_csv(f, reports))?;
    }
    Ok(())
}
