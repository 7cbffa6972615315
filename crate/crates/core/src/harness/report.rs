use std::io::Write;

use serde::Serialize;

use super::{ExperimentConfig, Format, HarnessError};
use crate::rde::SolverReport;
use crate::stats::MeanStderr;

pub const CSV_HEADER: [&str; 7] = ["cell", "estimate", "stderr", "reference", "ref_provenance", "z", "pass"];

/// A reference value always travels with the name of the result it comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reference {
    pub value: f64,
    pub provenance: String,
}

impl Reference {
    pub fn new(value: f64, provenance: &str) -> Self {
        Self { value, provenance: provenance.to_string() }
    }
}

/// One row of a report. `pass` is `None` for cells that are only reported.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub cell: String,
    pub estimate: f64,
    pub stderr: Option<f64>,
    pub reference: Option<Reference>,
    pub z: Option<f64>,
    pub pass: Option<bool>,
}

impl Cell {
    /// Pass when `|mean - reference| <= z_max * stderr`.
    pub fn z_test(cell: String, est: MeanStderr, reference: Reference, z_max: f64) -> Self {
        let z = est.z(reference.value);
        Self { cell, estimate: est.mean, stderr: Some(est.stderr), z: Some(z), pass: Some(z.abs() <= z_max), reference: Some(reference) }
    }

    /// Pass decided by the caller.
    pub fn check(cell: String, estimate: f64, stderr: Option<f64>, reference: Reference, pass: bool) -> Self {
        let z = stderr.filter(|s| *s > 0.0).map(|s| (estimate - reference.value) / s);
        Self { cell, estimate, stderr, z, pass: Some(pass), reference: Some(reference) }
    }

    pub fn reported(cell: String, estimate: f64, stderr: Option<f64>, reference: Option<Reference>) -> Self {
        let z = match (&reference, stderr) {
            (Some(r), Some(s)) if s > 0.0 => Some((estimate - r.value) / s),
            _ => None,
        };
        Self { cell, estimate, stderr, reference, z, pass: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: ExperimentConfig,
    pub cells: Vec<Cell>,
    pub solvers: Vec<SolverReport>,
    pub runtime_seconds: f64,
}

#[derive(Serialize)]
struct JsonCell<'a> {
    cell: &'a str,
    estimate: f64,
    stderr: Option<f64>,
    reference: Option<f64>,
    ref_provenance: Option<&'a str>,
    z: Option<f64>,
    pass: Option<bool>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    config: &'a ExperimentConfig,
    cells: Vec<JsonCell<'a>>,
    all_pass: bool,
    solvers: &'a [SolverReport],
    runtime_seconds: f64,
}

/// 17 significant digits, enough to round-trip any f64.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl Report {
    /// True when every cell with a pass line passes.
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass != Some(false))
    }

    pub fn cell(&self, name: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.cell == name)
    }

    /// CSV body. Runtime is left out so that reruns compare byte for byte.
    pub fn to_csv(&self) -> Result<String, HarnessError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for c in &self.cells {
            w.write_record([
                c.cell.clone(),
                num(c.estimate),
                opt_num(c.stderr),
                opt_num(c.reference.as_ref().map(|r| r.value)),
                c.reference.as_ref().map(|r| r.provenance.clone()).unwrap_or_default(),
                opt_num(c.z),
                c.pass.map(|p| p.to_string()).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| HarnessError::Io(e.into_error().to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        let cells = self
            .cells
            .iter()
            .map(|c| JsonCell {
                cell: &c.cell,
                estimate: c.estimate,
                stderr: c.stderr,
                reference: c.reference.as_ref().map(|r| r.value),
                ref_provenance: c.reference.as_ref().map(|r| r.provenance.as_str()),
                z: c.z,
                pass: c.pass,
            })
            .collect();
        let doc = JsonReport {
            config: &self.config,
            cells,
            all_pass: self.passed(),
            solvers: &self.solvers,
            runtime_seconds: self.runtime_seconds,
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    pub fn render(&self, format: Format) -> Result<String, HarnessError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json() + "\n"),
        }
    }

    pub fn write_to(&self, format: Format, mut out: impl Write) -> Result<(), HarnessError> {
        out.write_all(self.render(format)?.as_bytes())?;
        out.flush()?;
        Ok(())
    }
}
