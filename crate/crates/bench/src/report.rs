//! Campaign reports and their CSV / JSON encodings.
//!
//! CSV columns, in order: `snr, fer, avg_iterations,
//! latency_per_iteration_seconds, throughput_mbits_per_second, beta,
//! total_expanded_edges, utilization`. The schedule comparison prefixes a
//! `schedule` column. JSON carries the full report, tagged with
//! [`SCHEMA_VERSION`].

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::campaign::{CampaignConfig, ScheduleKind, Workload};
use crate::BenchError;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 8] = [
    "snr",
    "fer",
    "avg_iterations",
    "latency_per_iteration_seconds",
    "throughput_mbits_per_second",
    "beta",
    "total_expanded_edges",
    "utilization",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Metric definitions, printed into every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Definitions {
    pub snr: String,
    pub frame_error: String,
    pub throughput: String,
    pub latency_per_iteration: String,
    pub beta: String,
    pub utilization: String,
}

impl Default for Definitions {
    fn default() -> Self {
        Self {
            snr: "linear, 1/sigma^2 for unit-power BPSK".into(),
            frame_error: "decoder did not converge, or converged word differs from the sent word".into(),
            throughput: "decoded frames * block_length / decode wall-clock seconds / 1e6 (Mbit/s)".into(),
            latency_per_iteration: "decode wall-clock seconds / sum over batches of the batch's largest iteration count".into(),
            beta: "rate / (0.5 * log2(1 + snr))".into(),
            utilization: "min(k1 * k2 * z / lane_budget, 1) with k1 = smallest layer size".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub matrix: String,
    pub base_rows: usize,
    pub base_cols: usize,
    pub z: usize,
    pub block_length: usize,
    pub n_checks: usize,
    pub rate: f64,
    pub base_edges: usize,
    pub total_expanded_edges: usize,
    pub schedule: ScheduleKind,
    pub layers: usize,
    pub k1: usize,
    pub per_layer_utilization: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSettings {
    pub max_iterations: usize,
    pub early_termination: bool,
    pub batch_size: usize,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub lane_budget: u64,
    pub workload: Workload,
    pub llr_clip: f64,
    pub phi_epsilon: f64,
}

/// Results for one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignCell {
    pub snr: f64,
    pub fer: f64,
    pub avg_iterations: f64,
    pub latency_per_iteration_seconds: f64,
    pub throughput_mbits_per_second: f64,
    pub beta: f64,
    pub total_expanded_edges: usize,
    pub utilization: f64,
    pub frames: usize,
    pub frame_errors: usize,
    pub total_iterations: usize,
    pub batch_iterations: usize,
    pub wall_seconds: f64,
    pub batch_size: usize,
    pub workers: usize,
    pub max_iterations: usize,
    pub early_termination: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub definitions: Definitions,
    pub code: Option<CodeSummary>,
    pub settings: Option<CampaignSettings>,
    pub cells: Vec<CampaignCell>,
}

impl CampaignReport {
    pub fn new(code: CodeSummary, cfg: &CampaignConfig, cells: Vec<CampaignCell>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            definitions: Definitions::default(),
            code: Some(code),
            settings: Some(CampaignSettings {
                max_iterations: cfg.max_iterations,
                early_termination: cfg.early_termination,
                batch_size: cfg.batch_size,
                trials: cfg.min_trials,
                seed: cfg.seed,
                workers: cfg.workers,
                lane_budget: cfg.lane_budget,
                workload: cfg.workload,
                llr_clip: cfg.llr_clip,
                phi_epsilon: cfg.phi_epsilon,
            }),
            cells,
        }
    }

    /// A report with no cells.
    pub fn empty() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            definitions: Definitions::default(),
            code: None,
            settings: None,
            cells: Vec::new(),
        }
    }
}

/// Single-row-layer and merged-layer campaigns side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleComparison {
    pub single: CampaignReport,
    pub merged: CampaignReport,
}

impl ScheduleComparison {
    pub fn merged_layers(&self) -> usize {
        self.merged.code.as_ref().map_or(0, |c| c.layers)
    }

    pub fn single_layers(&self) -> usize {
        self.single.code.as_ref().map_or(0, |c| c.layers)
    }
}

fn cell_record(cell: &CampaignCell) -> [String; 8] {
    [
        cell.snr.to_string(),
        cell.fer.to_string(),
        cell.avg_iterations.to_string(),
        cell.latency_per_iteration_seconds.to_string(),
        cell.throughput_mbits_per_second.to_string(),
        cell.beta.to_string(),
        cell.total_expanded_edges.to_string(),
        cell.utilization.to_string(),
    ]
}

pub fn write_csv<W: Write>(report: &CampaignReport, out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for cell in &report.cells {
        w.write_record(cell_record(cell))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_comparison_csv<W: Write>(cmp: &ScheduleComparison, out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("schedule").chain(CSV_COLUMNS))?;
    for (label, report) in [("single", &cmp.single), ("merged", &cmp.merged)] {
        for cell in &report.cells {
            w.write_record(std::iter::once(label.to_string()).chain(cell_record(cell)))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(value: &T, mut out: W) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn with_output<F>(path: Option<&Path>, write: F) -> Result<(), BenchError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), BenchError>,
{
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|source| BenchError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            let mut buf = std::io::BufWriter::new(file);
            write(&mut buf)?;
            buf.flush()?;
            Ok(())
        }
        None => write(&mut std::io::stdout().lock()),
    }
}

/// Writes `report` to `path`, or stdout when `path` is `None`.
pub fn emit_report(report: &CampaignReport, format: OutputFormat, path: Option<&Path>) -> Result<(), BenchError> {
    with_output(path, |w| match format {
        OutputFormat::Csv => write_csv(report, w),
        OutputFormat::Json => write_json(report, w),
    })
}

pub fn emit_comparison(cmp: &ScheduleComparison, format: OutputFormat, path: Option<&Path>) -> Result<(), BenchError> {
    with_output(path, |w| match format {
        OutputFormat::Csv => write_comparison_csv(cmp, w),
        OutputFormat::Json => write_json(cmp, w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell() -> CampaignCell {
        CampaignCell {
            snr: 0.161,
            fer: 0.25,
            avg_iterations: 12.5,
            latency_per_iteration_seconds: 0.001,
            throughput_mbits_per_second: 42.0,
            beta: 0.9286,
            total_expanded_edges: 3_767_500,
            utilization: 0.00477,
            frames: 4,
            frame_errors: 1,
            total_iterations: 50,
            batch_iterations: 20,
            wall_seconds: 0.02,
            batch_size: 2,
            workers: 1,
            max_iterations: 50,
            early_termination: true,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut buf = Vec::new();
        write_csv(&CampaignReport::empty(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "snr,fer,avg_iterations,latency_per_iteration_seconds,throughput_mbits_per_second,beta,total_expanded_edges,utilization\n"
        );
    }

    #[test]
    fn one_cell_is_one_row_of_eight() {
        let mut report = CampaignReport::empty();
        report.cells.push(cell());
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1], "0.161,0.25,12.5,0.001,42,0.9286,3767500,0.00477");
        assert_eq!(lines[1].split(',').count(), 8);
    }

    #[test]
    fn json_round_trip() {
        let mut report = CampaignReport::empty();
        report.cells.push(cell());
        let mut buf = Vec::new();
        write_json(&report, &mut buf).unwrap();
        let back: CampaignReport = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, report);
        let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(value["schema_version"], SCHEMA_VERSION);
    }
}
