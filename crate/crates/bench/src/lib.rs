//! Decoding campaigns for QC-LDPC codes: frame error rate, iteration counts,
//! latency and throughput over a list of SNR points, written as CSV or JSON.

use std::path::PathBuf;

pub mod campaign;
pub mod report;

pub use campaign::{
    compare_schedules, compare_schedules_on, load_matrix, run_campaign, run_campaign_on,
    schedule_for, CampaignConfig, ScheduleKind, Workload,
};
pub use report::{
    emit_comparison, emit_report, write_comparison_csv, write_csv, write_json, CampaignCell,
    CampaignReport, CodeSummary, OutputFormat, ScheduleComparison, CSV_COLUMNS, SCHEMA_VERSION,
};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Parse(#[from] qc_layered_bp::ParseError),
    #[error(transparent)]
    Code(#[from] qc_layered_bp::CodeError),
    #[error(transparent)]
    Decode(#[from] qc_layered_bp::DecodeError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Write(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// Process exit status: 2 for bad input, 3 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Parse(_) | BenchError::Code(_) | BenchError::Decode(_) => 2,
            BenchError::Io { .. } | BenchError::Write(_) | BenchError::Csv(_) | BenchError::Json(_) => 3,
        }
    }
}
