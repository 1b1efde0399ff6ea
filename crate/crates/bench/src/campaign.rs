//! Monte-Carlo FER, latency and throughput campaigns.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use qc_layered_bp::channel::{frame_rng, init_llr, transmit, ChannelConfig};
use qc_layered_bp::layer_schedule::{utilization_with_budget, REFERENCE_LANE_BUDGET};
use qc_layered_bp::{
    beta, build_compact_index, decode_batch, descriptor, expand, syndrome_of, BaseMatrix,
    DecoderConfig, LayerSchedule, ParityCheck, Syndrome,
};
use rand::Rng;
use rayon::prelude::*;

use crate::report::{CampaignCell, CampaignReport, CodeSummary, ScheduleComparison};
use crate::BenchError;

/// Salt mixed into the seed for the random words of the syndrome workload,
/// keeping them independent of the channel noise streams.
const WORD_STREAM_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    /// Greedy merging of rows with disjoint column support.
    #[default]
    Merged,
    /// One base row per layer.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Workload {
    /// All-zero codeword, zero syndrome.
    #[default]
    AllZero,
    /// Uniformly random word per frame, decoded toward its own syndrome.
    RandomSyndrome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub matrix_path: PathBuf,
    /// Linear SNR points.
    pub snr_list: Vec<f64>,
    pub max_iterations: usize,
    pub early_termination: bool,
    /// Codewords decoded together (`K2`).
    pub batch_size: usize,
    /// Frames per SNR point.
    pub min_trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub lane_budget: u64,
    pub schedule: ScheduleKind,
    pub workload: Workload,
    pub llr_clip: f64,
    pub phi_epsilon: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        let dec = DecoderConfig::default();
        Self {
            matrix_path: PathBuf::new(),
            snr_list: vec![1.0],
            max_iterations: dec.max_iterations,
            early_termination: false,
            batch_size: 64,
            min_trials: 1024,
            seed: 1,
            workers: std::thread::available_parallelism().map_or(1, usize::from),
            lane_budget: REFERENCE_LANE_BUDGET,
            schedule: ScheduleKind::Merged,
            workload: Workload::AllZero,
            llr_clip: dec.llr_clip,
            phi_epsilon: dec.phi_epsilon,
        }
    }
}

impl CampaignConfig {
    pub fn decoder_config(&self) -> DecoderConfig {
        DecoderConfig {
            max_iterations: self.max_iterations,
            early_termination: self.early_termination,
            llr_clip: self.llr_clip,
            phi_epsilon: self.phi_epsilon,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.snr_list.is_empty() {
            return fail("snr list is empty".into());
        }
        if let Some(bad) = self.snr_list.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return fail(format!("snr {bad} is not positive and finite"));
        }
        if self.batch_size == 0 {
            return fail("batch size must be at least 1".into());
        }
        if self.min_trials < self.batch_size {
            return fail(format!(
                "trials ({}) must be at least the batch size ({})",
                self.min_trials, self.batch_size
            ));
        }
        if self.workers == 0 {
            return fail("workers must be at least 1".into());
        }
        if self.lane_budget == 0 {
            return fail("lane budget must be positive".into());
        }
        self.decoder_config()
            .validate()
            .map_err(|e| BenchError::Config(e.to_string()))
    }
}

/// Reads and parses the matrix named by the config.
pub fn load_matrix(cfg: &CampaignConfig) -> Result<BaseMatrix, BenchError> {
    let text = std::fs::read_to_string(&cfg.matrix_path).map_err(|source| BenchError::Io {
        path: cfg.matrix_path.clone(),
        source,
    })?;
    BaseMatrix::parse(&text).map_err(BenchError::Parse)
}

pub fn schedule_for(base: &BaseMatrix, kind: ScheduleKind) -> LayerSchedule {
    match kind {
        ScheduleKind::Merged => LayerSchedule::greedy(base),
        ScheduleKind::Single => LayerSchedule::one_row_per_layer(base.n_rows()),
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, BenchError> {
    cfg.validate()?;
    let base = load_matrix(cfg)?;
    run_campaign_on(&base, cfg)
}

/// Runs a campaign on an already loaded matrix.
pub fn run_campaign_on(base: &BaseMatrix, cfg: &CampaignConfig) -> Result<CampaignReport, BenchError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| campaign_body(base, cfg))
}

fn campaign_body(base: &BaseMatrix, cfg: &CampaignConfig) -> Result<CampaignReport, BenchError> {
    let code = descriptor(base)?;
    let schedule = schedule_for(base, cfg.schedule);
    let index = build_compact_index(base, &schedule)?;
    let h = expand(base);
    let dec_cfg = cfg.decoder_config();
    let util = utilization_with_budget(&schedule, cfg.batch_size, base.z(), cfg.lane_budget);

    let mut cells = Vec::with_capacity(cfg.snr_list.len());
    for &snr in &cfg.snr_list {
        let channel = ChannelConfig::new(snr, cfg.seed).map_err(|e| BenchError::Config(e.to_string()))?;
        let mut tally = Tally::default();
        let mut start = 0;
        while start < cfg.min_trials {
            let end = (start + cfg.batch_size).min(cfg.min_trials);
            let frames: Vec<Frame> = (start..end)
                .into_par_iter()
                .map(|f| make_frame(&h, &channel, cfg.workload, cfg.seed, f as u64))
                .collect();
            let inputs: Vec<(Vec<f64>, Syndrome)> = frames
                .iter()
                .map(|fr| (fr.llr.clone(), fr.syndrome.clone()))
                .collect();

            let t0 = Instant::now();
            let outcomes = decode_batch(&inputs, &index, &dec_cfg);
            tally.wall += t0.elapsed();

            let mut batch_iterations = 0;
            for (frame, outcome) in frames.iter().zip(outcomes) {
                let outcome = outcome?;
                batch_iterations = batch_iterations.max(outcome.iterations_used);
                tally.iterations += outcome.iterations_used;
                if !outcome.converged || outcome.word != frame.sent {
                    tally.errors += 1;
                }
                tally.frames += 1;
            }
            tally.batch_iterations += batch_iterations;
            start = end;
        }
        cells.push(tally.into_cell(snr, cfg, code.rate, code.block_length, code.total_expanded_edges, util.utilization));
    }

    Ok(CampaignReport::new(
        CodeSummary {
            matrix: cfg.matrix_path.display().to_string(),
            base_rows: base.n_rows(),
            base_cols: base.n_cols(),
            z: base.z(),
            block_length: code.block_length,
            n_checks: code.n_checks,
            rate: code.rate,
            base_edges: base.total_edges(),
            total_expanded_edges: code.total_expanded_edges,
            schedule: cfg.schedule,
            layers: schedule.n_layers(),
            k1: util.k1,
            per_layer_utilization: util.per_layer.clone(),
        },
        cfg,
        cells,
    ))
}

struct Frame {
    sent: Vec<u8>,
    syndrome: Syndrome,
    llr: Vec<f64>,
}

fn make_frame(h: &ParityCheck, channel: &ChannelConfig, workload: Workload, seed: u64, frame: u64) -> Frame {
    let n = h.n_vars();
    let (sent, syndrome) = match workload {
        Workload::AllZero => (vec![0u8; n], Syndrome::zeros(h.n_checks())),
        Workload::RandomSyndrome => {
            let mut rng = frame_rng(seed ^ WORD_STREAM_SALT, frame);
            let word: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
            let s = syndrome_of(&word, h).expect("word has block length");
            (word, s)
        }
    };
    let llr = init_llr(&transmit(&sent, channel, frame), channel);
    Frame { sent, syndrome, llr }
}

#[derive(Default)]
struct Tally {
    frames: usize,
    errors: usize,
    iterations: usize,
    batch_iterations: usize,
    wall: Duration,
}

impl Tally {
    fn into_cell(
        self,
        snr: f64,
        cfg: &CampaignConfig,
        rate: f64,
        block_length: usize,
        total_expanded_edges: usize,
        utilization: f64,
    ) -> CampaignCell {
        // Guard against a zero reading from a coarse clock.
        let wall = self.wall.as_secs_f64().max(1e-9);
        CampaignCell {
            snr,
            fer: self.errors as f64 / self.frames as f64,
            avg_iterations: self.iterations as f64 / self.frames as f64,
            latency_per_iteration_seconds: wall / self.batch_iterations.max(1) as f64,
            throughput_mbits_per_second: (self.frames * block_length) as f64 / wall / 1e6,
            beta: beta(rate, snr),
            total_expanded_edges,
            utilization,
            frames: self.frames,
            frame_errors: self.errors,
            total_iterations: self.iterations,
            batch_iterations: self.batch_iterations,
            wall_seconds: wall,
            batch_size: cfg.batch_size,
            workers: cfg.workers,
            max_iterations: cfg.max_iterations,
            early_termination: cfg.early_termination,
        }
    }
}

/// Runs the same campaign with one row per layer and with merged layers.
pub fn compare_schedules(cfg: &CampaignConfig) -> Result<ScheduleComparison, BenchError> {
    cfg.validate()?;
    let base = load_matrix(cfg)?;
    compare_schedules_on(&base, cfg)
}

pub fn compare_schedules_on(base: &BaseMatrix, cfg: &CampaignConfig) -> Result<ScheduleComparison, BenchError> {
    let single = run_campaign_on(
        base,
        &CampaignConfig {
            schedule: ScheduleKind::Single,
            ..cfg.clone()
        },
    )?;
    let merged = run_campaign_on(
        base,
        &CampaignConfig {
            schedule: ScheduleKind::Merged,
            ..cfg.clone()
        },
    )?;
    Ok(ScheduleComparison { single, merged })
}
