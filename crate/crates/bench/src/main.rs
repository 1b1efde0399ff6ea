use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use decode_bench::{
    compare_schedules, emit_comparison, emit_report, load_matrix, run_campaign, BenchError,
    CampaignConfig, OutputFormat, ScheduleKind, Workload,
};
use qc_layered_bp::layer_schedule::{utilization_with_budget, REFERENCE_LANE_BUDGET};
use qc_layered_bp::{conflict_graph, descriptor, LayerSchedule};

#[derive(Parser)]
#[command(name = "decode-bench", version, about = "Layered BP decoding campaigns for QC-LDPC codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an FER / latency / throughput campaign.
    Run(RunArgs),
    /// Run the campaign twice, with one row per layer and with merged layers.
    CompareSchedules(RunArgs),
    /// Print the code summary, the greedy layer schedule and its utilization.
    Schedule(ScheduleArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Comma-separated linear SNR values.
    #[arg(long, value_delimiter = ',', required = true)]
    snr: Vec<f64>,
    /// Read SNR values as dB instead of linear.
    #[arg(long)]
    db: bool,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    /// Codewords per batch.
    #[arg(long, default_value_t = 64)]
    batch: usize,
    #[arg(long)]
    early_term: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Frames per SNR point.
    #[arg(long, default_value_t = 1024)]
    trials: usize,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Decode random words toward their syndromes instead of the all-zero word.
    #[arg(long)]
    encode: bool,
    #[arg(long, value_enum, default_value = "merged")]
    schedule: ScheduleKind,
    #[arg(long, default_value_t = REFERENCE_LANE_BUDGET)]
    lane_budget: u64,
    #[arg(long, default_value_t = 30.0)]
    llr_clip: f64,
    #[arg(long, default_value_t = 1e-10)]
    phi_epsilon: f64,
}

impl RunArgs {
    fn config(&self) -> CampaignConfig {
        let defaults = CampaignConfig::default();
        let snr_list = if self.db {
            self.snr.iter().map(|d| 10f64.powf(d / 10.0)).collect()
        } else {
            self.snr.clone()
        };
        CampaignConfig {
            matrix_path: self.matrix.clone(),
            snr_list,
            max_iterations: self.iters,
            early_termination: self.early_term,
            batch_size: self.batch,
            min_trials: self.trials,
            seed: self.seed,
            workers: self.workers.unwrap_or(defaults.workers),
            lane_budget: self.lane_budget,
            schedule: self.schedule,
            workload: if self.encode { Workload::RandomSyndrome } else { Workload::AllZero },
            llr_clip: self.llr_clip,
            phi_epsilon: self.phi_epsilon,
        }
    }
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Print the rows of every layer.
    #[arg(long)]
    dump_schedule: bool,
    /// Codewords per batch used for the utilization figure.
    #[arg(long, default_value_t = 64)]
    batch: usize,
    #[arg(long, default_value_t = REFERENCE_LANE_BUDGET)]
    lane_budget: u64,
}

fn schedule_summary(args: &ScheduleArgs) -> Result<(), BenchError> {
    if args.batch == 0 || args.lane_budget == 0 {
        return Err(BenchError::Config("batch and lane budget must be positive".into()));
    }
    let base = load_matrix(&CampaignConfig {
        matrix_path: args.matrix.clone(),
        ..CampaignConfig::default()
    })?;
    let code = descriptor(&base)?;
    let schedule = LayerSchedule::greedy(&base);
    let util = utilization_with_budget(&schedule, args.batch, base.z(), args.lane_budget);
    println!("base {}x{} z={}", base.n_rows(), base.n_cols(), base.z());
    println!("block_length {}", code.block_length);
    println!("rate {}", code.rate);
    println!("base_edges {}", base.total_edges());
    println!("total_expanded_edges {}", code.total_expanded_edges);
    println!("conflicts {}", conflict_graph(&base).edges().len());
    println!("layers {}", schedule.n_layers());
    println!("k1 {}", util.k1);
    println!("utilization {}", util.utilization);
    if args.dump_schedule {
        print!("{}", schedule.dump());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run_campaign(&args.config())
            .and_then(|report| emit_report(&report, args.format, args.out.as_deref())),
        Command::CompareSchedules(args) => compare_schedules(&args.config())
            .and_then(|cmp| emit_comparison(&cmp, args.format, args.out.as_deref())),
        Command::Schedule(args) => schedule_summary(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
