mod commands;
mod util;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use util::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "scldpc", version, about = "Quantized message passing for SC-LDPC coded modulation")]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory receiving artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// BMD rate at an SNR, or the SNR needed for a rate.
    Rates(RatesArgs),
    /// Window density-evolution thresholds.
    Threshold(ThresholdArgs),
    /// Export a density-evolution weight schedule.
    Weights(WeightsArgs),
    /// Girth-optimized cyclic lifting of a terminated coupled protograph.
    Lift(LiftArgs),
    /// Monte Carlo FER/BER of a lifted code.
    Simulate(SimulateArgs),
    /// BI-AWGN surrogates of every bit channel.
    Surrogate(SurrogateArgs),
    /// Decoder-internal bits exchanged per iteration.
    Dataflow(DataflowArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F64,
    F32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Empirical,
    Surrogate,
}

#[derive(Args, Debug)]
pub struct RatesArgs {
    /// Presets or JSON mode files; all presets when omitted.
    #[arg(long = "mode")]
    modes: Vec<String>,
    /// Report R_bmd at this SNR (dB).
    #[arg(long, conflicts_with = "rate")]
    snr: Option<f64>,
    /// Report the SNR (dB) at which R_bmd reaches this rate; defaults to the
    /// mode's transmission rate.
    #[arg(long)]
    rate: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DeArgs {
    /// Quantizer threshold T.
    #[arg(long = "t", default_value_t = 1.3)]
    t: f64,
    /// Iteration limit of a DE run.
    #[arg(long, default_value_t = 1000)]
    l_max: usize,
    #[arg(long, value_enum, default_value_t = InitArg::Empirical)]
    init: InitArg,
    /// Monte Carlo samples per bit level for empirical initialisation.
    #[arg(long, default_value_t = 1_000_000)]
    init_samples: usize,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    /// Regular ensemble as dv,dc.
    #[arg(long)]
    ensemble: String,
    #[arg(long)]
    mode: String,
    /// qmp, tmp, bmp, a comma list or all.
    #[arg(long, default_value = "all")]
    alg: String,
    #[arg(long, default_value_t = 15)]
    window: usize,
    /// Lower bracket end; defaults to the BMD limit of the mode.
    #[arg(long)]
    lo: Option<f64>,
    /// Upper bracket end; defaults to four dB above the lower one.
    #[arg(long)]
    hi: Option<f64>,
    #[command(flatten)]
    de: DeArgs,
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    #[arg(long)]
    ensemble: String,
    #[arg(long)]
    mode: String,
    #[arg(long)]
    alg: String,
    /// Design SNR (dB); the window threshold is computed when omitted.
    #[arg(long)]
    snr: Option<f64>,
    /// Coupled positions of the terminated design protograph.
    #[arg(long = "positions", short = 'S', default_value_t = 50)]
    positions: usize,
    /// Window used to find the threshold when --snr is omitted.
    #[arg(long, default_value_t = 15)]
    window: usize,
    #[command(flatten)]
    de: DeArgs,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[arg(long)]
    ensemble: String,
    #[arg(long = "positions", short = 'S', default_value_t = 50)]
    positions: usize,
    /// Lifting factor.
    #[arg(long = "lift", short = 'Q')]
    q: usize,
    #[arg(long, default_value_t = 8)]
    girth: usize,
    /// Hill-climbing sweeps after the greedy pass.
    #[arg(long, default_value_t = 40)]
    sweeps: usize,
    /// Also write the parity-check matrix in alist format.
    #[arg(long)]
    alist: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Code file written by `lift`.
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    mode: String,
    /// Ensemble the code was lifted from, as dv,dc.
    #[arg(long)]
    ensemble: String,
    /// Weight schedule written by `weights`.
    #[arg(long, required_unless_present = "bp", conflicts_with = "bp")]
    schedule: Option<PathBuf>,
    /// Decode with the sum-product reference instead.
    #[arg(long)]
    bp: bool,
    /// Expected algorithm of the schedule.
    #[arg(long)]
    alg: Option<String>,
    /// SNR grid as a,b,c or start:stop:step (dB).
    #[arg(long)]
    snr: String,
    #[arg(long, default_value_t = 1_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 50)]
    min_errors: u64,
    /// Decoder iteration limit.
    #[arg(long, default_value_t = 500)]
    l_max: usize,
    /// Put m bits of distinct levels on one symbol.
    #[arg(long)]
    grouped: bool,
    /// Frames per parallel batch [default: 4 per thread].
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
}

#[derive(Args, Debug)]
pub struct SurrogateArgs {
    #[arg(long)]
    mode: String,
    #[arg(long)]
    snr: f64,
}

#[derive(Args, Debug)]
pub struct DataflowArgs {
    /// Code length n_c.
    #[arg(long)]
    n: u64,
    /// Bits per message.
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Average VN degree.
    #[arg(long)]
    dv: f64,
}

pub struct Globals {
    pub seed: u64,
    pub out: PathBuf,
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads: must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(util::runtime)?;
    }
    let g = Globals { seed: cli.seed, out: cli.out };
    match cli.cmd {
        Command::Rates(a) => commands::rates(&g, a),
        Command::Threshold(a) => commands::threshold(&g, a),
        Command::Weights(a) => commands::weights(&g, a),
        Command::Lift(a) => commands::lift(&g, a),
        Command::Simulate(a) => commands::simulate(&g, a),
        Command::Surrogate(a) => commands::surrogate(&g, a),
        Command::Dataflow(a) => commands::dataflow(&g, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { util::EXIT_VALIDATION as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
