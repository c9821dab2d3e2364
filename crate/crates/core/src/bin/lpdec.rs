//! `lpdec`: decoding experiments on the AWGN channel, CSV out.
//!
//! Exit status is 0 on success, 1 for an invalid command line or
//! experiment spec, 2 when the run itself fails.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use lpdec::harness::{run_experiment, CodeSource, DecoderKind, ExperimentKind, ExperimentSpec};
use lpdec::rpc::RpcBudget;

#[derive(Parser)]
#[command(name = "lpdec", version, about = "Adaptive LP decoding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a single block.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Rate-1/2 codes of fixed length over a list of check degrees.
    SweepDc {
        #[arg(long, default_value_t = 360)]
        n: usize,
        #[arg(long = "dc", value_delimiter = ',', default_value = "4,8,16,40")]
        degrees: Vec<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Codes of fixed degrees over a list of lengths.
    SweepN {
        #[arg(long, default_value_t = 3)]
        dv: usize,
        #[arg(long, default_value_t = 6)]
        dc: usize,
        #[arg(long = "n", value_delimiter = ',', default_value = "30,120,480")]
        lengths: Vec<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Codes of fixed length and variable degree over a list of check counts.
    SweepM {
        #[arg(long, default_value_t = 120)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        dv: usize,
        #[arg(long = "m", value_delimiter = ',', default_value = "30,60,90")]
        checks: Vec<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Word error rate against SNR.
    Wer {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Per-block decoding time of several decoders.
    Timing {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CodeArgs {
    /// Parity-check matrix in alist format.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Random regular code `n,dv,dc`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    gen: Option<Vec<usize>>,
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated SNR values in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1.0")]
    snr: Vec<f64>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Comma-separated decoders: adaptive, standard, rpc, bp.
    #[arg(long, value_delimiter = ',')]
    decoder: Option<Vec<DecoderKind>>,
    /// Cycle trials per RPC cut attempt.
    #[arg(long, default_value_t = RpcBudget::default().c_max)]
    cmax: usize,
    /// LP solves allowed after the adaptive phase of RPC decoding.
    #[arg(long, default_value_t = RpcBudget::default().lp_resolve_cap)]
    lp_resolve_cap: usize,
    /// Wall-clock cap per RPC decode, in milliseconds.
    #[arg(long)]
    tmax_ms: Option<u64>,
    /// Re-solve from the previous basis (default).
    #[arg(long, overrides_with = "cold")]
    warm: bool,
    /// Re-solve each LP from scratch.
    #[arg(long, overrides_with = "warm")]
    cold: bool,
    /// Add every RPC cut found in an attempt instead of the first.
    #[arg(long)]
    batch_cuts: bool,
    /// Decode the noise-free channel output.
    #[arg(long)]
    noiseless: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn code_source(args: &CodeArgs) -> Result<CodeSource, String> {
    match (&args.code, &args.gen) {
        (Some(path), _) => Ok(CodeSource::Alist(path.clone())),
        (None, Some(g)) if g.len() == 3 => Ok(CodeSource::Generated { n: g[0], dv: g[1], dc: g[2] }),
        (None, Some(_)) => Err("--gen takes exactly three values n,dv,dc".into()),
        (None, None) => Err("one of --code or --gen is required".into()),
    }
}

fn build_spec(command: Command) -> Result<ExperimentSpec, String> {
    let (kind, code, run, sweep, default_decoders, default_blocks) = match command {
        Command::Decode { code, run } => (ExperimentKind::DecodeOne, code_source(&code)?, run, vec![], vec![DecoderKind::Adaptive], 1),
        Command::SweepDc { n, degrees, run } => (
            ExperimentKind::SweepDc,
            CodeSource::Generated { n, dv: 2, dc: 4 },
            run,
            degrees,
            vec![DecoderKind::Adaptive],
            50,
        ),
        Command::SweepN { dv, dc, lengths, run } => (
            ExperimentKind::SweepN,
            CodeSource::Generated { n: lengths.first().copied().unwrap_or(0), dv, dc },
            run,
            lengths,
            vec![DecoderKind::Adaptive],
            100,
        ),
        Command::SweepM { n, dv, checks, run } => (
            ExperimentKind::SweepM,
            CodeSource::Generated { n, dv, dc: 2 },
            run,
            checks,
            vec![DecoderKind::Adaptive],
            100,
        ),
        Command::Wer { code, run } => {
            (ExperimentKind::Wer, code_source(&code)?, run, vec![], vec![DecoderKind::Adaptive, DecoderKind::Rpc], 2000)
        }
        Command::Timing { code, run } => (
            ExperimentKind::Timing,
            code_source(&code)?,
            run,
            vec![],
            vec![DecoderKind::Adaptive, DecoderKind::Standard],
            100,
        ),
    };
    let mut spec = ExperimentSpec::new(kind, code);
    spec.snr_db = run.snr;
    spec.blocks = run.blocks.unwrap_or(default_blocks);
    spec.decoders = run.decoder.unwrap_or(default_decoders);
    spec.master_seed = run.seed;
    spec.budget = RpcBudget {
        c_max: run.cmax,
        lp_resolve_cap: run.lp_resolve_cap,
        t_max: run.tmax_ms.map(Duration::from_millis),
        batch: run.batch_cuts,
    };
    spec.warm_start = !run.cold;
    spec.sweep = sweep;
    spec.noiseless = run.noiseless;
    spec.output = run.out;
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let spec = match build_spec(cli.command) {
        Ok(spec) => spec,
        Err(msg) => {
            eprintln!("lpdec: {msg}");
            return ExitCode::from(1);
        }
    };
    let sink: Box<dyn Write> = match &spec.output {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("lpdec: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match run_experiment(&spec, sink) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lpdec: {e}");
            ExitCode::from(if e.is_invalid_spec() { 1 } else { 2 })
        }
    }
}
