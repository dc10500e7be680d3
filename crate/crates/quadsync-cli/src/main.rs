//! Experiment runner: every subcommand resolves its configuration from
//! built-in defaults, an optional flat key=value config file, and
//! command-line overrides (highest precedence), then writes CSV or JSON with
//! the resolved configuration in the metadata. Identical configurations
//! produce byte-identical output files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use commands::{
    cmd_bifurcation, cmd_dq, cmd_lyapunov, cmd_randan, cmd_sync, cmd_toy, BifurcationConfig,
    DqConfig, DqSource, LyapunovConfig, RandanConfig, SlaveSpec, SyncConfig, ToyConfig,
};
use config::{parse_f64_list, pick, pick_opt, CliError, FileConfig};
use output::{write_output, Format};
use quadsync::dimension::OracleKind;
use quadsync::maps::DEFAULT_BURN_IN;
use quadsync::randan::NoiseVariant;

const DEFAULT_SEED: u64 = 42;
const DEFAULT_N: usize = 1_000_000;
const DEFAULT_C1: f64 = 0.89;
const DEFAULT_C2: f64 = 0.8373351;
const DEFAULT_X0: f64 = 0.1;
const DEFAULT_Y0: f64 = -0.2;

#[derive(Parser)]
#[command(
    name = "quadsync",
    version,
    about = "Deterministic experiment runner for master/slave coupled quadratic maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronization-bound report per coupling strength
    Sync(SyncArgs),
    /// Lyapunov exponents over a parameter grid (or a coupling grid with --k)
    Lyapunov(LyapunovArgs),
    /// Bifurcation diagram samples with exponents and attractor classes
    Bifurcation(BifurcationArgs),
    /// Generalized-dimension spectrum of an oracle or dynamical sample set
    Dq(DqArgs),
    /// Stationary histograms of the additive-noise analog
    Randan(RandanArgs),
    /// Closed-form singularity spectrum and D_q of the affine Cantor model
    Toy(ToyArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the chacha8 generator (where randomness is used)
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration / sample count
    #[arg(long)]
    n: Option<usize>,
    /// Discarded leading iterates
    #[arg(long)]
    burn_in: Option<usize>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
}

const COMMON_KEYS: &[&str] = &["seed", "n", "burn_in", "out", "format"];

struct Common {
    seed: u64,
    n: usize,
    burn_in: usize,
    out: Option<PathBuf>,
    format: Format,
}

impl CommonArgs {
    fn load_file(&self, allowed: &[&str]) -> Result<FileConfig, CliError> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::empty(),
        };
        let mut all: Vec<&str> = COMMON_KEYS.to_vec();
        all.extend_from_slice(allowed);
        file.check_keys(&all)?;
        Ok(file)
    }

    fn resolve(&self, file: &FileConfig) -> Result<Common, CliError> {
        let format_str = pick(
            self.format.clone(),
            file.get_str("format"),
            "csv".to_string(),
        );
        let format = Format::parse(&format_str)
            .ok_or_else(|| CliError::Config(format!("format must be csv or json, got {format_str:?}")))?;
        Ok(Common {
            seed: pick(self.seed, file.get_u64("seed")?, DEFAULT_SEED),
            n: pick(self.n, file.get_usize("n")?, DEFAULT_N),
            burn_in: pick(self.burn_in, file.get_usize("burn_in")?, DEFAULT_BURN_IN),
            out: pick_opt(self.out.clone(), file.get_str("out").map(PathBuf::from)),
            format,
        })
    }
}

fn flag_f64_list(flag: &Option<String>, name: &str) -> Result<Option<Vec<f64>>, CliError> {
    flag.as_deref()
        .map(|s| parse_f64_list(s).map_err(|e| CliError::Config(format!("--{name}: {e}"))))
        .transpose()
}

// ---------------------------------------------------------------------------

#[derive(Args)]
struct SyncArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Master parameter
    #[arg(long)]
    c1: Option<f64>,
    /// Slave parameter
    #[arg(long)]
    c2: Option<f64>,
    /// Comma-separated coupling strengths
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    /// First orbit index of the limsup tail (default: burn_in)
    #[arg(long)]
    tail_start: Option<usize>,
}

fn resolve_sync(args: &SyncArgs) -> Result<(SyncConfig, Common), CliError> {
    let file = args
        .common
        .load_file(&["c1", "c2", "k", "x0", "y0", "tail_start"])?;
    let common = args.common.resolve(&file)?;
    let cfg = SyncConfig {
        n: common.n,
        c1: pick(args.c1, file.get_f64("c1")?, DEFAULT_C1),
        c2: pick(args.c2, file.get_f64("c2")?, DEFAULT_C2),
        k_list: pick(
            flag_f64_list(&args.k, "k")?,
            file.get_f64_list("k")?,
            vec![0.9],
        ),
        x0: pick(args.x0, file.get_f64("x0")?, DEFAULT_X0),
        y0: pick(args.y0, file.get_f64("y0")?, DEFAULT_Y0),
        tail_start: pick(args.tail_start, file.get_usize("tail_start")?, common.burn_in),
    };
    Ok((cfg, common))
}

#[derive(Args)]
struct LyapunovArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated map parameters (master mode)
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    x0: Option<f64>,
    /// Comma-separated couplings; presence switches to slave mode
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
}

fn resolve_lyapunov(args: &LyapunovArgs) -> Result<(LyapunovConfig, Common), CliError> {
    let file = args
        .common
        .load_file(&["c", "x0", "k", "c1", "c2", "y0"])?;
    let common = args.common.resolve(&file)?;
    let k_list = pick_opt(flag_f64_list(&args.k, "k")?, file.get_f64_list("k")?);
    let slave = k_list
        .map(|k_list| -> Result<SlaveSpec, CliError> {
            Ok(SlaveSpec {
                c1: pick(args.c1, file.get_f64("c1")?, DEFAULT_C1),
                c2: pick(args.c2, file.get_f64("c2")?, DEFAULT_C2),
                k_list,
                y0: pick(args.y0, file.get_f64("y0")?, DEFAULT_Y0),
            })
        })
        .transpose()?;
    let cfg = LyapunovConfig {
        n: common.n,
        burn_in: common.burn_in,
        c_list: pick(
            flag_f64_list(&args.c, "c")?,
            file.get_f64_list("c")?,
            vec![DEFAULT_C1],
        ),
        x0: pick(args.x0, file.get_f64("x0")?, DEFAULT_X0),
        slave,
    };
    Ok((cfg, common))
}

#[derive(Args)]
struct BifurcationArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    c_min: Option<f64>,
    #[arg(long)]
    c_max: Option<f64>,
    #[arg(long)]
    c_steps: Option<usize>,
    #[arg(long)]
    x0: Option<f64>,
    /// Post-burn-in samples kept per parameter value
    #[arg(long)]
    keep: Option<usize>,
}

fn resolve_bifurcation(args: &BifurcationArgs) -> Result<(BifurcationConfig, Common), CliError> {
    let file = args
        .common
        .load_file(&["c_min", "c_max", "c_steps", "x0", "keep"])?;
    let common = args.common.resolve(&file)?;
    let cfg = BifurcationConfig {
        n: common.n,
        burn_in: common.burn_in,
        c_min: pick(args.c_min, file.get_f64("c_min")?, 0.25),
        c_max: pick(args.c_max, file.get_f64("c_max")?, 1.0),
        c_steps: pick(args.c_steps, file.get_usize("c_steps")?, 151),
        x0: pick(args.x0, file.get_f64("x0")?, DEFAULT_X0),
        keep: pick(args.keep, file.get_usize("keep")?, 200),
    };
    Ok((cfg, common))
}

#[derive(Args)]
struct DqArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// oracle, master, or slave
    #[arg(long)]
    source: Option<String>,
    /// uniform, dirac, cantor3, or arcsine
    #[arg(long)]
    oracle: Option<String>,
    /// Master parameter (source = master)
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Coupling strength (source = slave)
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    #[arg(long)]
    q_min: Option<f64>,
    #[arg(long)]
    q_max: Option<f64>,
    #[arg(long)]
    q_steps: Option<usize>,
    /// Lower window edge as a fraction of the sample span (default n^-0.9)
    #[arg(long)]
    r_min_frac: Option<f64>,
    /// Upper window edge as a fraction of the sample span
    #[arg(long)]
    r_max_frac: Option<f64>,
    #[arg(long)]
    n_radii: Option<usize>,
}

fn resolve_dq(args: &DqArgs) -> Result<(DqConfig, Common), CliError> {
    let file = args.common.load_file(&[
        "source",
        "oracle",
        "c",
        "c1",
        "c2",
        "k",
        "x0",
        "y0",
        "q_min",
        "q_max",
        "q_steps",
        "r_min_frac",
        "r_max_frac",
        "n_radii",
    ])?;
    let common = args.common.resolve(&file)?;
    let source_str = pick(
        args.source.clone(),
        file.get_str("source"),
        "oracle".to_string(),
    );
    let source = DqSource::parse(&source_str)
        .ok_or_else(|| CliError::Config(format!("unknown source {source_str:?}")))?;
    let oracle_str = pick(
        args.oracle.clone(),
        file.get_str("oracle"),
        "uniform".to_string(),
    );
    let oracle = OracleKind::parse(&oracle_str)
        .ok_or_else(|| CliError::Config(format!("unknown oracle {oracle_str:?}")))?;
    let cfg = DqConfig {
        seed: common.seed,
        n: common.n,
        burn_in: common.burn_in,
        source,
        oracle,
        c: pick(args.c, file.get_f64("c")?, DEFAULT_C1),
        c1: pick(args.c1, file.get_f64("c1")?, DEFAULT_C1),
        c2: pick(args.c2, file.get_f64("c2")?, DEFAULT_C2),
        k: pick(args.k, file.get_f64("k")?, 0.9),
        x0: pick(args.x0, file.get_f64("x0")?, DEFAULT_X0),
        y0: pick(args.y0, file.get_f64("y0")?, DEFAULT_Y0),
        q_min: pick(args.q_min, file.get_f64("q_min")?, -5.0),
        q_max: pick(args.q_max, file.get_f64("q_max")?, 5.0),
        q_steps: pick(args.q_steps, file.get_usize("q_steps")?, 11),
        r_min_frac: pick_opt(args.r_min_frac, file.get_f64("r_min_frac")?),
        r_max_frac: pick(args.r_max_frac, file.get_f64("r_max_frac")?, 0.1),
        n_radii: pick(args.n_radii, file.get_usize("n_radii")?, 16),
    };
    Ok((cfg, common))
}

#[derive(Args)]
struct RandanArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    c2: Option<f64>,
    /// Comma-separated coupling strengths
    #[arg(long)]
    k: Option<String>,
    /// literal, slave_form, or both
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    /// Reservoir orbit length
    #[arg(long)]
    reservoir_n: Option<usize>,
    #[arg(long)]
    x0: Option<f64>,
}

fn resolve_randan(args: &RandanArgs) -> Result<(RandanConfig, Common), CliError> {
    let file = args
        .common
        .load_file(&["c2", "k", "variant", "bins", "reservoir_n", "x0"])?;
    let common = args.common.resolve(&file)?;
    let variant_str = pick(
        args.variant.clone(),
        file.get_str("variant"),
        "literal".to_string(),
    );
    let variants = match variant_str.as_str() {
        "both" => vec![NoiseVariant::Literal, NoiseVariant::SlaveForm],
        s => vec![NoiseVariant::parse(s).ok_or_else(|| {
            CliError::Config(format!("variant must be literal, slave_form, or both, got {s:?}"))
        })?],
    };
    let cfg = RandanConfig {
        seed: common.seed,
        n: common.n,
        burn_in: common.burn_in,
        c2: pick(args.c2, file.get_f64("c2")?, DEFAULT_C2),
        k_list: pick(
            flag_f64_list(&args.k, "k")?,
            file.get_f64_list("k")?,
            vec![0.5],
        ),
        variants,
        bins: pick(args.bins, file.get_usize("bins")?, 100),
        reservoir_n: pick(args.reservoir_n, file.get_usize("reservoir_n")?, 100_000),
        x0: pick(args.x0, file.get_f64("x0")?, DEFAULT_X0),
    };
    Ok((cfg, common))
}

#[derive(Args)]
struct ToyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Branch-0 expansion exponent
    #[arg(long)]
    lambda0: Option<f64>,
    /// Branch-2 expansion exponent
    #[arg(long)]
    lambda2: Option<f64>,
    /// Density exponent in (0, -pressure)
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n_lambda: Option<usize>,
    #[arg(long)]
    q_min: Option<f64>,
    #[arg(long)]
    q_max: Option<f64>,
    #[arg(long)]
    q_steps: Option<usize>,
}

fn resolve_toy(args: &ToyArgs) -> Result<(ToyConfig, Common), CliError> {
    let file = args.common.load_file(&[
        "lambda0", "lambda2", "alpha", "n_lambda", "q_min", "q_max", "q_steps",
    ])?;
    let common = args.common.resolve(&file)?;
    let ln4 = 4f64.ln();
    let cfg = ToyConfig {
        lambda0: pick(args.lambda0, file.get_f64("lambda0")?, ln4),
        lambda2: pick(args.lambda2, file.get_f64("lambda2")?, ln4),
        alpha: pick(args.alpha, file.get_f64("alpha")?, 0.3),
        n_lambda: pick(args.n_lambda, file.get_usize("n_lambda")?, 101),
        q_min: pick(args.q_min, file.get_f64("q_min")?, -5.0),
        q_max: pick(args.q_max, file.get_f64("q_max")?, 5.0),
        q_steps: pick(args.q_steps, file.get_usize("q_steps")?, 41),
    };
    Ok((cfg, common))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (out, common) = match &cli.command {
        Command::Sync(args) => {
            let (cfg, common) = resolve_sync(args)?;
            (cmd_sync(&cfg)?, common)
        }
        Command::Lyapunov(args) => {
            let (cfg, common) = resolve_lyapunov(args)?;
            (cmd_lyapunov(&cfg)?, common)
        }
        Command::Bifurcation(args) => {
            let (cfg, common) = resolve_bifurcation(args)?;
            (cmd_bifurcation(&cfg)?, common)
        }
        Command::Dq(args) => {
            let (cfg, common) = resolve_dq(args)?;
            (cmd_dq(&cfg)?, common)
        }
        Command::Randan(args) => {
            let (cfg, common) = resolve_randan(args)?;
            (cmd_randan(&cfg)?, common)
        }
        Command::Toy(args) => {
            let (cfg, common) = resolve_toy(args)?;
            (cmd_toy(&cfg)?, common)
        }
    };
    write_output(&out, common.out.as_deref(), common.format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
