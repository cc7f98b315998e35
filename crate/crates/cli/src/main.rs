//! `cpsg`: command-line verifier for the correspondence between the
//! quantum discrete sine-Gordon model at roots of unity and the N-state
//! chiral Potts model.

mod commands;
mod config;
mod error;
mod report;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{parse_coupling, parse_regime, parse_sign, FileConfig};
use cpsg_core::correspondence::Sign;
use cpsg_core::curve::Regime;
use error::CliError;
use num_complex::Complex64;
use report::Report;
use std::path::PathBuf;
use verify::VerifySettings;

const DEFAULT_SEED: u64 = 7;
const DEFAULT_ORDER: usize = 3;
const DEFAULT_TRIALS: usize = 20;
const DEFAULT_LENGTH: usize = 2;
const DEFAULT_EVOLVE_LENGTH: usize = 4;
const DEFAULT_STEPS: usize = 10;
const DEFAULT_ROWS: usize = 2;
const DEFAULT_COUNT: usize = 5;
const DEFAULT_COUPLING: Complex64 = Complex64::new(0.9, 0.2);

#[derive(Parser)]
#[command(
    name = "cpsg",
    version,
    about = "Numerical verifier for the discrete sine-Gordon / chiral Potts correspondence",
    propagate_version = true
)]
struct Cli {
    /// TOML configuration file; CPSG_CONFIG is used when the flag is absent.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum RegimeArg {
    /// Real modulus and rapidities on the principal branch.
    Real,
    /// Complex modulus and rapidities across all root sheets.
    Generic,
}

impl From<RegimeArg> for Regime {
    fn from(arg: RegimeArg) -> Regime {
        match arg {
            RegimeArg::Real => Regime::RealBranchSafe,
            RegimeArg::Generic => Regime::Generic,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(arg: SignArg) -> Sign {
        match arg {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite and report residuals.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Evolve a random lattice state and track its conserved quantities.
    Evolve(EvolveArgs),
    /// Evaluate a partition function by transfer-matrix trace.
    Partition(PartitionArgs),
    /// Curve utilities.
    Curve {
        #[command(subcommand)]
        action: CurveAction,
    },
}

#[derive(Args)]
struct CommonVerifyArgs {
    /// Root-of-unity order N.
    #[arg(long)]
    order: Option<usize>,
    /// Number of sampled trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Seed for the deterministic sampler.
    #[arg(long)]
    seed: Option<u64>,
    /// Sampling regime for curve data.
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
}

#[derive(Args)]
struct CorrespondenceArgs {
    #[command(flatten)]
    common: CommonVerifyArgs,
    /// Branch sign of the square root defining the first coupling.
    #[arg(long, value_enum)]
    sign_lambda: Option<SignArg>,
    /// Branch sign of the square root defining the second coupling.
    #[arg(long, value_enum)]
    sign_mu: Option<SignArg>,
}

#[derive(Args)]
struct SixVertexArgs {
    #[command(flatten)]
    common: CommonVerifyArgs,
    /// Half the number of chain sites.
    #[arg(long)]
    length: Option<usize>,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Star-triangle relation on sampled curve triples.
    Str(CommonVerifyArgs),
    /// Agreement of the matrix and scalar star-triangle forms.
    StrMatrix(CommonVerifyArgs),
    /// Twisted Yang-Baxter equation for the quantum R-matrix factor.
    TwistedYbe(CommonVerifyArgs),
    /// Parameter dictionary: defining relations, modulus, derived
    /// relations, factor identifications, unit constant.
    Correspondence(CorrespondenceArgs),
    /// 12-term dilogarithm identity and its stationarity.
    Dilog12(CommonVerifyArgs),
    /// Saddle-point substitution structure: invariant, involution,
    /// composition.
    Substitution(CommonVerifyArgs),
    /// Six-vertex R-matrix identities and chain transfer properties.
    SixVertex(SixVertexArgs),
    /// Factorization identity of the local evolution map.
    FIdentity(CommonVerifyArgs),
}

#[derive(Args)]
struct EvolveArgs {
    /// Half the number of lattice sites.
    #[arg(long)]
    length: Option<usize>,
    /// Number of evolution steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Coupling constant as "re,im".
    #[arg(long)]
    coupling: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PartitionArgs {
    /// Number of spin states per site.
    #[arg(long)]
    order: Option<usize>,
    /// Number of columns.
    #[arg(long)]
    length: Option<usize>,
    /// Number of rows.
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    /// Skip the brute-force configuration sum.
    #[arg(long)]
    skip_brute_force: bool,
}

#[derive(Subcommand)]
enum CurveAction {
    /// Sample points on a random curve and report membership residuals.
    Sample(SampleArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Root-of-unity order N.
    #[arg(long)]
    order: Option<usize>,
    /// Number of points to draw.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let with_timestamp = if cli.no_timestamp {
        false
    } else {
        file.timestamp.unwrap_or(true)
    };
    let format = resolve_format(cli.format, &file)?;
    let report = dispatch(&cli.command, &file, with_timestamp)?;
    let text = match format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report.to_csv(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn resolve_format(flag: Option<FormatArg>, file: &FileConfig) -> Result<FormatArg, CliError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match file.format.as_deref() {
        None => Ok(FormatArg::Json),
        Some("json") => Ok(FormatArg::Json),
        Some("csv") => Ok(FormatArg::Csv),
        Some(other) => Err(CliError::Config(format!(
            "format must be \"json\" or \"csv\", got \"{other}\""
        ))),
    }
}

fn resolve_order(flag: Option<usize>, file: &FileConfig) -> Result<usize, CliError> {
    let order = flag.or(file.order).unwrap_or(DEFAULT_ORDER);
    if order == 0 {
        return Err(CliError::Config("order must be at least 1".into()));
    }
    Ok(order)
}

fn resolve_regime(flag: Option<RegimeArg>, file: &FileConfig) -> Result<Regime, CliError> {
    if let Some(r) = flag {
        return Ok(r.into());
    }
    match file.regime.as_deref() {
        None => Ok(Regime::RealBranchSafe),
        Some(text) => parse_regime(text),
    }
}

fn verify_settings(
    args: &CommonVerifyArgs,
    file: &FileConfig,
    with_timestamp: bool,
) -> Result<VerifySettings, CliError> {
    Ok(VerifySettings {
        order: resolve_order(args.order, file)?,
        trials: args.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        regime: resolve_regime(args.regime, file)?,
        with_timestamp,
    })
}

fn resolve_sign(
    flag: Option<SignArg>,
    file_value: Option<&str>,
) -> Result<Sign, CliError> {
    if let Some(s) = flag {
        return Ok(s.into());
    }
    match file_value {
        None => Ok(Sign::Plus),
        Some(text) => parse_sign(text),
    }
}

fn dispatch(
    command: &Command,
    file: &FileConfig,
    with_timestamp: bool,
) -> Result<Report, CliError> {
    match command {
        Command::Verify { suite } => match suite {
            VerifySuite::Str(args) => verify::run_str(&verify_settings(args, file, with_timestamp)?),
            VerifySuite::StrMatrix(args) => {
                verify::run_str_matrix(&verify_settings(args, file, with_timestamp)?)
            }
            VerifySuite::TwistedYbe(args) => {
                verify::run_twisted_ybe(&verify_settings(args, file, with_timestamp)?)
            }
            VerifySuite::Correspondence(args) => {
                let settings = verify_settings(&args.common, file, with_timestamp)?;
                let sign_lambda = resolve_sign(args.sign_lambda, file.sign_lambda.as_deref())?;
                let sign_mu = resolve_sign(args.sign_mu, file.sign_mu.as_deref())?;
                verify::run_correspondence(&settings, sign_lambda, sign_mu)
            }
            VerifySuite::Dilog12(args) => {
                verify::run_dilog12(&verify_settings(args, file, with_timestamp)?)
            }
            VerifySuite::Substitution(args) => {
                verify::run_substitution(&verify_settings(args, file, with_timestamp)?)
            }
            VerifySuite::SixVertex(args) => {
                let settings = verify_settings(&args.common, file, with_timestamp)?;
                let length = args.length.or(file.length).unwrap_or(DEFAULT_LENGTH);
                if length == 0 {
                    return Err(CliError::Config("length must be at least 1".into()));
                }
                verify::run_six_vertex(&settings, length)
            }
            VerifySuite::FIdentity(args) => {
                verify::run_f_identity(&verify_settings(args, file, with_timestamp)?)
            }
        },
        Command::Evolve(args) => {
            let length = args.length.or(file.length).unwrap_or(DEFAULT_EVOLVE_LENGTH);
            let steps = args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS);
            let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
            let coupling = match args.coupling.as_deref().or(file.coupling.as_deref()) {
                Some(text) => parse_coupling(text)?,
                None => DEFAULT_COUPLING,
            };
            commands::run_evolve(length, steps, coupling, seed, with_timestamp)
        }
        Command::Partition(args) => {
            let order = resolve_order(args.order, file)?;
            let length = args.length.or(file.length).unwrap_or(DEFAULT_LENGTH);
            let rows = args.rows.or(file.rows).unwrap_or(DEFAULT_ROWS);
            let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
            let regime = resolve_regime(args.regime, file)?;
            commands::run_partition(
                order,
                length,
                rows,
                seed,
                regime,
                args.skip_brute_force,
                with_timestamp,
            )
        }
        Command::Curve { action } => match action {
            CurveAction::Sample(args) => {
                let order = resolve_order(args.order, file)?;
                let count = args.count.or(file.count).unwrap_or(DEFAULT_COUNT);
                let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
                let regime = resolve_regime(args.regime, file)?;
                commands::run_curve_sample(order, count, seed, regime, with_timestamp)
            }
        },
    }
}
