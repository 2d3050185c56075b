//! Command-line surface and the validated run configuration behind it.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use bcv_core::{CutLevel, ExactProbability, Scale, MAX_TABLE_PANEL};
use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::render::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "bcv",
    version,
    about = "Binomial cut-level validity: critical respondent counts and item verdicts for expert panels",
    after_help = "\
Examples:
  bcv tables --scale 3 --range 5:100 --format csv
  bcv tables --scale 4 --range 20:20 --verify
  bcv classify --input panel.csv --scale 3 --lambda 1/20
  bcv compare --range 5:40 --format markdown
  bcv distribution --n 20 --scale 3"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical respondent counts for a run of panel sizes
    Tables(TablesArgs),
    /// Classify every item of a long-format survey CSV
    Classify(ClassifyArgs),
    /// BCV counts next to the normal-approximation and p = 1/2 binomial counts
    Compare(CompareArgs),
    /// Exact pmf of the chance model for one panel size
    Distribution(DistributionArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,

    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Response scale: 3 (p = 1/3) or 4 (p = 1/4)
    #[arg(long, default_value = "3")]
    pub scale: String,

    /// Cut level as a fraction (1/20) or decimal (0.05); repeatable
    #[arg(long = "lambda")]
    pub lambdas: Vec<String>,

    /// Panel sizes, `A:B` or a single `N`
    #[arg(long, default_value = "5:100")]
    pub range: String,

    /// Raise every critical count to at least this many respondents
    #[arg(long)]
    pub min_floor: Option<u64>,

    /// Compare against the bundled printed tables
    #[arg(long)]
    pub verify: bool,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Survey CSV with header `respondent_id,item_id,response`
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, default_value = "3")]
    pub scale: String,

    #[arg(long, default_value = "1/20")]
    pub lambda: String,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, default_value = "5:40")]
    pub range: String,

    /// Significance for the normal-approximation column
    #[arg(long, default_value = "0.05")]
    pub wilson_alpha: String,

    /// Significance for the exact p = 1/2 column
    #[arg(long, default_value = "0.05")]
    pub ayre_alpha: String,

    #[arg(long)]
    pub min_floor: Option<u64>,

    /// Compare against the bundled printed comparison
    #[arg(long)]
    pub verify: bool,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    /// Panel size
    #[arg(long)]
    pub n: u64,

    #[arg(long, default_value = "3")]
    pub scale: String,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Tables,
    Classify,
    Compare,
    Distribution,
}

/// Everything a run needs, already validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub scale: Scale,
    pub lambdas: Vec<CutLevel>,
    pub range: RangeInclusive<u64>,
    pub input: Option<PathBuf>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub min_floor: Option<u64>,
    pub verify: bool,
    pub wilson_alpha: ExactProbability,
    pub ayre_alpha: ExactProbability,
}

impl RunConfig {
    fn base(command: CommandKind, common: Common) -> Self {
        let five = ExactProbability::from_ratio(1, 20).expect("valid");
        RunConfig {
            command,
            scale: Scale::S3,
            lambdas: vec![CutLevel::five_percent()],
            range: 1..=1,
            input: None,
            format: common.format,
            out: common.out,
            min_floor: None,
            verify: false,
            wilson_alpha: five.clone(),
            ayre_alpha: five,
        }
    }
}

/// Parses `A:B` or `N` into a range within `1..=10000`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u64>, CliError> {
    let bad = || CliError::Usage(format!("invalid panel range `{text}` (expected A:B)"));
    let (lo, hi) = match text.split_once(':') {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let n: u64 = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo < 1 || hi > MAX_TABLE_PANEL || lo > hi {
        return Err(CliError::Usage(format!(
            "panel range `{text}` must satisfy 1 ≤ A ≤ B ≤ {MAX_TABLE_PANEL}"
        )));
    }
    Ok(lo..=hi)
}

fn parse_scale(text: &str) -> Result<Scale, CliError> {
    text.parse()
        .map_err(|e: bcv_core::BcvError| CliError::Usage(e.to_string()))
}

fn parse_lambda(text: &str) -> Result<CutLevel, CliError> {
    text.parse()
        .map_err(|e: bcv_core::BcvError| CliError::Usage(format!("--lambda: {e}")))
}

fn parse_alpha(text: &str, flag: &str) -> Result<ExactProbability, CliError> {
    text.parse()
        .map_err(|e: bcv_core::BcvError| CliError::Usage(format!("{flag}: {e}")))
}

impl TryFrom<Command> for RunConfig {
    type Error = CliError;

    fn try_from(cmd: Command) -> Result<Self, CliError> {
        match cmd {
            Command::Tables(a) => {
                let mut c = RunConfig::base(CommandKind::Tables, a.common);
                c.scale = parse_scale(&a.scale)?;
                c.lambdas = if a.lambdas.is_empty() {
                    vec![CutLevel::five_percent(), CutLevel::one_percent()]
                } else {
                    a.lambdas.iter().map(|l| parse_lambda(l)).collect::<Result<_, _>>()?
                };
                c.range = parse_range(&a.range)?;
                c.min_floor = a.min_floor;
                c.verify = a.verify;
                Ok(c)
            }
            Command::Classify(a) => {
                let mut c = RunConfig::base(CommandKind::Classify, a.common);
                c.scale = parse_scale(&a.scale)?;
                c.lambdas = vec![parse_lambda(&a.lambda)?];
                c.input = Some(a.input);
                Ok(c)
            }
            Command::Compare(a) => {
                let mut c = RunConfig::base(CommandKind::Compare, a.common);
                c.range = parse_range(&a.range)?;
                if *c.range.start() < 5 {
                    return Err(CliError::Usage("compare needs panel sizes of at least 5".into()));
                }
                c.wilson_alpha = parse_alpha(&a.wilson_alpha, "--wilson-alpha")?;
                c.ayre_alpha = parse_alpha(&a.ayre_alpha, "--ayre-alpha")?;
                c.min_floor = a.min_floor;
                c.verify = a.verify;
                Ok(c)
            }
            Command::Distribution(a) => {
                let mut c = RunConfig::base(CommandKind::Distribution, a.common);
                c.scale = parse_scale(&a.scale)?;
                c.range = parse_range(&a.n.to_string())?;
                Ok(c)
            }
        }
    }
}

/// Parses a full argument vector (program name first).
pub fn config_from_args<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    RunConfig::try_from(cli.command)
}
