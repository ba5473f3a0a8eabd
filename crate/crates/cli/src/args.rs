use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use avcauth::lp::DEFAULT_TOL;
use avcauth::mbac::{AttackKind, EncoderKind, Scenario};

#[derive(Debug, Parser)]
#[command(
    name = "avcauth",
    version,
    about = "Authentication over arbitrarily-varying channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide overwritability, symmetrizability and related properties of a channel file.
    Analyze(AnalyzeArgs),
    /// Place two observation channels in the degradation order.
    Degrade(DegradeArgs),
    /// Run a seeded experiment sweep and write it as CSV.
    Simulate(SimulateArgs),
    /// Exact per-message authentication error of a small code.
    Exact(ExactArgs),
    /// Write one of the built-in channels as a file.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct DegradeArgs {
    pub u1: PathBuf,
    pub u2: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Thm2,
    Thm4,
    Thm5,
    Example1,
    Custom,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Thm2 => Scenario::Thm2,
            ScenarioArg::Thm4 => Scenario::Thm4,
            ScenarioArg::Thm5 => Scenario::Thm5,
            ScenarioArg::Example1 => Scenario::Example1,
            ScenarioArg::Custom => Scenario::Custom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncoderArg {
    Det,
    Stoch,
}

impl From<EncoderArg> for EncoderKind {
    fn from(e: EncoderArg) -> Self {
        match e {
            EncoderArg::Det => EncoderKind::Deterministic,
            EncoderArg::Stoch => EncoderKind::Stochastic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackArg {
    Absent,
    Impersonation,
    DegradationImpersonation,
    DecodeAndForge,
    MatchOrErase,
}

impl From<AttackArg> for AttackKind {
    fn from(a: AttackArg) -> Self {
        match a {
            AttackArg::Absent => AttackKind::Absent,
            AttackArg::Impersonation => AttackKind::Impersonation,
            AttackArg::DegradationImpersonation => AttackKind::DegradationImpersonation,
            AttackArg::DecodeAndForge => AttackKind::DecodeAndForge,
            AttackArg::MatchOrErase => AttackKind::MatchOrErase,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GrantArg {
    None,
    Message,
    Distance,
    Type,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "thm4")]
    pub scenario: ScenarioArg,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Blocklengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long = "M")]
    pub messages: Option<usize>,
    #[arg(long, value_enum)]
    pub encoder: Option<EncoderArg>,
    /// Attacks, comma separated; the scenario's own list when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub attack: Vec<AttackArg>,
    /// Side information for decode-and-forge; replaces the scenario's.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub grant: Vec<GrantArg>,
    /// Trials per message.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Evaluate exactly instead of by Monte Carlo.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Channel file; mutually exclusive with --preset.
    pub path: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "path")]
    pub preset: Option<ScenarioArg>,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long = "M", default_value_t = 4)]
    pub messages: usize,
    #[arg(long, value_enum)]
    pub attack: Option<AttackArg>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Decoding radius for channel files; derived from the channel when omitted.
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub grant: Vec<GrantArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelPreset {
    Mbac,
    FlipErasure,
    ErasureState,
    Replacement,
    Bsc,
    Z,
    Bec,
    Identity,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, value_enum)]
    pub preset: ChannelPreset,
    /// Channel parameter.
    #[arg(long, default_value_t = 0.25)]
    pub p: f64,
    /// Crossover of an attached BSC observation channel.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
