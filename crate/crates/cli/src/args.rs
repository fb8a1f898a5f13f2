use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "spinmediate", version, about = "Entangle uncontrolled target spins through a controlled mediator register")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the control vector realizing an interaction pattern.
    Solve(SolveArgs),
    /// Turn a control vector into a timed flip schedule.
    CompileFlips(CompileFlipsArgs),
    /// Run an entangling protocol and check it against its ideal result.
    Run(RunArgs),
    /// Position-noise fidelity sweep for the two-target gate-sequence entangler.
    Noise(NoiseArgs),
    /// Recompute a published table and compare cell by cell.
    Reproduce(ReproduceArgs),
    /// List the built-in layouts.
    ListPresets(ListArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::CompileFlips(_) => "compile-flips",
            Command::Run(_) => "run",
            Command::Noise(_) => "noise",
            Command::Reproduce(_) => "reproduce",
            Command::ListPresets(_) => "list-presets",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct LayoutArgs {
    /// Built-in layout (see list-presets).
    #[arg(long, conflicts_with = "layout")]
    pub preset: Option<String>,
    /// Layout JSON: {"dim", "control": [[..]], "target": [[..]], optional "J", "alpha"}.
    #[arg(long)]
    pub layout: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    /// Directory for JSON/CSV artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// What to print on stdout.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file of flag values; its entries replace the flags given here.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionArg {
    MinNorm,
    MaxCoupling,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub layout: LayoutArgs,
    /// Interaction pattern, one entry per target: `1,0`.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Robust region around every target: point, taylor:K or discretize:SIGMA.
    #[arg(long)]
    pub region: Option<String>,
    /// Solution picked when several exist [default: min-norm].
    #[arg(long, value_enum)]
    pub selection: Option<SelectionArg>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct CompileFlipsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub layout: LayoutArgs,
    /// Pattern to solve first: `1,0`.
    #[arg(long, conflicts_with = "vector")]
    pub pattern: Option<String>,
    /// Control vector with entries in [-1, 1], given directly.
    #[arg(long)]
    pub vector: Option<String>,
    /// Window length [default: 1].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Emit the full decoupling sequence for the control register instead.
    #[arg(long)]
    #[serde(default)]
    pub decouple: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolName {
    GateSequence,
    Synthesis,
    MeasurementCz,
    Graph,
    DfGhz,
    ControlRotation,
    ControlRotationThree,
    AlternatingBell,
    Commutator,
    SelfInteraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Logical,
    Physical,
    Both,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct RunArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub layout: LayoutArgs,
    #[arg(long, value_enum)]
    pub protocol: Option<ProtocolName>,
    /// Targets for gate-sequence and measurement-cz: `1,2`.
    #[arg(long)]
    pub subset: Option<String>,
    /// Gate-sequence angle [default: pi/4].
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Graph edges: `1-2,2-3`.
    #[arg(long)]
    pub edges: Option<String>,
    /// GHZ target order: `1,2,3`.
    #[arg(long)]
    pub order: Option<String>,
    /// Target pair: `1-2`.
    #[arg(long)]
    pub pair: Option<String>,
    /// Control-rotation angle [default: pi/4].
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Trotterize the control rotation with this many steps.
    #[arg(long)]
    pub trotter_steps: Option<usize>,
    /// Three targets: `1,2,3`.
    #[arg(long)]
    pub triple: Option<String>,
    /// Phase table for synthesis: `1,2:0.785;3:0.1`.
    #[arg(long)]
    pub phases: Option<String>,
    /// Commutator patterns.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Evolution time for commutator and self-interaction.
    #[arg(long)]
    pub time: Option<f64>,
    /// Commutator cycles [default: 100].
    #[arg(long)]
    pub cycles: Option<usize>,
    /// Self-interaction cancellation without reducing phases modulo 2 pi.
    #[arg(long)]
    #[serde(default)]
    pub non_modular: bool,
    /// Logical control qubit, full flip-schedule register, or both [default: both].
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Sample measurement outcomes with this seed.
    #[arg(long, conflicts_with = "outcomes")]
    pub seed: Option<u64>,
    /// Fixed measurement outcomes `+,-,...`; missing ones are `+`.
    #[arg(long)]
    pub outcomes: Option<String>,
    /// Logical drive strength.
    #[arg(long)]
    pub drive: Option<f64>,
    /// Keep target-target couplings on during coupling windows.
    #[arg(long)]
    #[serde(default)]
    pub target_self: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct NoiseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub layout: LayoutArgs,
    /// Pattern solved on the layout [default: 1,1,0,...].
    #[arg(long, conflicts_with = "vector")]
    pub pattern: Option<String>,
    /// Control vector given directly.
    #[arg(long, allow_hyphen_values = true)]
    pub vector: Option<String>,
    /// Position spreads in units of the base spacing: `0.05,0.1`.
    #[arg(long)]
    pub sigma: Option<String>,
    /// [default: quadrature]
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Quadrature points per axis [default: 9].
    #[arg(long)]
    pub points: Option<usize>,
    /// Monte Carlo samples [default: 100000].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Required with monte-carlo.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ReproduceArgs {
    /// table1, table2, table3, appG, appH or all.
    pub table: Option<String>,
    /// Quadrature points per axis [default: 9].
    #[arg(long)]
    pub points: Option<usize>,
    /// Add Monte Carlo rows with this many samples (needs --seed).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ListArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

/// Replace flag values with the entries of a JSON config object. Keys are
/// flag names with `_` for `-`; an optional `"command"` entry must name the
/// subcommand being run.
pub fn overlay<T: Serialize + DeserializeOwned>(flags: &T, command: &str, config: &str) -> Result<T, CliError> {
    let config: Value = serde_json::from_str(config)?;
    let Value::Object(mut entries) = config else {
        return Err(CliError::Config("config must be a JSON object".into()));
    };
    if let Some(c) = entries.remove("command") {
        if c.as_str() != Some(command) {
            return Err(CliError::Config(format!("config is for command {c}, not {command}")));
        }
    }
    let Value::Object(mut merged) = serde_json::to_value(flags)? else {
        unreachable!("argument structs serialize to objects");
    };
    for (k, v) in entries {
        if !merged.contains_key(&k) {
            return Err(CliError::Config(format!("unknown config entry '{k}' for {command}")));
        }
        merged.insert(k, v);
    }
    Ok(serde_json::from_value(Value::Object(merged))?)
}
