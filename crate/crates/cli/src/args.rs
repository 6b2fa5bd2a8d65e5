use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "pauli-access",
    version,
    about = "Accessible sets and reduced models for Pauli-string observables"
)]
pub struct Cli {
    /// Worker threads for generation and graph building.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// JSON file of default flag values, keyed by long flag name.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Suppress the summary on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate and order the accessible set of a measurement set.
    Gen(GenArgs),
    /// Access graph of a set, as DOT or JSON.
    Graph(GraphArgs),
    /// State-space model (A, B, C) as JSON.
    Model(ModelArgs),
    /// Integrate a model and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Full pipeline into an output directory.
    Chain(ChainArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegratorKind {
    Exp,
    Rk4,
}

#[derive(Args, Debug, Clone)]
pub struct HamiltonianArgs {
    /// Hamiltonian file: a JSON spec or an operator expression.
    #[arg(long, conflicts_with = "chain")]
    pub hamiltonian: Option<PathBuf>,

    /// Register size for an expression file (default: largest site used).
    #[arg(long)]
    pub n_qubits: Option<usize>,

    /// Exchange chain on this many sites.
    #[arg(long)]
    pub chain: Option<usize>,

    /// Comma-separated chain couplings (default: all 1).
    #[arg(
        long,
        requires = "chain",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub couplings: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone)]
pub struct MeasurementArgs {
    /// Measurements separated by ';'.
    #[arg(long, conflicts_with_all = ["meas_file", "case"])]
    pub meas: Option<String>,

    /// File with one measurement per line.
    #[arg(long, conflicts_with = "case")]
    pub meas_file: Option<PathBuf>,

    /// One of the measurement cases a-f.
    #[arg(long)]
    pub case: Option<char>,
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// Product state, one ket per site from {0,1,+,-,i+,i-}, e.g. "0,1,+".
    #[arg(long, conflicts_with = "rho0_file", allow_hyphen_values = true)]
    pub rho0: Option<String>,

    /// Dense density matrix as JSON {"re": [[..]], "im": [[..]]}.
    #[arg(long)]
    pub rho0_file: Option<PathBuf>,

    /// Sample times start:stop:step.
    #[arg(long, default_value = "0:10:0.01")]
    pub times: String,

    #[arg(long, value_enum, default_value = "exp")]
    pub integrator: IntegratorKind,

    /// Largest substep of the rk4 integrator.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub hamiltonian: HamiltonianArgs,
    #[command(flatten)]
    pub meas: MeasurementArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Set JSON written by `gen`.
    #[arg(long)]
    pub set: PathBuf,
    /// Needed only when the set file does not carry its Hamiltonian strings.
    #[command(flatten)]
    pub hamiltonian: HamiltonianArgs,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Set JSON written by `gen`; generated on the fly when absent.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[command(flatten)]
    pub hamiltonian: HamiltonianArgs,
    #[command(flatten)]
    pub meas: MeasurementArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Model JSON written by `model`.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// prop2, case-d-count, oracle, lemmas, case-b-blocks, trajectory,
    /// structure, appendix, nesting, regeneration, span or all.
    pub suite: String,
    /// Chain sizes, "a..b" or a single size.
    #[arg(long)]
    pub n: Option<String>,
    /// Random seed for randomized suites.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Instances per randomized identity.
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(flatten)]
    pub hamiltonian: HamiltonianArgs,
    #[command(flatten)]
    pub meas: MeasurementArgs,
    #[command(flatten)]
    pub state: StateArgs,
    /// Directory receiving set.json, graph.dot, graph.json, model.json,
    /// trajectory.csv and summary.txt.
    #[arg(long)]
    pub out_dir: PathBuf,
}
