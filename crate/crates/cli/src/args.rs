use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tksub::generate::GraphKind;
use tksub::subdivision::Strategy;

#[derive(Parser, Debug)]
#[command(name = "tksub", version, about = "Certificates for expanders, adjusters, balanced subdivisions and cycle spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Where the host graph comes from.
#[derive(Args, Debug, Clone)]
pub struct GraphInput {
    /// Edge-list file: first line `n m`, then one `u v` per line.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    pub input: Option<PathBuf>,
    /// Generator descriptor such as `cycle:6`, `pg-incidence:3` or `random-gnp:40:0.1`.
    #[arg(long = "gen", value_name = "KIND")]
    pub gen: Option<GraphKind>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Output {
    /// Write the JSON report here (`-` for stdout). This is the default sink.
    #[arg(long, value_name = "OUT")]
    pub json: Option<String>,
    /// Write a flattened CSV projection of the result here (`-` for stdout).
    #[arg(long, value_name = "OUT")]
    pub csv: Option<String>,
    /// Soft wall-clock limit in seconds for the searches.
    #[arg(long, value_name = "SECONDS")]
    pub budget: Option<f64>,
    /// Include wall times in the report; off by default so reports are reproducible.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[command(flatten)]
    pub graph: GraphInput,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the sublinear expansion condition, exactly or by sampling.
    CertifyExpander(Run<ExpanderArgs>),
    /// Find a dense expander subgraph.
    ExtractExpander(Run<ExtractArgs>),
    /// Look for a K_{s,t}; on bipartite hosts also run the counting check.
    KstCheck(Run<KstArgs>),
    /// Greedily build an (h1, h2)-hub.
    BuildHub(Run<HubArgs>),
    /// Greedily build an (h0, h1, h2, h3)-unit.
    BuildUnit(Run<UnitArgs>),
    /// Build a (D, m, r)-adjuster.
    BuildAdjuster(Run<AdjusterArgs>),
    /// Find a simple path of prescribed length.
    Route(Run<RouteArgs>),
    /// Search for an ell-balanced subdivision of K_k.
    FindSubdivision(Run<SubdivisionArgs>),
    /// Cycle lengths of the host.
    Spectrum(Run<SpectrumArgs>),
    /// Longest run of consecutive even cycle lengths.
    EvenInterval(Run<SpectrumArgs>),
    /// Check |N(X)| > 2|X| for all small sets X.
    DoublingCheck(Run<DoublingArgs>),
    /// Density regime, predicted interval and measured even run.
    RegimeReport(Run<RegimeArgs>),
    /// Evaluate the derived size parameters at concrete values.
    Presets(PresetArgs),
    /// Run a fixed battery over a grid of generators and seeds.
    Sweep(SweepArgs),
    #[command(hide = true)]
    OracleSpectrum(Run<NoArgs>),
    #[command(hide = true)]
    OracleExpansion(Run<ExpanderParamsArgs>),
    #[command(hide = true)]
    OracleKst(Run<StArgs>),
    #[command(hide = true)]
    OracleSubdivision(Run<KEllArgs>),
    #[command(hide = true)]
    OracleAdjuster(Run<OracleAdjusterArgs>),
}

/// A graph subcommand: shared input and output flags plus its own parameters.
#[derive(Args, Debug, Clone)]
pub struct Run<P: Args> {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub params: P,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct NoArgs {}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExpanderParamsArgs {
    #[arg(long)]
    pub eps1: f64,
    #[arg(long)]
    pub k: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExpanderArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub p: ExpanderParamsArgs,
    /// Sample this many candidate sets instead of checking exactly.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExtractArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub p: ExpanderParamsArgs,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct StArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KstArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub st: StArgs,
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HubArgs {
    #[arg(long)]
    pub h1: usize,
    #[arg(long)]
    pub h2: usize,
    /// Vertices the gadget must avoid, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub avoid: Vec<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct UnitArgs {
    #[arg(long)]
    pub h0: usize,
    #[arg(long)]
    pub h1: usize,
    #[arg(long)]
    pub h2: usize,
    #[arg(long)]
    pub h3: usize,
    #[arg(long, value_delimiter = ',')]
    pub avoid: Vec<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    ShortestCycle,
    ShortestEven,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AdjusterArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, value_enum, default_value = "shortest-cycle")]
    pub policy: Policy,
    #[arg(long, value_delimiter = ',')]
    pub avoid: Vec<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RouteArgs {
    #[arg(long)]
    pub from: usize,
    #[arg(long)]
    pub to: usize,
    #[arg(long)]
    pub length: usize,
    #[arg(long, value_delimiter = ',')]
    pub avoid: Vec<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct KEllArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub ell: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SubdivisionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub k_ell: KEllArgs,
    /// auto, highdeg-cores or unit-cores.
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    /// Exact up to 16 vertices, search beyond.
    Auto,
    Exact,
    Search,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub method: SpectrumMethod,
    /// Lengths to search for (search method only); default all from 3 to n.
    #[arg(long, value_delimiter = ',')]
    pub targets: Vec<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DoublingArgs {
    #[arg(long)]
    pub bound: usize,
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RegimeArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps1: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps2: f64,
    /// Constant in the dense threshold d > eps * n^((s-1)/s).
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OracleAdjusterArgs {
    #[arg(long)]
    pub v1: usize,
    #[arg(long)]
    pub v2: usize,
    #[arg(long, value_delimiter = ',')]
    pub center: Vec<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PresetArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: f64,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps1: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    /// Generators to sweep; default is a fixed grid of small hosts.
    #[arg(long = "gen", value_name = "KIND")]
    pub gens: Vec<GraphKind>,
    /// Seeds 0..N for random generators.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: Output,
}
