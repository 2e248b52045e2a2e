use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmeasure::cv::{CoordTransform, PresetCircuit, PresetKind};
use qmeasure::sim::grid::DEFAULT_POINTS;
use qmeasure::sim::GaussianSpec;
use qmeasure::{CoordTransform64, GaussianSpec64};

use crate::report::RunReport;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "qmeasure", version, about = "Indirect-measurement circuits: decomposition, simulation, identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a circuit (a,b,c,d) into gate families
    Decompose(DecomposeArgs),
    /// Run a suite of identity checks and report residuals
    Verify(VerifyArgs),
    /// Simulate a circuit on Gaussian inputs and export the outcome distribution
    Simulate(SimulateArgs),
    /// Run a named scenario
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Vnm,
    Csm,
    Ssm,
}

/// Circuit selection shared by `decompose` and `simulate`.
#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Preset circuit
    #[arg(long, value_enum, conflicts_with = "abcd")]
    pub preset: Option<Preset>,
    /// Explicit coefficients a,b,c,d of ψ(ax+by)φ(cx+dy)
    #[arg(long, value_name = "A,B,C,D", allow_hyphen_values = true)]
    pub abcd: Option<String>,
    /// Coupling strength λ > 0 for presets
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Parity bit for the ssm preset
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub p: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    VonNeumann,
    TwoMode,
    SingleMode,
    Hamiltonian,
    /// Squeeze-rotate-squeeze sequence; ssm preset only
    SsmAlternative,
    All,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_enum, default_value_t = Family::All)]
    pub family: Family,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    QubitHamiltonians,
    PulseSequences,
    Ozawa,
    AppendixB,
    Parity,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Coupling strengths used by the ozawa suite
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    pub lambdas: Vec<f64>,
    /// Fock truncation for the appendix-b suite
    #[arg(long, default_value_t = 32)]
    pub n_fock: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Grid points per axis (default 1024, or QMEASURE_GRID_POINTS)
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Grid covers [-w, w]
    #[arg(long, default_value_t = 16.0)]
    pub grid_half_width: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// System Gaussian as center,width[,momentum]
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub system: String,
    /// Probe Gaussian as center,width[,momentum]
    #[arg(long, default_value = "0,0.5", allow_hyphen_values = true, conflicts_with = "probe_width")]
    pub probe: String,
    /// Shorthand for a centered probe of this width
    #[arg(long)]
    pub probe_width: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// JSON report path; the CSV defaults to the same stem
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Outcome-distribution CSV path
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCommand {
    /// Two narrow system peaks read out at λ and at λ = 1
    TwoPeak(TwoPeakArgs),
    /// Repeated measurement with seeded outcome sampling
    Repeated(RepeatedArgs),
}

#[derive(Debug, Args)]
pub struct TwoPeakArgs {
    #[arg(long, default_value_t = 20.0)]
    pub lambda: f64,
    /// Peak separation
    #[arg(long, default_value_t = 1.0)]
    pub sep: f64,
    #[arg(long, default_value_t = 4.0)]
    pub probe_width: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV of the λ-coupled distribution
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Csm,
    Ssm,
}

#[derive(Debug, Args)]
pub struct RepeatedArgs {
    #[arg(long, value_enum, default_value_t = SchemeArg::Ssm)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 10)]
    pub rounds: usize,
    /// RNG seed for outcome sampling
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub p: u8,
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub system: String,
    #[arg(long, default_value = "0,0.5", allow_hyphen_values = true)]
    pub probe: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-round CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub const GRID_POINTS_ENV: &str = "QMEASURE_GRID_POINTS";

fn parse_numbers(flag: &str, s: &str, min: usize, max: usize) -> Result<Vec<f64>, CliError> {
    let vals = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::validation(format!("--{flag} {s:?}: {e}")))?;
    if vals.len() < min || vals.len() > max {
        let want = if min == max { min.to_string() } else { format!("{min} or {max}") };
        return Err(CliError::validation(format!("--{flag} {s:?}: expected {want} comma-separated numbers")));
    }
    if let Some(v) = vals.iter().find(|v| !v.is_finite()) {
        return Err(CliError::validation(format!("--{flag}: {v} is not finite")));
    }
    Ok(vals)
}

/// `center,width[,momentum]`.
pub fn parse_gaussian(flag: &str, s: &str) -> Result<GaussianSpec64, CliError> {
    let v = parse_numbers(flag, s, 2, 3)?;
    GaussianSpec::new(v[0], v[1], v.get(2).copied().unwrap_or(0.0))
        .map_err(|e| CliError::validation(format!("--{flag}: {e}")))
}

impl Preset {
    pub fn kind(self) -> PresetKind {
        match self {
            Preset::Vnm => PresetKind::Vnm,
            Preset::Csm => PresetKind::Csm,
            Preset::Ssm => PresetKind::Ssm,
        }
    }
}

impl TargetArgs {
    /// Builds the transform and records the target in the report inputs.
    pub fn resolve(&self, report: &mut RunReport) -> Result<CoordTransform64, CliError> {
        let t = match (self.preset, &self.abcd) {
            (Some(preset), None) => {
                let circuit = PresetCircuit::new(preset.kind(), self.lambda, self.p)?;
                report.input("preset", preset.kind().name());
                report.input("lambda", self.lambda);
                if preset == Preset::Ssm {
                    report.input("p", self.p);
                }
                circuit.transform()
            }
            (None, Some(s)) => {
                let v = parse_numbers("abcd", s, 4, 4)?;
                CoordTransform::new(v[0], v[1], v[2], v[3])?
            }
            _ => return Err(CliError::validation("one of --preset or --abcd is required")),
        };
        report.input("target", t);
        Ok(t)
    }
}

/// `--grid-points`, else the environment override, else the library default.
pub fn grid_points(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(GRID_POINTS_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|e| CliError::validation(format!("{GRID_POINTS_ENV}={s:?}: {e}"))),
        Err(_) => Ok(DEFAULT_POINTS),
    }
}
