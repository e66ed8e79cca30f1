use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qwt_core::builders::{plan, PrepStyle, QwtPlan, Variant};
use qwt_core::circuit::{LoweringConfig, McxStrategy, ReflectionStyle};
use qwt_core::filters::{builtin_filter, registry_names, WaveletFilter};

/// Directory of extra filter files, one coefficient per line.
pub const REGISTRY_ENV: &str = "QWT_REGISTRY_PATH";

#[derive(Parser, Debug)]
#[command(name = "qwt", version, about = "Quantum wavelet transform circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run invariant checks against the classical oracles.
    Verify(VerifyArgs),
    /// Run a transform circuit on a signal file and dump the output state.
    Simulate(SimulateArgs),
    /// Lower a circuit and count elementary gates.
    Count(CountArgs),
    /// Emit CSV data for the success-amplitude and coefficient-decay plots.
    PlotData(PlotArgs),
    /// Write a circuit as JSON, or as OpenQASM once lowered.
    Export(ExportArgs),
    /// Read a JSON or OpenQASM circuit and summarize it.
    Import(ImportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FilterArgs {
    /// Registry filter name (haar, db1..db10) or a file stem under $QWT_REGISTRY_PATH.
    #[arg(long, default_value = "haar", conflicts_with = "filter_file")]
    pub filter: String,
    /// Filter coefficients, one per line.
    #[arg(long)]
    pub filter_file: Option<PathBuf>,
}

impl FilterArgs {
    pub fn load(&self) -> Result<WaveletFilter> {
        if let Some(path) = &self.filter_file {
            return WaveletFilter::from_file(path)
                .with_context(|| format!("loading filter file {}", path.display()));
        }
        resolve_filter(&self.filter)
    }
}

pub fn resolve_filter(name: &str) -> Result<WaveletFilter> {
    match builtin_filter(name) {
        Ok(f) => Ok(f),
        Err(builtin_err) => {
            if let Ok(dir) = std::env::var(REGISTRY_ENV) {
                for candidate in [name.to_string(), format!("{name}.txt")] {
                    let path = PathBuf::from(&dir).join(candidate);
                    if path.is_file() {
                        return WaveletFilter::from_file(&path)
                            .with_context(|| format!("loading {}", path.display()));
                    }
                }
            }
            Err(builtin_err.into())
        }
    }
}

/// Registry filters followed by any extra files in `$QWT_REGISTRY_PATH`.
pub fn all_filters() -> Result<Vec<WaveletFilter>> {
    let mut out: Vec<WaveletFilter> = registry_names()
        .into_iter()
        .filter(|n| *n != "db1")
        .map(|n| builtin_filter(n).map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;
    if let Ok(dir) = std::env::var(REGISTRY_ENV) {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
            .with_context(|| format!("reading {REGISTRY_ENV}={dir}"))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        for p in paths {
            out.push(
                WaveletFilter::from_file(&p).with_context(|| format!("loading {}", p.display()))?,
            );
        }
    }
    Ok(out)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantArg {
    Single,
    Multilevel,
    Packet,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StyleArg {
    Sqrt,
    Linear,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum McxArg {
    Auto,
    Borrowed,
    SingleBorrowed,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectionArg {
    Kickback,
    InPlace,
}

#[derive(Args, Debug, Clone)]
pub struct CircuitArgs {
    #[command(flatten)]
    pub filter: FilterArgs,
    /// System qubits.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Levels (ignored by the single variant).
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "single")]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value = "sqrt")]
    pub prep_style: StyleArg,
}

impl CircuitArgs {
    pub fn plan(&self) -> Result<QwtPlan> {
        self.plan_at(self.n, self.d)
    }

    pub fn plan_at(&self, n: usize, d: usize) -> Result<QwtPlan> {
        let f = self.filter.load()?;
        let variant = match self.variant {
            VariantArg::Single => Variant::Single,
            VariantArg::Multilevel => Variant::Multilevel,
            VariantArg::Packet => Variant::Packet,
        };
        let d = if variant == Variant::Single { 1 } else { d };
        let style = match self.prep_style {
            StyleArg::Sqrt => PrepStyle::Sqrt,
            StyleArg::Linear => PrepStyle::Linear,
        };
        Ok(plan(&f, n, d, variant, style)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct LoweringArgs {
    #[arg(long, value_enum, default_value = "auto")]
    pub mcx: McxArg,
    #[arg(long, value_enum, default_value = "kickback")]
    pub reflection: ReflectionArg,
}

impl LoweringArgs {
    pub fn config(&self) -> LoweringConfig {
        LoweringConfig {
            mcx: match self.mcx {
                McxArg::Auto => McxStrategy::Auto,
                McxArg::Borrowed => McxStrategy::Borrowed,
                McxArg::SingleBorrowed => McxStrategy::SingleBorrowed,
            },
            reflection: match self.reflection {
                ReflectionArg::Kickback => ReflectionStyle::Kickback,
                ReflectionArg::InPlace => ReflectionStyle::InPlace,
            },
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Unitarity,
    Lcu,
    Select,
    Single,
    Multilevel,
    Packet,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Levels for the multilevel and packet suites.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_enum, default_value = "sqrt")]
    pub prep_style: StyleArg,
    /// Random input states per simulation check.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the matrix-check tolerance (default 1e-12).
    #[arg(long)]
    pub matrix_tol: Option<f64>,
    /// Override the state-fidelity tolerance (default 1e-10).
    #[arg(long)]
    pub state_tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    /// Signal of length 2^n, one value per line.
    #[arg(long)]
    pub signal: PathBuf,
    /// Scale the signal to unit norm instead of rejecting it.
    #[arg(long)]
    pub normalize: bool,
    /// Also print the classical result and the fidelity.
    #[arg(long)]
    pub compare: bool,
    /// Write the state dump here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub lowering: LoweringArgs,
    /// `n=A..B` or `d=A..B` (inclusive); emits one CSV row per value.
    #[arg(long)]
    pub sweep: Option<String>,
    /// CSV instead of the aligned text report.
    #[arg(long)]
    pub csv: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    SuccessAmplitude,
    CoeffDecay,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub kind: PlotKind,
    /// Restrict coeff-decay to one filter.
    #[arg(long)]
    pub filter: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    #[command(flatten)]
    pub lowering: LoweringArgs,
    /// Lower to elementary gates first.
    #[arg(long)]
    pub lowered: bool,
    /// OpenQASM 3 instead of JSON (requires --lowered).
    #[arg(long)]
    pub qasm: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ImportArgs {
    /// A `.json` or `.qasm` circuit file.
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    N,
    D,
}

/// Parses `n=4..10` / `d=1..8`.
pub fn parse_sweep(spec: &str) -> Result<(SweepAxis, usize, usize)> {
    let (axis, range) = spec
        .split_once('=')
        .with_context(|| format!("sweep {spec:?} must look like n=4..10 or d=1..8"))?;
    let axis = match axis.trim() {
        "n" => SweepAxis::N,
        "d" => SweepAxis::D,
        other => bail!("unknown sweep axis {other:?}; use n or d"),
    };
    let (lo, hi) = range
        .split_once("..")
        .with_context(|| format!("sweep range {range:?} must look like A..B"))?;
    let lo: usize = lo.trim().parse().context("sweep start")?;
    let hi: usize = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .context("sweep end")?;
    if lo > hi {
        bail!("empty sweep range {lo}..{hi}");
    }
    Ok((axis, lo, hi))
}
