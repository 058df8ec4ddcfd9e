// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cusum_lp::limits::AKernel;
use cusum_lp::testing::{NullSettings, SigmaMode, StatisticSpec};
use cusum_lp::variance::{Bandwidth, Demeaning, Kernel, LrvConfig};
use cusum_lp::WeightSpec;

use crate::exit::{CliResult, Failure};

#[derive(Debug, Parser)]
#[command(name = "cusum-lp", version, about = "Weighted L^p CUSUM change-point tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a series for a change in the mean.
    Test(TestArgs),
    /// Write a critical-value table for a limit distribution.
    Critvals(CritvalsArgs),
    /// Print the normalizing constants a(p) and b(p).
    Constants(ConstantsArgs),
    /// Write a synthetic series with an optional mean shift.
    Simulate(SimulateArgs),
    /// Run a size or power study described by a JSON config.
    Study(StudyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    General,
    DarlingErdos,
    Renyi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AKernelArg {
    /// `|xy|` in the bivariate kernel.
    Abs,
    /// Signed `xy` (bivariate normal density).
    Signed,
}

impl From<AKernelArg> for AKernel {
    fn from(k: AKernelArg) -> Self {
        match k {
            AKernelArg::Abs => AKernel::AbsoluteProduct,
            AKernelArg::Signed => AKernel::SignedProduct,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StatisticArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::General)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Exponent q of the weight (t(1-t))^q; 0 is the uniform weight.
    #[arg(long = "weight-q", default_value_t = 0.0)]
    pub weight_q: f64,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    /// Kernel used for a(p).
    #[arg(long = "a-kernel", value_enum, default_value_t = AKernelArg::Abs)]
    pub a_kernel: AKernelArg,
}

fn required(v: Option<f64>, flag: &str) -> CliResult<f64> {
    v.ok_or_else(|| Failure::parse(format!("--family renyi requires {flag}")))
}

impl StatisticArgs {
    pub fn spec(&self) -> CliResult<StatisticSpec> {
        if self.family != FamilyArg::General && self.weight_q != 0.0 {
            return Err(Failure::parse("--weight-q applies only to --family general"));
        }
        let spec = match self.family {
            FamilyArg::General => StatisticSpec::General {
                p: self.p,
                weight: if self.weight_q == 0.0 {
                    WeightSpec::Uniform
                } else {
                    WeightSpec::Power { q: self.weight_q }
                },
            },
            FamilyArg::DarlingErdos => StatisticSpec::DarlingErdos {
                p: self.p,
                kernel: self.a_kernel.into(),
            },
            FamilyArg::Renyi => StatisticSpec::Renyi {
                p: self.p,
                kappa: required(self.kappa, "--kappa")?,
                t1: required(self.t1, "--t1")?,
                t2: required(self.t2, "--t2")?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulationArgs {
    /// Brownian-bridge grid size.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Monte Carlo replications of the limit distribution.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative grid step for the trimmed limit.
    #[arg(long = "grid-step", default_value_t = 0.005)]
    pub grid_step: f64,
    /// Tail tolerance that sets the truncation horizon of the trimmed limit.
    #[arg(long = "tail-tol", default_value_t = 1e-3)]
    pub tail_tol: f64,
    /// Neither read nor write the simulation cache.
    #[arg(long = "no-cache")]
    pub no_cache: bool,
}

impl SimulationArgs {
    pub fn settings(&self, default_reps: usize) -> NullSettings {
        NullSettings {
            grid_size: self.grid,
            replications: self.reps.unwrap_or(default_reps),
            grid_step: self.grid_step,
            tail_tol: self.tail_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaArg {
    Auto,
    Fixed(f64),
}

fn parse_sigma(s: &str) -> Result<SigmaArg, String> {
    if s == "auto" {
        return Ok(SigmaArg::Auto);
    }
    let v = s
        .strip_prefix("fixed:")
        .ok_or_else(|| format!("expected 'auto' or 'fixed:<value>', got {s:?}"))?;
    let v: f64 = v.parse().map_err(|_| format!("{v:?} is not a number"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("sigma must be finite and > 0; got {v}"));
    }
    Ok(SigmaArg::Fixed(v))
}

fn parse_bandwidth(s: &str) -> Result<Bandwidth, String> {
    if s == "auto" {
        return Ok(Bandwidth::Auto);
    }
    s.parse::<f64>()
        .map(Bandwidth::Fixed)
        .map_err(|_| format!("expected 'auto' or a number, got {s:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Bartlett,
    Parzen,
    FlatTop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemeanArg {
    Full,
    SplitHalf,
}

#[derive(Debug, Clone, Args)]
pub struct SigmaArgs {
    /// Long-run standard deviation: `auto` (kernel estimate) or `fixed:<sigma>`.
    #[arg(long, value_parser = parse_sigma, default_value = "auto")]
    pub sigma: SigmaArg,
    #[arg(long, value_enum, default_value_t = KernelArg::Bartlett)]
    pub kernel: KernelArg,
    /// `auto` or an explicit bandwidth in [1, N-1].
    #[arg(long, value_parser = parse_bandwidth, default_value = "auto")]
    pub bandwidth: Bandwidth,
    #[arg(long, value_enum, default_value_t = DemeanArg::Full)]
    pub demean: DemeanArg,
}

impl SigmaArgs {
    pub fn mode(&self) -> SigmaMode {
        match self.sigma {
            SigmaArg::Fixed(v) => SigmaMode::Fixed(v),
            SigmaArg::Auto => SigmaMode::Estimate(LrvConfig {
                kernel: match self.kernel {
                    KernelArg::Bartlett => Kernel::Bartlett,
                    KernelArg::Parzen => Kernel::Parzen,
                    KernelArg::FlatTop => Kernel::FlatTop,
                },
                bandwidth: self.bandwidth,
                demeaning: match self.demean {
                    DemeanArg::Full => Demeaning::FullSample,
                    DemeanArg::SplitHalf => Demeaning::SplitHalf,
                },
            }),
        }
    }
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Series file (`-` for standard input).
    #[arg(long)]
    pub input: PathBuf,
    /// Column to read from a headed CSV file.
    #[arg(long)]
    pub column: Option<String>,
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub statistic: StatisticArgs,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[command(flatten)]
    pub sigma: SigmaArgs,
    #[command(flatten)]
    pub simulation: SimulationArgs,
    /// Write the rescaled CUSUM path as CSV (`t,z`).
    #[arg(long = "emit-path")]
    pub emit_path: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CritvalsArgs {
    #[command(flatten)]
    pub statistic: StatisticArgs,
    /// Weights of the two trimmed-limit components, overriding those
    /// implied by --t1/--t2.
    #[arg(long, requires = "gamma2")]
    pub gamma1: Option<f64>,
    #[arg(long, requires = "gamma1")]
    pub gamma2: Option<f64>,
    #[command(flatten)]
    pub simulation: SimulationArgs,
    /// Comma-separated significance levels.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Table file to write.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long = "a-kernel", value_enum, default_value_t = AKernelArg::Abs)]
    pub a_kernel: AKernelArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    IidNormal,
    StudentT,
    Ar1,
    Ma,
    BernoulliShift,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = NoiseArg::IidNormal)]
    pub noise: NoiseArg,
    /// Innovation standard deviation (scale for student-t).
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long)]
    pub df: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Comma-separated MA coefficients.
    #[arg(long = "ma-coeffs", value_delimiter = ',')]
    pub ma_coeffs: Option<Vec<f64>>,
    /// Nonlinearity of the Bernoulli-shift model.
    #[arg(long)]
    pub a: Option<f64>,
    /// Number of observations.
    #[arg(long)]
    pub n: usize,
    /// Last observation before the change.
    #[arg(long = "k-star")]
    pub k_star: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu0: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    /// JSON study configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Override the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the configured number of replications.
    #[arg(long)]
    pub reps: Option<usize>,
}
