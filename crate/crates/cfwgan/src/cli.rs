//! Command-line front end.

use crate::commands;
use crate::config::merge;
use crate::error::{CliError, CliResult};
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "cfwgan",
    version,
    about = "Closed-form WGAN generators: solvers and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal W2 generator for a 1-D law or a sample file.
    Fit1d(Fit1dFlags),
    /// Empirical θ̂₂ against the population value over sample sizes and trials.
    Convergence(ConvergenceFlags),
    /// W1 generator fitted by SGD with momentum; writes the trace.
    SgdW1(SgdFlags),
    /// Sliced W_q of the isotropic generator against r-PCA.
    SlicedCompare(SlicedCompareFlags),
    /// Upper bound on the optimal sliced W2 value per dimension.
    SlicedBound(SlicedBoundFlags),
}

/// Flags shared by every command.
#[derive(Args, Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(default, rename_all = "kebab-case")]
pub struct CommonFlags {
    /// Root seed of all random streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with the same keys as the long flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Worker threads for sliced evaluation.
    #[arg(long)]
    pub threads: Option<usize>,
    /// KDE bandwidth: silverman, cdf, or a positive number.
    #[arg(long)]
    pub bandwidth: Option<String>,
}

impl CommonFlags {
    fn fill(&mut self) {
        self.seed.get_or_insert(0);
        self.threads.get_or_insert(1);
        self.bandwidth.get_or_insert_with(|| "cdf".into());
    }
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(default, rename_all = "kebab-case")]
pub struct Fit1dFlags {
    /// Population law, e.g. gaussian:0,1 or laplace:0,0.7071.
    #[arg(long)]
    pub dist: Option<String>,
    /// Sample CSV; the plug-in estimator with a KDE rank is used.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Column of the sample file.
    #[arg(long)]
    pub column: Option<usize>,
    /// linear, sigmoid or relu.
    #[arg(long)]
    pub activation: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(default, rename_all = "kebab-case")]
pub struct ConvergenceFlags {
    #[arg(long)]
    pub dist: Option<String>,
    /// Ascending sample sizes, comma-separated.
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(default, rename_all = "kebab-case")]
pub struct SgdFlags {
    /// Synthetic data law, e.g. gaussian:1.5,2.
    #[arg(long)]
    pub dist: Option<String>,
    /// Sample CSV.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub column: Option<usize>,
    /// Number of synthetic samples.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub momentum: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub init_theta1: Option<f64>,
    #[arg(long)]
    pub init_theta2: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(default, rename_all = "kebab-case")]
pub struct SlicedCompareFlags {
    /// Dimensions, comma-separated.
    #[arg(long)]
    pub d: Option<String>,
    /// r-PCA rank: an integer, `d`, or a fraction of d such as 2/3.
    #[arg(long)]
    pub r: Option<String>,
    /// Row law: iid:<law> or ar1[:coef[:noise]].
    #[arg(long)]
    pub data_spec: Option<String>,
    /// Sample CSV instead of synthetic rows; fixes d.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Synthetic sample count M.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Random directions in the Monte Carlo slice average.
    #[arg(long)]
    pub projections: Option<usize>,
    /// Order q of the distance: 1 or 2.
    #[arg(long)]
    pub q: Option<u32>,
    /// Columns of the isotropic generator; must be at least d.
    #[arg(long)]
    pub proposed_r: Option<usize>,
    /// Record wall-clock fitting times (makes output run-dependent).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub timing: Option<bool>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default, PartialEq)]
#[serde(default, rename_all = "kebab-case")]
pub struct SlicedBoundFlags {
    /// Dimensions, comma-separated.
    #[arg(long)]
    pub d: Option<String>,
    /// σ̃, the per-coordinate RMS of the data.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
}

macro_rules! resolve {
    ($flags:expr) => {{
        let mut f = merge(&$flags, $flags.common.config.as_deref())?;
        f.common.config = $flags.common.config.clone();
        f.common.fill();
        f
    }};
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Fit1d(f) => commands::fit1d(resolve!(f)),
        Command::Convergence(f) => commands::convergence(resolve!(f)),
        Command::SgdW1(f) => commands::sgd_w1(resolve!(f)),
        Command::SlicedCompare(f) => commands::sliced_compare(resolve!(f)),
        Command::SlicedBound(f) => commands::sliced_bound(resolve!(f)),
    }
}

fn subcommand_usage(cmd: &Command) -> String {
    let name = match cmd {
        Command::Fit1d(_) => "fit1d",
        Command::Convergence(_) => "convergence",
        Command::SgdW1(_) => "sgd-w1",
        Command::SlicedCompare(_) => "sliced-compare",
        Command::SlicedBound(_) => "sliced-bound",
    };
    let mut root = Cli::command();
    root.build();
    root.find_subcommand_mut(name)
        .map(|c| c.render_usage().to_string())
        .unwrap_or_default()
}

/// Parses and runs a command line, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let usage = subcommand_usage(&cli.command);
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("\n{usage}\n\nFor more information, try '--help'.");
            }
            e.exit_code()
        }
    }
}
