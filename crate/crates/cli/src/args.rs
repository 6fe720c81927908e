use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "nonholo",
    version,
    about = "Path-following simulations for single-track vehicles"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output directory.
    #[arg(long, global = true, env = "NONHOLO_OUT", value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Write SVG plots.
    #[arg(long, global = true, overrides_with = "no_plot")]
    pub plot: bool,
    #[arg(long, global = true, overrides_with = "plot")]
    pub no_plot: bool,
    /// Seed for randomised sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl Global {
    /// Plot toggle; the flags win over the config.
    pub fn plot(&self, from_config: bool) -> bool {
        match (self.plot, self.no_plot) {
            (true, _) => true,
            (_, true) => false,
            _ => from_config,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and write its trace.
    Simulate(SimulateArgs),
    /// Compare the Routh-Hurwitz verdict with eigenvalues over a gain grid.
    Stability(StabilityArgs),
    /// Run a scenario once per value of a parameter.
    Sweep(SweepArgs),
    /// Generate a reference path.
    Path(PathArgs),
}

#[derive(Debug, Args, Clone)]
#[group(multiple = false)]
pub struct Source {
    /// Named figure scenario (fig13, fig14, fig16, fig17, fig18, fig20, fig21).
    #[arg(long, value_name = "NAME")]
    pub figure: Option<String>,
    /// Scenario config file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Integration step [s].
    #[arg(long, value_name = "S")]
    pub dt: Option<f64>,
    /// Print the effective config and exit.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// k1 axis as lo:hi:n.
    #[arg(long, default_value = "-2:0.5:50", allow_hyphen_values = true)]
    pub k1: String,
    /// k2 axis as lo:hi:n.
    #[arg(long, default_value = "-0.05:0.1:50", allow_hyphen_values = true)]
    pub k2: String,
    /// Comma-separated equilibrium curvatures [1/m].
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub kappa: String,
    /// Speed [m/s].
    #[arg(long, default_value_t = 20.0)]
    pub speed: f64,
    /// Wheelbase [m].
    #[arg(long, default_value_t = 2.57)]
    pub wheelbase: f64,
    /// Points closer than this to the stability boundary are not scored.
    #[arg(long, default_value_t = 1e-8)]
    pub band: f64,
    /// Single point k1,k2 instead of a grid.
    #[arg(long, value_name = "K1,K2", allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Extra uniformly random points inside the grid ranges.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// One of t_L, wrapper_n, a_lat_max, N, s_T.
    #[arg(long)]
    pub param: String,
    /// Comma-separated values; defaults depend on the parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub values: Option<String>,
    #[command(flatten)]
    pub source: Source,
    /// Integration step for every run [s].
    #[arg(long, value_name = "S")]
    pub dt: Option<f64>,
    /// RMS of e_C is also reported from this time on [s].
    #[arg(long, default_value_t = 20.0)]
    pub transient: f64,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of corners of a periodic path.
    #[arg(long)]
    pub corners: Option<u32>,
    /// Corner period s_T [m].
    #[arg(long)]
    pub period: Option<f64>,
    /// Table step [m].
    #[arg(long)]
    pub step: Option<f64>,
}
