use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fracmat",
    version,
    about = "Fractional diffusion solver on a uniform space-time grid"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one of the five preset examples; flags override preset values.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        number: u8,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Solve a custom problem on [0, 1] with zero boundary values.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Constant right-hand side f(x, t).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        source: f64,
        /// Initial profile u(x, 0) = S x (1 - x).
        #[arg(
            long = "u0-scale",
            value_name = "S",
            default_value_t = 0.0,
            allow_negative_numbers = true
        )]
        u0_scale: f64,
    },
    /// Run an acceptance suite and print one line per criterion.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Time derivative order, 0 < alpha <= 1.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Space derivative order, 1 < beta <= 2.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Order of the delayed time derivative.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Delay in time steps.
    #[arg(long)]
    pub k: Option<usize>,
    /// Spatial step.
    #[arg(long, conflicts_with = "m")]
    pub h: Option<f64>,
    /// Number of spatial intervals.
    #[arg(long)]
    pub m: Option<usize>,
    /// Time step.
    #[arg(long, conflicts_with = "tau_rule")]
    pub tau: Option<f64>,
    /// Time step rule.
    #[arg(long = "tau-rule", value_enum)]
    pub tau_rule: Option<TauRule>,
    /// Number of time steps.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub riesz: Option<RieszArg>,
    #[arg(long, value_enum, default_value_t = SolverArg::Global)]
    pub solver: SolverArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TauRule {
    /// tau = h^2 / 6
    #[value(name = "h2over6")]
    H2Over6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RieszArg {
    Centered,
    Halfsum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SolverArg {
    #[default]
    Global,
    Marching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Coeffs,
    Operators,
    Oracle,
    Examples,
}
