use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use feedersense::oracle::Mode;
use feedersense::Cost;

/// Sensor placement for outage identifiability on radial feeders.
///
/// A FEEDER argument is a path to a feeder document or the name of a bundled
/// feeder (nine_bus, ieee37, ieee37_zero_injection, ieee123,
/// ieee123_zero_injection). Names are looked up first in the directory given
/// by FEEDERSENSE_CORPUS, if set.
///
/// Exit codes: 0 success, 1 usage or parse error, 2 infeasible placement,
/// 3 not identifiable, 4 oracle gap, 5 resource cap exceeded.
#[derive(Debug, Parser)]
#[command(name = "feedersense", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the DP placement and write the placement with its trace.
    Place {
        feeder: String,
        #[command(flatten)]
        costs: CostOverrides,
        /// Output file for placement and trace (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a Graphviz figure of the placement.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Check a placement against the placement constraints.
    Check {
        feeder: String,
        placement: PathBuf,
    },
    /// Decide outage identifiability of a placement.
    Identifiable {
        feeder: String,
        placement: PathBuf,
        #[command(flatten)]
        sweep: SweepOptions,
    },
    /// Compare the DP cost with the exhaustive optimum.
    Oracle {
        /// Feeder to compare; omit with --random.
        feeder: Option<String>,
        /// Compare on this many seeded random trees instead.
        #[arg(long, value_name = "COUNT", conflicts_with = "feeder")]
        random: Option<usize>,
        /// Smallest random tree.
        #[arg(long, default_value_t = 5)]
        min_nodes: usize,
        /// Largest random tree.
        #[arg(long, default_value_t = 12)]
        max_nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest instance the exhaustive search accepts.
        #[arg(long, default_value_t = feedersense::oracle::DEFAULT_BRUTE_FORCE_CAP)]
        cap: usize,
        /// Feasibility predicate of the exhaustive search.
        #[arg(long, value_enum, default_value_t = FeasibilityArg::Constraints)]
        feasibility: FeasibilityArg,
        #[command(flatten)]
        costs: CostOverrides,
    },
    /// Time the DP on feeders and print one record per feeder.
    Bench {
        /// Feeders to time (default: ieee37, ieee123 and a generated 906-node feeder).
        feeders: Vec<String>,
        /// Add the generated family N = 30 * 2^k, k = 0..=K, and a linear fit.
        #[arg(long, value_name = "K")]
        family: Option<u32>,
        /// Timed runs per feeder; the median is reported.
        #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u32).range(11..))]
        runs: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        costs: CostOverrides,
    },
    /// Write a seeded random feeder.
    Gen {
        #[arg(short, long)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_children: usize,
        #[arg(long, default_value_t = 0.0)]
        z_fraction: f64,
        /// Draw costs at random instead of using -a/-b.
        #[arg(long)]
        random_costs: bool,
        #[command(flatten)]
        costs: CostOverrides,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a Graphviz figure of a placement (default: the DP placement).
    Export {
        feeder: String,
        placement: Option<PathBuf>,
        #[command(flatten)]
        costs: CostOverrides,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CostOverrides {
    /// Set every node-sensor cost.
    #[arg(short = 'a', long, value_parser = parse_cost)]
    pub node_cost: Option<Cost>,
    /// Set every line-sensor cost.
    #[arg(short = 'b', long, value_parser = parse_cost)]
    pub line_cost: Option<Cost>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepOptions {
    #[arg(long, value_parser = parse_mode, default_value = "worst_case")]
    pub mode: Mode,
    /// Largest outage considered.
    #[arg(long, default_value_t = feedersense::oracle::DEFAULT_MAX_OUTAGES, conflicts_with = "unlimited")]
    pub max_outages: usize,
    /// Consider outages of any size.
    #[arg(long)]
    pub unlimited: bool,
    /// Refuse sweeps with more hypotheses than this.
    #[arg(long, default_value_t = feedersense::oracle::DEFAULT_HYPOTHESIS_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub hypothesis_cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeasibilityArg {
    Constraints,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Toml,
}

fn parse_cost(s: &str) -> Result<Cost, String> {
    let c: Cost = s.parse().map_err(|e| format!("{e}"))?;
    if c.is_negative() {
        return Err("costs must be nonnegative".into());
    }
    Ok(c)
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}
