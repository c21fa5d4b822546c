//! perc-lab: percolation experiments on finite transitive graphs.
//!
//! Four subcommands: `graph` writes edge lists and metric summaries,
//! `estimate` runs a single Monte Carlo estimator, `solve` finds threshold
//! parameters, `lab` executes a manifest-driven experiment and reports
//! pass/fail/inconclusive through the exit code.
//!
//! Exit codes: 0 success (lab: aggregate pass), 1 lab aggregate fail,
//! 2 error or lab aggregate inconclusive.
//!
//! Every randomized command takes `--seed`; without it the seed comes from
//! PERC_LAB_SEED, and failing that a fixed constant, never the clock.
//! `--workers` bounds parallelism and never changes outputs.

mod commands;
mod plot;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "perc-lab", version, about = "Percolation laboratory for finite transitive graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph; write its edge list and metric summary.
    Graph(commands::graph::GraphArgs),
    /// Estimate one quantity by Monte Carlo.
    Estimate(commands::estimate::EstimateArgs),
    /// Solve for a threshold parameter.
    Solve(commands::solve::SolveArgs),
    /// Run a named lab from a manifest.
    Lab(commands::lab::LabArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Graph(args) => commands::graph::run(&args),
        Command::Estimate(args) => commands::estimate::run(&args),
        Command::Solve(args) => commands::solve::run(&args),
        Command::Lab(args) => commands::lab::run(&args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
