use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use perc_lab_core::estimate::{solve_p, GiantEvent};
use perc_lab_core::FiniteGraph;
use serde::Serialize;
use serde_json::json;

use super::{configure_workers, resolve_seed, write_json};

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
pub enum Kind {
    /// The parameter where a giant of density 1/2 appears with probability
    /// 1/2: solves P_p(density >= 1/2) = 1/2.
    #[value(name = "qG")]
    #[serde(rename = "qG")]
    QG,
    /// Solves P_p(density >= alpha) = delta.
    #[value(name = "pc-alpha-delta")]
    #[serde(rename = "pc-alpha-delta")]
    PcAlphaDelta,
}

#[derive(Args)]
pub struct SolveArgs {
    /// Threshold kind.
    #[arg(value_enum)]
    pub kind: Kind,
    /// Graph spec.
    #[arg(long)]
    pub graph: String,
    /// Density level (pc-alpha-delta).
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Probability level (pc-alpha-delta).
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Bracket width the solver must reach.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Initial evolution curves; the solver doubles on its own as needed.
    #[arg(long, default_value_t = 512)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
}

pub fn run(args: &SolveArgs) -> Result<i32> {
    configure_workers(args.workers)?;
    let seed = resolve_seed(args.seed)?;
    let g = FiniteGraph::generate(&args.graph)?;
    let (event, target) = match args.kind {
        Kind::QG => (GiantEvent::DensityAtLeast(0.5), 0.5),
        Kind::PcAlphaDelta => (GiantEvent::DensityAtLeast(args.alpha), args.delta),
    };
    let solved = solve_p(&g, event, target, args.tol, args.trials, seed)?;
    println!(
        "{}: p = {:.6} in [{:.6}, {:.6}] ({} at target {}, {} curves)",
        g.spec_string(),
        solved.p,
        solved.bracket.0,
        solved.bracket.1,
        solved.description,
        solved.target,
        solved.trials
    );
    let record = json!({
        "kind": args.kind,
        "graph": g.spec_string(),
        "seed": seed,
        "tol": args.tol,
        "result": solved,
    });
    write_json(&args.out.join("solve.json"), &record)?;
    Ok(0)
}
