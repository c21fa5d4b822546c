use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use perc_lab_core::estimate::{
    corridor_kappa, giant_prob, green_status, min_two_point_over_ball, mu_ph, orange_status,
    tail_ko, two_point, uniqueness_zone_and_cost, CorridorParams,
};
use perc_lab_core::FiniteGraph;
use serde::Serialize;
use serde_json::{json, Value};

use super::{configure_workers, resolve_seed, write_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// P_p(u <-> v).
    TwoPoint,
    /// min over v in B_r(o) of P_p(o <-> v).
    MinTwoPoint,
    /// P_p(|K_o| >= n).
    Tail,
    /// P_p(largest cluster density >= alpha).
    Giant,
    /// Ghost-field magnetization mu_{p,h}.
    Mu,
    /// Corridor (tube-restricted connection) upper estimate.
    Kappa,
    /// Uniqueness zone and connection cost at volume scale n.
    Cost,
    /// Orange scale predicate at time t.
    Orange,
    /// Green scale predicate at time t.
    Green,
}

#[derive(Args)]
pub struct EstimateArgs {
    /// Quantity to estimate.
    #[arg(value_enum)]
    pub quantity: Quantity,
    /// Graph spec.
    #[arg(long)]
    pub graph: String,
    /// Percolation parameter (two-point, min-two-point, tail, giant, mu,
    /// kappa, cost).
    #[arg(long)]
    pub p: Option<f64>,
    /// Time in [0,1] mapped through phi (orange, green).
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Source vertex (two-point).
    #[arg(long, default_value_t = 0)]
    pub u: u32,
    /// Target vertex (two-point).
    #[arg(long)]
    pub v: Option<u32>,
    /// Ball radius (min-two-point).
    #[arg(long)]
    pub r: Option<f64>,
    /// Volume or scale threshold (tail, cost, orange, green).
    #[arg(long)]
    pub n: Option<u64>,
    /// Giant density level (giant).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Ghost field strength (mu).
    #[arg(long)]
    pub h: Option<f64>,
    /// Corridor length (kappa).
    #[arg(long)]
    pub m: Option<u64>,
    /// Corridor tube radius (kappa).
    #[arg(long)]
    pub tube: Option<f64>,
    /// Witness paths sampled for corridor minima (kappa, green).
    #[arg(long, default_value_t = 4)]
    pub paths_budget: usize,
    /// Low-growth exponent for the green predicate.
    #[arg(long, default_value_t = CorridorParams::default().growth_exponent)]
    pub growth_exponent: f64,
    /// Output directory.
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
}

fn need<T: Copy>(value: Option<T>, flag: &str, quantity: Quantity) -> Result<T> {
    match value {
        Some(v) => Ok(v),
        None => bail!("--{flag} is required for {quantity:?}"),
    }
}

pub fn run(args: &EstimateArgs) -> Result<i32> {
    configure_workers(args.workers)?;
    let seed = resolve_seed(args.seed)?;
    let g = FiniteGraph::generate(&args.graph)?;
    let trials = args.trials;
    let q = args.quantity;

    let result: Value = match q {
        Quantity::TwoPoint => {
            let p = need(args.p, "p", q)?;
            let v = need(args.v, "v", q)?;
            serde_json::to_value(two_point(&g, p, args.u, v, trials, seed)?)?
        }
        Quantity::MinTwoPoint => {
            let p = need(args.p, "p", q)?;
            let r = need(args.r, "r", q)?;
            serde_json::to_value(min_two_point_over_ball(&g, p, r, trials, seed)?)?
        }
        Quantity::Tail => {
            let p = need(args.p, "p", q)?;
            let n = need(args.n, "n", q)?;
            let n: u32 = n.try_into().context("--n too large for a cluster size")?;
            serde_json::to_value(tail_ko(&g, p, n, trials, seed)?)?
        }
        Quantity::Giant => {
            let p = need(args.p, "p", q)?;
            let alpha = need(args.alpha, "alpha", q)?;
            serde_json::to_value(giant_prob(&g, p, alpha, trials, seed)?)?
        }
        Quantity::Mu => {
            let p = need(args.p, "p", q)?;
            let h = need(args.h, "h", q)?;
            serde_json::to_value(mu_ph(&g, p, h, trials, seed)?)?
        }
        Quantity::Kappa => {
            let p = need(args.p, "p", q)?;
            let m = need(args.m, "m", q)?;
            let tube = need(args.tube, "tube", q)?;
            serde_json::to_value(corridor_kappa(&g, p, m, tube, trials, args.paths_budget, seed)?)?
        }
        Quantity::Cost => {
            let p = need(args.p, "p", q)?;
            let n = need(args.n, "n", q)?;
            serde_json::to_value(uniqueness_zone_and_cost(&g, p, n, trials, seed)?)?
        }
        Quantity::Orange => {
            let n = need(args.n, "n", q)?;
            let t = need(args.t, "t", q)?;
            serde_json::to_value(orange_status(&g, n, t, trials, seed)?)?
        }
        Quantity::Green => {
            let n = need(args.n, "n", q)?;
            let t = need(args.t, "t", q)?;
            let params = CorridorParams {
                trials,
                paths_budget: args.paths_budget,
                growth_exponent: args.growth_exponent,
            };
            serde_json::to_value(green_status(&g, n, t, trials, params, seed)?)?
        }
    };

    let record = json!({
        "quantity": q,
        "graph": g.spec_string(),
        "trials": trials,
        "seed": seed,
        "result": result,
    });
    println!("{}", serde_json::to_string(&record)?);
    write_json(&args.out.join("estimate.json"), &record)?;
    Ok(0)
}
