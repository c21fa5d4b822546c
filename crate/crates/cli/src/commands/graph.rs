use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use perc_lab_core::{metric_profile, FiniteGraph};
use serde::Serialize;

use super::{write_json, write_text};

#[derive(Args)]
pub struct GraphArgs {
    /// Graph spec: cycle:N, torus:AxB[x..], circulant:N:S1,S2[,..], cayley:FILE.
    pub spec: String,
    /// Output directory.
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct Metrics<'a> {
    spec: &'a str,
    vertices: u32,
    edges: u32,
    degree: u32,
    diameter: u32,
    /// growth[r] = |B_r(o)|; last entry is the vertex count.
    growth: &'a [u64],
}

pub fn run(args: &GraphArgs) -> Result<i32> {
    let g = FiniteGraph::generate(&args.spec)?;
    let profile = metric_profile(&g, 0);
    write_text(&args.out.join("graph.edges"), &g.to_edge_text())?;
    write_json(
        &args.out.join("metrics.json"),
        &Metrics {
            spec: g.spec_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            degree: g.degree(),
            diameter: profile.diameter,
            growth: &profile.growth,
        },
    )?;
    println!(
        "{}: {} vertices, {} edges, degree {}, diameter {} -> {}",
        g.spec_string(),
        g.vertex_count(),
        g.edge_count(),
        g.degree(),
        profile.diameter,
        args.out.display()
    );
    Ok(0)
}
