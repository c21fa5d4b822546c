use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use perc_lab_core::labs::{run_lab, ExperimentManifest, LabReport};

use super::{configure_workers, resolve_seed, write_text};
use crate::plot;

#[derive(Args)]
pub struct LabArgs {
    /// Lab name: sharpness, locality, inequality, emergence, density,
    /// geometry.
    pub name: String,
    /// Manifest JSON path.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory for report.json, report.csv, and plots.
    #[arg(short, long, default_value = "out")]
    pub out: PathBuf,
    /// Also emit SVG charts, derived from the written report.csv.
    #[arg(long)]
    pub plots: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
}

pub fn run(args: &LabArgs) -> Result<i32> {
    configure_workers(args.workers)?;
    let text = fs::read_to_string(&args.manifest)
        .with_context(|| format!("reading {}", args.manifest.display()))?;
    let mut manifest = ExperimentManifest::from_json(&text)?;
    // Seed precedence: --seed beats everything; a base_seed written in the
    // manifest beats the environment; PERC_LAB_SEED replaces only the
    // built-in default.
    let manifest_pins_seed = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .is_some_and(|v| v.get("base_seed").is_some());
    if let Some(seed) = args.seed {
        manifest.base_seed = seed;
    } else if !manifest_pins_seed {
        manifest.base_seed = resolve_seed(None)?;
    }

    let report = run_lab(&args.name, &manifest)?;
    write_text(&args.out.join("report.json"), &(report.to_json_pretty() + "\n"))?;
    let csv_path = args.out.join("report.csv");
    write_csv(&csv_path, &report)?;
    if args.plots {
        for path in plot::emit(&args.name, &csv_path, &args.out)? {
            println!("wrote {}", path.display());
        }
    }

    for row in &report.rows {
        println!(
            "[{}] {} | {} | {} | lhs={} rhs={} margin={}",
            row.verdict, row.check, row.graph, row.params, row.lhs, row.rhs, row.margin
        );
    }
    println!("{}: aggregate {}", args.name, report.aggregate);
    Ok(report.exit_code())
}

/// Flat CSV of the report rows. Headers come from the row struct; floats
/// print in shortest-roundtrip form, so bytes are seed-determined.
fn write_csv(path: &PathBuf, report: &LabReport) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut writer = csv::Writer::from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    for row in &report.rows {
        writer.serialize(row)?;
    }
    writer.flush().context("flushing csv")?;
    Ok(())
}
