pub mod estimate;
pub mod graph;
pub mod lab;
pub mod solve;

use std::path::Path;

use anyhow::{ensure, Context, Result};
use perc_lab_core::labs::DEFAULT_BASE_SEED;

/// Seed precedence: `--seed` flag, then PERC_LAB_SEED, then a fixed
/// constant. Never the clock, so unseeded runs reproduce.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("PERC_LAB_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .with_context(|| format!("PERC_LAB_SEED must be an unsigned integer, got '{text}'")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_BASE_SEED),
        Err(err) => Err(err).context("PERC_LAB_SEED is not valid unicode"),
    }
}

/// Caps the rayon pool. Estimators fold deterministically, so this bounds
/// parallelism without touching outputs.
pub fn configure_workers(workers: Option<usize>) -> Result<()> {
    let Some(n) = workers else { return Ok(()) };
    ensure!(n >= 1, "--workers must be at least 1");
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("worker pool was already configured")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Pretty JSON with a trailing newline. serde_json orders map keys, so the
/// bytes are a pure function of the value.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing record")?;
    text.push('\n');
    write_text(path, &text)
}
