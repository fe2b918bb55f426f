//! Benchmark harness behind the `ant-gls` binary: instance loading,
//! seeded replicate experiments, the classify improvement benchmark, and
//! the reference traces.

pub mod experiment;
pub mod trace;

use std::path::Path;

use anyhow::{Context, Result};
use ant_gls::{parse_tsplib, run_gls_with, DistanceMatrix, PheromoneMatrix};

use crate::experiment::ExperimentSpec;

/// A loaded problem: its display name and distance matrix.
pub struct LoadedInstance {
    pub name: String,
    pub matrix: DistanceMatrix,
}

/// Load either a TSPLIB file or a literal matrix fixture (first token an
/// integer size). The format is sniffed from the first token.
pub fn load_instance(path: &Path) -> Result<LoadedInstance> {
    let content = std::fs::read_to_string(path)
        .with_context(|| format!("reading instance file {}", path.display()))?;
    let first = content.split_whitespace().next().unwrap_or("");
    if first.chars().all(|c| c.is_ascii_digit()) && !first.is_empty() {
        let matrix = DistanceMatrix::from_literal(&content)
            .with_context(|| format!("parsing matrix fixture {}", path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "fixture".into());
        Ok(LoadedInstance { name, matrix })
    } else {
        let inst = parse_tsplib(&content)
            .with_context(|| format!("parsing TSPLIB instance {}", path.display()))?;
        Ok(LoadedInstance {
            name: inst.name.clone(),
            matrix: DistanceMatrix::from_instance(&inst),
        })
    }
}

/// Replay the experiment's last replicate and return its final pheromone
/// matrix as CSV (runs are deterministic per seed, so the replay is exact).
pub fn final_pheromone_csv(d: &DistanceMatrix, spec: &ExperimentSpec) -> Result<String> {
    let mut config = spec.config.clone();
    config.seed = spec.config.seed.wrapping_add(spec.runs.saturating_sub(1) as u64);
    let mut tau = PheromoneMatrix::init(d);
    run_gls_with(d, &config, &mut tau).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(tau.snapshot_csv())
}
