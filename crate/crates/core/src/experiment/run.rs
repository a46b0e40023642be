use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ExperimentConfig;
use crate::diagnostics::{diagnose, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::samplers::{run_chain, Chain};
use crate::targets::particle_box::analytic_grid;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const GRID_FILE: &str = "target_grid.csv";
pub const COMPARISON_FILE: &str = "comparison.csv";

/// Files written by an experiment, keyed by name, with their SHA-256.
///
/// `artifacts` depend only on the config and seed. `reports` embed wall
/// times and therefore differ between runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub target_energy: Option<f64>,
    pub artifacts: BTreeMap<String, String>,
    pub reports: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct ChainOutcome {
    pub sampler: String,
    pub chain_id: u64,
    pub chain: Chain,
    pub report: DiagnosticsReport,
    pub histogram: Option<Grid>,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub outcomes: Vec<ChainOutcome>,
    pub manifest: Manifest,
}

struct Writer {
    dir: PathBuf,
    artifacts: BTreeMap<String, String>,
    reports: BTreeMap<String, String>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            artifacts: BTreeMap::new(),
            reports: BTreeMap::new(),
        })
    }

    fn write_raw(&self, name: &str, bytes: &[u8]) -> Result<String> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        Ok(hex::encode(Sha256::digest(bytes)))
    }

    fn artifact(&mut self, name: String, bytes: &[u8]) -> Result<()> {
        let h = self.write_raw(&name, bytes)?;
        self.artifacts.insert(name, h);
        Ok(())
    }

    fn report(&mut self, name: String, bytes: &[u8]) -> Result<()> {
        let h = self.write_raw(&name, bytes)?;
        self.reports.insert(name, h);
        Ok(())
    }
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn run_all(config: &ExperimentConfig, workers: usize) -> Result<Vec<ChainOutcome>> {
    config.validate()?;
    let init = config.init.resolve(&config.target);
    let jobs: Vec<_> = config
        .samplers
        .iter()
        .flat_map(|s| (0..config.chains as u64).map(move |k| (s, k)))
        .collect();
    thread_pool(workers)?.install(|| {
        jobs.par_iter()
            .map(|&(sampler, chain_id)| {
                let mut chain = run_chain(
                    sampler,
                    &config.target,
                    config.n,
                    config.burn_in,
                    &init,
                    config.seed,
                    chain_id,
                )?;
                chain.meta.target = config.target.name().to_string();
                let (report, histogram) =
                    diagnose(&chain, &config.target, config.grid_res, config.max_lag)?;
                Ok(ChainOutcome {
                    sampler: sampler.label().to_string(),
                    chain_id,
                    chain,
                    report,
                    histogram,
                })
            })
            .collect()
    })
}

fn comparison_csv(config: &ExperimentConfig, outcomes: &[ChainOutcome]) -> String {
    let mut out =
        String::from("sampler,mean_time_s,acceptance_rate,min_ess,tv_distance,mode_coverage\n");
    let mean = |xs: Vec<f64>| xs.iter().sum::<f64>() / xs.len() as f64;
    let opt_mean = |xs: Vec<Option<f64>>| -> String {
        xs.into_iter()
            .collect::<Option<Vec<f64>>>()
            .map(|v| format!("{}", mean(v)))
            .unwrap_or_default()
    };
    for s in &config.samplers {
        let rows: Vec<&DiagnosticsReport> = outcomes
            .iter()
            .filter(|o| o.sampler == s.label())
            .map(|o| &o.report)
            .collect();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.label(),
            mean(rows.iter().map(|r| r.wall_time_s).collect()),
            mean(rows.iter().map(|r| r.acceptance_rate).collect()),
            mean(rows.iter().map(|r| r.min_ess()).collect()),
            opt_mean(rows.iter().map(|r| r.tv_distance).collect()),
            opt_mean(rows.iter().map(|r| r.mode_coverage).collect()),
        )
        .unwrap();
    }
    out
}

fn execute(config: &ExperimentConfig, workers: usize, compare: bool) -> Result<RunSummary> {
    if compare && config.samplers.len() < 2 {
        return Err(Error::Config(
            "compare needs at least two sampler blocks".into(),
        ));
    }
    let outcomes = run_all(config, workers)?;
    let mut w = Writer::new(&config.outputs)?;

    if let Some(b) = config.target.as_box() {
        let grid = analytic_grid(&b.spec, config.grid_res)?;
        w.artifact(GRID_FILE.into(), grid.to_csv().as_bytes())?;
    }
    for o in &outcomes {
        let stem = format!("{}_chain{}", o.sampler, o.chain_id);
        w.artifact(format!("{stem}.csv"), o.chain.to_csv().as_bytes())?;
        if let Some(h) = &o.histogram {
            w.artifact(format!("{stem}_hist.csv"), h.to_csv().as_bytes())?;
        }
        w.artifact(format!("{stem}_acf.csv"), o.report.acf_csv().as_bytes())?;
        let json = serde_json::to_string_pretty(&o.report)?;
        w.report(format!("{stem}_diag.json"), json.as_bytes())?;
    }
    if compare {
        w.report(
            COMPARISON_FILE.into(),
            comparison_csv(config, &outcomes).as_bytes(),
        )?;
    }

    let manifest = Manifest {
        config: config.clone(),
        seed: config.seed,
        target_energy: config.target.as_box().map(|b| b.energy()),
        artifacts: std::mem::take(&mut w.artifacts),
        reports: std::mem::take(&mut w.reports),
    };
    w.write_raw(
        MANIFEST_FILE,
        serde_json::to_string_pretty(&manifest)?.as_bytes(),
    )?;
    Ok(RunSummary { outcomes, manifest })
}

/// Runs every `(sampler, chain)` pair on up to `workers` threads and
/// writes all outputs. File contents do not depend on `workers`.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<RunSummary> {
    execute(config, workers, false)
}

/// As [`run_experiment`], plus `comparison.csv` with one row per sampler
/// averaged over chains.
pub fn compare_samplers(config: &ExperimentConfig, workers: usize) -> Result<RunSummary> {
    execute(config, workers, true)
}

/// Writes only the analytic `target_grid.csv`; returns its path.
pub fn emit_grid(config: &ExperimentConfig) -> Result<PathBuf> {
    let b = config
        .target
        .as_box()
        .ok_or_else(|| Error::Config("grid requires the particle_box target".into()))?;
    let grid = analytic_grid(&b.spec, config.grid_res)?;
    let w = Writer::new(&config.outputs)?;
    w.write_raw(GRID_FILE, grid.to_csv().as_bytes())?;
    Ok(config.outputs.join(GRID_FILE))
}
