//! Seeded batch experiments, IGD summaries and artifact export.
//!
//! Output layout under the configured directory:
//!
//! ```text
//! <out>/<KIND>_m<m>_d<d>/instance.json
//! <out>/<KIND>_m<m>_d<d>/<ALGO>/run_<seed>.json
//! <out>/fronts/<KIND>_m<m>_d<d>.csv
//! <out>/summary.csv
//! <out>/metadata.json
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::front::{sample_front, ReferenceFront, SegmentCounts};
use crate::optimizers::{simplex_lattice, Algorithm, EvolutionConfig, RunRecord};
use crate::problems::{ProblemInstance, ProblemKind, Transform};

/// Default number of independent runs per (problem, algorithm).
pub const DEFAULT_RUN_COUNT: usize = 31;
/// Default reference-front size.
pub const DEFAULT_REFERENCE_SIZE: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problems: Vec<ProblemKind>,
    pub m: usize,
    pub d: usize,
    /// Distance-variable count; `None` uses each kind's default.
    pub k: Option<usize>,
    /// Transform; `None` uses each kind's default.
    pub transform: Option<Transform>,
    pub algorithms: Vec<Algorithm>,
    pub population_size: usize,
    pub generations: usize,
    pub run_count: usize,
    pub base_seed: u64,
    pub reference_front_size: usize,
    pub output_dir: PathBuf,
    /// Worker threads for independent runs; 0 lets the pool decide.
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(problem: ProblemKind, m: usize, d: usize, algorithm: Algorithm, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            problems: vec![problem],
            m,
            d,
            k: None,
            transform: None,
            algorithms: vec![algorithm],
            population_size: 100,
            generations: 500,
            run_count: DEFAULT_RUN_COUNT,
            base_seed: 0,
            reference_front_size: DEFAULT_REFERENCE_SIZE,
            output_dir: output_dir.into(),
            workers: 0,
        }
    }

    /// Builds every instance, rejecting inconsistent settings.
    pub fn instances(&self) -> Result<Vec<ProblemInstance>> {
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return Err(Error::config("at least one problem and one algorithm are required"));
        }
        if self.run_count == 0 {
            return Err(Error::config("run count must be at least 1"));
        }
        if self.reference_front_size == 0 {
            return Err(Error::config("reference front size must be at least 1"));
        }
        self.problems
            .iter()
            .map(|&kind| {
                let mut inst = ProblemInstance::new(kind, self.m, self.d)?;
                if let Some(k) = self.k {
                    inst = inst.with_k(k)?;
                }
                if let Some(t) = self.transform {
                    inst = inst.with_transform(t)?;
                }
                Ok(inst)
            })
            .collect()
    }

    fn evolution_config(&self, seed: u64) -> EvolutionConfig {
        EvolutionConfig::new(self.population_size, self.generations, seed)
    }

    fn validate(&self) -> Result<Vec<ProblemInstance>> {
        let instances = self.instances()?;
        self.evolution_config(self.base_seed).validate()?;
        if self.algorithms.contains(&Algorithm::Moead) {
            let lattice = simplex_lattice(self.m, self.population_size)?.len();
            if lattice != self.population_size {
                return Err(Error::config(format!(
                    "MOEA/D needs a population matching a weight lattice for m = {}; {} is not one (nearest {lattice})",
                    self.m, self.population_size
                )));
            }
        }
        Ok(instances)
    }

    /// Seed of run `index`.
    pub fn seed(&self, index: usize) -> u64 {
        self.base_seed + index as u64
    }
}

/// Directory for one instance.
pub fn instance_dir(out: &Path, inst: &ProblemInstance) -> PathBuf {
    out.join(inst.label())
}

/// Path of one persisted run.
pub fn run_path(out: &Path, inst: &ProblemInstance, algorithm: Algorithm, seed: u64) -> PathBuf {
    instance_dir(out, inst)
        .join(algorithm.label())
        .join(format!("run_{seed}.json"))
}

/// Path of the exported reference front.
pub fn front_path(out: &Path, inst: &ProblemInstance) -> PathBuf {
    out.join("fronts").join(format!("{}.csv", inst.label()))
}

/// Instance descriptor as persisted next to the runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance: ProblemInstance,
    pub reference_front_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<SegmentCounts>,
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Samples a reference front and writes it as CSV.
pub fn export_front(inst: &ProblemInstance, count: usize, path: impl AsRef<Path>) -> Result<ReferenceFront> {
    let front = sample_front(inst, count)?;
    front.write_csv(path)?;
    Ok(front)
}

/// Runs every (problem, algorithm, seed) combination, persists the records
/// and writes `summary.csv` and `metadata.json`.
///
/// Runs execute concurrently on a pool of `workers` threads; records are
/// returned in (problem, algorithm, run index) order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let instances = cfg.validate()?;
    let out = cfg.output_dir.as_path();
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;

    let mut fronts = Vec::with_capacity(instances.len());
    for inst in &instances {
        let front = pool.install(|| export_front(inst, cfg.reference_front_size, front_path(out, inst)))?;
        write_json(
            &InstanceRecord {
                instance: inst.clone(),
                reference_front_size: cfg.reference_front_size,
                segments: front.segments,
            },
            &instance_dir(out, inst).join("instance.json"),
        )?;
        fronts.push(front);
    }

    let jobs: Vec<(usize, Algorithm, u64)> = (0..instances.len())
        .flat_map(|p| {
            cfg.algorithms
                .iter()
                .flat_map(move |&a| (0..cfg.run_count).map(move |r| (p, a, cfg.seed(r))))
        })
        .collect();
    log::info!("running {} jobs on {} workers", jobs.len(), pool.current_num_threads());

    let records: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(p, algorithm, seed)| {
                let inst = &instances[p];
                let record = algorithm.run(inst, &cfg.evolution_config(seed), Some(&fronts[p]))?;
                write_json(&record, &run_path(out, inst, algorithm, seed))?;
                log::debug!(
                    "{} {} seed {}: IGD {:?}",
                    inst.label(),
                    algorithm,
                    seed,
                    record.final_igd
                );
                Ok(record)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let table = summarize(&records)?;
    table.write_csv(out.join("summary.csv"))?;
    write_json(&metadata(cfg, &instances, &fronts), &out.join("metadata.json"))?;
    Ok(records)
}

fn metadata(cfg: &ExperimentConfig, instances: &[ProblemInstance], fronts: &[ReferenceFront]) -> serde_json::Value {
    let segments: BTreeMap<String, SegmentCounts> = instances
        .iter()
        .zip(fronts)
        .filter_map(|(i, f)| f.segments.map(|s| (i.label(), s)))
        .collect();
    serde_json::json!({
        "config": cfg,
        "seeds": (0..cfg.run_count).map(|r| cfg.seed(r)).collect::<Vec<_>>(),
        "seed_rule": "base_seed + run index",
        "std_divisor": "N-1 (sample standard deviation)",
        "igd": "raw objective space, nondominated members of the final population",
        "reference_front": "essential-manifold sampling, nondominated filter, farthest-point subset",
        "front_segments": segments,
        "moead_neighbourhood": "round(0.1 * population), at least 2",
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// One (problem, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub mean_igd: f64,
    /// Sample standard deviation (N - 1 divisor); 0 for a single run.
    pub std_igd: f64,
    pub best_seed: u64,
    pub best_igd: f64,
    /// Lowest mean among the algorithms run on this problem.
    pub best_mean: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub rows: Vec<SummaryRow>,
}

/// Mean and sample standard deviation.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Final-IGD statistics per (problem, algorithm), sorted by problem label
/// then algorithm. Within a cell, runs are ordered by seed.
pub fn summarize(records: &[RunRecord]) -> Result<SummaryTable> {
    if records.is_empty() {
        return Err(Error::contract("nothing to summarize"));
    }
    let mut cells: BTreeMap<(String, Algorithm), Vec<(u64, f64)>> = BTreeMap::new();
    for r in records {
        let igd = r.final_igd.ok_or_else(|| {
            Error::contract(format!(
                "run {} of {} on {} has no final IGD",
                r.config.seed,
                r.algorithm,
                r.instance.label()
            ))
        })?;
        cells
            .entry((r.instance.label(), r.algorithm))
            .or_default()
            .push((r.config.seed, igd));
    }
    let mut rows: Vec<SummaryRow> = cells
        .into_iter()
        .map(|((problem, algorithm), mut runs)| {
            runs.sort_by(|a, b| a.0.cmp(&b.0));
            let values: Vec<f64> = runs.iter().map(|r| r.1).collect();
            let (mean_igd, std_igd) = mean_and_std(&values);
            let (best_seed, best_igd) = runs
                .iter()
                .copied()
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .expect("non-empty cell");
            SummaryRow {
                problem,
                algorithm,
                runs: runs.len(),
                mean_igd,
                std_igd,
                best_seed,
                best_igd,
                best_mean: false,
            }
        })
        .collect();
    let mut best: BTreeMap<String, f64> = BTreeMap::new();
    for row in &rows {
        let entry = best.entry(row.problem.clone()).or_insert(f64::INFINITY);
        *entry = entry.min(row.mean_igd);
    }
    for row in &mut rows {
        row.best_mean = row.mean_igd == best[&row.problem];
    }
    Ok(SummaryTable { rows })
}

impl SummaryTable {
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut writer = csv::Writer::from_path(path).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let io = |e: csv::Error| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        writer
            .write_record([
                "problem",
                "algorithm",
                "runs",
                "mean_igd",
                "std_igd",
                "best_seed",
                "best_igd",
                "best_mean",
            ])
            .map_err(io)?;
        for r in &self.rows {
            writer
                .write_record([
                    r.problem.clone(),
                    r.algorithm.to_string(),
                    r.runs.to_string(),
                    format!("{:?}", r.mean_igd),
                    format!("{:?}", r.std_igd),
                    r.best_seed.to_string(),
                    format!("{:?}", r.best_igd),
                    r.best_mean.to_string(),
                ])
                .map_err(io)?;
        }
        writer.flush().map_err(|e| Error::io(path, e))
    }
}

/// Reads one persisted run.
pub fn load_run_record(path: impl AsRef<Path>) -> Result<RunRecord> {
    read_json(path.as_ref())
}

/// Reads every `run_*.json` below `out`, in path order.
pub fn load_records(out: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let mut paths = Vec::new();
    collect_runs(out.as_ref(), &mut paths)?;
    paths.sort();
    paths.iter().map(load_run_record).collect()
}

fn collect_runs(dir: &Path, paths: &mut Vec<PathBuf>) -> Result<()> {
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_dir() {
            collect_runs(&path, paths)?;
        } else if path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("run_") && n.ends_with(".json"))
        {
            paths.push(path);
        }
    }
    Ok(())
}
