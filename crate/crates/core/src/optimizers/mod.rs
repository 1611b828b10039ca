//! Baseline optimizers: NSGA-II and MOEA/D with PBI.
//!
//! Both share the real-coded variation operators in [`operators`]. Search
//! randomness comes from a seeded ChaCha stream, so a run is a pure function
//! of `(instance, config)` apart from its wall-clock time.

mod lattice;
mod moead;
mod nsga2;
pub mod operators;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::front::ReferenceFront;
use crate::metrics::igd;
use crate::pareto::{Individual, Population};
use crate::problems::ProblemInstance;

pub use lattice::{lattice_layer, pbi, simplex_lattice, INNER_LAYER_SHRINKAGE};
pub use moead::run_moead;
pub use nsga2::run_nsga2;
pub use operators::{poly_mutation, sbx};

/// Which optimizer to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "NSGA2")]
    Nsga2,
    #[serde(rename = "MOEAD")]
    Moead,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "NSGA2",
            Algorithm::Moead => "MOEAD",
        }
    }

    pub fn run(
        self,
        inst: &ProblemInstance,
        cfg: &EvolutionConfig,
        reference: Option<&ReferenceFront>,
    ) -> Result<RunRecord> {
        match self {
            Algorithm::Nsga2 => run_nsga2(inst, cfg, reference),
            Algorithm::Moead => run_moead(inst, cfg, reference),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        match norm.as_str() {
            "NSGA2" | "NSGAII" => Ok(Algorithm::Nsga2),
            "MOEAD" | "MOEADPBI" => Ok(Algorithm::Moead),
            _ => Err(Error::config(format!("unknown algorithm '{s}'"))),
        }
    }
}

/// Parameters shared by both optimizers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub seed: u64,
    pub crossover_probability: f64,
    /// Per-variable mutation probability; `None` means `1 / n`.
    pub mutation_probability: Option<f64>,
    pub distribution_index_crossover: f64,
    pub distribution_index_mutation: f64,
    /// MOEA/D neighbourhood size as a fraction of the population.
    pub moead_neighborhood_fraction: f64,
    pub pbi_penalty: f64,
    /// Upper bound on MOEA/D replacements per offspring.
    pub moead_max_replacements: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 500,
            seed: 0,
            crossover_probability: 1.0,
            mutation_probability: None,
            distribution_index_crossover: 20.0,
            distribution_index_mutation: 20.0,
            moead_neighborhood_fraction: 0.1,
            pbi_penalty: 5.0,
            moead_max_replacements: 2,
        }
    }
}

impl EvolutionConfig {
    pub fn new(population_size: usize, generations: usize, seed: u64) -> Self {
        Self {
            population_size,
            generations,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |p: f64| (0.0..=1.0).contains(&p);
        if self.population_size < 2 {
            return Err(Error::config("population size must be at least 2"));
        }
        if !in_unit(self.crossover_probability) || !self.mutation_probability.map_or(true, in_unit) {
            return Err(Error::config("probabilities must lie in [0, 1]"));
        }
        if !(self.distribution_index_crossover > 0.0 && self.distribution_index_mutation > 0.0) {
            return Err(Error::config("distribution indices must be positive"));
        }
        if !(self.moead_neighborhood_fraction > 0.0 && self.moead_neighborhood_fraction <= 1.0) {
            return Err(Error::config("neighbourhood fraction must lie in (0, 1]"));
        }
        if !(self.pbi_penalty >= 0.0) || self.moead_max_replacements == 0 {
            return Err(Error::config(
                "PBI penalty must be nonnegative and replacements at least 1",
            ));
        }
        Ok(())
    }

    /// Mutation probability for `n` decision variables.
    pub fn mutation_probability_for(&self, n: usize) -> f64 {
        self.mutation_probability.unwrap_or(1.0 / n as f64)
    }
}

/// One optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub config: EvolutionConfig,
    pub instance: ProblemInstance,
    /// IGD of the nondominated members after each generation; empty when no
    /// reference front was supplied.
    pub igd_trace: Vec<f64>,
    /// IGD of the initial population's nondominated members.
    pub initial_igd: Option<f64>,
    /// IGD of the final population's nondominated members.
    pub final_igd: Option<f64>,
    pub final_population: Population,
    #[serde(with = "duration_secs")]
    pub wall_time: Duration,
}

impl RunRecord {
    /// Equality ignoring `wall_time`.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        let mut a = self.clone();
        a.wall_time = other.wall_time;
        a == *other
    }
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_run(inst: &ProblemInstance, cfg: &EvolutionConfig, reference: Option<&ReferenceFront>) -> Result<()> {
    cfg.validate()?;
    if let Some(r) = reference {
        if r.points.is_empty() || r.points[0].len() != inst.m() {
            return Err(Error::contract(format!(
                "reference front does not match {} objectives",
                inst.m()
            )));
        }
    }
    Ok(())
}

pub(crate) fn random_population(inst: &ProblemInstance, size: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Individual>> {
    let xs: Vec<Vec<f64>> = (0..size)
        .map(|_| (0..inst.n()).map(|_| rng.gen::<f64>()).collect())
        .collect();
    evaluate_all(inst, xs)
}

pub(crate) fn evaluate_all(inst: &ProblemInstance, xs: Vec<Vec<f64>>) -> Result<Vec<Individual>> {
    xs.into_par_iter()
        .map(|x| {
            let f = inst.objectives(&x)?;
            Ok(Individual { x, f })
        })
        .collect()
}

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// IGD of the nondominated members of `members`.
pub(crate) fn population_igd(members: &[Individual], reference: &ReferenceFront) -> Result<f64> {
    let objs: Vec<&[f64]> = members.iter().map(|ind| ind.f.as_slice()).collect();
    let front: Vec<&[f64]> = crate::pareto::nondominated_indices(&objs)
        .into_iter()
        .map(|i| objs[i])
        .collect();
    Ok(igd(&reference.points, &front)?.value)
}
