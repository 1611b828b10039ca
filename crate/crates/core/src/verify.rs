//! Brute-force checks that the transforming layer preserves dominance.
//!
//! A problem whose objectives are a monotone lift of its essential objectives
//! orders every pair of solutions the same way in both spaces. These checks
//! sample pairs and clouds of decision vectors and compare the two orders
//! directly.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{relation, Dominance};
use crate::problems::{ProblemInstance, ProblemKind};

/// Violations kept in memory; the total is always counted.
const STORED_VIOLATIONS: usize = 100;
/// Violations written by [`EquivalenceReport::write_json`].
pub const EXPORTED_VIOLATIONS: usize = 10;

/// A pair ordered differently in essential and full objective space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub x_i: Vec<f64>,
    pub x_j: Vec<f64>,
    pub relation_in_base: Dominance,
    pub relation_in_full: Dominance,
}

/// How the sampled pairs sit relative to the thresholds of an implicit
/// problem.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCases {
    /// Both `γ_d` values above the chosen threshold.
    pub above: usize,
    /// One `γ_d` on each side of the chosen threshold.
    pub straddling: usize,
    /// Both `γ_d` values at or below the chosen threshold.
    pub below: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub instance: String,
    pub samples_tested: usize,
    pub violation_count: usize,
    /// The first violations found, in sampling order.
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_cases: Option<ThresholdCases>,
    pub passed: bool,
}

impl EquivalenceReport {
    /// Writes the report as JSON, keeping the first
    /// [`EXPORTED_VIOLATIONS`] violations.
    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut trimmed = self.clone();
        trimmed.violations.truncate(EXPORTED_VIOLATIONS);
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let text = serde_json::to_string_pretty(&trimmed)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Whether [`check_dominance_preservation`] accepts the kind.
pub fn supports(kind: ProblemKind) -> bool {
    kind.is_explicit() || kind.is_implicit() || kind == ProblemKind::DemoImplicit
}

fn ensure_supported(inst: &ProblemInstance) -> Result<()> {
    if supports(inst.kind()) {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "{} has no essential-objective projection that the dominance check can use",
            inst.kind()
        )))
    }
}

/// Relation pair `(essential, full)` for two decision vectors.
fn relations(inst: &ProblemInstance, a: &[f64], b: &[f64]) -> Result<(Dominance, Dominance)> {
    let ea = inst.evaluate(a)?;
    let eb = inst.evaluate(b)?;
    Ok((
        relation(&ea.essential, &eb.essential),
        relation(&ea.objectives, &eb.objectives),
    ))
}

/// The lift may merge ties (full `EQUAL`), but must never reorder.
fn is_violation(essential: Dominance, full: Dominance) -> bool {
    full != Dominance::Equal && essential != full
}

struct PairSampler<'a> {
    inst: &'a ProblemInstance,
    rng: ChaCha8Rng,
}

impl PairSampler<'_> {
    fn uniform(&mut self) -> Vec<f64> {
        (0..self.inst.n()).map(|_| self.rng.gen()).collect()
    }

    /// Distance variables at, or close to, their optimum.
    fn settle_distance(&mut self, x: &mut [f64], spread: f64) {
        let p = self.inst.position_count();
        let (opt, _) = self.inst.landscape_optimum();
        for v in &mut x[p..] {
            *v = if spread == 0.0 {
                opt
            } else {
                (opt + spread * (self.rng.gen::<f64>() - 0.5)).clamp(0.0, 1.0)
            };
        }
    }

    fn perturb(&mut self, x: &[f64], scale: f64) -> Vec<f64> {
        x.iter()
            .map(|&v| (v + scale * (self.rng.gen::<f64>() - 0.5)).clamp(0.0, 1.0))
            .collect()
    }

    fn distance_spread(&mut self) -> f64 {
        match self.rng.gen_range(0..3) {
            0 => 0.0,
            1 => 0.05,
            _ => 1.0,
        }
    }

    /// Independent pairs, perturbed pairs and pairs sharing near-optimal
    /// distance variables, in equal measure.
    fn general_pair(&mut self, index: usize) -> (Vec<f64>, Vec<f64>) {
        let mut a = self.uniform();
        let mut b = match index % 2 {
            0 => self.uniform(),
            _ => {
                let scale = [0.5, 0.05, 1e-3][self.rng.gen_range(0..3)];
                self.perturb(&a, scale)
            }
        };
        let spread = self.distance_spread();
        if spread < 1.0 {
            self.settle_distance(&mut a, spread);
            self.settle_distance(&mut b, spread);
        }
        (a, b)
    }

    /// Sets `x_1` so that `γ_d` equals `target` for the current distance
    /// variables. Returns `false` when the target is out of reach.
    fn aim_last_essential(&self, x: &mut [f64], target: f64) -> Result<bool> {
        let g = self.inst.evaluate(x)?.landscape;
        let ratio = target / (1.0 + g);
        if !(0.0..=1.0).contains(&ratio) {
            return Ok(false);
        }
        // γ_d = (1 - sin θ_1)(1+g) for the concave kinds, sin θ_1 (1+g) for
        // the DTLZ5-type kinds.
        let sine = match self.inst.kind() {
            ProblemKind::Dpf3 | ProblemKind::Dpf4 => 1.0 - ratio,
            _ => ratio,
        };
        let t = sine.clamp(0.0, 1.0).asin() / FRAC_PI_2;
        x[0] = match self.inst.kind() {
            ProblemKind::Dpf3 => t.powf(0.01),
            _ => t,
        }
        .clamp(0.0, 1.0);
        Ok(true)
    }

    /// A pair forced into one of the three threshold cases for a randomly
    /// chosen threshold.
    fn threshold_pair(&mut self, case: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let eta = self.inst.thresholds();
        let threshold = eta[self.rng.gen_range(0..eta.len())];
        loop {
            let mut a = self.uniform();
            let spread = self.distance_spread().min(0.05);
            self.settle_distance(&mut a, spread);
            let mut b = if self.rng.gen::<bool>() {
                self.perturb(&a, 0.05)
            } else {
                let mut b = self.uniform();
                self.settle_distance(&mut b, spread);
                b
            };
            let scale_a = 1.0 + self.inst.evaluate(&a)?.landscape;
            let scale_b = 1.0 + self.inst.evaluate(&b)?.landscape;
            let above = |rng: &mut ChaCha8Rng, s: f64| threshold + (s - threshold) * rng.gen::<f64>().max(1e-9);
            let below = |rng: &mut ChaCha8Rng, _: f64| threshold * rng.gen::<f64>();
            let (ta, tb) = match case {
                0 => (above(&mut self.rng, scale_a), above(&mut self.rng, scale_b)),
                1 => {
                    if self.rng.gen::<bool>() {
                        (above(&mut self.rng, scale_a), below(&mut self.rng, scale_b))
                    } else {
                        (below(&mut self.rng, scale_a), above(&mut self.rng, scale_b))
                    }
                }
                _ => (below(&mut self.rng, scale_a), below(&mut self.rng, scale_b)),
            };
            if self.aim_last_essential(&mut a, ta)? && self.aim_last_essential(&mut b, tb)? {
                return Ok((a, b, threshold));
            }
        }
    }
}

/// Samples `sample_count` pairs and reports every pair whose dominance
/// relation differs between essential and full objective space.
///
/// For DPF3/DPF4-type problems the pairs are split evenly between the three
/// positions of `γ_d` relative to a threshold: both above, straddling, both
/// below. Other kinds mix independent and perturbed pairs, with distance
/// variables optimal, near-optimal or free.
pub fn check_dominance_preservation(
    inst: &ProblemInstance,
    sample_count: usize,
    seed: u64,
) -> Result<EquivalenceReport> {
    ensure_supported(inst)?;
    let mut sampler = PairSampler {
        inst,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let stratified = inst.kind().is_implicit();
    let mut cases = ThresholdCases::default();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for k in 0..sample_count {
        let (a, b) = if stratified {
            let (a, b, threshold) = sampler.threshold_pair(k % 3)?;
            let ga = *inst.evaluate(&a)?.essential.last().unwrap();
            let gb = *inst.evaluate(&b)?.essential.last().unwrap();
            match ((ga > threshold) as u8) + ((gb > threshold) as u8) {
                2 => cases.above += 1,
                1 => cases.straddling += 1,
                _ => cases.below += 1,
            }
            (a, b)
        } else {
            sampler.general_pair(k)
        };
        let (essential, full) = relations(inst, &a, &b)?;
        if is_violation(essential, full) {
            violation_count += 1;
            if violations.len() < STORED_VIOLATIONS {
                violations.push(Violation {
                    x_i: a,
                    x_j: b,
                    relation_in_base: essential,
                    relation_in_full: full,
                });
            }
        }
    }
    Ok(EquivalenceReport {
        instance: inst.label(),
        samples_tested: sample_count,
        violation_count,
        violations,
        threshold_cases: stratified.then_some(cases),
        passed: violation_count == 0,
    })
}

/// Exact nondominated subset by comparing every pair; ascending indices.
/// Identical points do not dominate each other and are all kept.
pub fn pareto_filter_bruteforce<P: AsRef<[f64]>>(points: &[P]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !points
                .iter()
                .any(|q| relation(q.as_ref(), points[i].as_ref()) == Dominance::ADominates)
        })
        .collect()
}

/// Nondominated subsets of one random cloud in both spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoSetReport {
    pub instance: String,
    pub samples: usize,
    pub essential_front: Vec<usize>,
    pub full_front: Vec<usize>,
    pub equal: bool,
}

/// Draws `sample_count` decision vectors (half with distance variables near
/// their optimum) and compares the nondominated index sets in essential and
/// full space.
pub fn check_pareto_set_equality(
    inst: &ProblemInstance,
    sample_count: usize,
    seed: u64,
) -> Result<ParetoSetReport> {
    ensure_supported(inst)?;
    let mut sampler = PairSampler {
        inst,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut essential = Vec::with_capacity(sample_count);
    let mut full = Vec::with_capacity(sample_count);
    for k in 0..sample_count {
        let mut x = sampler.uniform();
        if k % 2 == 0 {
            sampler.settle_distance(&mut x, 0.05);
        }
        let e = inst.evaluate(&x)?;
        essential.push(e.essential);
        full.push(e.objectives);
    }
    let essential_front = pareto_filter_bruteforce(&essential);
    let full_front = pareto_filter_bruteforce(&full);
    Ok(ParetoSetReport {
        instance: inst.label(),
        samples: sample_count,
        equal: essential_front == full_front,
        essential_front,
        full_front,
    })
}
