//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line reaches the output.
//! Criteria listed in `KNOWN_FAILURES` are reported as FAIL but do not fail
//! the process; any other failure does. Set `ACCEPTANCE_ONLY=AC4,AC5` to run
//! a subset.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dpf_core::chaos::ChaosStream;
use dpf_core::experiment::{run_experiment, ExperimentConfig};
use dpf_core::front::{pf_membership, sample_front, ReferenceFront};
use dpf_core::metrics::{igd, igd_bruteforce};
use dpf_core::optimizers::{run_moead, run_nsga2, Algorithm, EvolutionConfig};
use dpf_core::verify::check_dominance_preservation;
use dpf_core::{ProblemInstance, ProblemKind, Transform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that fail for reasons recorded in the README.
const KNOWN_FAILURES: &[&str] = &["AC6"];

const SHAPES: [(usize, usize); 3] = [(3, 2), (6, 3), (10, 5)];
const REFERENCE_SIZE: usize = 10_000;
const SEEDS: u64 = 11;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn inst(kind: ProblemKind, m: usize, d: usize) -> ProblemInstance {
    ProblemInstance::new(kind, m, d).expect("valid instance")
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn final_igds(
    algorithm: Algorithm,
    p: &ProblemInstance,
    front: &ReferenceFront,
    pop: usize,
    generations: usize,
) -> Vec<f64> {
    (0..SEEDS)
        .map(|seed| {
            let cfg = EvolutionConfig::new(pop, generations, seed);
            let run = match algorithm {
                Algorithm::Nsga2 => run_nsga2(p, &cfg, Some(front)),
                Algorithm::Moead => run_moead(p, &cfg, Some(front)),
            };
            run.expect("run succeeds").final_igd.expect("reference supplied")
        })
        .collect()
}

/// Zero violations over 1e5 stratified pairs, under a minute per instance.
fn ac1() -> Outcome {
    let kinds = [
        ProblemKind::Dpf1,
        ProblemKind::Dpf2,
        ProblemKind::Dpf3,
        ProblemKind::Dpf4,
        ProblemKind::Dpf3a,
        ProblemKind::Dpf4a,
    ];
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for kind in kinds {
        for (m, d) in SHAPES {
            let p = inst(kind, m, d);
            let started = Instant::now();
            let report = check_dominance_preservation(&p, 100_000, 1).expect("supported kind");
            let elapsed = started.elapsed();
            slowest = slowest.max(elapsed);
            if report.violation_count > 0 || elapsed >= Duration::from_secs(60) {
                failures.push(format!("{} ({} violations, {:?})", p.label(), report.violation_count, elapsed));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "18 instances x 1e5 pairs, slowest {:.2}s; failing: {:?}",
            slowest.as_secs_f64(),
            failures
        ),
    )
}

/// Every point of every 10,000-point front passes membership at 1e-9.
fn ac2() -> Outcome {
    let tol = 1e-9;
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut worst_plane: f64 = 0.0;
    let mut worst_sphere: f64 = 0.0;
    for kind in ProblemKind::ALL {
        let shapes: &[(usize, usize)] = if kind.is_demo() { &[(3, 2)] } else { &SHAPES };
        for &(m, d) in shapes {
            let p = inst(kind, m, d);
            let front = sample_front(&p, REFERENCE_SIZE).expect("front");
            let bad = front.points.iter().filter(|f| !pf_membership(&p, f, tol)).count();
            if front.len() != REFERENCE_SIZE || bad > 0 {
                failures.push(format!("{}: {} of {} rejected", p.label(), bad, front.len()));
            }
            match kind {
                ProblemKind::Dpf1 => {
                    for f in &front.points {
                        worst_plane = worst_plane.max((f[..d].iter().sum::<f64>() - 0.5).abs());
                    }
                }
                ProblemKind::Dpf5 => {
                    for f in &front.points {
                        worst_sphere = worst_sphere.max((f.iter().map(|v| v * v).sum::<f64>() - 1.0).abs());
                    }
                }
                _ => {}
            }
            checked += 1;
        }
    }
    let pass = failures.is_empty() && worst_plane <= tol && worst_sphere <= tol;
    outcome(
        pass,
        format!(
            "{checked} fronts; DPF1 plane err {worst_plane:.1e}, DPF5 sphere err {worst_sphere:.1e}; failing: {failures:?}"
        ),
    )
}

/// Fast IGD equals the double-loop oracle bit for bit on 100 set pairs.
fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    for _ in 0..100 {
        let m = rng.gen_range(2..=10);
        let r: Vec<Vec<f64>> = (0..rng.gen_range(1..400))
            .map(|_| (0..m).map(|_| rng.gen::<f64>() * 3.0).collect())
            .collect();
        let s: Vec<Vec<f64>> = (0..rng.gen_range(1..150))
            .map(|_| (0..m).map(|_| rng.gen::<f64>() * 3.0).collect())
            .collect();
        let fast = igd(&r, &s).expect("valid sets").value;
        let slow = igd_bruteforce(&r, &s).expect("valid sets");
        if fast.to_bits() != slow.to_bits() {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("100 random set pairs, {mismatches} mismatches"))
}

/// NSGA-II on DPF1 (3,2): mean final IGD below 1e-2 in under 5 minutes.
fn ac4() -> Outcome {
    let started = Instant::now();
    let p = inst(ProblemKind::Dpf1, 3, 2);
    let front = sample_front(&p, REFERENCE_SIZE).expect("front");
    let values = final_igds(Algorithm::Nsga2, &p, &front, 100, 500);
    let elapsed = started.elapsed();
    let m = mean(&values);
    outcome(
        m < 1e-2 && elapsed < Duration::from_secs(300),
        format!("mean IGD {m:.3e} over {SEEDS} seeds (reference 3.80e-3), {:.1}s", elapsed.as_secs_f64()),
    )
}

/// MOEA/D on DPF5 (3,2), population 105: mean final IGD in [0.02, 0.10].
fn ac5() -> Outcome {
    let p = inst(ProblemKind::Dpf5, 3, 2);
    let front = sample_front(&p, REFERENCE_SIZE).expect("front");
    let values = final_igds(Algorithm::Moead, &p, &front, 105, 500);
    let m = mean(&values);
    outcome(
        (0.02..=0.10).contains(&m),
        format!("mean IGD {m:.3e} over {SEEDS} seeds (reference 4.60e-2)"),
    )
}

/// NSGA-II on DPF2 (3,2), 100 generations: median IGD under the quadratic
/// transform strictly below the sigmoid one.
fn ac6() -> Outcome {
    let medians: Vec<f64> = [Transform::Quadratic, Transform::Sigmoid]
        .into_iter()
        .map(|t| {
            let p = inst(ProblemKind::Dpf2, 3, 2).with_transform(t).expect("DPF2 takes a transform");
            let front = sample_front(&p, REFERENCE_SIZE).expect("front");
            median(&final_igds(Algorithm::Nsga2, &p, &front, 100, 100))
        })
        .collect();
    outcome(
        medians[0] < medians[1],
        format!("median IGD quadratic {:.3e} vs sigmoid {:.3e}", medians[0], medians[1]),
    )
}

/// NSGA-II mean IGD on DPF1 rises across the three sizes, each within 10x of
/// the tabulated reference value.
fn ac7() -> Outcome {
    let reference = [3.80e-3, 2.72e-2, 9.28e-2];
    let generations = [500, 1000, 1000];
    let means: Vec<f64> = SHAPES
        .iter()
        .zip(generations)
        .map(|(&(m, d), g)| {
            let p = inst(ProblemKind::Dpf1, m, d);
            let front = sample_front(&p, REFERENCE_SIZE).expect("front");
            mean(&final_igds(Algorithm::Nsga2, &p, &front, 100, g))
        })
        .collect();
    let rising = means.windows(2).all(|w| w[0] < w[1]);
    let within = means.iter().zip(reference).all(|(v, p)| *v >= p / 10.0 && *v <= p * 10.0);
    outcome(
        rising && within,
        format!(
            "means {:.3e} -> {:.3e} -> {:.3e} (reference {:.2e} -> {:.2e} -> {:.2e})",
            means[0], means[1], means[2], reference[0], reference[1], reference[2]
        ),
    )
}

/// First three chaos values against hand evaluation, to 1e-15.
fn ac8() -> Outcome {
    let mut s = ChaosStream::default();
    let got: Vec<f64> = (0..3).map(|_| s.next_value()).collect();
    let expected = [0.342, 0.8551368, 3.8 * 0.8551368 * (1.0 - 0.8551368)];
    let err = got.iter().zip(expected).map(|(g, e)| (g - e).abs()).fold(0.0, f64::max);
    outcome(err <= 1e-15, format!("values {got:?}, max error {err:.1e}"))
}

/// Repeating an experiment config yields byte-identical summary.csv.
fn ac9() -> Outcome {
    let run = || {
        let dir = tempfile::tempdir().expect("temp dir");
        let mut cfg = ExperimentConfig::new(ProblemKind::Dpf1, 3, 2, Algorithm::Nsga2, dir.path());
        cfg.problems.push(ProblemKind::Dpf3);
        cfg.algorithms.push(Algorithm::Moead);
        cfg.population_size = 105;
        cfg.generations = 30;
        cfg.run_count = 3;
        cfg.reference_front_size = 1000;
        run_experiment(&cfg).expect("experiment");
        std::fs::read(dir.path().join("summary.csv")).expect("summary written")
    };
    let (a, b) = (run(), run());
    outcome(a == b && !a.is_empty(), format!("two runs, {} bytes each, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture may be passed through; ignore them.
    let only: Option<Vec<String>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').map(|s| s.trim().to_uppercase()).collect());
    let criteria: [(&str, &str, fn() -> Outcome); 9] = [
        ("AC1", "dominance preservation", ac1),
        ("AC2", "front membership", ac2),
        ("AC3", "IGD oracle equivalence", ac3),
        ("AC4", "NSGA-II on DPF1", ac4),
        ("AC5", "MOEA/D on DPF5", ac5),
        ("AC6", "DPF2 transform ordering", ac6),
        ("AC7", "DPF1 degradation trend", ac7),
        ("AC8", "chaos generator", ac8),
        ("AC9", "determinism", ac9),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.iter().any(|s| s == id)) {
            continue;
        }
        let started = Instant::now();
        let result = check();
        let known = KNOWN_FAILURES.contains(&id);
        let verdict = match (result.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!(
            "{id} {verdict} {name}: {} [{:.1}s]",
            result.detail,
            started.elapsed().as_secs_f64()
        );
        if !result.pass && !known {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
