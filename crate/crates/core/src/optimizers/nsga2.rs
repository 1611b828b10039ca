use std::cmp::Ordering;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    check_run, evaluate_all, poly_mutation, population_igd, random_population, sbx, seeded_rng,
    Algorithm, EvolutionConfig, RunRecord,
};
use crate::error::Result;
use crate::front::ReferenceFront;
use crate::pareto::{crowding_distance, nondominated_sort, sort_by_crowding, Individual, Population};
use crate::problems::ProblemInstance;

/// Front rank and crowding distance of every member.
fn rank_and_crowding(members: &[Individual]) -> (Vec<usize>, Vec<f64>, Vec<Vec<usize>>) {
    let objs: Vec<&[f64]> = members.iter().map(|ind| ind.f.as_slice()).collect();
    let fronts = nondominated_sort(&objs);
    let mut rank = vec![0; members.len()];
    let mut crowding = vec![0.0; members.len()];
    for (r, front) in fronts.iter().enumerate() {
        let points: Vec<&[f64]> = front.iter().map(|&i| objs[i]).collect();
        for (&i, c) in front.iter().zip(crowding_distance(&points)) {
            rank[i] = r;
            crowding[i] = c;
        }
    }
    (rank, crowding, fronts)
}

fn tournament(rank: &[usize], crowding: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let n = rank.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    match rank[a]
        .cmp(&rank[b])
        .then_with(|| crowding[b].total_cmp(&crowding[a]))
    {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.gen::<bool>() {
                a
            } else {
                b
            }
        }
    }
}

/// Generational NSGA-II with (μ + μ) elitist survival.
pub fn run_nsga2(
    inst: &ProblemInstance,
    cfg: &EvolutionConfig,
    reference: Option<&ReferenceFront>,
) -> Result<RunRecord> {
    check_run(inst, cfg, reference)?;
    let started = Instant::now();
    let mut rng = seeded_rng(cfg.seed);
    let size = cfg.population_size;
    let pm = cfg.mutation_probability_for(inst.n());

    let mut members = random_population(inst, size, &mut rng)?;
    let initial_igd = reference.map(|r| population_igd(&members, r)).transpose()?;
    let (mut rank, mut crowding, _) = rank_and_crowding(&members);
    let mut igd_trace = Vec::new();

    for _ in 0..cfg.generations {
        let mut offspring = Vec::with_capacity(size + 1);
        while offspring.len() < size {
            let a = tournament(&rank, &crowding, &mut rng);
            let b = tournament(&rank, &crowding, &mut rng);
            let (mut c1, mut c2) = sbx(
                &members[a].x,
                &members[b].x,
                cfg.crossover_probability,
                cfg.distribution_index_crossover,
                &mut rng,
            )?;
            poly_mutation(&mut c1, pm, cfg.distribution_index_mutation, &mut rng);
            poly_mutation(&mut c2, pm, cfg.distribution_index_mutation, &mut rng);
            offspring.push(c1);
            offspring.push(c2);
        }
        offspring.truncate(size);

        let mut merged = members;
        merged.extend(evaluate_all(inst, offspring)?);
        let (merged_rank, merged_crowding, fronts) = rank_and_crowding(&merged);

        let mut survivors = Vec::with_capacity(size);
        for front in fronts {
            if survivors.len() + front.len() <= size {
                survivors.extend(front);
            } else {
                let mut last = front;
                sort_by_crowding(&mut last, &merged_crowding);
                survivors.extend(last.into_iter().take(size - survivors.len()));
            }
            if survivors.len() == size {
                break;
            }
        }
        rank = survivors.iter().map(|&i| merged_rank[i]).collect();
        crowding = survivors.iter().map(|&i| merged_crowding[i]).collect();
        let mut slots: Vec<Option<Individual>> = merged.into_iter().map(Some).collect();
        members = survivors.iter().map(|&i| slots[i].take().expect("survivor chosen once")).collect();

        if let Some(r) = reference {
            igd_trace.push(population_igd(&members, r)?);
        }
    }

    let final_igd = reference.map(|r| population_igd(&members, r)).transpose()?;
    Ok(RunRecord {
        algorithm: Algorithm::Nsga2,
        config: cfg.clone(),
        instance: inst.clone(),
        igd_trace,
        initial_igd,
        final_igd,
        final_population: Population { members },
        wall_time: started.elapsed(),
    })
}
