use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    check_run, evaluate_all, pbi, poly_mutation, population_igd, random_population, sbx,
    seeded_rng, simplex_lattice, Algorithm, EvolutionConfig, RunRecord,
};
use crate::error::{Error, Result};
use crate::front::ReferenceFront;
use crate::pareto::Population;
use crate::problems::ProblemInstance;

/// Indices of the `t` weight vectors closest to each weight vector (itself
/// included), ties by lower index.
fn neighbourhoods(weights: &[Vec<f64>], t: usize) -> Vec<Vec<usize>> {
    weights
        .iter()
        .map(|w| {
            let mut order: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .map(|(j, v)| (w.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum(), j))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            order.into_iter().take(t).map(|(_, j)| j).collect()
        })
        .collect()
}

/// Neighbourhood size `round(fraction · population)`, at least 2.
pub(crate) fn neighbourhood_size(cfg: &EvolutionConfig) -> usize {
    let t = (cfg.moead_neighborhood_fraction * cfg.population_size as f64).round() as usize;
    t.clamp(2, cfg.population_size)
}

/// MOEA/D with PBI aggregation, neighbourhood mating and bounded
/// neighbourhood replacement.
///
/// The population size must equal the size of the simplex lattice for the
/// instance's objective count.
pub fn run_moead(
    inst: &ProblemInstance,
    cfg: &EvolutionConfig,
    reference: Option<&ReferenceFront>,
) -> Result<RunRecord> {
    run_observed(inst, cfg, reference, &mut |_, _| {})
}

/// [`run_moead`], reporting every evaluated objective vector together with
/// the ideal point right after it was taken into account.
fn run_observed(
    inst: &ProblemInstance,
    cfg: &EvolutionConfig,
    reference: Option<&ReferenceFront>,
    observe: &mut dyn FnMut(&[f64], &[f64]),
) -> Result<RunRecord> {
    check_run(inst, cfg, reference)?;
    let weights = simplex_lattice(inst.m(), cfg.population_size)?;
    if weights.len() != cfg.population_size {
        return Err(Error::config(format!(
            "MOEA/D population {} does not match any weight lattice for m = {} (nearest has {})",
            cfg.population_size,
            inst.m(),
            weights.len()
        )));
    }
    let started = Instant::now();
    let mut rng = seeded_rng(cfg.seed);
    let size = cfg.population_size;
    let pm = cfg.mutation_probability_for(inst.n());
    let neighbours = neighbourhoods(&weights, neighbourhood_size(cfg));

    let mut members = random_population(inst, size, &mut rng)?;
    let mut ideal = members[0].f.clone();
    for ind in &members {
        for (z, v) in ideal.iter_mut().zip(&ind.f) {
            *z = z.min(*v);
        }
    }
    for ind in &members {
        observe(&ind.f, &ideal);
    }
    let initial_igd = reference.map(|r| population_igd(&members, r)).transpose()?;
    let mut igd_trace = Vec::new();

    for _ in 0..cfg.generations {
        for i in 0..size {
            let hood = &neighbours[i];
            let a = hood[rng.gen_range(0..hood.len())];
            let mut b = hood[rng.gen_range(0..hood.len())];
            while b == a {
                b = hood[rng.gen_range(0..hood.len())];
            }
            let (mut child, _) = sbx(
                &members[a].x,
                &members[b].x,
                cfg.crossover_probability,
                cfg.distribution_index_crossover,
                &mut rng,
            )?;
            poly_mutation(&mut child, pm, cfg.distribution_index_mutation, &mut rng);
            let child = evaluate_all(inst, vec![child])?.pop().expect("one child");
            for (z, v) in ideal.iter_mut().zip(&child.f) {
                *z = z.min(*v);
            }
            observe(&child.f, &ideal);

            let mut order = hood.clone();
            order.shuffle(&mut rng);
            let mut replaced = 0;
            for j in order {
                let new = pbi(&child.f, &weights[j], &ideal, cfg.pbi_penalty);
                let old = pbi(&members[j].f, &weights[j], &ideal, cfg.pbi_penalty);
                if new <= old {
                    members[j] = child.clone();
                    replaced += 1;
                    if replaced >= cfg.moead_max_replacements {
                        break;
                    }
                }
            }
        }
        if let Some(r) = reference {
            igd_trace.push(population_igd(&members, r)?);
        }
    }

    let final_igd = reference.map(|r| population_igd(&members, r)).transpose()?;
    Ok(RunRecord {
        algorithm: Algorithm::Moead,
        config: cfg.clone(),
        instance: inst.clone(),
        igd_trace,
        initial_igd,
        final_igd,
        final_population: Population { members },
        wall_time: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbourhood_contains_self_first() {
        let w = simplex_lattice(3, 15).unwrap();
        let hoods = neighbourhoods(&w, 3);
        for (i, h) in hoods.iter().enumerate() {
            assert_eq!(h[0], i);
            assert_eq!(h.len(), 3);
        }
    }

    #[test]
    fn neighbourhood_size_rounds_and_floors_at_two() {
        assert_eq!(neighbourhood_size(&EvolutionConfig::new(105, 0, 0)), 11);
        assert_eq!(neighbourhood_size(&EvolutionConfig::new(10, 0, 0)), 2);
    }

    #[test]
    fn ideal_point_is_the_running_minimum() {
        let inst = ProblemInstance::new(crate::problems::ProblemKind::Dpf1, 3, 2).unwrap();
        let mut seen: Option<Vec<f64>> = None;
        let mut checked = 0;
        run_observed(&inst, &EvolutionConfig::new(15, 20, 4), None, &mut |f, ideal| {
            let lowest = seen.get_or_insert_with(|| f.to_vec());
            for (l, v) in lowest.iter_mut().zip(f) {
                *l = l.min(*v);
            }
            checked += 1;
            // The initial ideal already covers the whole first population.
            if checked > 15 {
                assert_eq!(ideal, lowest.as_slice());
            }
            assert!(ideal.iter().zip(lowest.iter()).all(|(z, l)| z <= l));
        })
        .unwrap();
        assert_eq!(checked, 15 + 15 * 20);
    }
}
