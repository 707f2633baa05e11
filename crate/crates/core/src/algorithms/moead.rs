//! MOEA/D with Tchebycheff decomposition, neighborhood mating and an
//! unbounded external archive of every non-dominated solution evaluated.

use rand::Rng;

use super::reference_dirs::{weight_vectors, Direction};
use super::{initial_population, vary, AlgoConfig, Breeder, Generation};
use crate::error::Result;
use crate::instance::Instance;
use crate::metrics::{FrontPoint, ParetoFront};
use crate::rng::run_stream;
use crate::schedule::{Evaluator, ObjectiveVector, N_OBJECTIVES};

/// Weight components of exactly zero are raised to this value.
const MIN_WEIGHT: f64 = 1e-6;

/// `T = max(2, round(frac * #P))`, capped at `#P`.
pub fn neighborhood_size(population: usize, frac: f64) -> usize {
    ((frac * population as f64).round() as usize)
        .max(2)
        .min(population)
}

/// `max_o weight_o * |f_o - ideal_o|`.
pub fn tchebycheff(f: &ObjectiveVector, weight: &Direction, ideal: &[f64; N_OBJECTIVES]) -> f64 {
    let f = f.to_f64();
    (0..N_OBJECTIVES)
        .map(|o| weight[o] * (f[o] - ideal[o]).abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The `t` weight vectors closest to each weight vector, itself included.
fn neighborhoods(weights: &[Direction], t: usize) -> Vec<Vec<usize>> {
    weights
        .iter()
        .map(|a| {
            let mut order: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .map(|(j, b)| (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>(), j))
                .collect();
            order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            order.into_iter().take(t).map(|(_, j)| j).collect()
        })
        .collect()
}

pub(super) fn run(
    inst: &Instance,
    cfg: &AlgoConfig,
    observer: &mut dyn FnMut(&Generation<'_>),
) -> Result<(ParetoFront, u64)> {
    let size = cfg.population;
    let weights: Vec<Direction> = weight_vectors(size)
        .into_iter()
        .map(|w| w.map(|x| if x == 0.0 { MIN_WEIGHT } else { x }))
        .collect();
    let t = neighborhood_size(size, cfg.neighborhood_frac);
    let neighbors = neighborhoods(&weights, t);

    let mut rng = run_stream(cfg.seed);
    let mut ev = Evaluator::new(inst);
    let mut ideal = [f64::INFINITY; N_OBJECTIVES];
    let mut archive = ParetoFront::default();
    let mut pop = initial_population(&mut ev, size, &mut rng)?;
    for (g, o) in &pop {
        absorb(&mut ideal, &mut archive, g, *o);
    }
    let mut breeder = Breeder::new(pop.iter().map(|m| &m.0), size);

    let mut generation = 0;
    loop {
        let objs: Vec<ObjectiveVector> = pop.iter().map(|m| m.1).collect();
        observer(&Generation {
            index: generation,
            evaluations: ev.evaluations(),
            retained: &objs,
        });
        if ev.evaluations() >= cfg.max_evaluations {
            break;
        }
        breeder.refill(size);
        for hood in &neighbors {
            let child = loop {
                let k = rng.gen_range(0..hood.len());
                let mut l = rng.gen_range(0..hood.len() - 1);
                if l >= k {
                    l += 1;
                }
                let (child, _) = vary(&pop[hood[k]].0, &pop[hood[l]].0, cfg, &mut rng)?;
                if breeder.is_fresh(&child) {
                    break child;
                }
            };
            let f = ev.evaluate(&child)?;
            absorb(&mut ideal, &mut archive, &child, f);
            for &j in hood {
                if tchebycheff(&f, &weights[j], &ideal) < tchebycheff(&pop[j].1, &weights[j], &ideal) {
                    breeder.remove(&pop[j].0);
                    breeder.insert(&child);
                    pop[j] = (child.clone(), f);
                }
            }
        }
        generation += 1;
    }
    Ok((archive, ev.evaluations()))
}

fn absorb(
    ideal: &mut [f64; N_OBJECTIVES],
    archive: &mut ParetoFront,
    genome: &crate::schedule::Permutation,
    f: ObjectiveVector,
) {
    for (z, v) in ideal.iter_mut().zip(f.to_f64()) {
        *z = z.min(v);
    }
    archive.insert(FrontPoint {
        objectives: f,
        permutation: genome.clone(),
    });
}
