use super::{front_of, initial_population, objectives_of, vary, AlgoConfig, Breeder, Generation, Member};
use crate::error::Result;
use crate::instance::Instance;
use crate::metrics::ParetoFront;
use crate::moea::{binary_tournament, crowding_distance, fast_nondominated_sort};
use crate::rng::{run_stream, ChaCha8Rng};
use crate::schedule::{Evaluator, ObjectiveVector};

/// Front rank and crowding distance of every member.
pub(super) fn rank_and_crowd(objs: &[ObjectiveVector]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; objs.len()];
    let mut crowd = vec![0.0; objs.len()];
    for (r, front) in fast_nondominated_sort(objs).iter().enumerate() {
        let pts: Vec<ObjectiveVector> = front.iter().map(|&i| objs[i]).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&pts)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

/// `#P` offspring from parents chosen by crowded binary tournament.
pub(super) fn offspring(
    pop: &[Member],
    rank: &[usize],
    crowd: &[f64],
    cfg: &AlgoConfig,
    ev: &mut Evaluator<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Member>> {
    let prefer = |a: usize, b: usize| rank[a] < rank[b] || (rank[a] == rank[b] && crowd[a] > crowd[b]);
    breed(pop, prefer, cfg, ev, rng)
}

/// Tournament mating over `pop` with `prefer`, PMX and swap, until `#P`
/// admitted offspring have been evaluated.
pub(super) fn breed(
    pop: &[Member],
    prefer: impl Fn(usize, usize) -> bool + Copy,
    cfg: &AlgoConfig,
    ev: &mut Evaluator<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Member>> {
    let mut breeder = Breeder::new(pop.iter().map(|m| &m.0), cfg.population);
    let mut out = Vec::with_capacity(cfg.population);
    while out.len() < cfg.population {
        let a = binary_tournament(pop.len(), prefer, rng)?;
        let b = binary_tournament(pop.len(), prefer, rng)?;
        let (c1, c2) = vary(&pop[a].0, &pop[b].0, cfg, rng)?;
        for c in [c1, c2] {
            if out.len() < cfg.population && breeder.admit(&c) {
                let o = ev.evaluate(&c)?;
                out.push((c, o));
            }
        }
    }
    Ok(out)
}

/// Keeps whole fronts while they fit and fills the rest of the last front
/// by descending crowding distance.
fn truncate(merged: Vec<Member>, size: usize) -> Vec<Member> {
    let objs = objectives_of(&merged);
    let mut keep: Vec<usize> = Vec::with_capacity(size);
    for front in fast_nondominated_sort(&objs) {
        if keep.len() + front.len() <= size {
            keep.extend(front);
            continue;
        }
        let pts: Vec<ObjectiveVector> = front.iter().map(|&i| objs[i]).collect();
        let crowd = crowding_distance(&pts);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(a.cmp(&b)));
        keep.extend(order[..size - keep.len()].iter().map(|&k| front[k]));
        break;
    }
    let mut slots: Vec<Option<Member>> = merged.into_iter().map(Some).collect();
    keep.into_iter().map(|i| slots[i].take().expect("kept once")).collect()
}

pub(super) fn run(
    inst: &Instance,
    cfg: &AlgoConfig,
    observer: &mut dyn FnMut(&Generation<'_>),
) -> Result<(ParetoFront, u64)> {
    let mut rng = run_stream(cfg.seed);
    let mut ev = Evaluator::new(inst);
    let mut pop = initial_population(&mut ev, cfg.population, &mut rng)?;
    let mut generation = 0;
    loop {
        let objs = objectives_of(&pop);
        observer(&Generation {
            index: generation,
            evaluations: ev.evaluations(),
            retained: &objs,
        });
        if ev.evaluations() >= cfg.max_evaluations {
            break;
        }
        let (rank, crowd) = rank_and_crowd(&objs);
        let children = offspring(&pop, &rank, &crowd, cfg, &mut ev, &mut rng)?;
        pop.extend(children);
        pop = truncate(pop, cfg.population);
        generation += 1;
    }
    Ok((front_of(&pop), ev.evaluations()))
}
