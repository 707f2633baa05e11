//! SPEA2 with strength-based raw fitness, k-th nearest neighbor density and
//! iterative nearest-neighbor archive truncation. Distances are measured
//! after min-max scaling of the objectives over the current union.

use super::nsga2::breed;
use super::{front_of, initial_population, objectives_of, AlgoConfig, Generation, Member};
use crate::error::Result;
use crate::instance::Instance;
use crate::metrics::ParetoFront;
use crate::rng::run_stream;
use crate::schedule::{dominates, Evaluator, ObjectiveVector, N_OBJECTIVES};

/// Fitness components of every member of a union.
#[derive(Clone, Debug, PartialEq)]
pub struct Spea2Fitness {
    /// Number of members each member dominates.
    pub strength: Vec<usize>,
    /// Sum of the strengths of a member's dominators; 0 when non-dominated.
    pub raw: Vec<usize>,
    /// `1 / (sigma_k + 2)`.
    pub density: Vec<f64>,
    pub fitness: Vec<f64>,
}

/// Neighbor rank used for the density estimate: `round(sqrt(2 #P))`.
pub fn density_k(population: usize) -> usize {
    ((2.0 * population as f64).sqrt()).round() as usize
}

fn scaled(objs: &[ObjectiveVector]) -> Vec<[f64; N_OBJECTIVES]> {
    let mut lo = [u64::MAX; N_OBJECTIVES];
    let mut hi = [0u64; N_OBJECTIVES];
    for v in objs {
        for o in 0..N_OBJECTIVES {
            lo[o] = lo[o].min(v.component(o));
            hi[o] = hi[o].max(v.component(o));
        }
    }
    objs.iter()
        .map(|v| {
            std::array::from_fn(|o| {
                if hi[o] > lo[o] {
                    (v.component(o) - lo[o]) as f64 / (hi[o] - lo[o]) as f64
                } else {
                    0.0
                }
            })
        })
        .collect()
}

fn distance_matrix(objs: &[ObjectiveVector]) -> Vec<Vec<f64>> {
    let pts = scaled(objs);
    pts.iter()
        .map(|a| {
            pts.iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
                .collect()
        })
        .collect()
}

/// SPEA2 fitness of `objs` with density from the `k`-th nearest neighbor.
pub fn spea2_fitness(objs: &[ObjectiveVector], k: usize) -> Spea2Fitness {
    spea2_fitness_with(objs, k, &distance_matrix(objs))
}

fn spea2_fitness_with(objs: &[ObjectiveVector], k: usize, dist: &[Vec<f64>]) -> Spea2Fitness {
    let n = objs.len();
    let mut strength = vec![0usize; n];
    let mut dominators: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if dominates(&objs[i], &objs[j]) {
                strength[i] += 1;
                dominators[j].push(i);
            }
        }
    }
    let raw: Vec<usize> = dominators
        .iter()
        .map(|ds| ds.iter().map(|&i| strength[i]).sum())
        .collect();
    let density: Vec<f64> = (0..n)
        .map(|i| {
            let mut others: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dist[i][j]).collect();
            let sigma = if others.is_empty() {
                0.0
            } else {
                let kk = k.clamp(1, others.len()) - 1;
                *others.select_nth_unstable_by(kk, f64::total_cmp).1
            };
            1.0 / (sigma + 2.0)
        })
        .collect();
    let fitness = raw.iter().zip(&density).map(|(&r, d)| r as f64 + d).collect();
    Spea2Fitness {
        strength,
        raw,
        density,
        fitness,
    }
}

/// Removes, one at a time, the member whose sorted distances to the other
/// survivors are lexicographically smallest, until `size` remain; ties go
/// to the lowest index.
///
/// Members sharing an objective vector are handled as one group: distinct
/// vectors are at positive distance, so a member's list starts with one zero
/// per live twin, followed by the distances to the other groups repeated by
/// their live multiplicity.
fn truncate(members: &[usize], objs: &[ObjectiveVector], dist: &[Vec<f64>], size: usize) -> Vec<usize> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of_vector: std::collections::HashMap<ObjectiveVector, usize> = Default::default();
    for &i in members {
        let g = *group_of_vector.entry(objs[i]).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    let n_groups = groups.len();
    let sorted: Vec<Vec<(f64, usize)>> = (0..n_groups)
        .map(|a| {
            let mut row: Vec<(f64, usize)> = (0..n_groups)
                .filter(|&b| b != a)
                .map(|b| (dist[groups[a][0]][groups[b][0]], b))
                .collect();
            row.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            row
        })
        .collect();
    // live members of each group, lowest index removed first
    let mut live: Vec<std::collections::VecDeque<usize>> =
        groups.iter().map(|g| g.iter().copied().collect()).collect();
    let mut remaining = members.len();
    while remaining > size {
        let mut victim: Option<usize> = None;
        for a in (0..n_groups).filter(|&a| !live[a].is_empty()) {
            victim = match victim {
                None => Some(a),
                Some(v) if closer(a, v, &sorted, &live) => Some(a),
                Some(v) if !closer(v, a, &sorted, &live) && live[a][0] < live[v][0] => Some(a),
                keep => keep,
            };
        }
        live[victim.expect("remaining > size")].pop_front();
        remaining -= 1;
    }
    let mut kept: Vec<usize> = live.into_iter().flatten().collect();
    kept.sort_unstable();
    kept
}

/// Whether group `a`'s expanded distance list is lexicographically smaller
/// than group `b`'s.
fn closer(
    a: usize,
    b: usize,
    sorted: &[Vec<(f64, usize)>],
    live: &[std::collections::VecDeque<usize>],
) -> bool {
    let twins_a = live[a].len() - 1;
    let twins_b = live[b].len() - 1;
    if twins_a != twins_b {
        return twins_a > twins_b;
    }
    let expand = |g: usize| {
        sorted[g]
            .iter()
            .filter(|e| !live[e.1].is_empty())
            .flat_map(|e| std::iter::repeat_n(e.0, live[e.1].len()))
    };
    for (x, y) in expand(a).zip(expand(b)) {
        if x != y {
            return x < y;
        }
    }
    false
}

/// Environmental selection: the non-dominated members, truncated or filled
/// up with the best dominated ones.
fn environmental_selection(union: &[ObjectiveVector], size: usize, k: usize) -> (Vec<usize>, Vec<f64>) {
    let dist = distance_matrix(union);
    let fit = spea2_fitness_with(union, k, &dist);
    let nondominated: Vec<usize> = (0..union.len()).filter(|&i| fit.raw[i] == 0).collect();
    let selected = if nondominated.len() > size {
        truncate(&nondominated, union, &dist, size)
    } else {
        let mut order: Vec<usize> = (0..union.len()).collect();
        order.sort_by(|&a, &b| fit.fitness[a].total_cmp(&fit.fitness[b]).then(a.cmp(&b)));
        order.truncate(size);
        order.sort_unstable();
        order
    };
    let fitness = selected.iter().map(|&i| fit.fitness[i]).collect();
    (selected, fitness)
}

pub(super) fn run(
    inst: &Instance,
    cfg: &AlgoConfig,
    observer: &mut dyn FnMut(&Generation<'_>),
) -> Result<(ParetoFront, u64)> {
    let size = cfg.population;
    let k = density_k(size);
    let mut rng = run_stream(cfg.seed);
    let mut ev = Evaluator::new(inst);
    let mut pop = initial_population(&mut ev, size, &mut rng)?;
    let mut archive: Vec<Member> = Vec::new();
    let mut generation = 0;
    loop {
        let mut union = std::mem::take(&mut archive);
        union.append(&mut pop);
        let (selected, fitness) = environmental_selection(&objectives_of(&union), size, k);
        let mut slots: Vec<Option<Member>> = union.into_iter().map(Some).collect();
        archive = selected
            .into_iter()
            .map(|i| slots[i].take().expect("selected once"))
            .collect();
        debug_assert!(archive.len() <= size);

        observer(&Generation {
            index: generation,
            evaluations: ev.evaluations(),
            retained: &objectives_of(&archive),
        });
        if ev.evaluations() >= cfg.max_evaluations {
            break;
        }

        let prefer = |a: usize, b: usize| fitness[a] < fitness[b];
        pop = breed(&archive, prefer, cfg, &mut ev, &mut rng)?;
        generation += 1;
    }
    Ok((front_of(&archive), ev.evaluations()))
}
