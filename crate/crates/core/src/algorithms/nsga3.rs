//! NSGA-III: NSGA-II's generational loop with reference-direction niching
//! on the last admitted front.

use rand::Rng;

use super::nsga2::{offspring, rank_and_crowd};
use super::reference_dirs::{das_dennis, divisions_within, Direction};
use super::{front_of, initial_population, objectives_of, AlgoConfig, Generation, Member};
use crate::error::Result;
use crate::instance::Instance;
use crate::metrics::ParetoFront;
use crate::moea::fast_nondominated_sort;
use crate::rng::{run_stream, ChaCha8Rng};
use crate::schedule::{Evaluator, ObjectiveVector, N_OBJECTIVES};

type Point = [f64; N_OBJECTIVES];

/// Normalizes `objs` by the ideal point and the hyperplane intercepts of the
/// extreme points, falling back to the per-objective maximum when the
/// extreme points do not span a usable hyperplane.
pub(crate) fn normalize(objs: &[ObjectiveVector]) -> Vec<Point> {
    let raw: Vec<Point> = objs.iter().map(|o| o.to_f64()).collect();
    let mut ideal = [f64::INFINITY; N_OBJECTIVES];
    for p in &raw {
        for o in 0..N_OBJECTIVES {
            ideal[o] = ideal[o].min(p[o]);
        }
    }
    let shifted: Vec<Point> = raw
        .iter()
        .map(|p| std::array::from_fn(|o| p[o] - ideal[o]))
        .collect();

    let extremes: [Point; N_OBJECTIVES] = std::array::from_fn(|axis| {
        let asf = |p: &Point| {
            (0..N_OBJECTIVES)
                .map(|o| p[o] / if o == axis { 1.0 } else { 1e-6 })
                .fold(f64::NEG_INFINITY, f64::max)
        };
        *shifted
            .iter()
            .min_by(|a, b| asf(a).total_cmp(&asf(b)))
            .expect("non-empty")
    });

    let mut worst = [0.0f64; N_OBJECTIVES];
    for p in &shifted {
        for o in 0..N_OBJECTIVES {
            worst[o] = worst[o].max(p[o]);
        }
    }
    let intercepts = hyperplane_intercepts(&extremes)
        .filter(|a| a.iter().all(|x| *x > 1e-6 && x.is_finite()))
        .unwrap_or(worst);
    let scale: Point = std::array::from_fn(|o| if intercepts[o] > 1e-12 { intercepts[o] } else { 1.0 });
    shifted
        .iter()
        .map(|p| std::array::from_fn(|o| p[o] / scale[o]))
        .collect()
}

/// Intercepts of the plane through the three points, or `None` if singular.
fn hyperplane_intercepts(points: &[Point; N_OBJECTIVES]) -> Option<Point> {
    // solve Z a = 1, intercept_o = 1 / a_o
    let a = solve3(points, [1.0; N_OBJECTIVES])?;
    if a.iter().any(|&x| x <= 0.0) {
        return None;
    }
    Some(a.map(|x| 1.0 / x))
}

fn solve3(m: &[Point; 3], b: Point) -> Option<Point> {
    let det = |m: &[Point; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-12 {
        return None;
    }
    Some(std::array::from_fn(|col| {
        let mut mc = *m;
        for row in 0..3 {
            mc[row][col] = b[row];
        }
        det(&mc) / d
    }))
}

/// Closest reference direction and perpendicular distance to it.
pub(crate) fn associate(p: &Point, dirs: &[Direction]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, w) in dirs.iter().enumerate() {
        let ww: f64 = w.iter().map(|x| x * x).sum();
        let t = p.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / ww;
        let d = p
            .iter()
            .zip(w)
            .map(|(a, b)| (a - t * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

fn select(merged: Vec<Member>, size: usize, dirs: &[Direction], rng: &mut ChaCha8Rng) -> Vec<Member> {
    let objs = objectives_of(&merged);
    let fronts = fast_nondominated_sort(&objs);
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    let mut last: Vec<usize> = Vec::new();
    for front in fronts {
        if chosen.len() + front.len() <= size {
            chosen.extend(front);
            if chosen.len() == size {
                break;
            }
        } else {
            last = front;
            break;
        }
    }

    if chosen.len() < size {
        let candidates: Vec<usize> = chosen.iter().chain(&last).copied().collect();
        let cand_objs: Vec<ObjectiveVector> = candidates.iter().map(|&i| objs[i]).collect();
        let normalized = normalize(&cand_objs);
        let assoc: Vec<(usize, f64)> = normalized.iter().map(|p| associate(p, dirs)).collect();

        let mut niche = vec![0usize; dirs.len()];
        for a in &assoc[..chosen.len()] {
            niche[a.0] += 1;
        }
        // last-front members (positions in `candidates`) still available, per direction
        let mut pool: Vec<Vec<usize>> = vec![Vec::new(); dirs.len()];
        for k in chosen.len()..candidates.len() {
            pool[assoc[k].0].push(k);
        }
        let mut open = vec![true; dirs.len()];
        while chosen.len() < size {
            let min = (0..dirs.len())
                .filter(|&j| open[j])
                .map(|j| niche[j])
                .min()
                .expect("the last front has enough members");
            let ties: Vec<usize> = (0..dirs.len()).filter(|&j| open[j] && niche[j] == min).collect();
            let j = ties[rng.gen_range(0..ties.len())];
            if pool[j].is_empty() {
                open[j] = false;
                continue;
            }
            let pick = if niche[j] == 0 {
                (0..pool[j].len())
                    .min_by(|&a, &b| assoc[pool[j][a]].1.total_cmp(&assoc[pool[j][b]].1))
                    .expect("non-empty")
            } else {
                rng.gen_range(0..pool[j].len())
            };
            let k = pool[j].remove(pick);
            chosen.push(candidates[k]);
            niche[j] += 1;
        }
    }

    let mut slots: Vec<Option<Member>> = merged.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| slots[i].take().expect("chosen once")).collect()
}

pub(super) fn run(
    inst: &Instance,
    cfg: &AlgoConfig,
    observer: &mut dyn FnMut(&Generation<'_>),
) -> Result<(ParetoFront, u64)> {
    let dirs = das_dennis(divisions_within(cfg.population));
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
        pop = select(pop, cfg.population, &dirs, &mut rng);
        generation += 1;
    }
    Ok((front_of(&pop), ev.evaluations()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn association_picks_nearest_direction() {
        let dirs = das_dennis(2);
        let (j, d) = associate(&[1.0, 0.0, 0.0], &dirs);
        assert_eq!(dirs[j], [1.0, 0.0, 0.0]);
        assert!(d.abs() < 1e-12);
        let (j, _) = associate(&[0.5, 0.5, 0.0], &dirs);
        assert_eq!(dirs[j], [0.5, 0.5, 0.0]);
    }

    #[test]
    fn normalization_uses_intercepts() {
        let objs = [
            ObjectiveVector::new(10, 0, 0),
            ObjectiveVector::new(0, 20, 0),
            ObjectiveVector::new(0, 0, 40),
            ObjectiveVector::new(5, 10, 0),
        ];
        let n = normalize(&objs);
        assert_eq!(n[0], [1.0, 0.0, 0.0]);
        assert_eq!(n[1], [0.0, 1.0, 0.0]);
        assert_eq!(n[2], [0.0, 0.0, 1.0]);
        assert!((n[3][0] - 0.5).abs() < 1e-12 && (n[3][1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_normalization_falls_back() {
        let objs = [ObjectiveVector::new(3, 3, 3); 4];
        assert!(normalize(&objs).iter().all(|p| p.iter().all(|x| x.is_finite())));
    }
}
