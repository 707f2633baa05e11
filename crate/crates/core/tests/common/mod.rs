//! Independent oracles shared by the integration and acceptance suites.
#![allow(dead_code)]

use flowshop_core::metrics::{FrontPoint, ParetoFront};
use flowshop_core::{objectives, Instance, Permutation};

/// Discrete-event simulation of a permutation flowshop. An operation starts
/// only once the job has left its previous machine and the machine has
/// released the job ahead of it in the sequence. Returns `c[job][machine]`.
pub fn simulate(inst: &Instance, order: &[usize]) -> Vec<Vec<u64>> {
    let n = inst.n_jobs();
    let m = inst.n_machines();
    let mut finish = vec![vec![0u64; m]; n];
    let mut next_on_machine = vec![0usize; m]; // position in `order`
    let mut machine_free = vec![0u64; m];
    let mut job_stage = vec![0usize; n];
    let mut job_free = vec![0u64; n];
    let mut remaining = n * m;
    while remaining > 0 {
        // among machines whose next job is waiting for them, start the
        // operation with the earliest start time
        let mut best: Option<(u64, usize)> = None;
        for machine in 0..m {
            let pos = next_on_machine[machine];
            if pos == n {
                continue;
            }
            let job = order[pos];
            if job_stage[job] != machine {
                continue;
            }
            let start = machine_free[machine].max(job_free[job]);
            if best.is_none_or(|(s, _)| start < s) {
                best = Some((start, machine));
            }
        }
        let (start, machine) = best.expect("some operation is always ready");
        let job = order[next_on_machine[machine]];
        let end = start + u64::from(inst.processing_time(job, machine));
        finish[job][machine] = end;
        machine_free[machine] = end;
        job_free[job] = end;
        job_stage[job] += 1;
        next_on_machine[machine] += 1;
        remaining -= 1;
    }
    finish
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// The exact Pareto front by exhaustive enumeration.
pub fn true_front(inst: &Instance) -> ParetoFront {
    ParetoFront::from_points(all_permutations(inst.n_jobs()).into_iter().map(|order| {
        let permutation = Permutation::new(order).unwrap();
        FrontPoint {
            objectives: objectives(inst, &permutation).unwrap(),
            permutation,
        }
    }))
}

/// Hypervolume by inclusion–exclusion over every non-empty subset: the
/// intersection of boxes `[p, r]` is the box `[max p, r]`.
pub fn hv_inclusion_exclusion(points: &[[f64; 3]], r: [f64; 3]) -> f64 {
    let n = points.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut corner = [f64::NEG_INFINITY; 3];
        for (i, p) in points.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for o in 0..3 {
                    corner[o] = corner[o].max(p[o]);
                }
            }
        }
        let vol: f64 = (0..3).map(|o| (r[o] - corner[o]).max(0.0)).product();
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total
}

/// PMX traced as a sequence of swaps: start from `fill` and, for each
/// segment position, swap the value `keep[i]` into place.
pub fn pmx_swap_trace(keep: &[usize], fill: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let mut child = fill.to_vec();
    for (i, &wanted) in keep.iter().enumerate().take(hi).skip(lo) {
        let j = child.iter().position(|&v| v == wanted).unwrap();
        child.swap(i, j);
    }
    child
}

pub fn is_bijection(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.iter().enumerate().all(|(i, &x)| i == x)
}
