//! Das–Dennis simplex-lattice directions for three objectives.

use crate::schedule::N_OBJECTIVES;

pub type Direction = [f64; N_OBJECTIVES];

/// Number of lattice points with `divisions` steps: `C(divisions + 2, 2)`.
pub fn lattice_size(divisions: usize) -> usize {
    (divisions + 2) * (divisions + 1) / 2
}

/// All points `(i, j, k) / divisions` with `i + j + k = divisions`, in
/// lexicographic order of `(i, j)`.
pub fn das_dennis(divisions: usize) -> Vec<Direction> {
    if divisions == 0 {
        return vec![[1.0 / 3.0; 3]];
    }
    let h = divisions as f64;
    let mut out = Vec::with_capacity(lattice_size(divisions));
    for i in 0..=divisions {
        for j in 0..=divisions - i {
            let k = divisions - i - j;
            out.push([i as f64 / h, j as f64 / h, k as f64 / h]);
        }
    }
    out
}

/// Largest division count whose lattice does not exceed `population`.
pub fn divisions_within(population: usize) -> usize {
    let mut h = 0;
    while lattice_size(h + 1) <= population {
        h += 1;
    }
    h
}

/// Exactly `count` well-spread weight vectors. Takes the smallest lattice
/// holding at least `count` points and, when it is larger, keeps a greedy
/// farthest-point subset seeded with the three unit vectors.
pub fn weight_vectors(count: usize) -> Vec<Direction> {
    let mut h = 1;
    while lattice_size(h) < count {
        h += 1;
    }
    let lattice = das_dennis(h);
    if lattice.len() == count {
        return lattice;
    }
    let dist = |a: &Direction, b: &Direction| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>()
    };
    let mut chosen: Vec<usize> = lattice
        .iter()
        .enumerate()
        .filter(|(_, w)| w.contains(&1.0))
        .map(|(i, _)| i)
        .collect();
    chosen.truncate(count);
    let mut nearest: Vec<f64> = lattice
        .iter()
        .map(|w| {
            chosen
                .iter()
                .map(|&c| dist(w, &lattice[c]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    while chosen.len() < count {
        let mut best = usize::MAX;
        for i in 0..lattice.len() {
            if nearest[i] > 0.0 && (best == usize::MAX || nearest[i] > nearest[best]) {
                best = i;
            }
        }
        chosen.push(best);
        for (i, w) in lattice.iter().enumerate() {
            nearest[i] = nearest[i].min(dist(w, &lattice[best]));
        }
    }
    chosen.sort_unstable();
    chosen.into_iter().map(|i| lattice[i]).collect()
}
