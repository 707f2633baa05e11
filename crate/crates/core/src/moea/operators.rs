use rand::seq::SliceRandom;
use rand::Rng;

use super::{Individual, Population};
use crate::error::{Error, Result};
use crate::schedule::Permutation;

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Permutation::from_vec_unchecked(order)
}

/// `capacity` independent uniform permutations, not yet evaluated.
pub fn init_population<R: Rng + ?Sized>(capacity: usize, n_jobs: usize, rng: &mut R) -> Population {
    Population {
        members: (0..capacity)
            .map(|_| Individual::new(random_permutation(n_jobs, rng)))
            .collect(),
        capacity,
    }
}

/// Partially mapped crossover with both cut points drawn uniformly, giving
/// a segment `[lo, hi)` with `0 <= lo < hi <= n`.
pub fn pmx_crossover<R: Rng + ?Sized>(
    a: &Permutation,
    b: &Permutation,
    rng: &mut R,
) -> Result<(Permutation, Permutation)> {
    let n = a.len();
    if n != b.len() {
        return Err(Error::Dimension(format!(
            "crossover parents of lengths {n} and {}",
            b.len()
        )));
    }
    if n < 2 {
        return Ok((a.clone(), b.clone()));
    }
    let x = rng.gen_range(0..=n);
    let mut y = rng.gen_range(0..n);
    if y >= x {
        y += 1;
    }
    Ok(pmx_with_cuts(a, b, x.min(y), x.max(y)))
}

/// PMX with fixed cuts. Child one keeps `a[lo..hi)` and fills the rest from
/// `b`, resolving conflicts through the segment mapping `a[k] -> b[k]`;
/// child two is the mirror image.
pub fn pmx_with_cuts(
    a: &Permutation,
    b: &Permutation,
    lo: usize,
    hi: usize,
) -> (Permutation, Permutation) {
    assert!(lo <= hi && hi <= a.len() && a.len() == b.len());
    (
        pmx_child(a.as_slice(), b.as_slice(), lo, hi),
        pmx_child(b.as_slice(), a.as_slice(), lo, hi),
    )
}

fn pmx_child(keep: &[usize], fill: &[usize], lo: usize, hi: usize) -> Permutation {
    let n = keep.len();
    // slot[v] = position of value v inside the kept segment
    let mut slot = vec![usize::MAX; n];
    for k in lo..hi {
        slot[keep[k]] = k;
    }
    let mut child = Vec::with_capacity(n);
    for i in 0..n {
        if (lo..hi).contains(&i) {
            child.push(keep[i]);
            continue;
        }
        let mut v = fill[i];
        while slot[v] != usize::MAX {
            v = fill[slot[v]];
        }
        child.push(v);
    }
    Permutation::from_vec_unchecked(child)
}

/// Exchanges two distinct uniformly chosen positions.
pub fn swap_mutation<R: Rng + ?Sized>(p: &Permutation, rng: &mut R) -> Result<Permutation> {
    let n = p.len();
    if n < 2 {
        return Err(Error::Config(format!("swap mutation needs n >= 2, got {n}")));
    }
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    Ok(swap_positions(p, i, j))
}

pub fn swap_positions(p: &Permutation, i: usize, j: usize) -> Permutation {
    let mut out = p.clone();
    out.as_mut_slice().swap(i, j);
    out
}
