use rand::Rng;

use crate::error::{Error, Result};

/// Binary tournament with replacement over `0..len`. `prefer(a, b)` says
/// whether candidate `a` beats `b`; on a tie the first pick wins. Returns
/// the winning index.
pub fn binary_tournament<R, F>(len: usize, mut prefer: F, rng: &mut R) -> Result<usize>
where
    R: Rng + ?Sized,
    F: FnMut(usize, usize) -> bool,
{
    if len == 0 {
        return Err(Error::Empty("tournament over an empty population"));
    }
    let first = rng.gen_range(0..len);
    let second = rng.gen_range(0..len);
    Ok(if prefer(second, first) { second } else { first })
}
