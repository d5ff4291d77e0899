use rayon::prelude::*;
use std::ops::Range;

/// Paths per work unit. Fixed so that the reduction order, and therefore every
/// floating-point sum, is independent of the number of threads.
pub(crate) const CHUNK: usize = 256;

/// Evaluates `work` on fixed-size index chunks in parallel and returns the
/// per-chunk results in index order.
pub(crate) fn chunked<R, F>(n: usize, work: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<usize>) -> R + Sync,
{
    let n_chunks = n.div_ceil(CHUNK);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| work(c * CHUNK..((c + 1) * CHUNK).min(n)))
        .collect()
}
