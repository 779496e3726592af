//! Deterministic reductions.
//!
//! Every parallel map in the crate collects its terms in index order and then
//! folds them with [`pairwise_sum`], so results are bitwise identical no matter
//! how many worker threads ran the map.

use std::ops::Add;

use rayon::prelude::*;

const LEAF: usize = 32;
const CHUNK: usize = 1 << 12;

/// Pairwise (cascade) summation with a fixed tree shape.
pub fn pairwise_sum<T>(terms: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    if terms.len() <= LEAF {
        return terms.iter().fold(T::default(), |acc, &t| acc + t);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

/// Sums `term(i)` for `i in 0..len` in parallel without materializing all
/// terms. Chunk boundaries are fixed, so the result does not depend on the
/// thread count.
pub fn par_sum_indexed<T, F>(len: usize, term: F) -> T
where
    T: Copy + Default + Send + Add<Output = T>,
    F: Fn(usize) -> T + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partial: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let terms: Vec<T> = (lo..hi).map(&term).collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&partial)
}
