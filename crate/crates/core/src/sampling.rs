//! Seeded Monte Carlo with results independent of the thread count.

use std::ops::Add;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::sum::pairwise_sum;

/// Samples handled by one RNG stream.
pub const SAMPLE_CHUNK: usize = 1 << 14;

/// Running count, sum and sum of squares of a sampled quantity.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    /// Standard error of the mean (population variance over `count`).
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return f64::INFINITY;
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = (self.sum_sq / n - mean * mean).max(0.0);
        (var / n).sqrt()
    }
}

impl Add for Moments {
    type Output = Moments;
    fn add(self, o: Moments) -> Moments {
        Moments {
            count: self.count + o.count,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }
}

/// Runs `body(rng, k)` on fixed chunks of `n` samples, chunk `c` drawing from
/// stream `c` of a ChaCha8 generator seeded with `seed`.
pub fn sample_chunks<F>(n: usize, seed: u64, body: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng, usize) -> Moments + Sync,
{
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let k = SAMPLE_CHUNK.min(n - c * SAMPLE_CHUNK);
            body(&mut rng, k)
        })
        .collect();
    pairwise_sum(&parts)
}
