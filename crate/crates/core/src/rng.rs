//! Seedable, splittable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the user seed. Worker `w` of
//! a parallel run reads ChaCha stream `w`, so a run is fully determined by
//! `(seed, worker_count)`; a single-threaded run is worker 0.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RngState {
    inner: ChaCha8Rng,
}

impl RngState {
    pub fn from_seed(seed: u64) -> Self {
        Self::for_worker(seed, 0)
    }

    pub fn for_worker(seed: u64, worker: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(worker);
        Self { inner }
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform on `[0, 2π)`.
    #[inline]
    pub fn uniform_angle(&mut self) -> f64 {
        let t = TAU * self.uniform();
        if t >= TAU {
            t - TAU
        } else {
            t
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.random::<u64>()
    }
}

/// Splits `count` items over `workers` contiguous chunks, returned as
/// `(offset, len)`; the first `count % workers` chunks get one extra item.
pub fn split_work(count: u64, workers: usize) -> Vec<(u64, u64)> {
    let workers = workers.max(1) as u64;
    let base = count / workers;
    let extra = count % workers;
    let mut offset = 0;
    (0..workers)
        .map(|w| {
            let len = base + u64::from(w < extra);
            let chunk = (offset, len);
            offset += len;
            chunk
        })
        .collect()
}
