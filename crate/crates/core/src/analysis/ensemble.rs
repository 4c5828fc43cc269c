//! Monte Carlo aggregates over sampled polygons.
//!
//! Parallel runs split the sample count into contiguous chunks with
//! [`split_work`]; worker `w` draws from stream `w` of the seed and the
//! partial results are merged in worker order, so the output depends only on
//! `(seed, threads)`.

use serde::Serialize;

use super::stats::RunningStats;
use super::turning::turning_angles_direct_into;
use crate::geometry::PolygonSampler;
use crate::polytope::{sample_diagonals_into, MIN_EDGES};
use crate::rng::{split_work, RngState};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub n: usize,
    pub count: u64,
    /// Grand mean of all `n · count` turning angles (radians).
    pub mean_turning_angle: f64,
    /// Standard error from the per-polygon mean angles.
    pub se_turning_angle: f64,
    pub mean_total_curvature: f64,
    /// `E[d_i]` estimates, `i = 1..n-3`.
    pub chord_means: Vec<f64>,
    pub chord_se: Vec<f64>,
    /// Fraction of sampler main-loop iterations that were rejected.
    pub rejection_rate: f64,
    pub mean_attempts: f64,
}

/// Diagonal-only aggregates; no polygon is reconstructed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalStats {
    pub n: usize,
    pub count: u64,
    pub attempts: u64,
    pub chord_means: Vec<f64>,
    pub chord_se: Vec<f64>,
    pub rejection_rate: f64,
    pub mean_attempts: f64,
}

#[derive(Clone, Debug)]
struct Partial {
    angle: RunningStats,
    chords: Vec<RunningStats>,
    attempts: u64,
}

impl Partial {
    fn new(n: usize) -> Self {
        Self {
            angle: RunningStats::new(),
            chords: vec![RunningStats::new(); n - 3],
            attempts: 0,
        }
    }

    fn merge(&mut self, other: &Self) {
        self.angle.merge(&other.angle);
        for (a, b) in self.chords.iter_mut().zip(&other.chords) {
            a.merge(b);
        }
        self.attempts += other.attempts;
    }

    fn count(&self) -> u64 {
        self.chords.first().map_or(0, |c| c.count())
    }

    fn rates(&self) -> (f64, f64) {
        let count = self.count() as f64;
        let attempts = self.attempts as f64;
        ((attempts - count) / attempts, attempts / count)
    }
}

fn check(n: usize, count: u64) -> Result<()> {
    if n < MIN_EDGES {
        return Err(Error::TooFewEdges { n, min: MIN_EDGES });
    }
    if count == 0 {
        return Err(Error::OutOfDomain {
            name: "count",
            value: 0.0,
            domain: "[1, ∞)",
        });
    }
    Ok(())
}

fn polygon_partial(n: usize, count: u64, rng: &mut RngState) -> Result<Partial> {
    let mut acc = Partial::new(n);
    let mut sampler = PolygonSampler::new();
    let mut phi = Vec::with_capacity(n);
    for _ in 0..count {
        acc.attempts += u64::from(sampler.sample(n, rng)?.attempts);
        turning_angles_direct_into(sampler.vertices(), &mut phi);
        acc.angle.push(phi.iter().sum::<f64>() / n as f64);
        for (s, &d) in acc.chords.iter_mut().zip(sampler.diagonals()) {
            s.push(d);
        }
    }
    Ok(acc)
}

fn diagonal_partial(n: usize, count: u64, rng: &mut RngState) -> Result<Partial> {
    let mut acc = Partial::new(n);
    let mut buf = Vec::with_capacity(n - 3);
    for _ in 0..count {
        acc.attempts += u64::from(sample_diagonals_into(n, rng, &mut buf)?.attempts);
        for (s, &d) in acc.chords.iter_mut().zip(&buf) {
            s.push(d);
        }
    }
    Ok(acc)
}

fn run_workers<F>(n: usize, count: u64, seed: u64, threads: usize, work: F) -> Result<Partial>
where
    F: Fn(usize, u64, &mut RngState) -> Result<Partial> + Sync,
{
    let chunks = split_work(count, threads);
    let partials: Vec<Result<Partial>> = if chunks.len() == 1 {
        vec![work(n, count, &mut RngState::from_seed(seed))]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .enumerate()
                .map(|(w, &(_, len))| {
                    let work = &work;
                    scope.spawn(move || work(n, len, &mut RngState::for_worker(seed, w as u64)))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker thread panicked"))
                .collect()
        })
    };
    let mut total = Partial::new(n);
    for p in partials {
        total.merge(&p?);
    }
    Ok(total)
}

fn finish_ensemble(n: usize, acc: Partial) -> EnsembleStats {
    let (rejection_rate, mean_attempts) = acc.rates();
    let mean = acc.angle.mean();
    EnsembleStats {
        n,
        count: acc.angle.count(),
        mean_turning_angle: mean,
        se_turning_angle: acc.angle.std_error(),
        mean_total_curvature: n as f64 * mean,
        chord_means: acc.chords.iter().map(RunningStats::mean).collect(),
        chord_se: acc.chords.iter().map(RunningStats::std_error).collect(),
        rejection_rate,
        mean_attempts,
    }
}

fn finish_diagonals(n: usize, acc: Partial) -> DiagonalStats {
    let (rejection_rate, mean_attempts) = acc.rates();
    DiagonalStats {
        n,
        count: acc.count(),
        attempts: acc.attempts,
        chord_means: acc.chords.iter().map(RunningStats::mean).collect(),
        chord_se: acc.chords.iter().map(RunningStats::std_error).collect(),
        rejection_rate,
        mean_attempts,
    }
}

/// Samples `count` polygons from `rng` and aggregates turning angles,
/// chord lengths and sampler effort.
pub fn ensemble_stats(n: usize, count: u64, rng: &mut RngState) -> Result<EnsembleStats> {
    check(n, count)?;
    Ok(finish_ensemble(n, polygon_partial(n, count, rng)?))
}

/// [`ensemble_stats`] over `threads` workers. With one thread this equals
/// `ensemble_stats(n, count, &mut RngState::from_seed(seed))`.
pub fn ensemble_stats_parallel(n: usize, count: u64, seed: u64, threads: usize) -> Result<EnsembleStats> {
    check(n, count)?;
    Ok(finish_ensemble(n, run_workers(n, count, seed, threads, polygon_partial)?))
}

pub fn diagonal_stats(n: usize, count: u64, rng: &mut RngState) -> Result<DiagonalStats> {
    check(n, count)?;
    Ok(finish_diagonals(n, diagonal_partial(n, count, rng)?))
}

pub fn diagonal_stats_parallel(n: usize, count: u64, seed: u64, threads: usize) -> Result<DiagonalStats> {
    check(n, count)?;
    Ok(finish_diagonals(n, run_workers(n, count, seed, threads, diagonal_partial)?))
}
