//! Streaming moments, histograms and Kolmogorov–Smirnov distances.

use crate::{Error, Result};

/// Welford accumulator for mean and variance, mergeable across workers.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination; `self` then `other`.
    pub fn merge(&mut self, other: &Self) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero below two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Uniform-bin histogram on `[lo, hi]`. Values outside the range are
/// counted in the nearest end bin.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    lo: f64,
    hi: f64,
    bins: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo < hi) || bins == 0 {
            return Err(Error::OutOfDomain {
                name: "histogram range",
                value: hi - lo,
                domain: "lo < hi with at least one bin",
            });
        }
        Ok(Self {
            lo,
            hi,
            bins: vec![0; bins],
            total: 0,
        })
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let k = self.bins.len();
        let pos = (x - self.lo) / (self.hi - self.lo) * k as f64;
        let idx = if pos >= 0.0 { (pos as usize).min(k - 1) } else { 0 };
        self.bins[idx] += 1;
        self.total += 1;
    }

    /// Adds the counts of a histogram with identical binning.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.lo != other.lo || self.hi != other.hi || self.bins.len() != other.bins.len() {
            return Err(Error::LengthMismatch {
                expected: self.bins.len(),
                found: other.bins.len(),
            });
        }
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.total += other.total;
        Ok(())
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn bins(&self) -> &[u64] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Left edge of bin `k`; `edge(bins().len())` is `hi`.
    pub fn edge(&self, k: usize) -> f64 {
        if k == self.bins.len() {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * k as f64 / self.bins.len() as f64
        }
    }

    /// Bin-averaged density `count / (total · width)` at each bin.
    pub fn densities(&self) -> Vec<f64> {
        let width = (self.hi - self.lo) / self.bins.len() as f64;
        self.bins
            .iter()
            .map(|&c| c as f64 / (self.total.max(1) as f64 * width))
            .collect()
    }
}

/// Bounds on the KS distance `sup_t |F_emp(t) - F(t)|` from binned data,
/// for a continuous nondecreasing `cdf`. Returns `(lower, upper)`: the
/// lower bound is exact at the bin edges, the upper bound also allows every
/// bin's mass to sit at either end of the bin.
pub fn ks_histogram_bounds<F: Fn(f64) -> f64>(h: &Histogram, cdf: F) -> (f64, f64) {
    let n = h.total.max(1) as f64;
    let mut below = 0u64;
    let mut lower: f64 = 0.0;
    let mut upper: f64 = 0.0;
    let mut f_left = cdf(h.edge(0));
    for (k, &c) in h.bins.iter().enumerate() {
        let f_right = cdf(h.edge(k + 1));
        let emp_left = below as f64 / n;
        let emp_right = (below + c) as f64 / n;
        lower = lower.max((emp_left - f_left).abs()).max((emp_right - f_right).abs());
        upper = upper.max(emp_right - f_left).max(f_right - emp_left);
        below += c;
        f_left = f_right;
    }
    (lower, upper.max(lower))
}

/// One-sample KS distance against a continuous CDF; sorts `data`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(data: &mut [f64], cdf: F) -> f64 {
    data.sort_unstable_by(f64::total_cmp);
    let n = data.len() as f64;
    data.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample KS distance `sup_t |F_a(t) - F_b(t)|`; sorts both inputs.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
