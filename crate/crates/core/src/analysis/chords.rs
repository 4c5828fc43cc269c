//! Chord (fan-diagonal) length expectations: exact values at finite `n`,
//! their large-`n` limits, and the limiting marginal density.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::combinatorics::{euler_numbers, ez_table_entringer};
use crate::polytope::MIN_EDGES;
use crate::{Error, Result};

/// Mean of the limiting density, `1/2 + 2/π²`.
pub const LIMITING_CHORD_MEAN: f64 = 0.5 + 2.0 / (PI * PI);

/// `E[d_i] = e(Z_{n-3,i}) / ((n-2) E_{n-3})` for `1 <= i <= n-3`.
pub fn expected_chord_length(n: usize, i: usize) -> Result<BigRational> {
    let all = expected_chord_lengths(n)?;
    if i == 0 || i > all.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: all.len(),
        });
    }
    Ok(all[i - 1].clone())
}

/// `E[d_1], ..., E[d_{n-3}]` as exact rationals.
pub fn expected_chord_lengths(n: usize) -> Result<Vec<BigRational>> {
    if n < MIN_EDGES {
        return Err(Error::TooFewEdges { n, min: MIN_EDGES });
    }
    let m = n - 3;
    let table = ez_table_entringer(m);
    let euler = euler_numbers(m);
    let denom = BigInt::from(n - 2) * BigInt::from(euler[m].value().clone());
    Ok(table
        .row(m)
        .iter()
        .map(|e| BigRational::new(BigInt::from(e.value().clone()), denom.clone()))
        .collect())
}

/// Large-`n` limit of `E[d_k]`: `2/π` for `k = 1`, otherwise
/// `Σ_{l=1}^{k-2} (-1)^{l+1} l E_{k-l} π^{k-l-1} / (2^{k-l-1} (k-l)!)
///  + (-1)^k (2⌊k/2⌋ - 2k/π)`.
pub fn asymptotic_chord_expectation(k: usize) -> Result<f64> {
    match k {
        0 => Err(Error::IndexOutOfRange { index: 0, max: usize::MAX }),
        1 => Ok(2.0 / PI),
        _ => {
            let euler = euler_numbers(k);
            let mut sum = 0.0;
            for l in 1..=k - 2 {
                let j = k - l;
                let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
                let factorial: f64 = (1..=j).map(|x| x as f64).product();
                let term = l as f64 * euler[j].to_f64() * PI.powi(j as i32 - 1)
                    / (2f64.powi(j as i32 - 1) * factorial);
                sum += sign * term;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sum + sign * (2.0 * (k / 2) as f64 - 2.0 * k as f64 / PI))
        }
    }
}

/// `f(t) = 1 - cos(πt)` on `[0, 1]`, zero outside.
pub fn limiting_chord_density(t: f64) -> f64 {
    if (0.0..=1.0).contains(&t) {
        1.0 - (PI * t).cos()
    } else {
        0.0
    }
}

/// `F(t) = t - sin(πt)/π`, clamped to `[0, 1]` outside the unit interval.
pub fn limiting_chord_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t - (PI * t).sin() / PI
    }
}
