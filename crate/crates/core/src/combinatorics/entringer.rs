use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::Binomials;
use crate::{Error, Result};

/// Exact nonnegative count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn new(value: BigUint) -> Self {
        Self(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0.to_u64() == Some(*other)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

/// Euler (zig-zag) numbers `E_0..=E_max_n` from the convolution recurrence
/// `2 E_{n+1} = sum_k C(n,k) E_k E_{n-k}` (valid for `n >= 1`).
pub fn euler_numbers(max_n: usize) -> Vec<BigCount> {
    euler_raw(max_n).into_iter().map(BigCount).collect()
}

pub(crate) fn euler_raw(max_n: usize) -> Vec<BigUint> {
    let mut e: Vec<BigUint> = Vec::with_capacity(max_n + 1);
    e.push(BigUint::from(1u32));
    if max_n >= 1 {
        e.push(BigUint::from(1u32));
    }
    let binom = Binomials::new(max_n);
    for n in 1..max_n {
        let twice: BigUint = (0..=n)
            .map(|k| binom.get(n, k) * &e[k] * &e[n - k])
            .sum();
        debug_assert!(!twice.bit(0), "convolution sum must be even");
        e.push(twice >> 1);
    }
    e
}

/// Triangular table of Entringer numbers `E_{n,k}`, `0 <= k <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntringerTable {
    max_n: usize,
    rows: Vec<Vec<BigCount>>,
}

impl EntringerTable {
    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `E_{n,k}`; panics if `k > n` or `n > max_n`.
    pub fn get(&self, n: usize, k: usize) -> &BigCount {
        &self.rows[n][k]
    }

    pub fn row(&self, n: usize) -> &[BigCount] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<BigCount>] {
        &self.rows
    }

    /// `E_n`, read off the diagonal.
    pub fn euler(&self, n: usize) -> &BigCount {
        &self.rows[n][n]
    }

    pub(crate) fn raw(&self, n: usize, k: usize) -> &BigUint {
        &self.rows[n][k].0
    }
}

/// Builds the Entringer triangle from `E_{0,0} = 1`, `E_{n,0} = 0` and
/// `E_{n+1,k+1} = E_{n+1,k} + E_{n,n-k}`.
pub fn entringer_table(max_n: usize) -> EntringerTable {
    let mut rows: Vec<Vec<BigCount>> = Vec::with_capacity(max_n + 1);
    rows.push(vec![BigCount::from(1)]);
    for m in 1..=max_n {
        let prev = &rows[m - 1];
        let mut row: Vec<BigCount> = Vec::with_capacity(m + 1);
        row.push(BigCount::default());
        for k in 0..m {
            let next = &row[k].0 + &prev[m - 1 - k].0;
            row.push(BigCount(next));
        }
        rows.push(row);
    }
    EntringerTable { max_n, rows }
}

/// `E_{n,k}` from Entringer's alternating sum of Euler numbers,
/// `sum_{r=0}^{floor((k-1)/2)} (-1)^r C(k, 2r+1) E_{n-2r-1}`.
///
/// The sum is empty for `k = 0`; `E_{0,0} = 1` is returned directly. On the
/// diagonal `k = n` with `n` even the sum is off by one (it gives 2 for
/// `E_{2,2} = 1`), so there the diagonal identity `E_{n,n} = E_n` is used.
pub fn entringer_closed_form(n: usize, k: usize) -> Result<BigCount> {
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    if n == 0 {
        return Ok(BigCount::from(1));
    }
    if k == n && n % 2 == 0 {
        return Ok(BigCount(euler_raw(n).pop().expect("E_0..=E_n")));
    }
    Ok(BigCount(
        alternating_sum(n, k)
            .to_biguint()
            .expect("Entringer numbers are nonnegative"),
    ))
}

fn alternating_sum(n: usize, k: usize) -> BigInt {
    let euler = euler_raw(n);
    let binom = Binomials::new(k);
    let mut acc = BigInt::zero();
    let mut r = 0;
    while 2 * r < k {
        let term = BigInt::from_biguint(Sign::Plus, binom.get(k, 2 * r + 1) * &euler[n - 2 * r - 1]);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        r += 1;
    }
    acc
}
