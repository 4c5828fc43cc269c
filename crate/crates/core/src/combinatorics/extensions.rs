//! Linear extensions of the augmented zig-zag posets `Z_{n,i}`: the zig-zag
//! poset on `{1..n}` with an extra element `0` placed below `i`.
//!
//! Two independent routes produce the same table: a splitting formula over
//! Entringer numbers ([`ez_table_entringer`]) and a principal-number
//! recurrence ([`ez_table_recursive`]).

use num_bigint::BigUint;
use num_traits::Zero;

use super::entringer::{entringer_table, euler_raw, BigCount};
use super::Binomials;
use crate::{Error, Result};

/// `e(Z_{n,i})` for `1 <= i <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearExtensionTable {
    max_n: usize,
    // rows[n - 1][i - 1] = e(Z_{n,i})
    rows: Vec<Vec<BigCount>>,
}

impl LinearExtensionTable {
    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `e(Z_{n,i})`, or `None` outside `1 <= i <= n <= max_n`.
    pub fn get(&self, n: usize, i: usize) -> Option<&BigCount> {
        if n == 0 || i == 0 || i > n || n > self.max_n {
            return None;
        }
        Some(&self.rows[n - 1][i - 1])
    }

    /// Row `n` as `[e(Z_{n,1}), ..., e(Z_{n,n})]`.
    pub fn row(&self, n: usize) -> &[BigCount] {
        &self.rows[n - 1]
    }

    /// Iterates `(n, i, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigCount)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r + 1, c + 1, v)))
    }
}

/// Linear-extension counts from the splitting formula: `Z_{n,i}` is cut
/// into the chain `{1..i-1}` (a reversed zig-zag, whose end spectrum is an
/// Entringer row) and `{0, i..n}` (a zig-zag whose 2-spectrum is
/// `(r-1) E_{n-i, r-2}`), and the spectra are recombined.
///
/// The split needs a nonempty left part, so `i = 1` is filled from
/// `e(Z_{n,1}) = E_{n+1}`.
pub fn ez_table_entringer(max_n: usize) -> LinearExtensionTable {
    let max_n = max_n.max(1);
    let ent = entringer_table(max_n);
    let euler = euler_raw(max_n + 1);
    let binom = Binomials::new(max_n + 1);

    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let mut row = Vec::with_capacity(n);
        row.push(BigCount::new(euler[n + 1].clone()));
        for i in 2..=n {
            let p = i - 1;
            let q = n - i + 2;
            // tail[m] = sum_{k=m}^{q} (k-1) E_{n-i,k-2}, with tail[q+1] = 0
            let mut tail = vec![BigUint::zero(); q + 2];
            for k in (2..=q).rev() {
                tail[k] = &tail[k + 1] + ent.raw(n - i, k - 2) * BigUint::from(k - 1);
            }
            tail[1] = tail[2].clone();

            let mut total = BigUint::zero();
            for r in 1..=n + 1 {
                let j_lo = if r > q { r - q } else { 1 };
                let j_hi = p.min(r);
                for j in j_lo..=j_hi {
                    let t = &tail[r - j + 1];
                    if t.is_zero() {
                        continue;
                    }
                    let lambda = ent.raw(i - 2, i - 1 - j);
                    total += lambda * binom.get(r - 1, j - 1) * binom.get(n + 1 - r, i - 1 - j) * t;
                }
            }
            row.push(BigCount::new(total));
        }
        rows.push(row);
    }
    LinearExtensionTable { max_n, rows }
}

/// Linear-extension counts from the principal-number recurrence
///
/// ```text
/// 2 e(Z_{n,i}) = E_n + e(Z_{n-1,i-1})
///              + sum_{j=2}^{i-1} C(n, j-1) E_{j-1} e(Z_{n-j,i-j})
///              + sum_{l=i-1}^{n} C(n, l) e(Z_{l-1,i}) E_{n-l}
/// ```
///
/// for `1 < i <= n`, where the last sum uses the boundary assignments
/// `e(Z_{i-1,i}) = i E_{i-1}` and `e(Z_{i-2,i}) = 0`. No other `m < i`
/// value is ever looked up.
pub fn ez_table_recursive(max_n: usize) -> LinearExtensionTable {
    let max_n = max_n.max(1);
    let euler = euler_raw(max_n + 1);
    let binom = Binomials::new(max_n);
    let zero = BigUint::zero();

    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let mut row = Vec::with_capacity(n);
        row.push(euler[n + 1].clone());
        for i in 2..=n {
            let boundary = BigUint::from(i) * &euler[i - 1];
            let lookup = |m: usize, i: usize| -> &BigUint {
                assert!(m + 2 >= i, "e(Z_{{{m},{i}}}) is not defined for m < i - 2");
                if m + 2 == i {
                    &zero
                } else if m + 1 == i {
                    &boundary
                } else {
                    &rows[m - 1][i - 1]
                }
            };

            let mut acc = euler[n].clone();
            acc += lookup(n - 1, i - 1);
            for j in 2..i {
                acc += binom.get(n, j - 1) * &euler[j - 1] * lookup(n - j, i - j);
            }
            for l in (i - 1)..=n {
                let v = lookup(l - 1, i);
                if !v.is_zero() {
                    acc += binom.get(n, l) * v * &euler[n - l];
                }
            }
            debug_assert!(!acc.bit(0), "recurrence sum must be even");
            row.push(acc >> 1);
        }
        rows.push(row);
    }
    LinearExtensionTable {
        max_n,
        rows: rows
            .into_iter()
            .map(|r| r.into_iter().map(BigCount::new).collect())
            .collect(),
    }
}

/// The 1-spectrum of the zig-zag poset `Z_{m+1}`: entry `r` (1-based)
/// counts linear extensions with the first element at rank `r`, and equals
/// `E_{m, m+1-r}`.
pub fn zigzag_spectrum_1(m: usize) -> Vec<BigCount> {
    let ent = entringer_table(m);
    (1..=m + 1).map(|r| ent.get(m, m + 1 - r).clone()).collect()
}

/// The 2-spectrum of `Z_{m+1}`: entry `r` is `(r-1) E_{m-1, r-2}`.
pub fn zigzag_spectrum_2(m: usize) -> Result<Vec<BigCount>> {
    if m == 0 {
        return Err(Error::IndexOutOfRange { index: 0, max: 0 });
    }
    let ent = entringer_table(m - 1);
    let mut out = Vec::with_capacity(m + 1);
    out.push(BigCount::default());
    for r in 2..=m + 1 {
        out.push(BigCount::new(ent.raw(m - 1, r - 2) * BigUint::from(r - 1)));
    }
    Ok(out)
}
