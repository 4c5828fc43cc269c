//! Brute-force enumeration of (reverse-)alternating permutations. These are
//! the oracle side of several identities and are capped at
//! [`ENUMERATION_CUTOFF`] letters.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::entringer::{euler_raw, BigCount};
use super::extensions::ez_table_recursive;
use crate::{Error, Result};

/// Largest permutation length the enumerators accept (`E_12 = 2702765`
/// leaves).
pub const ENUMERATION_CUTOFF: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PermutationKind {
    /// Down-up: `t(1) > t(2) < t(3) > ...`.
    Alternating,
    /// Up-down: `t(1) < t(2) > t(3) < ...`.
    ReverseAlternating,
}

impl PermutationKind {
    /// The pattern used for the generalized Entringer number at position `i`
    /// (1-based): alternating for odd `i`, reverse-alternating for even `i`.
    pub fn for_position(i: usize) -> Self {
        if i % 2 == 1 {
            Self::Alternating
        } else {
            Self::ReverseAlternating
        }
    }
}

/// Calls `visit` with every permutation of `{1..m}` of the given kind, in
/// lexicographic order. Values are 1-based.
pub fn for_each_alternating_permutation<F: FnMut(&[u8])>(
    m: usize,
    kind: PermutationKind,
    mut visit: F,
) -> Result<()> {
    if m > ENUMERATION_CUTOFF {
        return Err(Error::AboveCutoff {
            what: "permutation length",
            n: m,
            cutoff: ENUMERATION_CUTOFF,
        });
    }
    let mut perm = vec![0u8; m];
    extend(&mut perm, 0, 0, kind, &mut visit);
    Ok(())
}

fn extend<F: FnMut(&[u8])>(perm: &mut [u8], pos: usize, used: u32, kind: PermutationKind, visit: &mut F) {
    let m = perm.len();
    if pos == m {
        visit(perm);
        return;
    }
    for v in 1..=m as u8 {
        if used & (1 << v) != 0 {
            continue;
        }
        if pos > 0 {
            let prev = perm[pos - 1];
            // step pos-1 -> pos descends when pos-1 is even (0-based) for down-up
            let descend = ((pos - 1) % 2 == 0) == (kind == PermutationKind::Alternating);
            if descend && v >= prev {
                break;
            }
            if !descend && v <= prev {
                continue;
            }
        }
        perm[pos] = v;
        extend(perm, pos + 1, used | (1 << v), kind, visit);
    }
}

/// Generalized Entringer numbers `E^{(i)}_{n,k}` for one `n`, all `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenEntringerTensor {
    n: usize,
    // counts[k][i - 1]
    counts: Vec<Vec<BigCount>>,
}

impl GenEntringerTensor {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `E^{(i)}_{n,k}` for `0 <= k <= n`, `1 <= i <= n+1`.
    pub fn get(&self, k: usize, i: usize) -> &BigCount {
        &self.counts[k][i - 1]
    }

    /// Column `i`: `[E^{(i)}_{n,0}, ..., E^{(i)}_{n,n}]`.
    pub fn column(&self, i: usize) -> Vec<BigCount> {
        self.counts.iter().map(|row| row[i - 1].clone()).collect()
    }
}

/// Counts, for each position `i` and value `k+1`, the permutations of
/// `{1..n+1}` with `t(i) = k+1` that are alternating (odd `i`) or
/// reverse-alternating (even `i`).
pub fn generalized_entringer_tensor(n: usize) -> Result<GenEntringerTensor> {
    let m = n + 1;
    let mut raw = vec![vec![0u64; m]; m];
    for kind in [PermutationKind::Alternating, PermutationKind::ReverseAlternating] {
        for_each_alternating_permutation(m, kind, |p| {
            for (pos, &v) in p.iter().enumerate() {
                if PermutationKind::for_position(pos + 1) == kind {
                    raw[v as usize - 1][pos] += 1;
                }
            }
        })?;
    }
    Ok(GenEntringerTensor {
        n,
        counts: raw
            .into_iter()
            .map(|row| row.into_iter().map(BigCount::from).collect())
            .collect(),
    })
}

/// Column `i` of [`generalized_entringer_tensor`].
pub fn generalized_entringer(n: usize, i: usize) -> Result<Vec<BigCount>> {
    if i == 0 || i > n + 1 {
        return Err(Error::IndexOutOfRange { index: i, max: n + 1 });
    }
    Ok(generalized_entringer_tensor(n)?.column(i))
}

/// Exact mean of `t(i)` over the down-up (or up-down) permutations of
/// `{1..n}`: `e(Z_{n,i}) / E_n` when the pattern at `i` matches the
/// parity convention of `Z_{n,i}`, and `n + 1` minus that otherwise.
pub fn expected_alternating_entry(n: usize, i: usize, kind: PermutationKind) -> Result<BigRational> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let ez = ez_table_recursive(n);
    let euler = euler_raw(n);
    let ratio = BigRational::new(
        BigInt::from(ez.get(n, i).expect("1 <= i <= n").value().clone()),
        BigInt::from(euler[n].clone()),
    );
    if kind == PermutationKind::for_position(i) {
        Ok(ratio)
    } else {
        Ok(BigRational::from_integer(BigInt::from(BigUint::from(n + 1))) - ratio)
    }
}
