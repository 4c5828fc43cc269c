//! Exact counts attached to the zig-zag poset.
//!
//! All counts are arbitrary-precision integers ([`BigCount`]); expectations
//! are exact rationals. Tables are built bottom-up once and are immutable
//! afterwards, so they can be shared freely between threads.
//!
//! Indexing follows the usual conventions: `E_n` is the number of down-up
//! permutations of `{1..n}`, and the Entringer number `E_{n,k}` counts
//! down-up permutations of `{1..n+1}` that start with `k+1`, so that
//! `E_{n,n} = E_n`.

mod entringer;
mod extensions;
mod permutations;

pub use entringer::{entringer_closed_form, entringer_table, euler_numbers, BigCount, EntringerTable};
pub use extensions::{
    ez_table_entringer, ez_table_recursive, zigzag_spectrum_1, zigzag_spectrum_2,
    LinearExtensionTable,
};
pub use permutations::{
    expected_alternating_entry, for_each_alternating_permutation, generalized_entringer,
    generalized_entringer_tensor, GenEntringerTensor, PermutationKind, ENUMERATION_CUTOFF,
};

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Pascal's triangle on big integers, built once per computation.
pub(crate) struct Binomials {
    rows: Vec<Vec<BigUint>>,
    zero: BigUint,
}

impl Binomials {
    pub(crate) fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        Self {
            rows,
            zero: BigUint::zero(),
        }
    }

    /// `C(n, k)`, zero when `k > n`.
    pub(crate) fn get(&self, n: usize, k: usize) -> &BigUint {
        if k > n {
            &self.zero
        } else {
            &self.rows[n][k]
        }
    }
}
