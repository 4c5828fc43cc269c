//! Uniform sampling of the confined diagonal polytope
//! `P_n(1) = {d in [0,1]^{n-3} : d_i + d_{i+1} >= 1}`.
//!
//! The sampler runs a Markov chain whose kernel has density
//! `(π/2) sin(πy/2) / sin(πx/2)` on `y >= 1 - x`. The joint density of a run
//! then depends only on its endpoints through `h(d_last) / h(d_first)` with
//! `h(x) = sin(πx/2)`, and a mixture of the run and its reversal, accepted
//! with probability `2 / (α + 1/α)`, is exactly uniform on the polytope.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use crate::rng::RngState;
use crate::{Error, Result};

/// Smallest polygon with a nonempty diagonal vector.
pub const MIN_EDGES: usize = 4;

/// Largest `n` accepted by [`rejection_sample_oracle`]; the hit rate is
/// `E_{n-3} / (n-3)!`, which is about 2.4% at `n = 12`.
pub const ORACLE_MAX_EDGES: usize = 12;

/// A point of `P_n(1)`: the `n - 3` fan-diagonal lengths of a confined
/// polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalVector {
    n: usize,
    d: Vec<f64>,
}

impl DiagonalVector {
    /// Validates length and membership (exact, inclusive comparisons).
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        check_edges(n)?;
        if let Some(index) = first_violation(&d, n)? {
            return Err(Error::NotInPolytope { index });
        }
        Ok(Self { n, d })
    }

    /// Accepts coordinates measured from a polygon, snapping rounding-level
    /// violations (up to `tol`) back onto the polytope.
    pub fn from_measured(n: usize, mut d: Vec<f64>, tol: f64) -> Result<Self> {
        check_edges(n)?;
        if d.len() != n - 3 {
            return Err(Error::LengthMismatch {
                expected: n - 3,
                found: d.len(),
            });
        }
        for (i, x) in d.iter_mut().enumerate() {
            if !(*x >= -tol && *x <= 1.0 + tol) {
                return Err(Error::NotInPolytope { index: i + 1 });
            }
            *x = x.clamp(0.0, 1.0);
        }
        for i in 1..d.len() {
            if d[i - 1] + d[i] < 1.0 {
                if d[i - 1] + d[i] < 1.0 - tol {
                    return Err(Error::NotInPolytope { index: i });
                }
                d[i] = 1.0 - d[i - 1];
            }
        }
        Self::new(n, d)
    }

    pub(crate) fn from_sampler(n: usize, d: Vec<f64>) -> Self {
        debug_assert_eq!(d.len(), n - 3);
        Self { n, d }
    }

    /// Number of polygon edges.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.d
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.d
    }
}

/// Diagnostics from one call of the diagonal sampler.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerTrace {
    /// Main-loop iterations, including the accepted one.
    pub attempts: u32,
    /// `h(d_last) / h(d_first)` of the accepted run, before any reversal.
    pub alpha: f64,
    pub reversed: bool,
}

fn check_edges(n: usize) -> Result<()> {
    if n < MIN_EDGES {
        Err(Error::TooFewEdges { n, min: MIN_EDGES })
    } else {
        Ok(())
    }
}

fn first_violation(v: &[f64], n: usize) -> Result<Option<usize>> {
    check_edges(n)?;
    if v.len() != n - 3 {
        return Err(Error::LengthMismatch {
            expected: n - 3,
            found: v.len(),
        });
    }
    for (i, &x) in v.iter().enumerate() {
        if !(0.0..=1.0).contains(&x) {
            return Ok(Some(i + 1));
        }
    }
    for i in 1..v.len() {
        if v[i - 1] + v[i] < 1.0 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// `true` iff `v` lies in `P_n(1)`; boundary points are included.
pub fn membership(v: &[f64], n: usize) -> Result<bool> {
    Ok(first_violation(v, n)?.is_none())
}

/// Inverse of the kernel CDF: `1 - (2/π) asin(u sin(πx/2))`, which lies in
/// `[1 - x, 1]`.
pub fn conditional_inverse_cdf(x: f64, u: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::OutOfDomain {
            name: "x",
            value: x,
            domain: "(0, 1]",
        });
    }
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::OutOfDomain {
            name: "u",
            value: u,
            domain: "[0, 1]",
        });
    }
    Ok(kernel_step(x, (FRAC_PI_2 * x).sin(), u).0)
}

/// One chain step from `x` (with `s = sin(πx/2)`), returning the new state
/// and its `sin(πy/2) = cos(asin(us)) = sqrt(1 - (us)^2)`.
#[inline]
fn kernel_step(x: f64, s: f64, u: f64) -> (f64, f64) {
    let us = u * s;
    let y = (1.0 - FRAC_2_PI * us.asin()).clamp(1.0 - x, 1.0);
    (y, (1.0 - us * us).sqrt())
}

/// Draws a uniform point of `P_n(1)`.
pub fn sample_diagonals(n: usize, rng: &mut RngState) -> Result<(DiagonalVector, SamplerTrace)> {
    let mut buf = Vec::with_capacity(n.saturating_sub(3));
    let trace = sample_diagonals_into(n, rng, &mut buf)?;
    Ok((DiagonalVector::from_sampler(n, buf), trace))
}

/// Same as [`sample_diagonals`], writing into a reusable buffer.
pub fn sample_diagonals_into(n: usize, rng: &mut RngState, buf: &mut Vec<f64>) -> Result<SamplerTrace> {
    sample_diagonals_with(n, || rng.uniform(), buf)
}

/// The sampler driven by an arbitrary source of uniforms on `[0, 1)`.
pub fn sample_diagonals_with<F: FnMut() -> f64>(
    n: usize,
    mut uniform: F,
    buf: &mut Vec<f64>,
) -> Result<SamplerTrace> {
    check_edges(n)?;
    let m = n - 3;
    buf.clear();
    if m == 1 {
        // P_4(1) = [0, 1]: no pair constraints, nothing to reject.
        buf.push(uniform());
        return Ok(SamplerTrace {
            attempts: 1,
            alpha: 1.0,
            reversed: false,
        });
    }

    let mut attempts = 0u32;
    loop {
        attempts += 1;
        buf.clear();
        let first = uniform();
        let s_first = (FRAC_PI_2 * first).sin();
        buf.push(first);
        let (mut x, mut s) = (first, s_first);
        for _ in 1..m {
            let (y, sy) = kernel_step(x, s, uniform());
            buf.push(y);
            x = y;
            s = sy;
        }
        if s_first == 0.0 || s == 0.0 {
            // d_1 = 0 or d_{n-3} = 0: α is undefined, start over.
            continue;
        }
        let alpha = s / s_first;
        let w = 1.0 / (alpha + alpha.recip());
        let t = uniform();
        let reversed = t < w;
        if reversed {
            buf.reverse();
        }
        if t < 2.0 * w {
            return Ok(SamplerTrace {
                attempts,
                alpha,
                reversed,
            });
        }
    }
}

/// Independent ground truth: uniform proposals on the unit cube, retried
/// until one lands in `P_n(1)`. Only for `n <= ORACLE_MAX_EDGES`.
pub fn rejection_sample_oracle(n: usize, rng: &mut RngState) -> Result<DiagonalVector> {
    rejection_sample_oracle_counted(n, rng).map(|(v, _)| v)
}

/// [`rejection_sample_oracle`], also returning the number of proposals.
pub fn rejection_sample_oracle_counted(n: usize, rng: &mut RngState) -> Result<(DiagonalVector, u64)> {
    check_edges(n)?;
    if n > ORACLE_MAX_EDGES {
        return Err(Error::AboveCutoff {
            what: "oracle edge count",
            n,
            cutoff: ORACLE_MAX_EDGES,
        });
    }
    let mut v = vec![0.0; n - 3];
    let mut proposals = 0u64;
    loop {
        proposals += 1;
        v.iter_mut().for_each(|x| *x = rng.uniform());
        if v.windows(2).all(|w| w[0] + w[1] >= 1.0) {
            return Ok((DiagonalVector::from_sampler(n, v), proposals));
        }
    }
}

/// The involution `(x_1, x_2, x_3, ...) -> (x_1, 1 - x_2, x_3, 1 - x_4, ...)`.
pub fn order_map(v: &[f64]) -> Vec<f64> {
    v.iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x } else { 1.0 - x })
        .collect()
}

/// The involution `x -> 1 - x`, coordinatewise.
pub fn chain_map(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&x| 1.0 - x).collect()
}

/// Image in the zig-zag order polytope `x_1 >= x_2 <= x_3 >= ...`.
pub fn to_order_polytope(v: &DiagonalVector) -> Vec<f64> {
    order_map(&v.d)
}

/// Image in the zig-zag chain polytope `x_i + x_{i+1} <= 1`.
pub fn to_chain_polytope(v: &DiagonalVector) -> Vec<f64> {
    chain_map(&v.d)
}

pub fn in_order_polytope(x: &[f64]) -> bool {
    x.iter().all(|v| (0.0..=1.0).contains(v))
        && x.windows(2).enumerate().all(|(i, w)| {
            if i % 2 == 0 {
                w[0] >= w[1]
            } else {
                w[0] <= w[1]
            }
        })
}

pub fn in_chain_polytope(x: &[f64]) -> bool {
    x.iter().all(|v| (0.0..=1.0).contains(v)) && x.windows(2).all(|w| w[0] + w[1] <= 1.0)
}

/// A uniformly random down-up permutation of `{1..m}` (1-based values):
/// sample `P_{m+3}(1)`, map into the order polytope and rank the
/// coordinates. Ties (a null event) are broken by position.
pub fn sample_alternating_permutation(m: usize, rng: &mut RngState) -> Result<Vec<usize>> {
    if m == 0 {
        return Err(Error::IndexOutOfRange { index: 0, max: 0 });
    }
    let (d, _) = sample_diagonals(m + 3, rng)?;
    let x = to_order_polytope(&d);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let mut tau = vec![0; m];
    for (rank, &pos) in order.iter().enumerate() {
        tau[pos] = rank + 1;
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn inverse_cdf_examples() {
        assert!(conditional_inverse_cdf(1.0, 1.0).unwrap().abs() < 1e-15);
        assert_eq!(conditional_inverse_cdf(0.37, 0.0).unwrap(), 1.0);
        assert!((conditional_inverse_cdf(0.5, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(conditional_inverse_cdf(0.0, 0.5).is_err());
        assert!(conditional_inverse_cdf(0.5, 1.5).is_err());
        assert!(conditional_inverse_cdf(1.2, 0.5).is_err());
    }

    #[test]
    fn inverse_cdf_stays_in_support() {
        let mut rng = RngState::from_seed(3);
        for _ in 0..100_000 {
            let x = 1.0 - rng.uniform();
            let y = conditional_inverse_cdf(x, rng.uniform()).unwrap();
            assert!(y >= 1.0 - x && y <= 1.0);
            assert!(x + y >= 1.0);
        }
    }

    #[test]
    fn fixed_stream_transcribes_the_loop() {
        // n = 5: d_1 = 0.3, d_2 from u = 0.7, then t decides.
        let d2 = conditional_inverse_cdf(0.3, 0.7).unwrap();
        let alpha = (FRAC_PI_2 * d2).sin() / (FRAC_PI_2 * 0.3).sin();
        let w = 1.0 / (alpha + 1.0 / alpha);

        // t below w: accepted and reversed
        let mut stream = [0.3, 0.7, 0.5 * w].into_iter();
        let mut buf = Vec::new();
        let tr = sample_diagonals_with(5, || stream.next().unwrap(), &mut buf).unwrap();
        assert_eq!(tr.attempts, 1);
        assert!(tr.reversed);
        assert!((tr.alpha - alpha).abs() < 1e-15);
        assert!((buf[0] - d2).abs() < 1e-15 && buf[1] == 0.3);

        // w <= t < 2w: accepted as drawn
        let mut stream = [0.3, 0.7, 1.5 * w].into_iter();
        let tr = sample_diagonals_with(5, || stream.next().unwrap(), &mut buf).unwrap();
        assert!(!tr.reversed);
        assert_eq!(buf[0], 0.3);
        assert!((buf[1] - d2).abs() < 1e-15);

        // t >= 2w: rejected, second attempt accepted
        let mut stream = [0.3, 0.7, 0.999, 0.6, 0.2, 0.0].into_iter();
        let tr = sample_diagonals_with(5, || stream.next().unwrap(), &mut buf).unwrap();
        assert_eq!(tr.attempts, 2);
        assert!(tr.reversed);
    }

    #[test]
    fn zero_first_coordinate_is_resampled() {
        let mut stream = [0.0, 0.5, 0.5, 0.6, 0.2, 0.0].into_iter();
        let mut buf = Vec::new();
        let tr = sample_diagonals_with(5, || stream.next().unwrap(), &mut buf).unwrap();
        assert_eq!(tr.attempts, 2);
        assert!(buf.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn four_gon_is_uniform_draw() {
        let mut rng = RngState::from_seed(9);
        let (d, tr) = sample_diagonals(4, &mut rng).unwrap();
        assert_eq!(d.as_slice().len(), 1);
        assert_eq!(tr.attempts, 1);
        assert_eq!(tr.alpha, 1.0);
        assert!(sample_diagonals(3, &mut rng).is_err());
    }

    #[test]
    fn samples_are_members() {
        let mut rng = RngState::from_seed(11);
        let mut buf = Vec::new();
        for n in 4..40 {
            for _ in 0..2000 {
                sample_diagonals_into(n, &mut rng, &mut buf).unwrap();
                assert!(membership(&buf, n).unwrap(), "n={n} {buf:?}");
            }
        }
    }

    #[test]
    fn membership_examples() {
        assert!(membership(&[0.6, 0.6, 0.6], 6).unwrap());
        assert!(!membership(&[0.3, 0.3, 0.9], 6).unwrap());
        assert!(membership(&[1.0, 0.0, 1.0], 6).unwrap());
        assert!(!membership(&[1.0, -0.1, 1.0], 6).unwrap());
        assert!(membership(&[0.5, 0.5], 6).is_err());
        assert!(DiagonalVector::new(6, vec![0.3, 0.3, 0.9]).is_err());
    }

    #[test]
    fn measured_vectors_snap_onto_the_boundary() {
        let v = DiagonalVector::from_measured(6, vec![1.0 + 1e-14, 0.4, 0.6 - 1e-14], 1e-9).unwrap();
        assert_eq!(v.as_slice()[0], 1.0);
        assert!(membership(v.as_slice(), 6).unwrap());
        assert!(DiagonalVector::from_measured(6, vec![0.2, 0.2, 0.9], 1e-9).is_err());
    }

    #[test]
    fn polytope_maps() {
        let v = DiagonalVector::new(6, vec![0.6, 0.6, 0.6]).unwrap();
        let o = to_order_polytope(&v);
        assert!((o[1] - 0.4).abs() < 1e-15 && o[0] == 0.6 && o[2] == 0.6);
        assert!(in_order_polytope(&o));
        let c = to_chain_polytope(&v);
        assert!(c.iter().all(|&x| (x - 0.4).abs() < 1e-15));
        assert!(in_chain_polytope(&c));

        let v = DiagonalVector::new(5, vec![1.0, 0.0]).unwrap();
        assert_eq!(to_order_polytope(&v), vec![1.0, 1.0]);
        let v = DiagonalVector::new(6, vec![1.0, 0.0, 1.0]).unwrap();
        let c = to_chain_polytope(&v);
        assert_eq!(c, vec![0.0, 1.0, 0.0]);
        assert!(in_chain_polytope(&c));
    }

    #[test]
    fn maps_are_involutions_on_samples() {
        let mut rng = RngState::from_seed(5);
        for n in 4..20 {
            let (d, _) = sample_diagonals(n, &mut rng).unwrap();
            let o = to_order_polytope(&d);
            assert!(in_order_polytope(&o));
            assert_eq!(order_map(&o), d.as_slice());
            let c = to_chain_polytope(&d);
            assert!(in_chain_polytope(&c));
            assert_eq!(chain_map(&c), d.as_slice());
        }
    }

    #[test]
    fn oracle_cutoff_and_membership() {
        let mut rng = RngState::from_seed(2);
        assert!(rejection_sample_oracle(13, &mut rng).is_err());
        let (v, p) = rejection_sample_oracle_counted(4, &mut rng).unwrap();
        assert_eq!(p, 1);
        assert_eq!(v.n(), 4);
        for _ in 0..100 {
            let v = rejection_sample_oracle(9, &mut rng).unwrap();
            assert!(membership(v.as_slice(), 9).unwrap());
        }
    }

    #[test]
    fn alternating_permutations_are_uniform() {
        let mut rng = RngState::from_seed(17);
        assert_eq!(sample_alternating_permutation(1, &mut rng).unwrap(), vec![1]);
        let mut freq: HashMap<Vec<usize>, u32> = HashMap::new();
        let draws = 100_000;
        for _ in 0..draws {
            *freq.entry(sample_alternating_permutation(4, &mut rng).unwrap()).or_default() += 1;
        }
        let mut keys: Vec<_> = freq.keys().cloned().collect();
        keys.sort();
        let expect: Vec<Vec<usize>> = vec![
            vec![2, 1, 4, 3],
            vec![3, 1, 4, 2],
            vec![3, 2, 4, 1],
            vec![4, 1, 3, 2],
            vec![4, 2, 3, 1],
        ];
        assert_eq!(keys, expect);
        for (_, c) in freq {
            assert!((c as f64 / draws as f64 - 0.2).abs() < 0.01);
        }
    }
}
