//! The asymptotic expected turning angle
//!
//! `E_∞[φ] = (π/8) ∫_0^{2π} ∫ φ(a, b, c, θ) (1 - cos πa) sin(πc/2) / sin(πa/2)`
//!
//! over `a ∈ [0,1]`, `b ∈ [1-a, 1]`, `c ∈ [1-b, 1]`. With
//! `1 - cos πa = 2 sin²(πa/2)` and `φ` even in `θ` this is
//! `(π/2) ∫_0^π ∫ φ sin(πa/2) sin(πc/2)`, evaluated two independent ways:
//! tensor Gauss–Legendre after the substitutions `b = 1 - a + a s²`,
//! `c = 1 - b + b t²` (which remove the square-root edges of `φ`), and
//! randomly shifted Kronecker quasi-Monte Carlo on the plain linear map.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::rng::RngState;
use crate::{Error, Result};

/// Nodes per axis tried in turn by [`asymptotic_turning_angle`].
pub const GL_LADDER: [usize; 8] = [8, 12, 16, 24, 32, 48, 64, 96];

/// `n`-point Gauss–Legendre rule on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// The parts of `cos φ` that do not depend on `θ`: `cos φ = k + l cos θ`.
#[inline]
fn phi_coefficients(a: f64, b: f64, c: f64) -> (f64, f64) {
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let h1 = ((a + b + 1.0) * (-a + b + 1.0) * (a - b + 1.0) * (a + b - 1.0)).max(0.0);
    let h2 = ((b + c + 1.0) * (-b + c + 1.0) * (b - c + 1.0) * (b + c - 1.0)).max(0.0);
    let inv = 1.0 / (4.0 * b2);
    let k = (a2 + c2) / 2.0 - 1.0 - (a2 + b2 - 1.0) * (b2 + c2 - 1.0) * inv;
    (k, (h1 * h2).sqrt() * inv)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    /// Change from the previous rung of the ladder.
    pub last_change: f64,
    pub nodes: usize,
}

/// Tensor Gauss–Legendre with `nodes` points per axis.
pub fn turning_angle_integral_gl(nodes: usize) -> f64 {
    let (x, w) = gauss_legendre(nodes);
    // map to [0, 1]
    let u: Vec<f64> = x.iter().map(|x| 0.5 * (x + 1.0)).collect();
    let wu: Vec<f64> = w.iter().map(|w| 0.5 * w).collect();
    let cos_theta: Vec<f64> = u.iter().map(|t| (PI * t).cos()).collect();

    let mut total = 0.0;
    for (&a, &wa) in u.iter().zip(&wu) {
        let fa = (FRAC_PI_2 * a).sin();
        for (&s, &ws) in u.iter().zip(&wu) {
            let b = 1.0 - a + a * s * s;
            let jb = 2.0 * a * s;
            for (&t, &wt) in u.iter().zip(&wu) {
                let c = 1.0 - b + b * t * t;
                let jc = 2.0 * b * t;
                let (k, l) = phi_coefficients(a, b, c);
                let mut inner = 0.0;
                for (&ct, &wth) in cos_theta.iter().zip(&wu) {
                    inner += wth * (k + l * ct).clamp(-1.0, 1.0).acos();
                }
                total += wa * ws * wt * jb * jc * fa * (FRAC_PI_2 * c).sin() * inner;
            }
        }
    }
    // θ = πx on [0, π], doubled for the full circle, times π/4
    FRAC_PI_2 * PI * total
}

/// Climbs [`GL_LADDER`] until two consecutive rungs differ by less than
/// `tol`; fails if the ladder runs out first.
pub fn asymptotic_turning_angle(tol: f64) -> Result<QuadratureEstimate> {
    let mut prev = turning_angle_integral_gl(GL_LADDER[0]);
    let mut change = f64::INFINITY;
    for &nodes in &GL_LADDER[1..] {
        let value = turning_angle_integral_gl(nodes);
        change = (value - prev).abs();
        if change < tol {
            return Ok(QuadratureEstimate {
                value,
                last_change: change,
                nodes,
            });
        }
        prev = value;
    }
    Err(Error::QuadratureNotConverged {
        tol,
        last_change: change,
        nodes: GL_LADDER[GL_LADDER.len() - 1],
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QmcEstimate {
    /// Mean over the shifted replicas.
    pub value: f64,
    /// One value per random shift.
    pub replicas: Vec<f64>,
    /// Standard error of the mean across replicas.
    pub std_error: f64,
    /// `max - min` across replicas.
    pub spread: f64,
}

/// Inverse powers of the plastic-like constant `g` with `g^5 = g + 1`;
/// these generate a low-discrepancy Kronecker lattice in four dimensions.
fn kronecker_alphas() -> [f64; 4] {
    let mut g: f64 = 1.2;
    for _ in 0..60 {
        g -= (g.powi(5) - g - 1.0) / (5.0 * g.powi(4) - 1.0);
    }
    [g.recip(), g.powi(-2), g.powi(-3), g.powi(-4)]
}

fn qmc_replica(points: u64, shift: [f64; 4]) -> f64 {
    let alpha = kronecker_alphas();
    let mut x = shift;
    let mut total = 0.0;
    for _ in 0..points {
        for (xi, ai) in x.iter_mut().zip(&alpha) {
            *xi += ai;
            if *xi >= 1.0 {
                *xi -= 1.0;
            }
        }
        let a = x[0];
        let b = 1.0 - a + a * x[1];
        let c = 1.0 - b + b * x[2];
        if b <= 0.0 {
            continue;
        }
        let (k, l) = phi_coefficients(a, b, c);
        let phi = (k + l * (PI * x[3]).cos()).clamp(-1.0, 1.0).acos();
        total += a * b * (FRAC_PI_2 * a).sin() * (FRAC_PI_2 * c).sin() * phi;
    }
    FRAC_PI_2 * PI * total / points as f64
}

/// Randomly shifted Kronecker rule with `points` points per shift.
pub fn asymptotic_turning_angle_qmc(points: u64, shifts: usize, seed: u64) -> QmcEstimate {
    let mut rng = RngState::from_seed(seed);
    let replicas: Vec<f64> = (0..shifts.max(1))
        .map(|_| {
            let shift = [rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()];
            qmc_replica(points, shift)
        })
        .collect();
    let r = replicas.len() as f64;
    let value = replicas.iter().sum::<f64>() / r;
    let var = if replicas.len() > 1 {
        replicas.iter().map(|v| (v - value).powi(2)).sum::<f64>() / (r - 1.0)
    } else {
        0.0
    };
    let spread = replicas.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - replicas.iter().cloned().fold(f64::INFINITY, f64::min);
    QmcEstimate {
        value,
        std_error: (var / r).sqrt(),
        spread,
        replicas,
    }
}
