//! Turning (exterior) angles, by direct vector geometry and from
//! action-angle coordinates.
//!
//! Entry `i` (1-based) of a turning-angle vector is `φ_i`, the angle between
//! `e_i = v_{i+1} - v_i` and `e_{i+1}`; it sits at vertex `v_{i+1}`, and
//! `φ_n` sits at the root.

use crate::geometry::{Point3, Polygon};
use crate::{Error, Result};

/// Heron radicands this far below zero are rounding noise at flat triangles.
const RADICAND_SLACK: f64 = 1e-12;

/// `φ_1, ..., φ_n` via `atan2(|e_i × e_{i+1}|, e_i · e_{i+1})`.
pub fn turning_angles_direct(p: &Polygon) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.n());
    turning_angles_direct_into(p.vertices(), &mut out);
    out
}

pub fn turning_angles_direct_into(vertices: &[Point3], out: &mut Vec<f64>) {
    let n = vertices.len();
    out.clear();
    if n < 2 {
        return;
    }
    let mut e = vertices[1] - vertices[0];
    for i in 1..=n {
        let next = vertices[(i + 1) % n] - vertices[i % n];
        out.push(e.cross(&next).norm().atan2(e.dot(&next)));
        e = next;
    }
}

/// `κ = Σ φ_i`, summed in index order.
pub fn total_curvature(p: &Polygon) -> f64 {
    turning_angles_direct(p).iter().sum()
}

fn heron(a: f64, b: f64, c: f64) -> Result<f64> {
    let r = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c);
    if r < -RADICAND_SLACK {
        return Err(Error::OutOfDomain {
            name: "Heron radicand",
            value: r,
            domain: "[0, ∞)",
        });
    }
    Ok(r.max(0.0).sqrt())
}

/// `φ_i` from the diagonals `d_{i-2}, d_{i-1}, d_i` and the dihedral
/// `θ_{i-1}` about `d_{i-1}`.
pub fn turning_angle_action_angle(d_prev2: f64, d_prev1: f64, d_cur: f64, theta: f64) -> Result<f64> {
    if !(d_prev1 > 0.0) {
        return Err(Error::OutOfDomain {
            name: "d_prev1",
            value: d_prev1,
            domain: "(0, ∞)",
        });
    }
    let (a2, b2, c2) = (d_prev2 * d_prev2, d_prev1 * d_prev1, d_cur * d_cur);
    let big_a = heron(d_prev2, d_prev1, 1.0)? * heron(d_prev1, d_cur, 1.0)?;
    let cos = (a2 + c2) / 2.0 - 1.0 - ((a2 + b2 - 1.0) * (b2 + c2 - 1.0) - big_a * theta.cos()) / (4.0 * b2);
    Ok(cos.clamp(-1.0, 1.0).acos())
}

/// `φ_1` or `φ_{n-1}`: the apex angle of an isosceles fan triangle with unit
/// legs and base `d` (`d_1` or `d_{n-3}`), `cos φ = d²/2 - 1`.
pub fn turning_angle_end(d: f64) -> f64 {
    (0.5 * d * d - 1.0).clamp(-1.0, 1.0).acos()
}

/// `φ_1, ..., φ_{n-1}` from action-angle coordinates, with `d_0 = d_{n-2} = 1`.
/// The root angle `φ_n` depends on the whole polygon and is not included.
pub fn turning_angles_action_angle(d: &[f64], theta: &[f64]) -> Result<Vec<f64>> {
    let m = d.len();
    if m == 0 || theta.len() != m {
        return Err(Error::LengthMismatch {
            expected: m.max(1),
            found: theta.len(),
        });
    }
    let ext = |k: usize| if k == 0 || k == m + 1 { 1.0 } else { d[k - 1] };
    let mut out = Vec::with_capacity(m + 2);
    out.push(turning_angle_end(d[0]));
    for i in 2..=m + 1 {
        out.push(turning_angle_action_angle(ext(i - 2), ext(i - 1), ext(i), theta[i - 2])?);
    }
    out.push(turning_angle_end(d[m - 1]));
    Ok(out)
}
