//! Confined equilateral polygons and their action-angle coordinates.
//!
//! The fan triangulation from the root `v_1` splits an `n`-gon into triangles
//! `T_j = (v_1, v_{j+1}, v_{j+2})`, `j = 1..n-2`, with sides `d_{j-1}`, `d_j`
//! and a unit edge, where `d_j = |v_{j+2} - v_1|` and `d_0 = d_{n-2} = 1`.
//! The dihedral `θ_j` is the angle between `T_j` and `T_{j+1}` about the
//! diagonal `v_1 v_{j+2}`.
//!
//! Frame and sign conventions:
//! - `v_1` is the origin, `v_3` lies on the positive x-axis and `v_2` has
//!   positive y, so `T_1` lies in the xy-plane.
//! - `θ_j = 0` is the unfolded configuration: `v_{j+1}` and `v_{j+3}` lie in
//!   one plane on opposite sides of the diagonal. `θ_j = π` folds `T_{j+1}`
//!   back onto `T_j`.
//! - Positive `θ_j` rotates `T_{j+1}` right-handedly about the diagonal
//!   oriented away from `v_1`.

use std::f64::consts::TAU;

use crate::polytope::{self, DiagonalVector, SamplerTrace, MIN_EDGES};
use crate::rng::RngState;
use crate::{Error, Result};

pub type Point3 = nalgebra::Vector3<f64>;

/// Tolerance of the unit-edge, closure, root and confinement invariants.
pub const INVARIANT_TOL: f64 = 1e-10;

/// Snapping tolerance for diagonals measured from vertex coordinates.
const MEASURE_TOL: f64 = 1e-9;

/// Below this length a diagonal or a triangle height is treated as zero
/// when extracting dihedrals.
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DihedralVector {
    n: usize,
    theta: Vec<f64>,
}

impl DihedralVector {
    pub fn new(n: usize, theta: Vec<f64>) -> Result<Self> {
        if n < MIN_EDGES {
            return Err(Error::TooFewEdges { n, min: MIN_EDGES });
        }
        if theta.len() != n - 3 {
            return Err(Error::LengthMismatch {
                expected: n - 3,
                found: theta.len(),
            });
        }
        if let Some(&bad) = theta.iter().find(|t| !(0.0..TAU).contains(*t)) {
            return Err(Error::OutOfDomain {
                name: "theta",
                value: bad,
                domain: "[0, 2π)",
            });
        }
        Ok(Self { n, theta })
    }

    /// Independent uniform angles on `[0, 2π)`.
    pub fn uniform(n: usize, rng: &mut RngState) -> Result<Self> {
        let theta = (0..n.saturating_sub(3)).map(|_| rng.uniform_angle()).collect();
        Self::new(n, theta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.theta
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionAngleCoords {
    diagonals: DiagonalVector,
    dihedrals: DihedralVector,
}

impl ActionAngleCoords {
    pub fn new(diagonals: DiagonalVector, dihedrals: DihedralVector) -> Result<Self> {
        if diagonals.n() != dihedrals.n() {
            return Err(Error::LengthMismatch {
                expected: diagonals.n() - 3,
                found: dihedrals.n() - 3,
            });
        }
        Ok(Self {
            diagonals,
            dihedrals,
        })
    }

    pub fn n(&self) -> usize {
        self.diagonals.n()
    }

    pub fn diagonals(&self) -> &DiagonalVector {
        &self.diagonals
    }

    pub fn dihedrals(&self) -> &DihedralVector {
        &self.dihedrals
    }
}

/// Worst-case deviations from the polygon invariants.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct InvariantReport {
    /// `max_i ||e_i| - 1|` over the edges `v_1 v_2, ..., v_{n-1} v_n`.
    pub max_edge_error: f64,
    /// `||v_n - v_1| - 1|`.
    pub closure_error: f64,
    /// `|v_1|`.
    pub root_offset: f64,
    /// `max_i |v_i - v_1|`.
    pub max_radius: f64,
}

impl InvariantReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_edge_error <= tol
            && self.closure_error <= tol
            && self.root_offset <= tol
            && self.max_radius <= 1.0 + tol
    }

    fn first_violation(&self, tol: f64) -> Option<(&'static str, f64)> {
        [
            ("unit-edge", self.max_edge_error),
            ("closure", self.closure_error),
            ("root", self.root_offset),
            ("confinement", self.max_radius - 1.0),
        ]
        .into_iter()
        .find(|&(_, dev)| !(dev <= tol))
    }
}

pub fn invariant_report(vertices: &[Point3]) -> InvariantReport {
    let Some(&root) = vertices.first() else {
        return InvariantReport::default();
    };
    let max_edge_error = vertices
        .windows(2)
        .map(|w| ((w[1] - w[0]).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let closure_error = ((root - vertices[vertices.len() - 1]).norm() - 1.0).abs();
    let max_radius = vertices.iter().map(|v| (v - root).norm()).fold(0.0, f64::max);
    InvariantReport {
        max_edge_error,
        closure_error,
        root_offset: root.norm(),
        max_radius,
    }
}

/// A closed equilateral polygon rooted at the origin, listed as
/// `v_1, ..., v_n`; the closing edge `v_n v_1` is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point3>,
}

impl Polygon {
    /// Checks every invariant at [`INVARIANT_TOL`].
    pub fn from_vertices(vertices: Vec<Point3>) -> Result<Self> {
        let p = Self::from_vertices_unchecked(vertices)?;
        if let Some((what, deviation)) = p.invariant_report().first_violation(INVARIANT_TOL) {
            return Err(Error::InvariantViolated {
                what,
                deviation,
                tol: INVARIANT_TOL,
            });
        }
        Ok(p)
    }

    /// Only checks the vertex count; used for test shapes such as the
    /// regular hexagon that are equilateral but not confined.
    pub fn from_vertices_unchecked(vertices: Vec<Point3>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewEdges {
                n: vertices.len(),
                min: 3,
            });
        }
        Ok(Self { vertices })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point3> {
        self.vertices
    }

    /// Edge `e_i = v_{i+1} - v_i` for `i = 1..=n`, cyclic.
    pub fn edge(&self, i: usize) -> Point3 {
        let n = self.n();
        assert!((1..=n).contains(&i), "edge index {i} outside 1..={n}");
        self.vertices[i % n] - self.vertices[i - 1]
    }

    pub fn invariant_report(&self) -> InvariantReport {
        invariant_report(&self.vertices)
    }
}

/// Builds the polygon with the given action-angle coordinates in the
/// canonical frame.
pub fn reconstruct(coords: &ActionAngleCoords) -> Polygon {
    let mut out = Vec::with_capacity(coords.n());
    reconstruct_into(coords.diagonals.as_slice(), coords.dihedrals.as_slice(), &mut out);
    Polygon { vertices: out }
}

/// Writes the `n = d.len() + 3` vertices into `out`. The caller guarantees
/// that `d` lies in the confined polytope and `theta.len() == d.len()`.
pub fn reconstruct_into(d: &[f64], theta: &[f64], out: &mut Vec<Point3>) {
    let m = d.len();
    assert!(m >= 1 && theta.len() == m, "need n - 3 >= 1 diagonals and as many dihedrals");
    debug_assert!(d.iter().all(|x| (0.0..=1.0).contains(x)));
    out.clear();
    out.reserve(m + 3);

    let d1 = d[0];
    out.push(Point3::zeros());
    out.push(Point3::new(0.5 * d1, (1.0 - 0.25 * d1 * d1).max(0.0).sqrt(), 0.0));
    out.push(Point3::new(d1, 0.0, 0.0));

    // u: unit vector along the current diagonal; w: unit vector orthogonal
    // to u in the plane of the current triangle, on the side of the
    // previous vertex. When the diagonal has zero length, u keeps the last
    // direction and only w matters.
    let mut u = Point3::x();
    let mut w = Point3::y();
    for j in 0..m {
        let dj = d[j];
        let dn = if j + 1 < m { d[j + 1] } else { 1.0 };
        let (a, h) = if dj > 0.0 {
            let a = (dj * dj + dn * dn - 1.0) / (2.0 * dj);
            (a, (dn * dn - a * a).max(0.0).sqrt())
        } else {
            (0.0, dn)
        };
        let (s, c) = theta[j].sin_cos();
        let w_new = -(c * w + s * u.cross(&w));
        let v = a * u + h * w_new;
        out.push(v);

        if dn > 0.0 {
            let u_next = v / v.norm();
            let w_next = h * u - a * w_new;
            let w_next = w_next - w_next.dot(&u_next) * u_next;
            let norm = w_next.norm();
            w = if norm > 0.0 { w_next / norm } else { u };
            u = u_next;
        } else {
            let old_u = u;
            u = w_new;
            w = old_u;
        }
    }
}

/// Recovers the diagonals and dihedrals of `p`.
pub fn extract_action_angle(p: &Polygon) -> Result<ActionAngleCoords> {
    let n = p.n();
    if n < MIN_EDGES {
        return Err(Error::TooFewEdges { n, min: MIN_EDGES });
    }
    let mut d = Vec::with_capacity(n - 3);
    let mut theta = Vec::with_capacity(n - 3);
    extract_into(&p.vertices, &mut d, &mut theta)?;
    let diagonals = DiagonalVector::from_measured(n, d, MEASURE_TOL)?;
    let dihedrals = DihedralVector::new(n, theta)?;
    ActionAngleCoords::new(diagonals, dihedrals)
}

/// Raw extraction into reusable buffers, without snapping the diagonals
/// onto the polytope. Vertices are taken relative to `vertices[0]`.
pub fn extract_into(vertices: &[Point3], d: &mut Vec<f64>, theta: &mut Vec<f64>) -> Result<()> {
    let n = vertices.len();
    if n < MIN_EDGES {
        return Err(Error::TooFewEdges { n, min: MIN_EDGES });
    }
    let root = vertices[0];
    d.clear();
    theta.clear();
    for j in 1..=n - 3 {
        let diag = vertices[j + 1] - root;
        let len = diag.norm();
        if len < DEGENERATE_TOL {
            return Err(Error::DegenerateTriangle { index: j });
        }
        let u = diag / len;
        let prev = vertices[j] - root;
        let next = vertices[j + 2] - root;
        let p = prev - prev.dot(&u) * u;
        let q = next - next.dot(&u) * u;
        let (pn, qn) = (p.norm(), q.norm());
        if pn < DEGENERATE_TOL || qn < DEGENERATE_TOL {
            return Err(Error::DegenerateTriangle { index: j });
        }
        let p = p / pn;
        let q = q / qn;
        let cos = -p.dot(&q);
        let sin = -u.cross(&p).dot(&q);
        let mut t = sin.atan2(cos);
        if t < 0.0 {
            t += TAU;
        }
        if t >= TAU {
            t = 0.0;
        }
        d.push(len);
        theta.push(t);
    }
    Ok(())
}

/// One confined equilateral polygon: diagonals from the polytope sampler,
/// then `n - 3` uniform dihedrals, then reconstruction.
pub fn sample_polygon(n: usize, rng: &mut RngState) -> Result<Polygon> {
    let mut s = PolygonSampler::new();
    s.sample(n, rng)?;
    Ok(Polygon {
        vertices: std::mem::take(&mut s.vertices),
    })
}

/// Allocation-free repeated sampling; the buffers of the last sample stay
/// readable until the next call.
#[derive(Clone, Debug, Default)]
pub struct PolygonSampler {
    diagonals: Vec<f64>,
    dihedrals: Vec<f64>,
    vertices: Vec<Point3>,
}

impl PolygonSampler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sample(&mut self, n: usize, rng: &mut RngState) -> Result<SamplerTrace> {
        let trace = polytope::sample_diagonals_into(n, rng, &mut self.diagonals)?;
        self.dihedrals.clear();
        self.dihedrals.extend((0..n - 3).map(|_| rng.uniform_angle()));
        reconstruct_into(&self.diagonals, &self.dihedrals, &mut self.vertices);
        Ok(trace)
    }

    pub fn diagonals(&self) -> &[f64] {
        &self.diagonals
    }

    pub fn dihedrals(&self) -> &[f64] {
        &self.dihedrals
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let t = (a - b).rem_euclid(TAU);
    t.min(TAU - t)
}
