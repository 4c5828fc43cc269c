//! Direct, linear-time sampling of random equilateral polygons in rooted
//! spherical confinement of radius 1, together with the exact combinatorics
//! and statistics used to check the sampler.
//!
//! The confined polygon space is parameterized by action-angle coordinates:
//! the fan-diagonal lengths `d_1..d_{n-3}` measured from the root vertex,
//! which range over the polytope `{d in [0,1]^{n-3} : d_i + d_{i+1} >= 1}`,
//! and independent uniform dihedral angles. Sampling the polytope reduces to
//! a telescoping Markov chain with an acceptance/reversal step
//! ([`polytope::sample_diagonals`]); the polygon is then rebuilt triangle by
//! triangle ([`geometry::reconstruct`]).
//!
//! Modules:
//! - [`combinatorics`]: Euler, Entringer and generalized Entringer numbers,
//!   linear extensions of augmented zig-zag posets (exact, arbitrary precision).
//! - [`polytope`]: the diagonal sampler, its rejection-sampling oracle and the
//!   order/chain polytope maps.
//! - [`geometry`]: polygon reconstruction from action-angle coordinates and
//!   back.
//! - [`analysis`]: turning angles, chord-length expectations, the asymptotic
//!   turning-angle integral, ensemble statistics and model fits.
//! - [`io`]: CSV/JSONL formats shared with the command-line tool.

pub mod analysis;
pub mod combinatorics;
mod error;
pub mod geometry;
pub mod io;
pub mod polytope;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{ActionAngleCoords, DihedralVector, Point3, Polygon};
pub use polytope::{DiagonalVector, SamplerTrace};
pub use rng::RngState;

/// Library version string, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
