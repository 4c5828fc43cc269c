//! Exact and Monte Carlo statistics of confined polygons.

mod chords;
mod ensemble;
mod fit;
mod quadrature;
mod stats;
mod turning;

pub use chords::{
    asymptotic_chord_expectation, expected_chord_length, expected_chord_lengths,
    limiting_chord_cdf, limiting_chord_density, LIMITING_CHORD_MEAN,
};
pub use ensemble::{
    diagonal_stats, diagonal_stats_parallel, ensemble_stats, ensemble_stats_parallel, DiagonalStats,
    EnsembleStats,
};
pub use fit::{fit_reciprocal_model, fit_reciprocal_model_weighted, loglog_slope, FitResult};
pub use quadrature::{
    asymptotic_turning_angle, asymptotic_turning_angle_qmc, gauss_legendre, turning_angle_integral_gl,
    QmcEstimate, QuadratureEstimate, GL_LADDER,
};
pub use stats::{ks_histogram_bounds, ks_one_sample, ks_two_sample, Histogram, RunningStats};
pub use turning::{
    total_curvature, turning_angle_action_angle, turning_angle_end, turning_angles_action_angle,
    turning_angles_direct, turning_angles_direct_into,
};
