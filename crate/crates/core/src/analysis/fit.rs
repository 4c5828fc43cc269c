//! Least-squares fits of mean turning angle against `n`.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    /// Asymptote of `a + b/n`.
    pub a: f64,
    /// Coefficient of `1/n`.
    pub b: f64,
    /// `1 - SS_res / SS_tot` about the mean, clamped to `[0, 1]`.
    pub r_squared: f64,
    /// `1 - SS_res / Σ y²`, the no-intercept-model convention.
    pub r_squared_uncentered: f64,
}

/// Weighted least squares of `y = a + b x`; returns `(a, b, ss_res, ss_tot, ss_raw)`.
fn weighted_line(points: impl Iterator<Item = (f64, f64, f64)> + Clone) -> Result<(f64, f64, f64, f64, f64)> {
    let sw: f64 = points.clone().map(|p| p.2).sum();
    if !(sw > 0.0) {
        return Err(Error::DegenerateFit);
    }
    let xm = points.clone().map(|(x, _, w)| w * x).sum::<f64>() / sw;
    let ym = points.clone().map(|(_, y, w)| w * y).sum::<f64>() / sw;
    let sxx: f64 = points.clone().map(|(x, _, w)| w * (x - xm).powi(2)).sum();
    let sxy: f64 = points.clone().map(|(x, y, w)| w * (x - xm) * (y - ym)).sum();
    let spread = points.clone().map(|p| p.0.abs()).fold(0.0, f64::max);
    if !(sxx > 1e-24 * spread * spread * sw) {
        return Err(Error::DegenerateFit);
    }
    let b = sxy / sxx;
    let a = ym - b * xm;
    let ss_res: f64 = points.clone().map(|(x, y, w)| w * (y - a - b * x).powi(2)).sum();
    let ss_tot: f64 = points.clone().map(|(_, y, w)| w * (y - ym).powi(2)).sum();
    let ss_raw: f64 = points.map(|(_, y, w)| w * y * y).sum();
    Ok((a, b, ss_res, ss_tot, ss_raw))
}

fn r2(ss_res: f64, ss_ref: f64) -> f64 {
    if ss_ref > 0.0 {
        (1.0 - ss_res / ss_ref).clamp(0.0, 1.0)
    } else {
        1.0
    }
}

/// Ordinary least squares of `mean = a + b/n` over `(n, mean)` points.
pub fn fit_reciprocal_model(points: &[(f64, f64)]) -> Result<FitResult> {
    fit_reciprocal_model_weighted(&points.iter().map(|&(n, y)| (n, y, 1.0)).collect::<Vec<_>>())
}

/// Weighted variant over `(n, mean, weight)`, e.g. with `weight = 1/se²`.
pub fn fit_reciprocal_model_weighted(points: &[(f64, f64, f64)]) -> Result<FitResult> {
    if points.iter().any(|p| !(p.0 > 0.0) || !(p.2 >= 0.0)) {
        return Err(Error::DegenerateFit);
    }
    let (a, b, ss_res, ss_tot, ss_raw) = weighted_line(points.iter().map(|&(n, y, w)| (1.0 / n, y, w)))?;
    Ok(FitResult {
        a,
        b,
        r_squared: r2(ss_res, ss_tot),
        r_squared_uncentered: r2(ss_res, ss_raw),
    })
}

/// Slope of the least-squares line through `(ln n, ln(a - mean))`.
pub fn loglog_slope(points: &[(f64, f64)], a: f64) -> Result<f64> {
    let mut logs = Vec::with_capacity(points.len());
    for &(n, y) in points {
        let r = a - y;
        if !(r > 0.0) || !(n > 0.0) {
            return Err(Error::NonPositiveResidual { n });
        }
        logs.push((n.ln(), r.ln(), 1.0));
    }
    Ok(weighted_line(logs.into_iter())?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn noiseless_recovery() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|k| {
            let n = 500.0 * k as f64;
            (n, 2.14625 - 0.46742 / n)
        }).collect();
        let f = fit_reciprocal_model(&pts).unwrap();
        assert!((f.a - 2.14625).abs() < 1e-12);
        assert!((f.b + 0.46742).abs() < 1e-12);
        assert_eq!(f.r_squared, 1.0);
        let s = loglog_slope(&pts, 2.14625).unwrap();
        assert!((s + 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_points_interpolate() {
        let f = fit_reciprocal_model(&[(10.0, 2.1), (20.0, 2.12)]).unwrap();
        assert!((f.a + f.b / 10.0 - 2.1).abs() < 1e-14);
        assert!((f.a + f.b / 20.0 - 2.12).abs() < 1e-14);
        assert_eq!(f.r_squared, 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(fit_reciprocal_model(&[(10.0, 2.0), (10.0, 2.1)]), Err(Error::DegenerateFit)));
        assert!(fit_reciprocal_model(&[(10.0, 2.0)]).is_err());
        assert!(fit_reciprocal_model(&[]).is_err());
        assert!(matches!(loglog_slope(&[(10.0, 2.2)], 2.1), Err(Error::NonPositiveResidual { .. })));
    }

    #[test]
    fn weighted_fit_with_equal_weights_is_ols() {
        let pts = [(10.0, 2.1), (20.0, 2.125), (40.0, 2.134), (80.0, 2.1405)];
        let w: Vec<_> = pts.iter().map(|&(n, y)| (n, y, 3.0)).collect();
        let a = fit_reciprocal_model(&pts).unwrap();
        let b = fit_reciprocal_model_weighted(&w).unwrap();
        assert!((a.a - b.a).abs() < 1e-13 && (a.b - b.b).abs() < 1e-11);
    }

    proptest! {
        #[test]
        fn r_squared_in_unit_interval(ys in prop::collection::vec(0.0f64..3.0, 3..20)) {
            let pts: Vec<_> = ys.iter().enumerate().map(|(k, &y)| ((k + 1) as f64, y)).collect();
            let f = fit_reciprocal_model(&pts).unwrap();
            prop_assert!((0.0..=1.0).contains(&f.r_squared));
            prop_assert!((0.0..=1.0).contains(&f.r_squared_uncentered));
        }

        #[test]
        fn decreasing_residuals_give_negative_slope(c in 0.01f64..10.0, p in 0.2f64..3.0) {
            let pts: Vec<_> = (1..8).map(|k| { let n = 10.0 * k as f64; (n, 2.0 - c * n.powf(-p)) }).collect();
            let s = loglog_slope(&pts, 2.0).unwrap();
            prop_assert!(s.is_finite() && s < 0.0);
            prop_assert!((s + p).abs() < 1e-9);
        }
    }
}
