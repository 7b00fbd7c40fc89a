//! Tracking and bullwhip metrics over a completed run.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Fraction of the run (from the end) used for steady-state figures.
pub const STEADY_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// RMS of `y - y_ref` over the post-warm-up window (items).
    pub tracking_rmse: f64,
    /// Mean of `y - y_ref` over the last [`STEADY_FRACTION`] of the run.
    pub steady_state_error: f64,
    /// `Var(u) / Var(d)` over the post-warm-up window; `None` when the
    /// demand has zero variance (the ratio is undefined, not infinite).
    pub bullwhip_ratio: Option<f64>,
    /// `Var(u)` over the post-warm-up window.
    pub control_variance: f64,
    /// Least-squares slope of `y - y_ref` over the post-warm-up window
    /// (items per day).
    pub drift_slope: f64,
}

/// Computes all metrics, excluding warm-up samples everywhere.
pub fn compute_metrics(
    u: &TimeSeries,
    y: &TimeSeries,
    y_ref: &TimeSeries,
    d: &TimeSeries,
    warmup: &[bool],
) -> Result<Metrics> {
    u.check_same_grid(y)?;
    u.check_same_grid(y_ref)?;
    u.check_same_grid(d)?;
    let n = u.len();
    if y.len() != n || y_ref.len() != n || d.len() != n || warmup.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y.len().min(y_ref.len()).min(d.len()).min(warmup.len()),
        });
    }
    let active: Vec<usize> = (0..n).filter(|&i| !warmup[i]).collect();
    if active.is_empty() {
        return Err(Error::AllWarmup);
    }

    let mut sq = 0.0;
    for &i in &active {
        let e = y[i] - y_ref[i];
        sq += e * e;
    }
    let tracking_rmse = (sq / active.len() as f64).sqrt();

    let steady_lo = n - ((STEADY_FRACTION * n as f64).ceil() as usize).clamp(1, n);
    let steady: Vec<usize> = active.iter().copied().filter(|&i| i >= steady_lo).collect();
    if steady.is_empty() {
        return Err(Error::AllWarmup);
    }
    let steady_state_error =
        steady.iter().map(|&i| y[i] - y_ref[i]).sum::<f64>() / steady.len() as f64;

    let control_variance = variance(active.iter().map(|&i| u[i]));
    let demand_variance = variance(active.iter().map(|&i| d[i]));
    let bullwhip_ratio = if demand_variance == 0.0 {
        None
    } else {
        Some(control_variance / demand_variance)
    };

    let drift_slope = least_squares_slope(
        active.iter().map(|&i| (u.time_at(i), y[i] - y_ref[i])),
    );

    Ok(Metrics {
        tracking_rmse,
        steady_state_error,
        bullwhip_ratio,
        control_variance,
        drift_slope,
    })
}

/// Population variance.
pub(crate) fn variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count();
    if n == 0 {
        return 0.0;
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    values.map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64
}

/// Ordinary least-squares slope of `(t, v)` pairs; 0 for fewer than two
/// points.
pub(crate) fn least_squares_slope(points: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let n = points.clone().count();
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let mean_t = points.clone().map(|(t, _)| t).sum::<f64>() / nf;
    let mean_v = points.clone().map(|(_, v)| v).sum::<f64>() / nf;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in points {
        num += (t - mean_t) * (v - mean_v);
        den += (t - mean_t) * (t - mean_t);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}
