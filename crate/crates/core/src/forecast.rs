//! Short-horizon forecasting by linear extrapolation of an estimated trend.
//!
//! Only the mean is predicted, never the quick fluctuations: the forecast at
//! horizon `h` is `mean_at_end + slope * h` for the frozen basis estimate.

use crate::error::{Error, Result};
use crate::estimate::TrendEstimate;
use crate::series::TimeSeries;

/// Guard against runaway horizon requests.
const MAX_FORECAST_STEPS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Forecast {
    /// Look-ahead from the basis estimate's window end (days).
    pub horizon: f64,
    /// Predicted mean at `window_end_time + horizon`.
    pub value: f64,
    /// The trend estimate the prediction extrapolates.
    pub basis: TrendEstimate,
}

impl Forecast {
    /// A forecast built on a warm-up placeholder inherits the flag.
    pub fn is_warmup(&self) -> bool {
        self.basis.is_warmup
    }
}

/// Point forecast at `horizon > 0` days ahead. No clamping is applied here;
/// consumers decide whether negative predictions make sense for their
/// signal.
pub fn forecast(basis: &TrendEstimate, horizon: f64) -> Result<Forecast> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::InvalidParam {
            name: "horizon",
            value: horizon,
            reason: "forecast horizon must be positive",
        });
    }
    Ok(Forecast {
        horizon,
        value: basis.mean_at_end + basis.slope * horizon,
        basis: *basis,
    })
}

/// Forecasts at horizons `dt, 2 dt, ..., steps * dt`, all extrapolated from
/// the same frozen basis. Entry `k - 1` equals `forecast(basis, k * dt)`.
pub fn forecast_path(basis: &TrendEstimate, dt: f64, steps: usize) -> Result<TimeSeries> {
    if steps == 0 {
        return Err(Error::InvalidParam {
            name: "steps",
            value: 0.0,
            reason: "a forecast path needs at least one step",
        });
    }
    if steps > MAX_FORECAST_STEPS {
        return Err(Error::InvalidParam {
            name: "steps",
            value: steps as f64,
            reason: "forecast horizon exceeds the supported maximum",
        });
    }
    let mut path = TimeSeries::new(
        basis.window_end_time + dt,
        dt,
        Vec::with_capacity(steps),
    )?;
    for k in 1..=steps {
        path.push(basis.mean_at_end + basis.slope * (k as f64 * dt));
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::{estimate_trend, EstimatorConfig};
    use proptest::prelude::*;

    fn basis(mean: f64, slope: f64) -> TrendEstimate {
        TrendEstimate {
            mean_at_end: mean,
            slope,
            window_end_time: 0.0,
            is_warmup: false,
        }
    }

    #[test]
    fn point_forecast_is_direct_substitution() {
        let f = forecast(&basis(10.0, 0.5), 5.0).unwrap();
        assert_eq!(f.value, 12.5);
        let flat = forecast(&basis(10.0, 0.0), 123.0).unwrap();
        assert_eq!(flat.value, 10.0);
    }

    #[test]
    fn rejects_non_positive_horizon() {
        assert!(forecast(&basis(1.0, 1.0), 0.0).is_err());
        assert!(forecast(&basis(1.0, 1.0), -1.0).is_err());
        assert!(forecast_path(&basis(1.0, 1.0), 1.0, 0).is_err());
    }

    #[test]
    fn path_is_arithmetic_progression() {
        let p = forecast_path(&basis(10.0, 1.0), 1.0, 3).unwrap();
        assert_eq!(p.values(), &[11.0, 12.0, 13.0]);
        let flat = forecast_path(&basis(10.0, 0.0), 1.0, 3).unwrap();
        assert_eq!(flat.values(), &[10.0, 10.0, 10.0]);
    }

    #[test]
    fn path_end_matches_point_forecast_at_lead_time() {
        // 5 steps of 1 day end exactly at the 5-day point forecast.
        let b = basis(42.0, -0.7);
        let p = forecast_path(&b, 1.0, 5).unwrap();
        let point = forecast(&b, 5.0).unwrap();
        assert_eq!(p[4], point.value);
    }

    #[test]
    fn exact_on_noise_free_affine_signals() {
        let cfg = EstimatorConfig::default();
        let x = TimeSeries::from_fn(0.0, 0.5, 40, |t| 3.0 + 2.0 * t).unwrap();
        let est = estimate_trend(&x, 39, &cfg).unwrap();
        for horizon in [0.5, 2.0, 7.5] {
            let f = forecast(&est, horizon).unwrap();
            let truth = 3.0 + 2.0 * (x.time_at(39) + horizon);
            assert!((f.value - truth).abs() <= 1e-9 * truth.abs());
        }
    }

    #[test]
    fn warmup_flag_is_inherited() {
        let mut b = basis(1.0, 0.0);
        b.is_warmup = true;
        assert!(forecast(&b, 1.0).unwrap().is_warmup());
    }

    proptest! {
        // Point/path consistency at every step.
        #[test]
        fn path_matches_point_forecasts(
            mean in -100.0f64..100.0,
            slope in -10.0f64..10.0,
            dt in 0.01f64..2.0,
            steps in 1usize..50,
        ) {
            let b = basis(mean, slope);
            let p = forecast_path(&b, dt, steps).unwrap();
            for k in 1..=steps {
                let point = forecast(&b, k as f64 * dt).unwrap().value;
                prop_assert!((p[k - 1] - point).abs() <= 1e-12 * point.abs().max(1.0));
            }
        }
    }
}
