//! The two control laws and the shared horizon predictor.
//!
//! Both controllers act on a predicted tracking error a full lead time
//! ahead, so the feedback never fights the delay:
//!
//! * `SmithP` integrates its believed plant model over the horizon, fed by
//!   the orders already in the pipeline and a demand forecast path, and
//!   applies `u = (ref_rate + d_hat - Kp * e_hat) / k_model`.
//! * `ModelFreeIp` works against the ultra-local model
//!   `dy/dt = alpha u(t - L) - F(t)`: the lumped term `F` (unknown plant
//!   structure plus external perturbations) is re-estimated from measured
//!   data every step, forecast ahead, and compensated directly:
//!   `u = (ref_rate + F_hat - Kp * e_hat) / alpha`. No plant parameter
//!   enters the law, which is what removes the static error under model
//!   mismatch.
//!
//! Demand forecasts are clamped at zero before they enter the predictor and
//! the law (demand is non-negative); the raw forecast is reported for
//! logging. `F` forecasts are never clamped.

use crate::delay::DelayLine;
use crate::error::{Error, Result};
use crate::estimate::{estimate_trend, EstimatorConfig, TrendEstimate};
use crate::forecast::{forecast, forecast_path};
use crate::pwl::PiecewiseLinear;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerVariant {
    SmithP,
    ModelFreeIp,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerParams {
    pub variant: ControllerVariant,
    /// Yield as believed by the model-based controller.
    pub k_model: f64,
    /// Decay as believed by the model-based controller.
    pub sigma_model: f64,
    /// Ultra-local input gain, chosen by the practitioner.
    pub alpha: f64,
    /// Proportional gain on the predicted tracking error.
    pub gain_kp: f64,
    /// Clamp emitted orders at zero (factories cannot un-ship goods).
    pub clamp_u: bool,
}

impl ControllerParams {
    pub fn validate(&self) -> Result<()> {
        match self.variant {
            ControllerVariant::SmithP => {
                if !self.k_model.is_finite() || self.k_model <= 0.0 {
                    return Err(Error::InvalidParam {
                        name: "k_model",
                        value: self.k_model,
                        reason: "believed yield must be positive",
                    });
                }
                if !self.sigma_model.is_finite() || self.sigma_model < 0.0 {
                    return Err(Error::InvalidParam {
                        name: "sigma_model",
                        value: self.sigma_model,
                        reason: "believed decay must be non-negative",
                    });
                }
            }
            ControllerVariant::ModelFreeIp => {
                if !self.alpha.is_finite() || self.alpha <= 0.0 {
                    return Err(Error::InvalidParam {
                        name: "alpha",
                        value: self.alpha,
                        reason: "ultra-local gain must be positive",
                    });
                }
            }
        }
        if !self.gain_kp.is_finite() || self.gain_kp < 0.0 {
            return Err(Error::InvalidParam {
                name: "gain_kp",
                value: self.gain_kp,
                reason: "proportional gain must be non-negative",
            });
        }
        Ok(())
    }
}

/// Model-based proportional law on the predicted error. Unclamped.
pub fn smith_law(
    y_ref_rate: f64,
    d_hat: f64,
    e_hat: f64,
    params: &ControllerParams,
) -> Result<f64> {
    if !params.k_model.is_finite() || params.k_model <= 0.0 {
        return Err(Error::InvalidParam {
            name: "k_model",
            value: params.k_model,
            reason: "believed yield must be positive",
        });
    }
    Ok((y_ref_rate + d_hat - params.gain_kp * e_hat) / params.k_model)
}

/// Intelligent proportional law on the ultra-local model. Unclamped.
pub fn ip_law(y_ref_rate: f64, f_hat: f64, e_hat: f64, params: &ControllerParams) -> Result<f64> {
    if !params.alpha.is_finite() || params.alpha <= 0.0 {
        return Err(Error::InvalidParam {
            name: "alpha",
            value: params.alpha,
            reason: "ultra-local gain must be positive",
        });
    }
    Ok((y_ref_rate + f_hat - params.gain_kp * e_hat) / params.alpha)
}

/// Everything a single control decision produced, for logging and tests.
#[derive(Debug, Clone, Copy)]
pub struct ControlDecision {
    /// Emitted order (clamped when configured).
    pub u: f64,
    /// The law's output before clamping.
    pub u_raw: f64,
    /// Predicted inventory one lead time ahead.
    pub y_hat: f64,
    /// Predicted tracking error one lead time ahead.
    pub e_hat: f64,
    /// Raw (unclamped) forecast the law consumed: demand for the
    /// model-based controller, `F` for the model-free one.
    pub forecast_point: f64,
}

/// Controller state: the issued-order record feeding the predictor and, for
/// the model-free variant, the running series of `F` estimates.
#[derive(Debug, Clone)]
pub struct Controller {
    params: ControllerParams,
    /// Windowed fit for the measured inventory slope.
    slope_estimator: EstimatorConfig,
    /// Windowed fit for the disturbance record. A longer window than the
    /// slope fit buys stability margin: what this fit extrapolates over the
    /// lead time feeds back into the orders, so its mid-band gain must stay
    /// small.
    f_estimator: EstimatorConfig,
    dt: f64,
    lead_time: f64,
    horizon_steps: usize,
    history: DelayLine,
    f_series: TimeSeries,
    /// Increment weights of the slope estimator (see `estimate_f`).
    nu_weights: Vec<f64>,
    /// Group delay of the disturbance samples behind the current instant.
    f_lag: f64,
}

impl Controller {
    pub fn new(
        params: ControllerParams,
        slope_estimator: EstimatorConfig,
        f_estimator: EstimatorConfig,
        lead_time: f64,
        dt: f64,
        start_time: f64,
    ) -> Result<Self> {
        params.validate()?;
        let horizon_steps = DelayLine::from_lead_time(lead_time, dt, 0.0)?.depth();
        let w = slope_estimator.window_samples;

        // Discrete slope weights, probed by unit impulses.
        let mut slope_weights = Vec::with_capacity(w);
        for k in 0..w {
            let mut values = vec![0.0; w];
            values[k] = 1.0;
            let e = TimeSeries::new(0.0, dt, values)?;
            slope_weights.push(estimate_trend(&e, w - 1, &slope_estimator)?.slope);
        }
        // The fitted slope is identically a weighted average of the sample
        // increments: nu[m] = dt * sum of slope weights right of m. The
        // weights sum to one and their centroid sits `f_lag` behind the
        // window end.
        let mut nu_weights = Vec::with_capacity(w - 1);
        for m in 0..w - 1 {
            nu_weights.push(dt * slope_weights[m + 1..].iter().sum::<f64>());
        }
        let f_lag = nu_weights
            .iter()
            .enumerate()
            .map(|(m, nu)| nu * (w - 1 - m) as f64 * dt)
            .sum();

        Ok(Self {
            params,
            slope_estimator,
            f_estimator,
            dt,
            lead_time,
            horizon_steps,
            // Deep enough for the predictor (last `horizon_steps` orders)
            // and the disturbance estimator (the `w - 1` orders arriving
            // under the slope window).
            history: DelayLine::new(horizon_steps + w - 1, 0.0)?,
            f_series: TimeSeries::new(start_time, dt, Vec::new())?,
            nu_weights,
            f_lag,
        })
    }

    pub fn params(&self) -> &ControllerParams {
        &self.params
    }

    /// Number of samples in the prediction horizon (`L / dt`).
    pub fn horizon_steps(&self) -> usize {
        self.horizon_steps
    }

    /// Orders issued over the last lead time, oldest first.
    pub fn issued_history(&self) -> Vec<f64> {
        let all = self.history.contents();
        all[all.len() - self.horizon_steps..].to_vec()
    }

    /// Record the order just issued so future predictions see it.
    pub fn record_control(&mut self, u: f64) {
        self.history.push_read(u);
    }

    /// Past `F` estimates, aligned to the simulation grid.
    pub fn f_series(&self) -> &TimeSeries {
        &self.f_series
    }

    /// Predicted inventory one lead time ahead: an Euler replay of the
    /// believed model over the horizon. The orders reaching the plant during
    /// the horizon are exactly those already issued during the last lead
    /// time; `path[j]` is the demand (or `F`) assumed over the j-th horizon
    /// step.
    pub fn predict_output(&self, y_now: f64, path: &[f64]) -> Result<f64> {
        let controls = self.issued_history();
        if path.len() != controls.len() {
            return Err(Error::HorizonMismatch {
                controls: controls.len(),
                path: path.len(),
            });
        }
        let (gain, sigma) = match self.params.variant {
            ControllerVariant::SmithP => (self.params.k_model, self.params.sigma_model),
            ControllerVariant::ModelFreeIp => (self.params.alpha, 0.0),
        };
        let mut y_hat = y_now;
        for (u_j, p_j) in controls.iter().zip(path) {
            y_hat += self.dt * (-sigma * y_hat + gain * u_j - p_j);
        }
        Ok(y_hat)
    }

    /// Ultra-local disturbance estimate: `F = alpha * u(t - L) - dy/dt`,
    /// with the inventory slope taken from the windowed fit of measured
    /// data. Appends to the `F` record and reports whether the underlying
    /// slope was still warming up.
    ///
    /// The fitted slope is identically a weighted average (the `nu`
    /// weights) of the true per-step increments inside the window, each of
    /// which contains `alpha * u` delayed by the lead time. The delayed
    /// input is therefore passed through the same weighted average before
    /// subtracting, so it cancels exactly at every frequency and the sample
    /// is a clean moving average of the true disturbance, lagged by
    /// `f_lag`. Subtracting a single point `u(t - L)` instead would leave a
    /// broadband input residue in `F` that the lead-time extrapolation
    /// amplifies into an unstable feedback loop.
    pub fn estimate_f(&mut self, y: &TimeSeries, end_index: usize) -> Result<(f64, bool)> {
        let est = estimate_trend(y, end_index, &self.slope_estimator)?;
        let controls = self.history.contents();
        let u_avg: f64 = self
            .nu_weights
            .iter()
            .zip(&controls)
            .map(|(nu, u)| nu * u)
            .sum();
        let f = self.params.alpha * u_avg - est.slope;
        self.f_series.push(f);
        Ok((f, est.is_warmup))
    }

    /// Full model-based decision at time `t` from the current demand trend
    /// estimate.
    pub fn control_smith_p(
        &self,
        y_now: f64,
        reference: &PiecewiseLinear,
        t: f64,
        d_estimate: &TrendEstimate,
    ) -> Result<ControlDecision> {
        let steps = self.horizon_steps();
        let path = forecast_path(d_estimate, self.dt, steps)?;
        let clamped: Vec<f64> = path.values().iter().map(|v| v.max(0.0)).collect();
        let point = forecast(d_estimate, self.lead_time)?;
        let y_hat = self.predict_output(y_now, &clamped)?;
        let (y_ref, y_ref_rate) = reference.value_and_rate(t + self.lead_time);
        let e_hat = y_hat - y_ref;
        let u_raw = smith_law(y_ref_rate, point.value.max(0.0), e_hat, &self.params)?;
        Ok(self.finish(u_raw, y_hat, e_hat, point.value))
    }

    /// Full model-free decision at time `t`. Estimates `F` from the
    /// measured inventory first, then forecasts it over the horizon.
    pub fn control_model_free_ip(
        &mut self,
        y_now: f64,
        reference: &PiecewiseLinear,
        t: f64,
        y: &TimeSeries,
        end_index: usize,
    ) -> Result<ControlDecision> {
        self.estimate_f(y, end_index)?;
        let f_est = estimate_trend(&self.f_series, self.f_series.len() - 1, &self.f_estimator)?;
        // The disturbance samples run `f_lag` behind the clock; re-reference
        // the trend to the current instant before extrapolating, so ramps in
        // the disturbance are predicted without a systematic undershoot.
        let f_now = TrendEstimate {
            mean_at_end: f_est.mean_at_end + f_est.slope * self.f_lag,
            ..f_est
        };
        let steps = self.horizon_steps();
        let path = forecast_path(&f_now, self.dt, steps)?;
        let point = forecast(&f_now, self.lead_time)?;
        let y_hat = self.predict_output(y_now, path.values())?;
        let (y_ref, y_ref_rate) = reference.value_and_rate(t + self.lead_time);
        let e_hat = y_hat - y_ref;
        let u_raw = ip_law(y_ref_rate, point.value, e_hat, &self.params)?;
        Ok(self.finish(u_raw, y_hat, e_hat, point.value))
    }

    fn finish(&self, u_raw: f64, y_hat: f64, e_hat: f64, forecast_point: f64) -> ControlDecision {
        let u = if self.params.clamp_u {
            u_raw.max(0.0)
        } else {
            u_raw
        };
        ControlDecision {
            u,
            u_raw,
            y_hat,
            e_hat,
            forecast_point,
        }
    }
}
