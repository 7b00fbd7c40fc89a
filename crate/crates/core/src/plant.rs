//! Ground-truth inventory dynamics, stepped by explicit Euler.
//!
//! The classic plant is `dy/dt = k u(t - L) - d(t)`; the perishable variant
//! adds proportional spoilage: `dy/dt = -sigma y + k u(t - L) - d(t)`. The
//! scenarios sample at 1 or 0.1 days and the dynamics are mild, so a single
//! Euler step per sample is the integrator; there is no sub-stepping.

use crate::delay::DelayLine;
use crate::error::{Error, Result};
use crate::series::{span_steps, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantParams {
    /// Yield: fraction of ordered supply that actually arrives (> 0).
    pub yield_k: f64,
    /// Spoilage rate per day; 0 selects the classic conservation plant.
    pub decay_sigma: f64,
    /// Throughput time between ordering and arrival (days).
    pub lead_time: f64,
    /// Sampling step (days); `lead_time / dt` must be a positive integer.
    pub dt: f64,
    /// Initial inventory.
    pub y0: f64,
    /// Clamp inventory at zero after each step. On for scenario realism,
    /// off for linear-property analysis.
    pub clamp_inventory: bool,
}

impl PlantParams {
    pub fn validate(&self) -> Result<()> {
        if !self.yield_k.is_finite() || self.yield_k <= 0.0 {
            return Err(Error::InvalidParam {
                name: "yield_k",
                value: self.yield_k,
                reason: "yield must be positive",
            });
        }
        if !self.decay_sigma.is_finite() || self.decay_sigma < 0.0 {
            return Err(Error::InvalidParam {
                name: "decay_sigma",
                value: self.decay_sigma,
                reason: "decay rate must be non-negative",
            });
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidParam {
                name: "dt",
                value: self.dt,
                reason: "sampling step must be positive",
            });
        }
        if !self.y0.is_finite() || self.y0 < 0.0 {
            return Err(Error::InvalidParam {
                name: "y0",
                value: self.y0,
                reason: "initial inventory must be non-negative",
            });
        }
        self.delay_depth()?;
        Ok(())
    }

    /// Lead time expressed in samples.
    pub fn delay_depth(&self) -> Result<usize> {
        span_steps(self.lead_time, self.dt).ok_or(Error::NonIntegerStepRatio {
            name: "lead_time",
            value: self.lead_time,
            dt: self.dt,
        })
    }
}

#[derive(Debug, Clone)]
pub struct PlantState {
    /// Current time (days).
    pub t: f64,
    /// Current inventory.
    pub y: f64,
    delay: DelayLine,
}

impl PlantState {
    /// Fresh state at `t = 0` with an empty supply pipeline (the delay line
    /// is filled with zeros: nothing was ordered before the run began).
    pub fn new(params: &PlantParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            t: 0.0,
            y: params.y0,
            delay: DelayLine::new(params.delay_depth()?, 0.0)?,
        })
    }
}

/// One Euler step: push the current order into the pipeline, pop the order
/// issued a lead time ago, and update the inventory with it against the
/// current demand. Returns the new inventory.
pub fn plant_step(
    state: &mut PlantState,
    params: &PlantParams,
    u_now: f64,
    d_now: f64,
) -> Result<f64> {
    if u_now.is_nan() {
        return Err(Error::NonFinite {
            name: "u",
            value: u_now,
        });
    }
    if d_now.is_nan() {
        return Err(Error::NonFinite {
            name: "d",
            value: d_now,
        });
    }
    if u_now < 0.0 {
        return Err(Error::NegativeControl { value: u_now });
    }
    let u_delayed = state.delay.push_read(u_now);
    let rate = -params.decay_sigma * state.y + params.yield_k * u_delayed - d_now;
    state.y += params.dt * rate;
    if params.clamp_inventory && state.y < 0.0 {
        state.y = 0.0;
    }
    state.t += params.dt;
    Ok(state.y)
}

/// Batch simulation against externally supplied order and demand series.
/// Output sample `i` is the inventory at time `t_i`, before the inputs at
/// `t_i` act; the trajectory has the same grid and length as `d`.
pub fn run_open_loop(
    params: &PlantParams,
    u: &TimeSeries,
    d: &TimeSeries,
) -> Result<TimeSeries> {
    params.validate()?;
    u.check_same_grid(d)?;
    if u.len() != d.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: d.len(),
        });
    }
    if u.dt() != params.dt {
        return Err(Error::GridMismatch {
            left_start: u.start_time(),
            left_dt: u.dt(),
            right_start: u.start_time(),
            right_dt: params.dt,
        });
    }
    let mut state = PlantState::new(params)?;
    let mut y = TimeSeries::new(d.start_time(), d.dt(), Vec::with_capacity(d.len()))?;
    if d.is_empty() {
        return Ok(y);
    }
    y.push(state.y);
    for i in 0..d.len() - 1 {
        let next = plant_step(&mut state, params, u[i], d[i])?;
        y.push(next);
    }
    Ok(y)
}
