//! Uniformly sampled scalar signals.
//!
//! [`TimeSeries`] is the common currency between modules: a start time, a
//! fixed step `dt` and a vector of values. Sample `i` lives at exactly
//! `start_time + i * dt`; there are no per-sample timestamps. Mixing two
//! series with different grids is a hard error, never a silent resample.

use crate::error::{Error, Result};

/// Relative tolerance used when checking that a time span is an integer
/// number of steps (lead times, durations, noise onsets).
const STEP_RATIO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start_time: f64,
    dt: f64,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start_time: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !start_time.is_finite() {
            return Err(Error::NonFinite {
                name: "start_time",
                value: start_time,
            });
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidParam {
                name: "dt",
                value: dt,
                reason: "step must be positive and finite",
            });
        }
        Ok(Self {
            start_time,
            dt,
            values,
        })
    }

    /// Samples `f` at `n` grid points starting at `start_time`.
    pub fn from_fn(start_time: f64, dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut s = Self::new(start_time, dt, Vec::with_capacity(n))?;
        for i in 0..n {
            let t = s.start_time + i as f64 * s.dt;
            s.values.push(f(t));
        }
        Ok(s)
    }

    pub fn zeros(start_time: f64, dt: f64, n: usize) -> Result<Self> {
        Self::new(start_time, dt, vec![0.0; n])
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time_at(&self, i: usize) -> f64 {
        self.start_time + i as f64 * self.dt
    }

    pub fn push(&mut self, value: f64) {
        self.values.push(value);
    }

    /// Errors unless both series share the exact same start time and step.
    pub fn check_same_grid(&self, other: &TimeSeries) -> Result<()> {
        if self.start_time != other.start_time || self.dt != other.dt {
            return Err(Error::GridMismatch {
                left_start: self.start_time,
                left_dt: self.dt,
                right_start: other.start_time,
                right_dt: other.dt,
            });
        }
        Ok(())
    }

    fn check_same_len(&self, other: &TimeSeries) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TimeSeries) -> Result<TimeSeries> {
        self.check_same_grid(other)?;
        self.check_same_len(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        TimeSeries::new(self.start_time, self.dt, values)
    }

    pub fn sub(&self, other: &TimeSeries) -> Result<TimeSeries> {
        self.check_same_grid(other)?;
        self.check_same_len(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        TimeSeries::new(self.start_time, self.dt, values)
    }

    pub fn scale(&self, factor: f64) -> TimeSeries {
        TimeSeries {
            start_time: self.start_time,
            dt: self.dt,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Trapezoidal integral of the series over `[time_at(i_lo), time_at(i_hi)]`.
    ///
    /// Exact for signals that are affine between consecutive samples; second
    /// order in `dt` on smooth signals.
    pub fn integrate_window(&self, i_lo: usize, i_hi: usize) -> Result<f64> {
        if i_lo >= i_hi {
            return Err(Error::EmptyWindow { lo: i_lo, hi: i_hi });
        }
        if i_hi >= self.len() {
            return Err(Error::WindowOutOfRange {
                lo: i_lo,
                hi: i_hi,
                len: self.len(),
            });
        }
        let mut acc = 0.5 * (self.values[i_lo] + self.values[i_hi]);
        for v in &self.values[i_lo + 1..i_hi] {
            acc += v;
        }
        Ok(acc * self.dt)
    }
}

impl std::ops::Index<usize> for TimeSeries {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Number of whole steps of size `dt` in `span`, or `None` when the ratio is
/// not an integer (within [`STEP_RATIO_TOL`] of the nearest one) or not
/// positive.
pub(crate) fn span_steps(span: f64, dt: f64) -> Option<usize> {
    if !span.is_finite() || !dt.is_finite() || dt <= 0.0 || span <= 0.0 {
        return None;
    }
    let ratio = span / dt;
    let rounded = ratio.round();
    if rounded < 1.0 || (ratio - rounded).abs() > STEP_RATIO_TOL * ratio.max(1.0) {
        return None;
    }
    Some(rounded as usize)
}
