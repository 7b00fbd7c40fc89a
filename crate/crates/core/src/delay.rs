//! Fixed-depth FIFO delay line realizing `u(t - L)` access.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::series::span_steps;

/// A delay of exactly `depth` pushes. Reads during warm-up return the fill
/// value ("the factory supplies nothing before t = 0" with the default 0).
#[derive(Debug, Clone)]
pub struct DelayLine {
    buf: VecDeque<f64>,
    depth: usize,
}

impl DelayLine {
    pub fn new(depth: usize, fill: f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParam {
                name: "depth",
                value: 0.0,
                reason: "delay depth must be at least one sample",
            });
        }
        let mut buf = VecDeque::with_capacity(depth + 1);
        buf.resize(depth, fill);
        Ok(Self { buf, depth })
    }

    /// Builds a line of depth `lead_time / dt`; the ratio must be a positive
    /// integer. Fractional delays are rejected, not interpolated.
    pub fn from_lead_time(lead_time: f64, dt: f64, fill: f64) -> Result<Self> {
        let depth = span_steps(lead_time, dt).ok_or(Error::NonIntegerStepRatio {
            name: "lead_time",
            value: lead_time,
            dt,
        })?;
        Self::new(depth, fill)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Pushes `value` and returns the value pushed `depth` pushes ago.
    pub fn push_read(&mut self, value: f64) -> f64 {
        self.buf.push_back(value);
        self.buf.pop_front().expect("delay buffer is never empty")
    }

    /// The value the next `push_read` will return.
    pub fn peek_oldest(&self) -> f64 {
        *self.buf.front().expect("delay buffer is never empty")
    }

    /// Current buffer contents, oldest first. After `n >= depth` pushes this
    /// is exactly the last `depth` pushed values.
    pub fn contents(&self) -> Vec<f64> {
        self.buf.iter().copied().collect()
    }
}
