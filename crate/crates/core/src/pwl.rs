//! Piecewise-linear functions of time, used for reference trajectories and
//! demand base programs. Evaluation yields the value and the exact slope of
//! the active piece.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// `knots` are (time, value) pairs with strictly increasing times.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidParam {
                name: "knots",
                value: 0.0,
                reason: "need at least one knot",
            });
        }
        for pair in knots.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidParam {
                    name: "knots",
                    value: pair[1].0,
                    reason: "knot times must be strictly increasing",
                });
            }
        }
        for &(t, v) in &knots {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::NonFinite {
                    name: "knot",
                    value: if t.is_finite() { v } else { t },
                });
            }
        }
        Ok(Self { knots })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![(0.0, value)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn value(&self, t: f64) -> f64 {
        self.value_and_rate(t).0
    }

    /// Value and slope at `t`. Before the first knot and after the last the
    /// function holds its end value with zero slope; exactly at an interior
    /// knot the slope of the piece to the right applies.
    pub fn value_and_rate(&self, t: f64) -> (f64, f64) {
        let first = self.knots[0];
        let last = *self.knots.last().expect("non-empty");
        if t < first.0 {
            return (first.1, 0.0);
        }
        if t >= last.0 {
            return (last.1, 0.0);
        }
        // Find the piece [t_i, t_{i+1}) containing t.
        let i = match self
            .knots
            .binary_search_by(|&(kt, _)| kt.partial_cmp(&t).expect("finite"))
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let (t0, v0) = self.knots[i];
        let (t1, v1) = self.knots[i + 1];
        let slope = (v1 - v0) / (t1 - t0);
        (v0 + slope * (t - t0), slope)
    }
}
