//! Sliding-window trend and slope estimation.
//!
//! Over a window of `W` samples the signal is modeled locally as an affine
//! function `a0 + a1*tau` of the window-local time `tau in [0, T]`,
//! `T = (W - 1) * dt`. Writing the model in the operational domain and
//! differentiating with respect to the operational variable isolates the
//! intercept; multiplying through by enough inverse powers turns every term
//! into an iterated time integral, which acts as a low-pass filter on
//! measurement noise. The two resulting identities form a triangular system
//! for `(a0, a1)`:
//!
//! * `B[x] = a0 * B[1] + a1 * B[tau]`, where `B` annihilates the slope in
//!   the continuum, and
//! * `A[x] = a0 * A[1] + a1 * A[tau]`, a plain iterated integral,
//!
//! with kernels `A ~ (T - tau)^(n-2)` and `B ~ 2(T - tau)^(n-1)/(n-1) -
//! tau (T - tau)^(n-2)` (up to factorials) for integration order `n >= 2`.
//!
//! On the grid every functional is evaluated with the trapezoidal rule, and
//! the basis moments `A[1], A[tau], B[1], B[tau]` are computed with the
//! *same* rule before solving the 2x2 system. Because the rule is linear,
//! the solve recovers affine signals exactly for every `dt` and `W`, and
//! converges to the continuous least-squares fit at second order in `dt`.
//!
//! Estimates are referenced to the window's right edge (the current
//! instant): `mean_at_end = a0 + a1 * T` and `slope = a1`.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// What `estimate_trend` returns before a full window of samples exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WarmupPolicy {
    /// Report the latest raw sample with zero slope and flag the estimate.
    HoldLastSampleZeroSlope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub window_samples: usize,
    pub integration_order: u32,
    pub warmup_policy: WarmupPolicy,
}

impl EstimatorConfig {
    pub fn new(window_samples: usize, integration_order: u32) -> Result<Self> {
        if window_samples < 3 {
            return Err(Error::InvalidParam {
                name: "window_samples",
                value: window_samples as f64,
                reason: "a slope is only identifiable from three or more samples",
            });
        }
        if integration_order < 2 {
            return Err(Error::InvalidParam {
                name: "integration_order",
                value: integration_order as f64,
                reason: "the iterated-integral construction needs order >= 2",
            });
        }
        Ok(Self {
            window_samples,
            integration_order,
            warmup_policy: WarmupPolicy::HoldLastSampleZeroSlope,
        })
    }
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self::new(10, 2).expect("default config is valid")
    }
}

/// Windowed affine fit referenced to the window's right edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendEstimate {
    /// Estimated mean of the signal at the window end (signal units).
    pub mean_at_end: f64,
    /// Estimated derivative of the mean (signal units per day).
    pub slope: f64,
    /// Absolute time of the window's right edge (days).
    pub window_end_time: f64,
    /// True when the estimate is a warm-up placeholder.
    pub is_warmup: bool,
}

/// Continuous-time kernels of the windowed fit: `a0 = integral of
/// w0 * x` and `a1 = integral of w1 * x` over `[0, T]` for the local model.
#[derive(Debug, Clone, Copy)]
pub struct KernelWeights {
    order: u32,
    window: f64,
}

impl KernelWeights {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    /// Kernel extracting the window-origin intercept `a0`.
    pub fn intercept_weight(&self, tau: f64) -> f64 {
        let t = self.window;
        let m = (self.order - 2) as i32;
        let m_fact = factorial(self.order - 2);
        let r = (t - tau).powi(m) / m_fact;
        let big_r = (t - tau).powi(m + 1) / (m_fact * (m as f64 + 1.0));
        let b0 = t.powi(m + 2) / (m_fact * (m as f64 + 1.0) * (m as f64 + 2.0));
        (2.0 * big_r - tau * r) / b0
    }

    /// Kernel extracting the slope `a1`.
    pub fn slope_weight(&self, tau: f64) -> f64 {
        let t = self.window;
        let m = (self.order - 2) as i32;
        let m_fact = factorial(self.order - 2);
        let r = (t - tau).powi(m) / m_fact;
        let a0 = t.powi(m + 1) / (m_fact * (m as f64 + 1.0));
        let a1 = t.powi(m + 2) / (m_fact * (m as f64 + 1.0) * (m as f64 + 2.0));
        (r - a0 * self.intercept_weight(tau)) / a1
    }
}

/// Closed-form kernels for a window of physical length `window > 0`.
///
/// The derived forms satisfy the moment conditions `int w0 = 1`,
/// `int w0 tau = 0`, `int w1 = 0`, `int w1 tau = 1`, and for order 2 they
/// coincide with the continuous least-squares kernels.
pub fn derive_kernel_weights(cfg: &EstimatorConfig, window: f64) -> Result<KernelWeights> {
    if !window.is_finite() || window <= 0.0 {
        return Err(Error::InvalidParam {
            name: "window",
            value: window,
            reason: "window length must be positive",
        });
    }
    Ok(KernelWeights {
        order: cfg.integration_order,
        window,
    })
}

/// Windowed affine fit of `x` over the `window_samples` samples ending at
/// `end_index`.
///
/// Before a full window exists the warm-up policy applies: the latest raw
/// sample is reported with zero slope and the estimate is flagged.
pub fn estimate_trend(
    x: &TimeSeries,
    end_index: usize,
    cfg: &EstimatorConfig,
) -> Result<TrendEstimate> {
    let w = cfg.window_samples;
    if end_index >= x.len() {
        return Err(Error::WindowOutOfRange {
            lo: end_index,
            hi: end_index,
            len: x.len(),
        });
    }
    if end_index + 1 < w {
        return Ok(TrendEstimate {
            mean_at_end: x[end_index],
            slope: 0.0,
            window_end_time: x.time_at(end_index),
            is_warmup: true,
        });
    }

    let lo = end_index + 1 - w;
    let dt = x.dt();
    let span = (w - 1) as f64 * dt;
    let m = (cfg.integration_order - 2) as i32;
    let m_fact = factorial(cfg.integration_order - 2);
    let m1_fact = m_fact * (m as f64 + 1.0);

    // Trapezoidal evaluations of the two functionals applied to the data and
    // to the affine basis {1, tau}.
    let mut a_x = 0.0;
    let mut b_x = 0.0;
    let mut a_one = 0.0;
    let mut a_tau = 0.0;
    let mut b_one = 0.0;
    let mut b_tau = 0.0;
    for j in 0..w {
        let tau = j as f64 * dt;
        let c = if j == 0 || j == w - 1 { 0.5 * dt } else { dt };
        let rem = span - tau;
        let r = rem.powi(m) / m_fact;
        let big_r = rem.powi(m + 1) / m1_fact;
        let q = 2.0 * big_r - tau * r;
        let xv = x[lo + j];
        a_x += c * r * xv;
        b_x += c * q * xv;
        a_one += c * r;
        a_tau += c * r * tau;
        b_one += c * q;
        b_tau += c * q * tau;
    }

    // Solve [b_one b_tau; a_one a_tau] (a0, a1)^T = (b_x, a_x)^T. The
    // determinant is ~ (T^n / n!)^2 > 0 for every valid window.
    let det = b_one * a_tau - b_tau * a_one;
    let a0 = (a_tau * b_x - b_tau * a_x) / det;
    let a1 = (b_one * a_x - a_one * b_x) / det;

    Ok(TrendEstimate {
        mean_at_end: a0 + a1 * span,
        slope: a1,
        window_end_time: x.time_at(end_index),
        is_warmup: false,
    })
}

/// Splits `x` into a trend series (the windowed mean at each instant) and
/// the fluctuation residual. The two parts sum back to `x` exactly.
pub fn decompose(x: &TimeSeries, cfg: &EstimatorConfig) -> Result<(TimeSeries, TimeSeries)> {
    if x.len() < cfg.window_samples {
        return Err(Error::SeriesTooShort {
            needed: cfg.window_samples,
            len: x.len(),
        });
    }
    let mut trend = TimeSeries::new(x.start_time(), x.dt(), Vec::with_capacity(x.len()))?;
    for i in 0..x.len() {
        trend.push(estimate_trend(x, i, cfg)?.mean_at_end);
    }
    let fluctuation = x.sub(&trend)?;
    Ok((trend, fluctuation))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}
