//! Closed-loop simulation of inventory control for delay systems.
//!
//! The crate models a single-echelon inventory whose replenishment arrives
//! after a known lead time, and closes the loop with one of two controllers:
//!
//! * a model-based proportional controller acting on a Smith-predictor
//!   estimate of the future inventory, and
//! * a model-free "intelligent" proportional controller built on an
//!   ultra-local model whose lumped disturbance term is re-estimated from
//!   measured data at every step.
//!
//! Both controllers are fed by the same short-term forecaster: a sliding
//! windowed affine fit obtained from iterated-integral (operational
//! calculus) identities, linearly extrapolated over the lead time.
//!
//! The [`scenario`] module wires everything into deterministic, seeded
//! scenario runs and computes tracking and bullwhip metrics; [`output`]
//! serializes runs to CSV and [`config`] parses the on-disk scenario format.

pub mod config;
pub mod control;
pub mod delay;
pub mod error;
pub mod estimate;
pub mod forecast;
pub mod metrics;
pub mod noise;
pub mod output;
pub mod plant;
pub mod pwl;
pub mod scenario;
pub mod series;

pub use control::{
    ip_law, smith_law, ControlDecision, Controller, ControllerParams, ControllerVariant,
};
pub use delay::DelayLine;
pub use error::{Error, Result};
pub use estimate::{
    decompose, derive_kernel_weights, estimate_trend, EstimatorConfig, KernelWeights,
    TrendEstimate,
};
pub use forecast::{forecast, forecast_path, Forecast};
pub use metrics::{compute_metrics, Metrics};
pub use noise::{NoiseKind, NoiseSource};
pub use plant::{plant_step, run_open_loop, PlantParams, PlantState};
pub use pwl::PiecewiseLinear;
pub use scenario::{
    bias_drift_experiment, fixtures, gain_sweep, run_scenario, DemandProgram, ForecastMode,
    GainSweepEntry, RunResult, RunSeries, ScenarioConfig,
};
pub use series::TimeSeries;
