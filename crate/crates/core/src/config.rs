//! On-disk scenario format: flat `key = value` lines with dotted sections.
//!
//! ```text
//! id = S1
//! duration = 200
//! seed = 42
//! plant.yield_k = 0.95
//! plant.decay_sigma = 0
//! plant.lead_time = 5
//! plant.dt = 1
//! plant.y0 = 0
//! plant.clamp_inventory = true
//! controller.variant = smith_p
//! controller.k_model = 0.95
//! controller.gain_kp = 0.1
//! controller.clamp_u = true
//! estimator.window_samples = 10
//! estimator.integration_order = 2
//! reference.knots = 0:0, 15:0, 35:100
//! demand.base.knots = 0:10
//! demand.noise.kind = uniform
//! demand.noise.lo = -1
//! demand.noise.hi = 1
//! demand.noise.start = 50
//! ```
//!
//! `#` starts a comment. Unknown or duplicate keys are errors, not
//! warnings. `forecast_mode` may be `estimated` (default) or `oracle`; the
//! error-injected oracle used by gain sweeps is constructed
//! programmatically, not from files.

use std::collections::BTreeMap;

use crate::control::{ControllerParams, ControllerVariant};
use crate::error::{Error, Result};
use crate::estimate::EstimatorConfig;
use crate::noise::NoiseKind;
use crate::plant::PlantParams;
use crate::pwl::PiecewiseLinear;
use crate::scenario::{DemandProgram, ForecastMode, ScenarioConfig};

struct Fields {
    map: BTreeMap<String, (usize, String)>,
}

impl Fields {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: "expected 'key = value'".into(),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Config {
                    line,
                    message: "empty key or value".into(),
                });
            }
            if map.insert(key.clone(), (line, value)).is_some() {
                return Err(Error::Config {
                    line,
                    message: format!("duplicate key '{key}'"),
                });
            }
        }
        Ok(Self { map })
    }

    fn take(&mut self, key: &str) -> Result<(usize, String)> {
        self.map.remove(key).ok_or_else(|| Error::Config {
            line: 0,
            message: format!("missing required key '{key}'"),
        })
    }

    fn take_opt(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn take_string(&mut self, key: &str) -> Result<String> {
        Ok(self.take(key)?.1)
    }

    fn take_f64(&mut self, key: &str) -> Result<f64> {
        let (line, value) = self.take(key)?;
        parse_f64(&value, key, line)
    }

    fn take_f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take_opt(key) {
            Some((line, value)) => parse_f64(&value, key, line),
            None => Ok(default),
        }
    }

    fn take_u64(&mut self, key: &str) -> Result<u64> {
        let (line, value) = self.take(key)?;
        value.parse().map_err(|_| Error::Config {
            line,
            message: format!("'{key}' must be an unsigned integer, got '{value}'"),
        })
    }

    fn take_bool(&mut self, key: &str) -> Result<bool> {
        let (line, value) = self.take(key)?;
        match value.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(Error::Config {
                line,
                message: format!("'{key}' must be true or false, got '{value}'"),
            }),
        }
    }

    fn take_knots(&mut self, key: &str) -> Result<PiecewiseLinear> {
        let (line, value) = self.take(key)?;
        let mut knots = Vec::new();
        for part in value.split(',') {
            let part = part.trim();
            let (t, v) = part.split_once(':').ok_or_else(|| Error::Config {
                line,
                message: format!("knot '{part}' must be 'time:value'"),
            })?;
            knots.push((
                parse_f64(t.trim(), key, line)?,
                parse_f64(v.trim(), key, line)?,
            ));
        }
        PiecewiseLinear::new(knots).map_err(|e| Error::Config {
            line,
            message: format!("invalid knots for '{key}': {e}"),
        })
    }

    fn finish(self) -> Result<()> {
        if let Some((key, (line, _))) = self.map.into_iter().next() {
            return Err(Error::Config {
                line,
                message: format!("unknown key '{key}'"),
            });
        }
        Ok(())
    }
}

fn parse_f64(value: &str, key: &str, line: usize) -> Result<f64> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("'{key}' must be a number, got '{value}'"),
    })
}

/// Parses and validates a scenario description.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let mut f = Fields::parse(text)?;

    let id = f.take_string("id")?;
    let duration = f.take_f64("duration")?;
    let seed = f.take_u64("seed")?;
    let forecast_mode = match f.take_opt("forecast_mode") {
        None => ForecastMode::Estimated,
        Some((line, value)) => match value.as_str() {
            "estimated" => ForecastMode::Estimated,
            "oracle" => ForecastMode::Oracle,
            _ => {
                return Err(Error::Config {
                    line,
                    message: format!(
                        "forecast_mode must be 'estimated' or 'oracle', got '{value}'"
                    ),
                })
            }
        },
    };

    let plant = PlantParams {
        yield_k: f.take_f64("plant.yield_k")?,
        decay_sigma: f.take_f64("plant.decay_sigma")?,
        lead_time: f.take_f64("plant.lead_time")?,
        dt: f.take_f64("plant.dt")?,
        y0: f.take_f64("plant.y0")?,
        clamp_inventory: f.take_bool("plant.clamp_inventory")?,
    };

    let (variant_line, variant_str) = f.take("controller.variant")?;
    let variant = match variant_str.as_str() {
        "smith_p" => ControllerVariant::SmithP,
        "model_free_ip" => ControllerVariant::ModelFreeIp,
        _ => {
            return Err(Error::Config {
                line: variant_line,
                message: format!(
                    "controller.variant must be 'smith_p' or 'model_free_ip', got '{variant_str}'"
                ),
            })
        }
    };
    let controller = ControllerParams {
        variant,
        k_model: f.take_f64_or("controller.k_model", 1.0)?,
        sigma_model: f.take_f64_or("controller.sigma_model", 0.0)?,
        alpha: f.take_f64_or("controller.alpha", 1.0)?,
        gain_kp: f.take_f64("controller.gain_kp")?,
        clamp_u: f.take_bool("controller.clamp_u")?,
    };

    let window = f.take_f64("estimator.window_samples")?;
    let order = f.take_f64("estimator.integration_order")?;
    let f_window = f.take_f64_or("estimator.f_window_samples", -1.0)?;
    if window.fract() != 0.0
        || window < 0.0
        || order.fract() != 0.0
        || order < 0.0
        || f_window.fract() != 0.0
    {
        return Err(Error::Config {
            line: 0,
            message: "estimator settings must be non-negative integers".into(),
        });
    }
    let estimator = EstimatorConfig::new(window as usize, order as u32)?;
    let f_window_samples = if f_window < 0.0 {
        None
    } else {
        Some(f_window as usize)
    };

    let reference = f.take_knots("reference.knots")?;
    let base = f.take_knots("demand.base.knots")?;

    let (noise_line, noise_kind) = f.take("demand.noise.kind")?;
    let noise = match noise_kind.as_str() {
        "none" => NoiseKind::None,
        "uniform" => NoiseKind::Uniform {
            lo: f.take_f64("demand.noise.lo")?,
            hi: f.take_f64("demand.noise.hi")?,
        },
        "gaussian" => NoiseKind::Gaussian {
            mean: f.take_f64("demand.noise.mean")?,
            std: f.take_f64("demand.noise.std")?,
        },
        _ => {
            return Err(Error::Config {
                line: noise_line,
                message: format!(
                    "demand.noise.kind must be none, uniform or gaussian, got '{noise_kind}'"
                ),
            })
        }
    };
    let noise_start = f.take_f64_or("demand.noise.start", 0.0)?;

    f.finish()?;

    let cfg = ScenarioConfig {
        id,
        plant,
        controller,
        estimator,
        f_window_samples,
        reference,
        demand: DemandProgram {
            base,
            noise,
            noise_start,
        },
        duration,
        seed,
        forecast_mode,
    };
    cfg.validate()?;
    Ok(cfg)
}
