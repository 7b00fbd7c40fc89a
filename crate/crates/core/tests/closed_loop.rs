//! Closed-loop properties of the two controllers, checked against
//! independently derived fixed points and exact replay identities.

use invsim::scenario::fixtures;
use invsim::*;

/// With the believed model equal to the plant and the true demand supplied
/// over the horizon, the predictor replays the plant's own Euler steps, so
/// the prediction must equal the realized inventory bit for bit.
#[test]
fn predictor_replays_the_plant_exactly() {
    let params = PlantParams {
        yield_k: 0.9,
        decay_sigma: 0.05,
        lead_time: 3.0,
        dt: 0.5,
        y0: 40.0,
        clamp_inventory: false,
    };
    let horizon = params.delay_depth().unwrap();
    let controller_params = ControllerParams {
        variant: ControllerVariant::SmithP,
        k_model: params.yield_k,
        sigma_model: params.decay_sigma,
        alpha: 1.0,
        gain_kp: 0.1,
        clamp_u: true,
    };
    let est = EstimatorConfig::default();
    let mut controller =
        Controller::new(controller_params, est, est, params.lead_time, params.dt, 0.0).unwrap();
    let mut state = PlantState::new(&params).unwrap();

    let n = 60;
    let u: Vec<f64> = (0..n).map(|k| 5.0 + 3.0 * (0.3 * k as f64).sin()).collect();
    let d: Vec<f64> = (0..n).map(|k| 4.0 + (0.2 * k as f64).cos()).collect();

    let mut predicted = Vec::new();
    let mut realized = Vec::new();
    for k in 0..n {
        if k + horizon < n {
            let path = &d[k..k + horizon];
            predicted.push((k, controller.predict_output(state.y, path).unwrap()));
        }
        controller.record_control(u[k]);
        plant_step(&mut state, &params, u[k], d[k]).unwrap();
        realized.push(state.y);
    }
    for (k, y_hat) in predicted {
        let y_true = realized[k + horizon - 1];
        assert_eq!(
            y_hat.to_bits(),
            y_true.to_bits(),
            "prediction at step {k}: {y_hat} vs realized {y_true}"
        );
    }
}

/// Noise-free classic-plant harness. Demand ramps in from zero so the
/// startup never leaves unserved demand (which the clamped inventory would
/// hide from the disturbance estimator), then holds at 10.
fn noise_free_classic(variant: ControllerVariant, plant_yield: f64) -> ScenarioConfig {
    let mut cfg = fixtures::builtin(if variant == ControllerVariant::SmithP {
        "S2"
    } else {
        "S3"
    })
    .unwrap();
    cfg.id = format!("prop-{plant_yield}");
    cfg.plant.yield_k = plant_yield;
    cfg.demand = scenario::DemandProgram {
        base: PiecewiseLinear::new(vec![(0.0, 0.0), (10.0, 0.0), (30.0, 10.0)]).unwrap(),
        noise: NoiseKind::None,
        noise_start: 0.0,
    };
    cfg
}

/// Fixed point of the mismatched model-based loop: constant demand `d`,
/// constant reference, plant yield `k`, believed yield `km` give a steady
/// offset `d (1 - km / k)(1 / Kp + L)`. The model-free loop's fixed point
/// is offset-free for any plant yield.
#[test]
fn steady_offsets_match_the_algebraic_fixed_points() {
    let demand = 10.0;
    let lead = 5.0;
    let kp = 0.1;
    let km = 0.855;

    for plant_yield in [0.8, 0.9, 0.95, 1.05, 1.2] {
        let mut cfg = noise_free_classic(ControllerVariant::SmithP, plant_yield);
        cfg.controller.k_model = km;
        let got = run_scenario(&cfg).unwrap().metrics.steady_state_error;
        let want = demand * (1.0 - km / plant_yield) * (1.0 / kp + lead);
        assert!(
            (got - want).abs() <= 0.05 * want.abs().max(1.0),
            "plant yield {plant_yield}: steady offset {got} vs fixed point {want}"
        );
    }
}

#[test]
fn model_free_steady_error_is_insensitive_to_the_plant_yield() {
    let mut offsets = Vec::new();
    for plant_yield in [0.8, 1.0, 1.2] {
        let cfg = noise_free_classic(ControllerVariant::ModelFreeIp, plant_yield);
        let sse = run_scenario(&cfg).unwrap().metrics.steady_state_error;
        assert!(
            sse.abs() < 1.0,
            "plant yield {plant_yield}: steady error {sse} above 1% of the reference"
        );
        offsets.push(sse);
    }
    // Meanwhile the model-based offsets grow with the mismatch from the
    // believed yield 0.95.
    let mut previous = 0.0;
    for plant_yield in [0.95, 0.9, 0.8] {
        let mut cfg = noise_free_classic(ControllerVariant::SmithP, plant_yield);
        cfg.controller.k_model = 0.95;
        let sse = run_scenario(&cfg)
            .unwrap()
            .metrics
            .steady_state_error
            .abs();
        assert!(
            sse + 1e-9 >= previous,
            "offset should grow with mismatch, got {sse} after {previous}"
        );
        previous = sse;
    }
    println!("model-free steady errors across plant yields 0.8..1.2: {offsets:?}");
}

/// With an exact model the loop settles at the plant equilibrium: orders
/// at `d / k` and the inventory on its reference.
#[test]
fn exact_model_settles_at_the_plant_equilibrium() {
    let mut cfg = noise_free_classic(ControllerVariant::SmithP, 0.95);
    cfg.controller.k_model = 0.95;
    let r = run_scenario(&cfg).unwrap();
    let n = r.series.y.len();
    let tail = n - n / 5;
    let mean_u: f64 = (tail..n).map(|i| r.series.u[i]).sum::<f64>() / (n - tail) as f64;
    let mean_e: f64 = (tail..n)
        .map(|i| r.series.y[i] - r.series.y_ref[i])
        .sum::<f64>()
        / (n - tail) as f64;
    assert!(
        (mean_u - 10.0 / 0.95).abs() < 1e-3,
        "steady order {mean_u} vs {}",
        10.0 / 0.95
    );
    assert!(mean_e.abs() < 1e-2, "steady tracking error {mean_e}");
}

/// Rescaling the ultra-local gain rescales the internal disturbance
/// bookkeeping but leaves the closed-loop steady state unchanged, and the
/// steady order settles at the plant's own equilibrium `d / k`.
#[test]
fn ultra_local_gain_does_not_move_the_steady_state() {
    // The fixed point is independent of the gain, but not the approach to
    // it: the gap between the ultra-local gain and the plant's own input
    // gain feeds `(alpha - k) u` back through the disturbance record, so
    // convergence slows as alpha leaves the plant-gain neighbourhood. The
    // steady-state claim is asserted over a converged range and a run long
    // enough to outlast the transients.
    let mut steady_levels = Vec::new();
    for alpha in [0.9, 1.0, 1.2] {
        let mut cfg = noise_free_classic(ControllerVariant::ModelFreeIp, 0.95);
        cfg.duration = 600.0;
        cfg.controller.alpha = alpha;
        let r = run_scenario(&cfg).unwrap();
        let n = r.series.y.len();
        let tail = n - n / 5;
        let mean_y: f64 =
            (tail..n).map(|i| r.series.y[i]).sum::<f64>() / (n - tail) as f64;
        let mean_u: f64 =
            (tail..n).map(|i| r.series.u[i]).sum::<f64>() / (n - tail) as f64;
        assert!(
            (mean_u - 10.0 / 0.95).abs() < 0.05,
            "alpha {alpha}: steady order {mean_u} vs equilibrium {}",
            10.0 / 0.95
        );
        steady_levels.push(mean_y);
    }
    for pair in steady_levels.windows(2) {
        assert!(
            (pair[0] - pair[1]).abs() < 0.2,
            "steady inventory moved with alpha: {steady_levels:?}"
        );
    }
}

/// On the perishable plant the ultra-local disturbance converges to the
/// physical value `sigma y + d`: compare the logged lead-time forecast of
/// the disturbance with the realized decay-plus-demand load.
#[test]
fn disturbance_forecast_converges_to_decay_plus_demand() {
    let mut cfg = fixtures::builtin("S4").unwrap();
    cfg.id = "f-oracle".into();
    // Demand ramps in cleanly, then holds at 5 on top of the reference
    // build-up, so both terms of the physical load are exercised.
    cfg.demand.base =
        PiecewiseLinear::new(vec![(0.0, 0.0), (20.0, 0.0), (40.0, 5.0)]).unwrap();
    let r = run_scenario(&cfg).unwrap();
    let f_hat = r.series.f_forecast.as_ref().expect("model-free run");
    let horizon = (cfg.plant.lead_time / cfg.plant.dt).round() as usize;
    let n = r.series.y.len();
    let sigma = cfg.plant.decay_sigma;

    // Steady tail: y holds the reference, F = sigma y + d exactly.
    for i in n - n / 5..n - horizon {
        let truth = sigma * r.series.y[i + horizon] + r.series.d[i + horizon];
        assert!(
            (f_hat[i] - truth).abs() < 0.1,
            "steady disturbance forecast {} vs physical load {truth} at {i}",
            f_hat[i]
        );
    }

    // Mid-ramp the forecast follows the growing load while the startup
    // ring is still decaying; a loose band documents the tracking.
    let mid_lo = (90.0 / cfg.plant.dt) as usize;
    let mid_hi = (150.0 / cfg.plant.dt) as usize;
    for i in (mid_lo..mid_hi).step_by(50) {
        let truth = sigma * r.series.y[i + horizon] + r.series.d[i + horizon];
        assert!(
            (f_hat[i] - truth).abs() < 1.5,
            "ramp disturbance forecast {} vs {truth} at {i}",
            f_hat[i]
        );
    }
}

/// Demand shocks: the tracking error must come back below its pre-shock
/// envelope before the next shock hits. Recovery times are recorded, not
/// thresholded.
#[test]
fn shock_recovery_times_are_finite() {
    let cfg = fixtures::builtin("S7").unwrap();
    let r = run_scenario(&cfg).unwrap();
    let n = r.series.y.len();
    let dt = cfg.plant.dt;
    let idx = |t: f64| (t / dt).round() as usize;
    let e: Vec<f64> = (0..n)
        .map(|i| r.series.y[i] - r.series.y_ref[i])
        .collect();

    // Orders stay non-negative under the clamp whatever the shocks do.
    assert!(r.series.u.values().iter().all(|&u| u >= 0.0));

    let shocks = [110.0, 170.0, 230.0];
    let run_end = cfg.duration;
    for (s, shock) in shocks.iter().enumerate() {
        let window_end = shocks.get(s + 1).copied().unwrap_or(run_end);
        let pre_env = e[idx(shock - 15.0)..idx(*shock)]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let spike = e[idx(*shock)..idx(window_end)]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let recovery = (idx(shock + 1.0)..idx(window_end))
            .find(|&i| e[i].abs() <= pre_env)
            .map(|i| r.series.y.time_at(i) - shock);
        let recovery = recovery.unwrap_or_else(|| {
            panic!("no recovery below the pre-shock envelope {pre_env} after t = {shock}")
        });
        println!(
            "shock at {shock}: pre-shock envelope {pre_env:.2}, spike {spike:.1}, recovered after {recovery:.1} days"
        );
    }
}

/// During warm-up the controller runs pure feedforward: the emitted order
/// is the (clamped) demand forecast pushed through the believed gain.
#[test]
fn warmup_orders_are_pure_feedforward() {
    let cfg = fixtures::builtin("S1").unwrap();
    let r = run_scenario(&cfg).unwrap();
    let mut saw_warmup = false;
    for i in 0..r.series.u.len() {
        if r.series.warmup[i] {
            saw_warmup = true;
            let expected = r.series.d_forecast[i].max(0.0) / cfg.controller.k_model;
            assert_eq!(r.series.u[i], expected, "warm-up order at {i}");
        }
    }
    assert!(saw_warmup);
}
