//! Command-line frontend for the inventory control simulator.
//!
//! Exit codes: 0 success, 1 usage error, 2 configuration error (unknown
//! scenario, unreadable or invalid config file), 3 runtime error
//! (simulation failure, output I/O).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use invsim::scenario::fixtures;
use invsim::{
    bias_drift_experiment, config, gain_sweep, output, run_scenario, Metrics, RunResult,
    ScenarioConfig,
};

#[derive(Parser)]
#[command(
    name = "invsim",
    version,
    about = "Closed-loop inventory control simulation for delay systems",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario; write CSV with --out, print CSV or a metric
    /// summary on stdout
    Run {
        /// Built-in scenario id (see list-scenarios) or path to a config file
        #[arg(long)]
        scenario: String,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario's duration (days)
        #[arg(long)]
        duration: Option<f64>,
        /// Write the run as CSV to this path
        #[arg(long)]
        out: Option<PathBuf>,
        /// What to print on stdout
        #[arg(long, value_enum, default_value_t = Format::Summary)]
        format: Format,
    },
    /// Re-run a scenario across proportional gains under a bounded
    /// injected forecast error and tabulate the metrics per gain
    Sweep {
        #[arg(long)]
        scenario: String,
        /// Comma-separated proportional gains
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        gains: Vec<f64>,
        /// Bound of the injected forecast error
        #[arg(long, allow_negative_numbers = true)]
        bound: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        duration: Option<f64>,
        /// Write the table as CSV to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Open-loop biased-feedforward drift experiment on a scenario's plant
    BiasDrift {
        /// Constant bias added to the feedforward order rate
        #[arg(long, allow_negative_numbers = true)]
        bias: f64,
        /// Scenario supplying the plant parameters
        #[arg(long, default_value = "S1")]
        scenario: String,
        /// Experiment length (days)
        #[arg(long, default_value_t = 200.0)]
        duration: f64,
    },
    /// List the built-in scenario fixtures
    ListScenarios,
    /// Parse and validate a scenario id or config file
    Validate {
        #[arg(long)]
        scenario: String,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Summary,
}

enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

fn main() -> ExitCode {
    // Usage problems (unknown flags, missing arguments) exit with 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::from(!matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            )));
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Write to stdout, exiting quietly when the consumer has closed the pipe
/// (e.g. `invsim run ... | head`).
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(3);
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run {
            scenario,
            seed,
            duration,
            out,
            format,
        } => cmd_run(&scenario, seed, duration, out, format),
        Command::Sweep {
            scenario,
            gains,
            bound,
            seed,
            duration,
            out,
        } => cmd_sweep(&scenario, &gains, bound, seed, duration, out),
        Command::BiasDrift {
            bias,
            scenario,
            duration,
        } => cmd_bias_drift(bias, &scenario, duration),
        Command::ListScenarios => {
            let mut table = String::new();
            for id in fixtures::IDS {
                let cfg = fixtures::builtin(id).expect("built-in");
                let _ = writeln!(
                    table,
                    "{id:<6} dt={:<4} duration={:<5} seed={:<3} {}",
                    cfg.plant.dt,
                    cfg.duration,
                    cfg.seed,
                    fixtures::describe(id)
                );
            }
            emit(&table);
            Ok(())
        }
        Command::Validate { scenario } => {
            let cfg = resolve_scenario(&scenario)?;
            emit(&format!(
                "OK: scenario '{}' ({} samples at dt = {})\n",
                cfg.id,
                (cfg.duration / cfg.plant.dt).round() as usize + 1,
                cfg.plant.dt
            ));
            Ok(())
        }
    }
}

/// Built-in id first, then a config file path. Overrides never touch the
/// fixture definitions or the file.
fn resolve_scenario(name: &str) -> Result<ScenarioConfig, CliError> {
    if let Some(cfg) = fixtures::builtin(name) {
        return Ok(cfg);
    }
    let looks_like_path = name.contains('/') || name.contains('.');
    if !looks_like_path {
        return Err(CliError::Config(format!(
            "unknown scenario id '{name}' (see list-scenarios, or pass a config file path)"
        )));
    }
    let text = fs::read_to_string(name)
        .map_err(|e| CliError::Config(format!("cannot read '{name}': {e}")))?;
    config::parse_scenario(&text).map_err(|e| CliError::Config(format!("{name}: {e}")))
}

fn apply_overrides(cfg: &mut ScenarioConfig, seed: Option<u64>, duration: Option<f64>) {
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(duration) = duration {
        cfg.duration = duration;
    }
}

fn cmd_run(
    scenario: &str,
    seed: Option<u64>,
    duration: Option<f64>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let mut cfg = resolve_scenario(scenario)?;
    apply_overrides(&mut cfg, seed, duration);
    cfg.validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let result = run_scenario(&cfg).map_err(|e| CliError::Runtime(e.to_string()))?;

    if let Some(path) = &out {
        let file = fs::File::create(path)
            .map_err(|e| CliError::Runtime(format!("cannot create '{}': {e}", path.display())))?;
        output::write_csv(&result, std::io::BufWriter::new(file))
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    match format {
        Format::Csv => emit(&output::csv_string(&result)),
        Format::Summary => emit(&run_summary(&cfg, &result)),
    }
    Ok(())
}

fn run_summary(cfg: &ScenarioConfig, result: &RunResult) -> String {
    let warm = result.series.warmup.iter().filter(|w| **w).count();
    let n = result.series.y.len();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "scenario {} (seed {}, duration {} days, dt {})",
        cfg.id, cfg.seed, cfg.duration, cfg.plant.dt
    );
    let _ = writeln!(
        s,
        "  samples: {n} ({warm} warm-up; metrics over the {} post-warm-up samples, steady window = last 20%)",
        n - warm
    );
    let _ = write!(s, "{}", metrics_block(&result.metrics));
    s
}

fn metrics_block(m: &Metrics) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "  tracking_rmse:      {:.6}", m.tracking_rmse);
    let _ = writeln!(s, "  steady_state_error: {:.6}", m.steady_state_error);
    match m.bullwhip_ratio {
        Some(b) => {
            let _ = writeln!(s, "  bullwhip_ratio:     {b:.6}");
        }
        None => {
            let _ = writeln!(s, "  bullwhip_ratio:     undefined (constant demand)");
        }
    }
    let _ = writeln!(s, "  control_variance:   {:.6}", m.control_variance);
    let _ = writeln!(s, "  drift_slope:        {:.6}", m.drift_slope);
    s
}

fn cmd_sweep(
    scenario: &str,
    gains: &[f64],
    bound: f64,
    seed: Option<u64>,
    duration: Option<f64>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut cfg = resolve_scenario(scenario)?;
    apply_overrides(&mut cfg, seed, duration);
    let entries = gain_sweep(&cfg, gains, bound).map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut table = format!(
        "gain sweep on {} (bound {bound}, seed {}):\n",
        cfg.id, cfg.seed
    );
    let _ = writeln!(
        table,
        "{:>8}  {:>14}  {:>14}  {:>14}  {:>14}  {:>14}",
        "gain", "tracking_rmse", "steady_error", "error_envelope", "control_var", "bullwhip"
    );
    let mut csv = String::from(
        "gain,tracking_rmse,steady_state_error,steady_error_envelope,control_variance,bullwhip_ratio,drift_slope\n",
    );
    for e in &entries {
        let bullwhip = e
            .metrics
            .bullwhip_ratio
            .map_or("undefined".to_string(), |b| format!("{b:.4}"));
        let _ = writeln!(
            table,
            "{:>8}  {:>14.4}  {:>14.4}  {:>14.4}  {:>14.4}  {:>14}",
            e.gain,
            e.metrics.tracking_rmse,
            e.metrics.steady_state_error,
            e.steady_error_envelope,
            e.metrics.control_variance,
            bullwhip
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            e.gain,
            e.metrics.tracking_rmse,
            e.metrics.steady_state_error,
            e.steady_error_envelope,
            e.metrics.control_variance,
            e.metrics.bullwhip_ratio.unwrap_or(f64::NAN),
            e.metrics.drift_slope
        );
    }
    emit(&table);
    if let Some(path) = out {
        fs::write(&path, csv)
            .map_err(|e| CliError::Runtime(format!("cannot write '{}': {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_bias_drift(bias: f64, scenario: &str, duration: f64) -> Result<(), CliError> {
    let cfg = resolve_scenario(scenario)?;
    let metrics = bias_drift_experiment(bias, &cfg.plant, duration)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    emit(&format!(
        "bias drift on the {} plant (bias {bias}, duration {duration} days):\n{}  analytic drift slope for this feedforward parameterization: {bias}\n",
        cfg.id,
        metrics_block(&metrics)
    ));
    Ok(())
}
