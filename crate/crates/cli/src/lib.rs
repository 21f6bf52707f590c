//! Command-line front end for `kicksim`: runs scenarios, duration sweeps and
//! kick comparisons from flat configuration files and writes trajectory CSV
//! and summary JSON for external plotting.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure.

pub mod config;
pub mod error;
pub mod output;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kicksim::{
    classify_regime, effective_kick_area, field_to_voltage, kick_vs_analytic, peak_rabi_frequency,
    peak_voltage_pi, summarize, sweep_tau, InitialState, RunSummary, ScenarioConfig,
};
use serde_json::{json, Value};

pub use config::{preset, Drive, Frame, Layer, Origin, RunConfig, ScenarioKind, PRESETS};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "kicksim", version, about = "Pulse-level simulation of a driven qubit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario; writes the trajectory CSV and summary JSON.
    Simulate(CommonArgs),
    /// Re-run the scenario at several pulse widths; one CSV row per width.
    Sweep(WidthArgs),
    /// Distance of carrier-free pulses from the ideal kick, per width.
    CompareKick(WidthArgs),
    /// Print field, Rabi frequency and voltage figures for the pulse.
    Calibrate(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Built-in starting configuration; the file and flags override it.
    #[arg(long, value_parser = PRESETS)]
    pub preset: Option<String>,
    #[arg(long, value_parser = ["magnus2", "rk4"])]
    pub method: Option<String>,
    #[arg(long, value_parser = ["on", "off"])]
    pub carrier: Option<String>,
    /// Print the resolved configuration in SI keys and exit.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated pulse widths in picoseconds.
    #[arg(long)]
    pub widths_ps: Option<String>,
}

/// Merges preset, file and flags into one resolved configuration.
pub fn load(args: &CommonArgs, widths_ps: Option<&str>) -> Result<RunConfig, CliError> {
    let mut layer = match &args.preset {
        Some(name) => preset(name)?,
        None => Layer::default(),
    };
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file = Layer::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        layer = layer.overlay(file);
    }
    let mut flags = Layer::default();
    if let Some(m) = &args.method {
        flags.set("method", m, Origin::Flag("--method"))?;
    }
    if let Some(c) = &args.carrier {
        flags.set("carrier", c, Origin::Flag("--carrier"))?;
    }
    if let Some(w) = widths_ps {
        flags.set("widths_ps", w, Origin::Flag("--widths-ps"))?;
    }
    RunConfig::resolve(&layer.overlay(flags))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let (common, widths) = match &cli.command {
        Command::Simulate(a) | Command::Calibrate(a) => (a, None),
        Command::Sweep(a) | Command::CompareKick(a) => (&a.common, a.widths_ps.as_deref()),
    };
    let config = load(common, widths)?;
    if common.dump_config {
        print!("{}", config.dump());
        return Ok(());
    }
    match cli.command {
        Command::Simulate(_) => simulate(&config, &common.out),
        Command::Sweep(_) => sweep(&config, &common.out),
        Command::CompareKick(_) => compare_kick(&config, &common.out),
        Command::Calibrate(_) => {
            print!("{}", calibrate(&config)?);
            Ok(())
        }
    }
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn inputs_json(config: &RunConfig, scenario: &ScenarioConfig) -> Result<Value, CliError> {
    let geometry = config.geometry()?;
    let start = scenario.initial.state();
    Ok(json!({
        "scenario": config.scenario.to_string(),
        "method": config.method.to_string(),
        "carrier": if config.carrier_enabled() { "on" } else { "off" },
        "omega0_rad_per_s": config.omega0,
        "dipole_moment_cm": config.dipole_moment,
        "area_rad": scenario.area(),
        "peak_field_v_per_m": scenario.pulse.amplitude(),
        "peak_voltage_v": field_to_voltage(scenario.pulse.amplitude(), &geometry),
        "width_s": config.width,
        "center_s": config.center,
        "t_start_s": config.t_start,
        "t_end_s": config.t_end,
        "dt_s": scenario.grid.dt(),
        "steps": scenario.grid.steps(),
        "carrier_rad_per_s": config.carrier_frequency,
        "initial": {
            "kind": match config.initial {
                InitialState::Ground => "ground",
                InitialState::Excited => "excited",
                InitialState::Custom(_) => "custom",
            },
            "a0_re": start.a0().re,
            "a0_im": start.a0().im,
            "a1_re": start.a1().re,
            "a1_im": start.a1().im,
        },
        "effective_length_m": config.effective_length,
        "stride": config.stride,
        "frame": config.frame.to_string(),
    }))
}

/// Summary JSON of a run; kick scenarios also carry the fidelity with the
/// carrier toggled.
pub fn summary_json(
    config: &RunConfig,
    scenario: &ScenarioConfig,
    summary: &RunSummary,
    other_carrier: Option<f64>,
) -> Result<Value, CliError> {
    let mut doc = json!({
        "fidelity": summary.final_fidelity,
        "max_coherence": summary.max_coherence,
        "final_coherence": summary.final_coherence,
        "final_sz": summary.final_sz,
        "final_bloch": {
            "x": summary.final_bloch.x,
            "y": summary.final_bloch.y,
            "z": summary.final_bloch.z,
        },
        "norm_drift": summary.norm_drift,
        "effective_kick_area": effective_kick_area(&scenario.pulse, &scenario.qubit),
        "omega0_tau": scenario.qubit.omega0() * scenario.pulse.width(),
        "regime": classify_regime(&scenario.qubit, scenario.pulse.width()).to_string(),
        "inputs": inputs_json(config, scenario)?,
    });
    if let Some(other) = other_carrier {
        let on = config.carrier_enabled();
        let (with, without) = if on { (summary.final_fidelity, other) } else { (other, summary.final_fidelity) };
        doc["fidelity_carrier_on"] = json!(with);
        doc["fidelity_carrier_off"] = json!(without);
    }
    Ok(doc)
}

pub fn simulate(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let scenario = config.scenario_config()?;
    let traj = scenario.run()?;
    let summary = summarize(&traj);
    let other = match config.scenario {
        ScenarioKind::Kick => Some(scenario.with_carrier(!config.carrier_enabled()).summary()?.final_fidelity),
        _ => None,
    };
    let doc = summary_json(config, &scenario, &summary, other)?;
    let csv = output::trajectory_csv(traj.samples(), config.stride, config.frame, config.carrier_frequency);
    let mut staged = output::Staged::new(out)?;
    staged.add(&config.trajectory_file, &csv)?;
    staged.add(&config.summary_file, &(serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n"))?;
    report(&staged.commit()?);
    Ok(())
}

fn require_widths(config: &RunConfig) -> Result<&[f64], CliError> {
    if config.widths.is_empty() {
        Err(CliError::Config(
            "no pulse widths: set `widths_ps` (or another unit) or pass --widths-ps".into(),
        ))
    } else {
        Ok(&config.widths)
    }
}

pub fn sweep(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let widths = require_widths(config)?;
    let result = sweep_tau(&config.scenario_config()?, widths)?;
    let mut staged = output::Staged::new(out)?;
    staged.add(&config.sweep_file, &output::sweep_csv(&result.rows))?;
    report(&staged.commit()?);
    Ok(())
}

/// The comparison is defined for carrier-free pulses only.
pub fn compare_kick(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    if config.carrier == Some(true) {
        return Err(CliError::Config(
            "compare-kick compares carrier-free pulses; the carrier cannot be switched on".into(),
        ));
    }
    let widths = require_widths(config)?;
    let scenario = config.scenario_config()?;
    let area = scenario.area();
    let rows = widths
        .iter()
        .map(|&w| {
            let d = kick_vs_analytic(&scenario.qubit, w, area, config.method)?;
            Ok((w, scenario.qubit.omega0() * w, d))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut staged = output::Staged::new(out)?;
    staged.add(&config.compare_file, &output::compare_csv(&rows))?;
    report(&staged.commit()?);
    Ok(())
}

/// `key = value` report of the drive figures of the configured pulse.
pub fn calibrate(config: &RunConfig) -> Result<String, CliError> {
    let scenario = config.scenario_config()?;
    let geometry = config.geometry()?;
    let (q, p) = (&scenario.qubit, &scenario.pulse);
    let lines = [
        ("peak_field_v_per_m", p.amplitude()),
        ("peak_rabi_mhz", peak_rabi_frequency(p, q) / (2.0 * PI * 1e6)),
        ("peak_voltage_v", field_to_voltage(p.amplitude(), &geometry)),
        ("pi_pulse_peak_voltage_v", peak_voltage_pi(q, p.width(), &geometry)?),
        ("pulse_area_rad", scenario.area()),
        ("effective_kick_area_rad", effective_kick_area(p, q)),
        ("omega0_tau", q.omega0() * p.width()),
    ];
    let mut text: String = lines.iter().map(|(k, v)| format!("{k} = {v:e}\n")).collect();
    text.push_str(&format!("regime = {}\n", classify_regime(q, p.width())));
    Ok(text)
}
