//! Flat `key = value` run configuration.
//!
//! Every dimensional key carries its unit as a suffix (`width_ps`,
//! `omega0_ghz`, ...) and is converted to SI when read, so a value can never
//! be silently interpreted in the wrong unit. Configurations are assembled
//! from layers (preset, file, command-line flags); a later layer overrides
//! an earlier one field by field, and fields nobody set are derived from the
//! scenario kind.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use kicksim::propagation::default_step;
use kicksim::{
    DeviceGeometry, InitialState, Method, PulseSpec, QubitParams, QubitState, ScenarioConfig,
    TimeGrid,
};
use num_complex::Complex64;

use crate::error::CliError;

const NS: f64 = 1e-9;
const PS: f64 = 1e-12;

/// Which defaults fill the fields left unset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Resonant 23 ns Gaussian, area π, centered at 3τ in `[0, 6τ]`.
    Adiabatic,
    /// 0.1 ps kick of area π/2 at 5 ps in a 10 ps window.
    Kick,
    /// No defaults for the pulse: width, area or amplitude, center and
    /// window end must be given.
    Custom,
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::Adiabatic => "adiabatic",
            ScenarioKind::Kick => "kick",
            ScenarioKind::Custom => "custom",
        })
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "adiabatic" => Ok(ScenarioKind::Adiabatic),
            "kick" => Ok(ScenarioKind::Kick),
            "custom" => Ok(ScenarioKind::Custom),
            other => Err(format!("expected adiabatic, kick or custom, got {other:?}")),
        }
    }
}

/// Pulse strength, given either as envelope area or as peak field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drive {
    /// rad
    Area(f64),
    /// V/m
    Amplitude(f64),
}

/// Frame of the states written to the trajectory file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Lab,
    /// Rotating about z at the carrier frequency.
    Rotating,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Lab => "lab",
            Frame::Rotating => "rotating",
        })
    }
}

/// A fully resolved run configuration, all quantities in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    /// rad/s
    pub omega0: f64,
    /// C·m
    pub dipole_moment: f64,
    pub drive: Drive,
    /// s
    pub width: f64,
    /// s
    pub center: f64,
    /// s
    pub t_start: f64,
    /// s
    pub t_end: f64,
    /// Requested integration step, s.
    pub dt: f64,
    /// rad/s
    pub carrier_frequency: f64,
    /// `None` when nobody chose; runs then use the carrier.
    pub carrier: Option<bool>,
    pub method: Method,
    pub initial: InitialState,
    /// m
    pub effective_length: f64,
    /// Write every `stride`-th grid point (the final point is always written).
    pub stride: usize,
    pub frame: Frame,
    /// Pulse widths for `sweep` and `compare-kick`, s.
    pub widths: Vec<f64>,
    pub trajectory_file: String,
    pub summary_file: String,
    pub sweep_file: String,
    pub compare_file: String,
}

/// Canonical configuration fields, independent of the unit a key used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Field {
    Scenario,
    Omega0,
    DipoleMoment,
    Area,
    Amplitude,
    Width,
    Center,
    TStart,
    TEnd,
    Dt,
    CarrierFrequency,
    Carrier,
    Method,
    Initial,
    A0Re,
    A0Im,
    A1Re,
    A1Im,
    EffectiveLength,
    Stride,
    Frame,
    Widths,
    TrajectoryFile,
    SummaryFile,
    SweepFile,
    CompareFile,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    /// Number multiplied by the factor to reach SI.
    Number(f64),
    /// Comma-separated numbers multiplied by the factor.
    List(f64),
    Text,
}

const TIME_UNITS: [(&str, f64); 4] = [("s", 1.0), ("ns", NS), ("ps", PS), ("fs", 1e-15)];

/// Maps a key to its field and unit.
fn lookup(key: &str) -> Option<(Field, Kind)> {
    use Field::*;
    let ghz = 2.0 * PI * 1e9;
    let fixed = match key {
        "scenario" => Some((Scenario, Kind::Text)),
        "omega0_rad_per_s" => Some((Omega0, Kind::Number(1.0))),
        "omega0_ghz" => Some((Omega0, Kind::Number(ghz))),
        "dipole_moment_cm" => Some((DipoleMoment, Kind::Number(1.0))),
        "area_rad" => Some((Area, Kind::Number(1.0))),
        "amplitude_v_per_m" => Some((Amplitude, Kind::Number(1.0))),
        "carrier_rad_per_s" => Some((CarrierFrequency, Kind::Number(1.0))),
        "carrier_ghz" => Some((CarrierFrequency, Kind::Number(ghz))),
        "carrier" => Some((Carrier, Kind::Text)),
        "method" => Some((Method, Kind::Text)),
        "initial" => Some((Initial, Kind::Text)),
        "initial_a0_re" => Some((A0Re, Kind::Number(1.0))),
        "initial_a0_im" => Some((A0Im, Kind::Number(1.0))),
        "initial_a1_re" => Some((A1Re, Kind::Number(1.0))),
        "initial_a1_im" => Some((A1Im, Kind::Number(1.0))),
        "effective_length_m" => Some((EffectiveLength, Kind::Number(1.0))),
        "effective_length_um" => Some((EffectiveLength, Kind::Number(1e-6))),
        "stride" => Some((Stride, Kind::Text)),
        "frame" => Some((Frame, Kind::Text)),
        "trajectory_file" => Some((TrajectoryFile, Kind::Text)),
        "summary_file" => Some((SummaryFile, Kind::Text)),
        "sweep_file" => Some((SweepFile, Kind::Text)),
        "compare_file" => Some((CompareFile, Kind::Text)),
        _ => None,
    };
    if fixed.is_some() {
        return fixed;
    }
    let (base, unit) = key.rsplit_once('_')?;
    let (_, factor) = TIME_UNITS.iter().find(|(u, _)| *u == unit)?;
    let field = match base {
        "width" => Width,
        "center" => Center,
        "t_start" => TStart,
        "t_end" => TEnd,
        "dt" => Dt,
        "widths" => return Some((Widths, Kind::List(*factor))),
        _ => return None,
    };
    Some((field, Kind::Number(*factor)))
}

/// Where a value came from, for error messages.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Line(usize),
    Preset(&'static str),
    Flag(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    List(Vec<f64>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    origin: Origin,
    value: Value,
}

impl Entry {
    fn locate(&self) -> String {
        match &self.origin {
            Origin::Line(n) => format!("line {n}: `{}`", self.key),
            Origin::Preset(p) => format!("preset {p}: `{}`", self.key),
            Origin::Flag(f) => f.to_string(),
        }
    }

    fn fail(&self, reason: impl fmt::Display) -> CliError {
        CliError::Config(format!("{}: {reason}", self.locate()))
    }
}

/// Raw settings of one source, keyed by field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer {
    entries: BTreeMap<Field, Entry>,
}

/// Evaluates a number, `pi`, or a product/quotient chain such as `pi/2` or
/// `0.5*pi`.
fn eval_number(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = text;
    loop {
        let cut = rest.find(['*', '/']).unwrap_or(rest.len());
        let token = rest[..cut].trim();
        let x = match token {
            "pi" => PI,
            _ => token
                .parse::<f64>()
                .map_err(|_| format!("cannot read {text:?} as a number"))?,
        };
        value = if op == '*' { value * x } else { value / x };
        if cut == rest.len() {
            break;
        }
        op = rest[cut..].chars().next().unwrap_or('*');
        rest = &rest[cut + 1..];
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{text:?} is not a finite number"))
    }
}

impl Layer {
    /// Parses `key = value` lines. `#` starts a comment; blank lines are
    /// ignored. Unknown keys, malformed lines and fields set twice are
    /// errors naming the line.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut layer = Layer::default();
        for (index, raw) in text.lines().enumerate() {
            let n = index + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {n}: expected `key = value`, got {line:?}"))
            })?;
            layer.set(key.trim(), value.trim(), Origin::Line(n))?;
        }
        Ok(layer)
    }

    /// Adds one setting.
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), CliError> {
        let probe = Entry {
            key: key.to_string(),
            origin,
            value: Value::Text(String::new()),
        };
        let (field, kind) = lookup(key).ok_or_else(|| probe.fail("unknown key"))?;
        if let Some(previous) = self.entries.get(&field) {
            return Err(probe.fail(format!("already set by {}", previous.locate())));
        }
        let clash = match field {
            Field::Area => self.entries.get(&Field::Amplitude),
            Field::Amplitude => self.entries.get(&Field::Area),
            _ => None,
        };
        if let Some(other) = clash {
            return Err(probe.fail(format!("conflicts with {}; give area or amplitude, not both", other.locate())));
        }
        let value = match kind {
            Kind::Number(factor) => Value::Number(eval_number(value).map_err(|e| probe.fail(e))? * factor),
            Kind::List(factor) => Value::List(
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| eval_number(s).map(|x| x * factor))
                    .collect::<Result<_, _>>()
                    .map_err(|e| probe.fail(e))?,
            ),
            Kind::Text => Value::Text(value.to_string()),
        };
        self.entries.insert(field, Entry { value, ..probe });
        Ok(())
    }

    /// Settings of `self` overridden by those of `upper`. Setting an area
    /// drops an amplitude from below and vice versa.
    pub fn overlay(mut self, upper: Layer) -> Layer {
        for (field, entry) in upper.entries {
            match field {
                Field::Area => self.entries.remove(&Field::Amplitude),
                Field::Amplitude => self.entries.remove(&Field::Area),
                _ => None,
            };
            self.entries.insert(field, entry);
        }
        self
    }

    fn get(&self, field: Field) -> Option<&Entry> {
        self.entries.get(&field)
    }

    fn number(&self, field: Field) -> Option<f64> {
        match self.get(field)?.value {
            Value::Number(x) => Some(x),
            _ => None,
        }
    }

    fn text(&self, field: Field) -> Option<(&str, &Entry)> {
        let entry = self.get(field)?;
        match &entry.value {
            Value::Text(s) => Some((s.as_str(), entry)),
            _ => None,
        }
    }

    fn parsed<T>(&self, field: Field, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        match self.text(field) {
            Some((s, entry)) => parse(s).map(Some).map_err(|e| entry.fail(e)),
            None => Ok(None),
        }
    }
}

/// Built-in starting points, selectable with `--preset`.
pub const PRESETS: [&str; 5] = ["fig1-pi", "fig1-pihalf", "fig2-0.1ps", "fig2-0.5ps", "fig2-1ps"];

/// Settings of a named preset.
pub fn preset(name: &str) -> Result<Layer, CliError> {
    let (settings, label): (&[(&str, &str)], &'static str) = match name {
        "fig1-pi" => (&[("scenario", "adiabatic"), ("area_rad", "pi")], "fig1-pi"),
        "fig1-pihalf" => (&[("scenario", "adiabatic"), ("area_rad", "pi/2")], "fig1-pihalf"),
        "fig2-0.1ps" => (&[("scenario", "kick"), ("width_ps", "0.1")], "fig2-0.1ps"),
        "fig2-0.5ps" => (&[("scenario", "kick"), ("width_ps", "0.5")], "fig2-0.5ps"),
        "fig2-1ps" => (&[("scenario", "kick"), ("width_ps", "1")], "fig2-1ps"),
        other => {
            return Err(CliError::Config(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    let mut layer = Layer::default();
    for (key, value) in settings {
        layer.set(key, value, Origin::Preset(label))?;
    }
    Ok(layer)
}

fn parse_carrier(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(format!("expected on or off, got {other:?}")),
    }
}

fn parse_frame(s: &str) -> Result<Frame, String> {
    match s {
        "lab" => Ok(Frame::Lab),
        "rotating" => Ok(Frame::Rotating),
        other => Err(format!("expected lab or rotating, got {other:?}")),
    }
}

fn parse_stride(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn parse_file(s: &str) -> Result<String, String> {
    if s.is_empty() {
        Err("file name must not be empty".into())
    } else {
        Ok(s.to_string())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Start {
    Ground,
    Excited,
    Custom,
}

fn parse_start(s: &str) -> Result<Start, String> {
    match s {
        "ground" | "0" => Ok(Start::Ground),
        "excited" | "1" => Ok(Start::Excited),
        "custom" => Ok(Start::Custom),
        other => Err(format!("expected ground, excited or custom, got {other:?}")),
    }
}

/// Field a core validation error refers to.
fn field_of(name: &str, drive: Drive) -> Option<Field> {
    Some(match name {
        "omega0" => Field::Omega0,
        "dipole_moment" => Field::DipoleMoment,
        "area" => Field::Area,
        "amplitude" => match drive {
            Drive::Area(_) => Field::Area,
            Drive::Amplitude(_) => Field::Amplitude,
        },
        "width" => Field::Width,
        "center" => Field::Center,
        "carrier_frequency" => Field::CarrierFrequency,
        "window" => Field::TEnd,
        "dt" => Field::Dt,
        "state" | "initial" => Field::Initial,
        "effective_length" => Field::EffectiveLength,
        _ => return None,
    })
}

/// Default key name used in messages about a derived value.
fn default_key(field: Field) -> &'static str {
    match field {
        Field::Omega0 => "omega0_rad_per_s",
        Field::DipoleMoment => "dipole_moment_cm",
        Field::Area => "area_rad",
        Field::Amplitude => "amplitude_v_per_m",
        Field::Width => "width_s",
        Field::Center => "center_s",
        Field::TStart => "t_start_s",
        Field::TEnd => "t_end_s",
        Field::Dt => "dt_s",
        Field::CarrierFrequency => "carrier_rad_per_s",
        Field::Initial => "initial",
        Field::EffectiveLength => "effective_length_m",
        _ => "value",
    }
}

impl RunConfig {
    /// Resolves a layer into a validated configuration.
    pub fn resolve(layer: &Layer) -> Result<Self, CliError> {
        use Field as F;
        let scenario = layer
            .parsed(F::Scenario, |s| s.parse())?
            .ok_or_else(|| CliError::Config("no scenario: set `scenario` or pass --preset".into()))?;
        let required = |field: F| {
            layer.number(field).ok_or_else(|| {
                CliError::Config(format!(
                    "custom scenario requires `{}` (or another unit of the same key)",
                    default_key(field)
                ))
            })
        };

        let omega0 = layer.number(F::Omega0).unwrap_or(QubitParams::DEFAULT_OMEGA0);
        let dipole_moment = layer.number(F::DipoleMoment).unwrap_or(QubitParams::DEFAULT_DIPOLE_MOMENT);
        let carrier_frequency = layer.number(F::CarrierFrequency).unwrap_or(omega0);
        let drive = match (layer.number(F::Area), layer.number(F::Amplitude)) {
            (Some(a), _) => Drive::Area(a),
            (None, Some(a)) => Drive::Amplitude(a),
            (None, None) => match scenario {
                ScenarioKind::Adiabatic => Drive::Area(PI),
                ScenarioKind::Kick => Drive::Area(PI / 2.0),
                ScenarioKind::Custom => {
                    return Err(CliError::Config(
                        "custom scenario requires `area_rad` or `amplitude_v_per_m`".into(),
                    ))
                }
            },
        };
        let width = match (layer.number(F::Width), scenario) {
            (Some(w), _) => w,
            (None, ScenarioKind::Adiabatic) => 23.0 * NS,
            (None, ScenarioKind::Kick) => 0.1 * PS,
            (None, ScenarioKind::Custom) => required(F::Width)?,
        };
        let center = match (layer.number(F::Center), scenario) {
            (Some(c), _) => c,
            (None, ScenarioKind::Adiabatic) => 3.0 * width,
            (None, ScenarioKind::Kick) => 5.0 * PS,
            (None, ScenarioKind::Custom) => required(F::Center)?,
        };
        let t_start = layer.number(F::TStart).unwrap_or(0.0);
        let t_end = match (layer.number(F::TEnd), scenario) {
            (Some(t), _) => t,
            (None, ScenarioKind::Adiabatic) => 2.0 * center,
            (None, ScenarioKind::Kick) => 10.0 * PS,
            (None, ScenarioKind::Custom) => required(F::TEnd)?,
        };
        let carrier = layer.parsed(F::Carrier, parse_carrier)?;
        let method = layer.parsed(F::Method, |s| s.parse::<Method>().map_err(|e| e.to_string()))?.unwrap_or_default();
        let initial = match layer.parsed(F::Initial, parse_start)?.unwrap_or(Start::Ground) {
            Start::Ground => InitialState::Ground,
            Start::Excited => InitialState::Excited,
            Start::Custom => {
                let part = |f: F| layer.number(f).unwrap_or(0.0);
                InitialState::Custom(QubitState::from_amplitudes(
                    Complex64::new(part(F::A0Re), part(F::A0Im)),
                    Complex64::new(part(F::A1Re), part(F::A1Im)),
                ))
            }
        };
        if !matches!(initial, InitialState::Custom(_)) {
            if let Some(entry) = [F::A0Re, F::A0Im, F::A1Re, F::A1Im].iter().find_map(|f| layer.get(*f)) {
                return Err(entry.fail("amplitudes are only used with `initial = custom`"));
            }
        }
        let effective_length = layer
            .number(F::EffectiveLength)
            .unwrap_or(DeviceGeometry::DEFAULT_EFFECTIVE_LENGTH);
        let stride = layer.parsed(F::Stride, parse_stride)?.unwrap_or(match scenario {
            ScenarioKind::Adiabatic => 200,
            _ => 1,
        });
        let frame = layer.parsed(F::Frame, parse_frame)?.unwrap_or(Frame::Lab);
        let widths = match layer.get(F::Widths) {
            Some(entry @ Entry { value: Value::List(ws), .. }) => {
                if let Some(bad) = ws.iter().find(|w| w.is_nan() || **w <= 0.0) {
                    return Err(entry.fail(format!("pulse widths must be positive, got {bad}")));
                }
                ws.clone()
            }
            _ => Vec::new(),
        };
        let file = |field: F, default: &str| -> Result<String, CliError> {
            Ok(layer.parsed(field, parse_file)?.unwrap_or_else(|| default.to_string()))
        };

        let mut config = RunConfig {
            scenario,
            omega0,
            dipole_moment,
            drive,
            width,
            center,
            t_start,
            t_end,
            dt: 0.0,
            carrier_frequency,
            carrier,
            method,
            initial,
            effective_length,
            stride,
            frame,
            widths,
            trajectory_file: file(F::TrajectoryFile, "trajectory.csv")?,
            summary_file: file(F::SummaryFile, "summary.json")?,
            sweep_file: file(F::SweepFile, "sweep.csv")?,
            compare_file: file(F::CompareFile, "compare_kick.csv")?,
        };
        let blame = |e: kicksim::Error| match &e {
            kicksim::Error::InvalidParameter { name, reason } => match field_of(name, drive) {
                Some(field) => match layer.get(field) {
                    Some(entry) => entry.fail(format!("invalid {name}: {reason}")),
                    None => CliError::Config(format!("`{}` (derived): invalid {name}: {reason}", default_key(field))),
                },
                None => CliError::from(e),
            },
            _ => CliError::from(e),
        };
        let (qubit, pulse) = config.pulse_parts().map_err(blame)?;
        config.dt = layer.number(F::Dt).unwrap_or_else(|| default_step(&qubit, &pulse));
        config.scenario_config().map_err(blame)?;
        config.geometry().map_err(blame)?;
        if let InitialState::Custom(s) = config.initial {
            QubitState::new(s.a0(), s.a1()).map_err(blame)?;
        }
        Ok(config)
    }

    /// Parses and resolves a configuration file's text on its own.
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        Self::resolve(&Layer::parse(text)?)
    }

    /// Whether the runs use the carrier.
    pub fn carrier_enabled(&self) -> bool {
        self.carrier.unwrap_or(true)
    }

    fn pulse_parts(&self) -> kicksim::Result<(QubitParams, PulseSpec)> {
        let qubit = QubitParams::new(self.omega0, self.dipole_moment)?;
        let pulse = match self.drive {
            Drive::Area(a) => PulseSpec::with_area(a, &qubit, self.center, self.width, self.carrier_frequency)?,
            Drive::Amplitude(a) => PulseSpec::with_amplitude(a, self.center, self.width, self.carrier_frequency)?,
        };
        Ok((qubit, pulse.carrier(self.carrier_enabled())))
    }

    /// The core scenario this configuration describes.
    pub fn scenario_config(&self) -> kicksim::Result<ScenarioConfig> {
        let (qubit, pulse) = self.pulse_parts()?;
        Ok(ScenarioConfig {
            qubit,
            pulse,
            grid: TimeGrid::new(self.t_start, self.t_end, self.dt)?,
            initial: self.initial,
            method: self.method,
        })
    }

    pub fn geometry(&self) -> kicksim::Result<DeviceGeometry> {
        DeviceGeometry::new(self.effective_length)
    }

    /// The configuration as `key = value` text in SI keys. Numbers use the
    /// shortest representation that reads back to the same value, so
    /// [`RunConfig::from_text`] of the output gives back `self`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("scenario", &self.scenario);
        put("omega0_rad_per_s", &Sci(self.omega0));
        put("dipole_moment_cm", &Sci(self.dipole_moment));
        match self.drive {
            Drive::Area(a) => put("area_rad", &Sci(a)),
            Drive::Amplitude(a) => put("amplitude_v_per_m", &Sci(a)),
        }
        put("width_s", &Sci(self.width));
        put("center_s", &Sci(self.center));
        put("t_start_s", &Sci(self.t_start));
        put("t_end_s", &Sci(self.t_end));
        put("dt_s", &Sci(self.dt));
        put("carrier_rad_per_s", &Sci(self.carrier_frequency));
        if let Some(on) = self.carrier {
            put("carrier", &if on { "on" } else { "off" });
        }
        put("method", &self.method);
        match self.initial {
            InitialState::Ground => put("initial", &"ground"),
            InitialState::Excited => put("initial", &"excited"),
            InitialState::Custom(s) => {
                put("initial", &"custom");
                put("initial_a0_re", &Sci(s.a0().re));
                put("initial_a0_im", &Sci(s.a0().im));
                put("initial_a1_re", &Sci(s.a1().re));
                put("initial_a1_im", &Sci(s.a1().im));
            }
        }
        put("effective_length_m", &Sci(self.effective_length));
        put("stride", &self.stride);
        put("frame", &self.frame);
        if !self.widths.is_empty() {
            let list: Vec<String> = self.widths.iter().map(|w| Sci(*w).to_string()).collect();
            put("widths_s", &list.join(", "));
        }
        put("trajectory_file", &self.trajectory_file);
        put("summary_file", &self.summary_file);
        put("sweep_file", &self.sweep_file);
        put("compare_file", &self.compare_file);
        out
    }
}

/// Shortest round-trip scientific notation.
struct Sci(f64);

impl fmt::Display for Sci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_convert_to_si() {
        let c = RunConfig::from_text("scenario = kick\nwidth_fs = 250\nomega0_ghz = 5\ncenter_ns = 0.004\n").unwrap();
        assert!((c.width - 250e-15).abs() < 1e-28);
        assert!((c.omega0 - 2.0 * PI * 5e9).abs() < 1e-3);
        assert!((c.center - 4e-12).abs() < 1e-25);
        assert_eq!(c.carrier_frequency, c.omega0);
    }

    #[test]
    fn number_expressions() {
        assert_eq!(eval_number("pi").unwrap(), PI);
        assert_eq!(eval_number("pi/2").unwrap(), PI / 2.0);
        assert_eq!(eval_number("0.5 * pi").unwrap(), 0.5 * PI);
        assert_eq!(eval_number("1e-12").unwrap(), 1e-12);
        assert!(eval_number("nan").is_err());
        assert!(eval_number("1/0").is_err());
        assert!(eval_number("two").is_err());
    }

    #[test]
    fn preset_defaults() {
        let c = RunConfig::resolve(&preset("fig1-pi").unwrap()).unwrap();
        assert_eq!(c.drive, Drive::Area(PI));
        assert_eq!(c.width, 23e-9);
        assert_eq!(c.center, 3.0 * 23e-9);
        assert_eq!(c.t_end, 6.0 * 23e-9);
        assert_eq!(c.stride, 200);
        let k = RunConfig::resolve(&preset("fig2-0.5ps").unwrap()).unwrap();
        assert_eq!(k.drive, Drive::Area(PI / 2.0));
        assert_eq!((k.width, k.center, k.t_end, k.stride), (0.5e-12, 5e-12, 10e-12, 1));
        assert!(k.carrier_enabled() && k.carrier.is_none());
        assert!(preset("fig3").is_err());
    }

    #[test]
    fn errors_name_key_and_line() {
        let msg = |text: &str| RunConfig::from_text(text).unwrap_err().to_string();
        assert!(msg("scenario = kick\nwidth_ps = 0\n").contains("line 2: `width_ps`"));
        assert!(msg("scenario = kick\n\nbogus_key = 1\n").contains("line 3: `bogus_key`: unknown key"));
        assert!(msg("scenario = kick\nwidth_ps = 1\nwidth_ns = 1\n").contains("already set by line 2"));
        assert!(msg("scenario = kick\narea_rad = 1\namplitude_v_per_m = 1\n").contains("not both"));
        assert!(msg("scenario = kick\nwidth_ps\n").contains("line 2"));
        assert!(msg("scenario = custom\nwidth_ps = 1\n").contains("area_rad"));
        assert!(msg("scenario = kick\ncarrier = maybe\n").contains("`carrier`"));
        assert!(msg("scenario = kick\ninitial = custom\ninitial_a0_re = 0.5\n").contains("`initial`"));
        assert!(msg("width_ps = 1\n").contains("no scenario"));
        assert!(msg("scenario = kick\nwidths_ps = 0.1, -1\n").contains("`widths_ps`"));
    }

    #[test]
    fn overlay_replaces_by_field() {
        let base = preset("fig1-pi").unwrap();
        let file = Layer::parse("amplitude_v_per_m = 0.02\nwidth_ns = 20\n").unwrap();
        let c = RunConfig::resolve(&base.overlay(file)).unwrap();
        assert_eq!(c.drive, Drive::Amplitude(0.02));
        assert_eq!(c.width, 20e-9);
        assert_eq!(c.scenario, ScenarioKind::Adiabatic);
    }

    #[test]
    fn dump_round_trips() {
        let text = "scenario = custom\nomega0_ghz = 4.5\narea_rad = pi/3\nwidth_ps = 0.3\ncenter_ps = 2\n\
                    t_end_ps = 4\ncarrier = off\nmethod = rk4\ninitial = custom\ninitial_a0_re = 0.6\n\
                    initial_a1_im = 0.8\nframe = rotating\nwidths_ps = 0.1, 0.2\nstride = 7\n";
        let c = RunConfig::from_text(text).unwrap();
        let again = RunConfig::from_text(&c.dump()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.dump(), c.dump());
    }
}
