//! Preset scenarios, pulse-duration sweeps and analytic-vs-numeric studies.
//!
//! Two presets cover the control regimes:
//!
//! * [`scenario_adiabatic`]: resonant 4.5 GHz carrier under a τ = 23 ns
//!   Gaussian, centered at 3τ in a `[0, 6τ]` window.
//! * [`scenario_kick`]: a picosecond Gaussian of area π/2 centered at 5 ps in
//!   a `[0, 10 ps]` window, carrier on.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{l1_coherence, summarize, RunSummary};
use crate::propagation::{
    evolve, evolve_final, kick_with_free_precession, propagator, rwa_rotation, Axis, Method,
    QubitState, TimeGrid, Trajectory,
};
use crate::pulses::{effective_kick_area, PulseSpec, QubitParams};

const NS: f64 = 1e-9;
const PS: f64 = 1e-12;

/// Width of the adiabatic preset pulse.
pub const ADIABATIC_WIDTH: f64 = 23.0 * NS;
/// Kick presets: pulse center and window end.
pub const KICK_CENTER: f64 = 5.0 * PS;
pub const KICK_WINDOW: f64 = 10.0 * PS;
/// Kick presets: pulse area.
pub const KICK_AREA: f64 = PI / 2.0;
/// Pulse width used for the near-ideal kick in [`rabi_doubling_check`].
pub const DOUBLING_WIDTH: f64 = 0.01 * PS;

/// `ω0·τ` below which a pulse counts as a kick.
pub const DIABATIC_THRESHOLD: f64 = 0.1;
/// `ω0·τ` above which a pulse counts as adiabatic.
pub const ADIABATIC_THRESHOLD: f64 = 10.0;

/// Starting state of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum InitialState {
    #[default]
    Ground,
    Excited,
    Custom(QubitState),
}

impl InitialState {
    pub fn state(&self) -> QubitState {
        match self {
            InitialState::Ground => QubitState::ground(),
            InitialState::Excited => QubitState::excited(),
            InitialState::Custom(s) => *s,
        }
    }
}

/// Everything needed for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub qubit: QubitParams,
    pub pulse: PulseSpec,
    pub grid: TimeGrid,
    pub initial: InitialState,
    pub method: Method,
}

impl ScenarioConfig {
    pub fn run(&self) -> Result<Trajectory> {
        evolve(
            &self.initial.state(),
            &self.qubit,
            &self.pulse,
            &self.grid,
            self.method,
        )
    }

    /// Runs and summarizes without keeping the trajectory around.
    pub fn summary(&self) -> Result<RunSummary> {
        self.run().map(|traj| summarize(&traj))
    }

    /// Envelope area α of the configured pulse.
    pub fn area(&self) -> f64 {
        self.pulse.nominal_area(&self.qubit)
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_carrier(mut self, enabled: bool) -> Self {
        self.pulse = self.pulse.carrier(enabled);
        self
    }

    /// Same scenario with a different pulse width at equal area; the grid
    /// step is re-derived for the new width.
    pub fn with_width(&self, width: f64) -> Result<Self> {
        let pulse = PulseSpec::with_area(
            self.area(),
            &self.qubit,
            self.pulse.center(),
            width,
            self.pulse.carrier_frequency(),
        )?
        .carrier(self.pulse.carrier_enabled());
        let grid = TimeGrid::for_pulse(&self.qubit, &pulse, self.grid.t_start(), self.grid.t_end())?;
        Ok(Self { pulse, grid, ..*self })
    }
}

/// Resonant Gaussian drive of area `area` with τ = 23 ns, ω0 = ω_D = 2π×4.5 GHz.
pub fn scenario_adiabatic(area: f64) -> Result<ScenarioConfig> {
    let qubit = QubitParams::default();
    let center = 3.0 * ADIABATIC_WIDTH;
    let pulse = PulseSpec::with_area(area, &qubit, center, ADIABATIC_WIDTH, qubit.omega0())?;
    let grid = TimeGrid::for_pulse(&qubit, &pulse, 0.0, 2.0 * center)?;
    Ok(ScenarioConfig {
        qubit,
        pulse,
        grid,
        initial: InitialState::Ground,
        method: Method::Magnus2,
    })
}

/// Picosecond kick of area π/2 and width `width`, centered at 5 ps in a
/// 10 ps window, carrier at 2π×4.5 GHz.
pub fn scenario_kick(width: f64) -> Result<ScenarioConfig> {
    let qubit = QubitParams::default();
    let pulse = PulseSpec::with_area(KICK_AREA, &qubit, KICK_CENTER, width, qubit.omega0())?;
    let grid = TimeGrid::for_pulse(&qubit, &pulse, 0.0, KICK_WINDOW)?;
    Ok(ScenarioConfig {
        qubit,
        pulse,
        grid,
        initial: InitialState::Ground,
        method: Method::Magnus2,
    })
}

/// Control regime by `ω0·τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Diabatic,
    Intermediate,
    Adiabatic,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Diabatic => "diabatic",
            Regime::Intermediate => "intermediate",
            Regime::Adiabatic => "adiabatic",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diabatic" => Ok(Regime::Diabatic),
            "intermediate" => Ok(Regime::Intermediate),
            "adiabatic" => Ok(Regime::Adiabatic),
            other => Err(Error::invalid("regime", format!("unknown regime {other:?}"))),
        }
    }
}

/// Diabatic for `ω0τ < 0.1`, adiabatic for `ω0τ > 10`, intermediate between.
pub fn classify_regime(params: &QubitParams, width: f64) -> Regime {
    let product = params.omega0() * width;
    if product < DIABATIC_THRESHOLD {
        Regime::Diabatic
    } else if product > ADIABATIC_THRESHOLD {
        Regime::Adiabatic
    } else {
        Regime::Intermediate
    }
}

/// One pulse width of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub width: f64,
    pub omega0_tau: f64,
    pub fidelity: f64,
    pub max_coherence: f64,
    pub final_coherence: f64,
    pub effective_area: f64,
    pub regime: Regime,
    pub norm_drift: f64,
}

/// Rows in the order the widths were given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn sweep_row(base: &ScenarioConfig, width: f64) -> Result<SweepRow> {
    let wrap = |e: Error| Error::SweepRow {
        width,
        source: Box::new(e),
    };
    let scenario = base.with_width(width).map_err(wrap)?;
    let summary = scenario.summary().map_err(wrap)?;
    Ok(SweepRow {
        width,
        omega0_tau: scenario.qubit.omega0() * width,
        fidelity: summary.final_fidelity,
        max_coherence: summary.max_coherence,
        final_coherence: summary.final_coherence,
        effective_area: effective_kick_area(&scenario.pulse, &scenario.qubit),
        regime: classify_regime(&scenario.qubit, width),
        norm_drift: summary.norm_drift,
    })
}

/// Re-runs `base` at each width (area, center, window and carrier held
/// fixed). Rows are computed in parallel and returned in input order.
pub fn sweep_tau(base: &ScenarioConfig, widths: &[f64]) -> Result<SweepResult> {
    if widths.is_empty() {
        return Err(Error::invalid("widths", "at least one pulse width is required"));
    }
    if let Some(&bad) = widths.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::invalid("widths", format!("pulse widths must be positive, got {bad}")));
    }
    let rows = widths
        .par_iter()
        .map(|&w| sweep_row(base, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

/// Operator-norm distance (global phase removed) between the numerical
/// propagator of a carrier-free Gaussian of width `width` and area `area`
/// and the ideal kick `exp(−iασx)` sandwiched between free precessions.
///
/// The pulse sits at `t0 = max(5 ps, 6τ)` in a `[0, 2t0]` window so wide
/// pulses are not truncated.
pub fn kick_vs_analytic(
    qubit: &QubitParams,
    width: f64,
    area: f64,
    method: Method,
) -> Result<f64> {
    let center = KICK_CENTER.max(6.0 * width);
    let end = 2.0 * center;
    let pulse = PulseSpec::with_area(area, qubit, center, width, qubit.omega0())?.carrier(false);
    let grid = TimeGrid::for_pulse(qubit, &pulse, 0.0, end)?;
    let numeric = propagator(qubit, &pulse, &grid, method)?;
    let analytic = kick_with_free_precession(area, qubit, 0.0, center, end);
    Ok(numeric.phase_aligned_distance(&analytic))
}

/// Excited-state population after the same area applied two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiDoubling {
    /// From a numerically integrated carrier-free 0.01 ps kick; tends to
    /// `sin²α`.
    pub kick_p1: f64,
    /// From the RWA rotation `R_x(α)`: `sin²(α/2)`.
    pub rwa_p1: f64,
}

/// Compares a near-ideal kick of area `area` against the RWA rotation by the
/// same angle, starting from `|0⟩`. Accepts `0 ≤ area ≤ π`.
pub fn rabi_doubling_check(area: f64) -> Result<RabiDoubling> {
    if !(0.0..=PI).contains(&area) {
        return Err(Error::invalid("area", format!("must lie in [0, π], got {area}")));
    }
    let qubit = QubitParams::default();
    let pulse = PulseSpec::with_area(area, &qubit, KICK_CENTER, DOUBLING_WIDTH, qubit.omega0())?
        .carrier(false);
    let grid = TimeGrid::for_pulse(&qubit, &pulse, 0.0, KICK_WINDOW)?;
    let last = evolve_final(&QubitState::ground(), &qubit, &pulse, &grid, Method::Magnus2)?;
    let rwa = rwa_rotation(Axis::X, area).apply(&QubitState::ground());
    Ok(RabiDoubling {
        kick_p1: last.p1(),
        rwa_p1: rwa.p1(),
    })
}

/// Peak and final l1 coherence of a trajectory, plus the time of the peak.
pub fn coherence_profile(traj: &Trajectory) -> (f64, f64, f64) {
    let (t_peak, peak) = traj
        .samples()
        .iter()
        .map(|s| (s.t, l1_coherence(&s.state)))
        .fold((traj.initial().t, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    (peak, t_peak, l1_coherence(&traj.last().state))
}
