//! Drive envelopes and the conversions between pulse area, field amplitude
//! and control voltage.
//!
//! The drive is a Gaussian envelope `E(t) = A0·exp(−(t−t0)²/τ²)`, optionally
//! multiplied by a carrier `cos(ω_D t)`. With the carrier switched off the
//! envelope itself is the coupling, which is the finite-width version of an
//! ideal delta kick.
//!
//! All quantities are SI: seconds, rad/s, V/m, C·m, volts.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Half-width of the area integration window, in units of τ.
const AREA_WINDOW_WIDTHS: f64 = 6.0;
/// Fraction of the envelope area that may fall outside the window before
/// `area_of` reports truncation.
const TAIL_WARN_FRACTION: f64 = 1e-6;

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive and finite, got {value}")))
    }
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be non-negative and finite, got {value}")))
    }
}

/// Device-side parameters of the two-level system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    omega0: f64,
    dipole_moment: f64,
}

impl QubitParams {
    /// Transmon-like defaults: `ω0 = 2π × 4.5 GHz`.
    pub const DEFAULT_OMEGA0: f64 = 2.0 * PI * 4.5e9;
    /// `μ = 3×10⁻²⁵ C·m`.
    pub const DEFAULT_DIPOLE_MOMENT: f64 = 3e-25;

    pub fn new(omega0: f64, dipole_moment: f64) -> Result<Self> {
        check_positive("omega0", omega0)?;
        check_positive("dipole_moment", dipole_moment)?;
        Ok(Self {
            omega0,
            dipole_moment,
        })
    }

    /// Transition angular frequency ω0, rad/s.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Transition dipole moment μ, C·m.
    pub fn dipole_moment(&self) -> f64 {
        self.dipole_moment
    }

    /// Converts a field (V/m) into a Rabi frequency (rad/s): `μE/ħ`.
    pub fn rabi_per_field(&self) -> f64 {
        self.dipole_moment / HBAR
    }
}

impl Default for QubitParams {
    fn default() -> Self {
        Self {
            omega0: Self::DEFAULT_OMEGA0,
            dipole_moment: Self::DEFAULT_DIPOLE_MOMENT,
        }
    }
}

/// A single Gaussian drive pulse.
///
/// Construct with [`PulseSpec::with_amplitude`] or [`PulseSpec::with_area`];
/// an area-specified pulse stores the amplitude resolved for the qubit it was
/// built against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    amplitude: f64,
    center: f64,
    width: f64,
    carrier_frequency: f64,
    carrier_enabled: bool,
}

impl PulseSpec {
    /// A carrier-modulated pulse with peak field `amplitude` (V/m).
    pub fn with_amplitude(
        amplitude: f64,
        center: f64,
        width: f64,
        carrier_frequency: f64,
    ) -> Result<Self> {
        check_non_negative("amplitude", amplitude)?;
        check_positive("width", width)?;
        check_non_negative("carrier_frequency", carrier_frequency)?;
        if !center.is_finite() {
            return Err(Error::invalid("center", "must be finite"));
        }
        Ok(Self {
            amplitude,
            center,
            width,
            carrier_frequency,
            carrier_enabled: true,
        })
    }

    /// A carrier-modulated pulse whose envelope integrates to `area`
    /// (∫Ω dt = α). A zero area gives a zero-amplitude pulse.
    pub fn with_area(
        area: f64,
        params: &QubitParams,
        center: f64,
        width: f64,
        carrier_frequency: f64,
    ) -> Result<Self> {
        check_non_negative("area", area)?;
        check_positive("width", width)?;
        let amplitude = if area == 0.0 {
            0.0
        } else {
            amplitude_for_area(area, params, width)?
        };
        Self::with_amplitude(amplitude, center, width, carrier_frequency)
    }

    /// Same pulse with the carrier switched on or off.
    pub fn carrier(mut self, enabled: bool) -> Self {
        self.carrier_enabled = enabled;
        self
    }

    /// Same pulse, re-centered.
    pub fn centered_at(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    /// Peak field A0, V/m.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Pulse center t0, s.
    pub fn center(&self) -> f64 {
        self.center
    }

    /// Gaussian width τ, s.
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Carrier angular frequency ω_D, rad/s.
    pub fn carrier_frequency(&self) -> f64 {
        self.carrier_frequency
    }

    pub fn carrier_enabled(&self) -> bool {
        self.carrier_enabled
    }

    /// Closed-form envelope area `μA0√π τ/ħ` over the whole real line.
    pub fn nominal_area(&self, params: &QubitParams) -> f64 {
        params.rabi_per_field() * self.amplitude * PI.sqrt() * self.width
    }
}

/// Device geometry relating control-line voltage to field at the qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceGeometry {
    effective_length: f64,
}

impl DeviceGeometry {
    /// 20 µm, typical for planar transmons.
    pub const DEFAULT_EFFECTIVE_LENGTH: f64 = 20e-6;

    pub fn new(effective_length: f64) -> Result<Self> {
        check_positive("effective_length", effective_length)?;
        Ok(Self { effective_length })
    }

    /// L_eff, m.
    pub fn effective_length(&self) -> f64 {
        self.effective_length
    }
}

impl Default for DeviceGeometry {
    fn default() -> Self {
        Self {
            effective_length: Self::DEFAULT_EFFECTIVE_LENGTH,
        }
    }
}

/// Gaussian envelope `A0·exp(−(t−t0)²/τ²)`, V/m.
pub fn envelope_at(spec: &PulseSpec, t: f64) -> f64 {
    let u = (t - spec.center) / spec.width;
    spec.amplitude * (-u * u).exp()
}

/// Instantaneous coupling Ω̃(t) in rad/s: `μE(t)cos(ω_D t)/ħ`, or `μE(t)/ħ`
/// with the carrier off.
pub fn drive_at(spec: &PulseSpec, params: &QubitParams, t: f64) -> f64 {
    let rabi = params.rabi_per_field() * envelope_at(spec, t);
    if spec.carrier_enabled {
        rabi * (spec.carrier_frequency * t).cos()
    } else {
        rabi
    }
}

/// Peak Rabi frequency `μA0/ħ`, rad/s.
pub fn peak_rabi_frequency(spec: &PulseSpec, params: &QubitParams) -> f64 {
    params.rabi_per_field() * spec.amplitude
}

/// Peak field giving envelope area `area`: `A0 = αħ/(μ√π τ)`.
pub fn amplitude_for_area(area: f64, params: &QubitParams, width: f64) -> Result<f64> {
    check_positive("area", area)?;
    check_positive("width", width)?;
    Ok(area * HBAR / (params.dipole_moment * PI.sqrt() * width))
}

/// Result of numerically integrating the envelope Rabi frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    /// ∫Ω(t) dt over the integration window.
    pub area: f64,
    /// Fraction of the full envelope area lying outside the window.
    pub tail_fraction: f64,
    /// True when `tail_fraction` exceeds 10⁻⁶.
    pub truncated: bool,
}

// 5-point Gauss–Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];
const GL_PANELS: usize = 96;

/// Integrates the envelope Rabi frequency (carrier ignored) over
/// `[t0 − 6τ, t0 + 6τ]`, clipped to `window` when one is given.
///
/// Logs a warning when the clipped window cuts off more than 10⁻⁶ of the
/// envelope.
pub fn area_of(spec: &PulseSpec, params: &QubitParams, window: Option<(f64, f64)>) -> AreaEstimate {
    let mut lo = spec.center - AREA_WINDOW_WIDTHS * spec.width;
    let mut hi = spec.center + AREA_WINDOW_WIDTHS * spec.width;
    if let Some((start, end)) = window {
        lo = lo.max(start);
        hi = hi.min(end);
    }

    let area = if hi > lo && spec.amplitude > 0.0 {
        let panel = (hi - lo) / GL_PANELS as f64;
        let half = 0.5 * panel;
        let mut sum = 0.0;
        for k in 0..GL_PANELS {
            let mid = lo + (k as f64 + 0.5) * panel;
            for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
                sum += w * envelope_at(spec, mid + half * x);
            }
        }
        params.rabi_per_field() * sum * half
    } else {
        0.0
    };

    let tail_fraction = if hi > lo {
        let below = (spec.center - lo) / spec.width;
        let above = (hi - spec.center) / spec.width;
        0.5 * erfc(below) + 0.5 * erfc(above)
    } else {
        1.0
    };
    let truncated = tail_fraction > TAIL_WARN_FRACTION;
    if truncated {
        log::warn!(
            "integration window [{lo:e}, {hi:e}] s truncates {tail_fraction:.3e} of the pulse envelope"
        );
    }

    AreaEstimate {
        area,
        tail_fraction,
        truncated,
    }
}

/// Carrier-weighted area `∫Ω(t)cos(ω_D t)dt = α·exp(−ω_D²τ²/4)·cos(ω_D t0)`.
///
/// This is the area an impulsive kick actually delivers: the carrier
/// averages a long pulse away and leaves a short one almost untouched.
/// With the carrier off it is the plain area α.
pub fn effective_kick_area(spec: &PulseSpec, params: &QubitParams) -> f64 {
    let area = spec.nominal_area(params);
    if !spec.carrier_enabled {
        return area;
    }
    let wt = spec.carrier_frequency * spec.width;
    area * (-0.25 * wt * wt).exp() * (spec.carrier_frequency * spec.center).cos()
}

/// Control voltage producing `field` at the qubit: `V = E·L_eff`.
pub fn field_to_voltage(field: f64, geometry: &DeviceGeometry) -> f64 {
    field * geometry.effective_length
}

/// Peak voltage of a Gaussian π-pulse: `V_peak = √π ħ L_eff/(μτ)`.
pub fn peak_voltage_pi(params: &QubitParams, width: f64, geometry: &DeviceGeometry) -> Result<f64> {
    check_positive("width", width)?;
    Ok(PI.sqrt() * HBAR * geometry.effective_length / (params.dipole_moment * width))
}
