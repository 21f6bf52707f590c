//! Lab-frame propagation of the driven two-level system.
//!
//! The Hamiltonian (divided by ħ) is `H(t) = (ω0/2)σz + Ω̃(t)σx`. Two fixed-step
//! integrators are provided:
//!
//! * [`Method::Magnus2`]: midpoint exponential integrator. Each step applies
//!   the exact SU(2) exponential of `H(t + dt/2)`, so it is unitary by
//!   construction. Second order globally.
//! * [`Method::Rk4`]: classical Runge–Kutta on the amplitude equations.
//!   Fourth order, not norm-preserving; kept as an independent cross-check.
//!
//! The analytic kicked-regime operators ([`kicked_propagator`],
//! [`delta_kick_apply`], [`kick_with_free_precession`]) and the RWA gate
//! [`rwa_rotation`] live here too.
//!
//! Basis convention: `|0⟩` is the `+1` eigenstate of σz.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulses::{drive_at, PulseSpec, QubitParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for accepting a caller-supplied state as normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Norm drift at which [`evolve`] gives up on a run.
pub const MAX_NORM_DRIFT: f64 = 1e-6;
/// Default number of grid points per period of the fastest oscillation
/// (carrier or qubit).
pub const DEFAULT_STEPS_PER_PERIOD: f64 = 4000.0;
/// Default number of grid points per pulse width.
pub const DEFAULT_STEPS_PER_WIDTH: f64 = 100.0;

/// Pure state `a0|0⟩ + a1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    a0: Complex64,
    a1: Complex64,
}

impl QubitState {
    /// Checked constructor: rejects amplitudes whose norm differs from one by
    /// more than 10⁻⁹.
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let state = Self { a0, a1 };
        let drift = state.norm_drift();
        if drift.is_finite() && drift <= NORM_TOLERANCE {
            Ok(state)
        } else {
            Err(Error::invalid(
                "state",
                format!("amplitudes are not normalized (|norm − 1| = {drift:e})"),
            ))
        }
    }

    /// Unchecked constructor, for integrator output and tests.
    pub fn from_amplitudes(a0: Complex64, a1: Complex64) -> Self {
        Self { a0, a1 }
    }

    pub fn ground() -> Self {
        Self { a0: ONE, a1: ZERO }
    }

    pub fn excited() -> Self {
        Self { a0: ZERO, a1: ONE }
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn p0(&self) -> f64 {
        self.a0.norm_sqr()
    }

    pub fn p1(&self) -> f64 {
        self.a1.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        (self.p0() + self.p1()).sqrt()
    }

    /// `|‖ψ‖ − 1|`.
    pub fn norm_drift(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        self.a0.conj() * other.a0 + self.a1.conj() * other.a1
    }

    /// Multiplies both amplitudes by `e^{iφ}`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let p = Complex64::from_polar(1.0, phase);
        Self {
            a0: p * self.a0,
            a1: p * self.a1,
        }
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &QubitState) -> f64 {
        ((self.a0 - other.a0).norm_sqr() + (self.a1 - other.a1).norm_sqr()).sqrt()
    }
}

/// A 2×2 complex matrix, normally unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[Complex64; 2]; 2],
}

impl Unitary2 {
    pub fn from_rows(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn from_columns(c0: &QubitState, c1: &QubitState) -> Self {
        Self {
            m: [[c0.a0, c1.a0], [c0.a1, c1.a1]],
        }
    }

    pub fn identity() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn pauli_x() -> Self {
        Self::from_rows([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self::from_rows([[ZERO, -I], [I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::from_rows([[ONE, ZERO], [ZERO, -ONE]])
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn rows(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::from_rows([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let m = &self.m;
        Self::from_rows([
            [factor * m[0][0], factor * m[0][1]],
            [factor * m[1][0], factor * m[1][1]],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, state: &QubitState) -> QubitState {
        let m = &self.m;
        QubitState {
            a0: m[0][0] * state.a0 + m[0][1] * state.a1,
            a1: m[1][0] * state.a0 + m[1][1] * state.a1,
        }
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((p.m[r][c] - target).norm());
            }
        }
        worst
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        let frob: f64 = self.m.iter().flatten().map(|z| z.norm_sqr()).sum();
        let det = self.determinant().norm_sqr();
        let disc = (frob * frob - 4.0 * det).max(0.0).sqrt();
        (0.5 * (frob + disc)).sqrt()
    }

    /// `min_φ ‖self − e^{iφ}other‖`, the operator-norm distance with the
    /// unobservable global phase removed.
    ///
    /// For unitaries the optimal phase bisects the (shorter) arc between the
    /// eigenphases of `other†·self`.
    pub fn phase_aligned_distance(&self, other: &Unitary2) -> f64 {
        let relative = other.adjoint() * *self;
        let half_trace = 0.5 * relative.trace();
        let disc = (half_trace * half_trace - relative.determinant()).sqrt();
        let l1 = half_trace + disc;
        let l2 = half_trace - disc;
        let phase = if l1.norm() == 0.0 || l2.norm() == 0.0 {
            relative.trace().arg()
        } else {
            l1.arg() + 0.5 * (l2 / l1).arg()
        };
        let diff = *self - other.scale(Complex64::from_polar(1.0, phase));
        diff.operator_norm()
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        let a = &self.m;
        let b = &rhs.m;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Unitary2 { m: out }
    }
}

impl std::ops::Sub for Unitary2 {
    type Output = Unitary2;

    fn sub(self, rhs: Unitary2) -> Unitary2 {
        let mut out = self.m;
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell -= rhs.m[r][c];
            }
        }
        Unitary2 { m: out }
    }
}

/// Traceless Hamiltonian `H/ħ = x·σx + y·σy + z·σz`, coefficients in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Hamiltonian {
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.z, 0.0), Complex64::new(self.x, -self.y)],
            [Complex64::new(self.x, self.y), Complex64::new(-self.z, 0.0)],
        ]
    }

    /// `−i·H·ψ`, the right-hand side of the Schrödinger equation.
    fn derivative(&self, state: &QubitState) -> QubitState {
        let m = self.matrix();
        QubitState {
            a0: -I * (m[0][0] * state.a0 + m[0][1] * state.a1),
            a1: -I * (m[1][0] * state.a0 + m[1][1] * state.a1),
        }
    }
}

/// `H(t)/ħ = (ω0/2)σz + Ω̃(t)σx` in the lab frame.
pub fn hamiltonian_at(params: &QubitParams, spec: &PulseSpec, t: f64) -> Hamiltonian {
    Hamiltonian {
        x: drive_at(spec, params, t),
        y: 0.0,
        z: 0.5 * params.omega0(),
    }
}

/// `sin(θ)/θ`, accurate near zero.
fn sinc(theta: f64) -> f64 {
    if theta.abs() < 1e-4 {
        let t2 = theta * theta;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        theta.sin() / theta
    }
}

/// Closed-form `exp(−i·dt·(hx σx + hy σy + hz σz))`
/// `= cos θ·I − i·sin θ·(n̂·σ)` with `θ = dt·‖h‖`.
pub fn su2_exp(hx: f64, hy: f64, hz: f64, dt: f64) -> Unitary2 {
    let norm = (hx * hx + hy * hy + hz * hz).sqrt();
    let theta = norm * dt;
    let c = theta.cos();
    // sin(θ)/‖h‖ written so that ‖h‖ = 0 stays finite
    let s = dt * sinc(theta);
    let (x, y, z) = (s * hx, s * hy, s * hz);
    Unitary2::from_rows([
        [Complex64::new(c, -z), Complex64::new(-y, -x)],
        [Complex64::new(y, -x), Complex64::new(c, z)],
    ])
}

/// One midpoint exponential step from `t` to `t + dt`.
pub fn step_magnus2(
    state: &QubitState,
    params: &QubitParams,
    spec: &PulseSpec,
    t: f64,
    dt: f64,
) -> QubitState {
    let h = hamiltonian_at(params, spec, t + 0.5 * dt);
    su2_exp(h.x, h.y, h.z, dt).apply(state)
}

fn axpy(a: f64, x: &QubitState, y: &QubitState) -> QubitState {
    QubitState {
        a0: y.a0 + a * x.a0,
        a1: y.a1 + a * x.a1,
    }
}

/// One classical fourth-order Runge–Kutta step from `t` to `t + dt`.
pub fn step_rk4(
    state: &QubitState,
    params: &QubitParams,
    spec: &PulseSpec,
    t: f64,
    dt: f64,
) -> QubitState {
    let h_start = hamiltonian_at(params, spec, t);
    let h_mid = hamiltonian_at(params, spec, t + 0.5 * dt);
    let h_end = hamiltonian_at(params, spec, t + dt);

    let k1 = h_start.derivative(state);
    let k2 = h_mid.derivative(&axpy(0.5 * dt, &k1, state));
    let k3 = h_mid.derivative(&axpy(0.5 * dt, &k2, state));
    let k4 = h_end.derivative(&axpy(dt, &k3, state));

    let w = dt / 6.0;
    QubitState {
        a0: state.a0 + w * (k1.a0 + 2.0 * k2.a0 + 2.0 * k3.a0 + k4.a0),
        a1: state.a1 + w * (k1.a1 + 2.0 * k2.a1 + 2.0 * k3.a1 + k4.a1),
    }
}

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Magnus2,
    Rk4,
}

impl Method {
    pub fn step(
        self,
        state: &QubitState,
        params: &QubitParams,
        spec: &PulseSpec,
        t: f64,
        dt: f64,
    ) -> QubitState {
        match self {
            Method::Magnus2 => step_magnus2(state, params, spec, t, dt),
            Method::Rk4 => step_rk4(state, params, spec, t, dt),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Magnus2 => "magnus2",
            Method::Rk4 => "rk4",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "magnus2" => Ok(Method::Magnus2),
            "rk4" => Ok(Method::Rk4),
            other => Err(Error::invalid("method", format!("unknown method {other:?}"))),
        }
    }
}

/// Uniform time grid. The requested step is shrunk so that an integer number
/// of steps lands exactly on `t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    dt: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::invalid("window", "bounds must be finite"));
        }
        if t_end <= t_start {
            return Err(Error::invalid(
                "window",
                format!("t_end ({t_end:e} s) must exceed t_start ({t_start:e} s)"),
            ));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
        }
        if (t_end - t_start) / dt < 2.0 {
            return Err(Error::invalid("dt", "window must span at least two steps"));
        }
        Ok(Self { t_start, t_end, dt })
    }

    /// Grid with the default resolution for `spec`:
    /// `dt = min(T/4000, τ/100)`, `T = 2π/max(ω_D, ω0)`.
    pub fn for_pulse(params: &QubitParams, spec: &PulseSpec, t_start: f64, t_end: f64) -> Result<Self> {
        Self::new(t_start, t_end, default_step(params, spec))
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Requested (maximum) step size.
    pub fn requested_dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        let ratio = (self.t_end - self.t_start) / self.dt;
        // exact divisions should not pick up an extra step from rounding
        (ratio - 1e-9 * ratio).ceil().max(1.0) as usize
    }

    /// Step actually taken: `(t_end − t_start)/steps`.
    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps() as f64
    }

    /// Time of grid point `k` (`0..=steps`); the last point is exactly `t_end`.
    pub fn time(&self, k: usize) -> f64 {
        if k >= self.steps() {
            self.t_end
        } else {
            self.t_start + k as f64 * self.dt()
        }
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(self.t_start, self.t_end, dt)
    }
}

/// Default step for a pulse: resolves the faster of carrier and qubit
/// oscillation and the envelope width.
pub fn default_step(params: &QubitParams, spec: &PulseSpec) -> f64 {
    let fastest = spec.carrier_frequency().max(params.omega0());
    let period = std::f64::consts::TAU / fastest;
    (period / DEFAULT_STEPS_PER_PERIOD).min(spec.width() / DEFAULT_STEPS_PER_WIDTH)
}

/// One stored point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: QubitState,
}

/// Time-ordered record of an [`evolve`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<Sample>,
    method: Method,
    max_norm_drift: f64,
    qubit: QubitParams,
    pulse: PulseSpec,
    grid: TimeGrid,
}

impl Trajectory {
    /// Assembles a trajectory from precomputed samples (for example an exact
    /// analytic evolution). Times must be strictly increasing.
    pub fn from_samples(
        samples: Vec<Sample>,
        method: Method,
        qubit: QubitParams,
        pulse: PulseSpec,
        grid: TimeGrid,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("trajectory", "no samples"));
        }
        if samples.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::invalid("trajectory", "times must be strictly increasing"));
        }
        let max_norm_drift = samples
            .iter()
            .map(|s| s.state.norm_drift())
            .fold(0.0, f64::max);
        Ok(Self {
            samples,
            method,
            max_norm_drift,
            qubit,
            pulse,
            grid,
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn initial(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Largest `|‖ψ‖ − 1|` over all stored samples.
    pub fn max_norm_drift(&self) -> f64 {
        self.max_norm_drift
    }

    pub fn qubit(&self) -> &QubitParams {
        &self.qubit
    }

    pub fn pulse(&self) -> &PulseSpec {
        &self.pulse
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }
}

fn check_initial(state: &QubitState) -> Result<()> {
    let drift = state.norm_drift();
    if drift.is_finite() && drift <= NORM_TOLERANCE {
        Ok(())
    } else {
        Err(Error::invalid(
            "initial",
            format!("initial state is not normalized (|norm − 1| = {drift:e})"),
        ))
    }
}

/// Steps `initial` across `grid`, handing every grid point to `visit`.
/// Returns the final state and the largest norm drift seen.
fn integrate(
    initial: &QubitState,
    params: &QubitParams,
    spec: &PulseSpec,
    grid: &TimeGrid,
    method: Method,
    mut visit: impl FnMut(f64, &QubitState),
) -> (QubitState, f64) {
    let steps = grid.steps();
    let dt = grid.dt();
    let mut state = *initial;
    let mut max_drift = state.norm_drift();
    visit(grid.time(0), &state);
    for k in 0..steps {
        let t = grid.time(k);
        state = method.step(&state, params, spec, t, dt);
        max_drift = max_drift.max(state.norm_drift());
        visit(grid.time(k + 1), &state);
    }
    (state, max_drift)
}

fn check_drift(state: &QubitState) -> Result<()> {
    let drift = state.norm_drift();
    if drift.is_finite() && drift <= MAX_NORM_DRIFT {
        Ok(())
    } else {
        Err(Error::NormDrift {
            drift,
            threshold: MAX_NORM_DRIFT,
        })
    }
}

/// Integrates the Schrödinger equation from `initial` over `grid`, storing
/// every grid point. States are never renormalized; a final norm drift above
/// 10⁻⁶ is reported as [`Error::NormDrift`].
pub fn evolve(
    initial: &QubitState,
    params: &QubitParams,
    spec: &PulseSpec,
    grid: &TimeGrid,
    method: Method,
) -> Result<Trajectory> {
    check_initial(initial)?;
    let mut samples = Vec::with_capacity(grid.steps() + 1);
    let (last, max_norm_drift) = integrate(initial, params, spec, grid, method, |t, state| {
        samples.push(Sample { t, state: *state })
    });
    check_drift(&last)?;
    Ok(Trajectory {
        samples,
        method,
        max_norm_drift,
        qubit: *params,
        pulse: *spec,
        grid: *grid,
    })
}

/// Final state only; same arithmetic as [`evolve`] without storing samples.
pub fn evolve_final(
    initial: &QubitState,
    params: &QubitParams,
    spec: &PulseSpec,
    grid: &TimeGrid,
    method: Method,
) -> Result<QubitState> {
    check_initial(initial)?;
    let (last, _) = integrate(initial, params, spec, grid, method, |_, _| {});
    check_drift(&last)?;
    Ok(last)
}

/// Time-ordered propagator over `grid`, built column by column from the
/// evolutions of `|0⟩` and `|1⟩`.
pub fn propagator(
    params: &QubitParams,
    spec: &PulseSpec,
    grid: &TimeGrid,
    method: Method,
) -> Result<Unitary2> {
    let c0 = evolve_final(&QubitState::ground(), params, spec, grid, method)?;
    let c1 = evolve_final(&QubitState::excited(), params, spec, grid, method)?;
    Ok(Unitary2::from_columns(&c0, &c1))
}

/// Undriven evolution for `duration`: `diag(e^{−iω0 s/2}, e^{+iω0 s/2})`.
pub fn free_precession(params: &QubitParams, duration: f64) -> Unitary2 {
    let phase = 0.5 * params.omega0() * duration;
    Unitary2::from_rows([
        [Complex64::from_polar(1.0, -phase), ZERO],
        [ZERO, Complex64::from_polar(1.0, phase)],
    ])
}

/// Kicked-regime propagator with the phase factors written as
/// `e^{±iω0 t}` and `e^{±iω0(t−2t0)}`, for observation time `t ≥ t0` after a
/// kick of area `area` at `t0`:
///
/// ```text
/// ⎡ e^{iω0t}cos α           −i e^{iω0(t−2t0)} sin α ⎤
/// ⎣ −i e^{−iω0(t−2t0)} sin α    e^{−iω0t} cos α     ⎦
/// ```
///
/// Its phases follow a different sign and frequency convention from
/// [`free_precession`]; compare it to numerical propagators only through
/// phase-independent quantities such as `|U01|²`.
pub fn kicked_propagator(area: f64, params: &QubitParams, t: f64, t0: f64) -> Unitary2 {
    let w = params.omega0();
    let (s, c) = area.sin_cos();
    let diag = Complex64::from_polar(c, w * t);
    let off = Complex64::from_polar(s, w * (t - 2.0 * t0));
    Unitary2::from_rows([[diag, -I * off], [-I * off.conj(), diag.conj()]])
}

/// Ideal delta kick `exp(−iα σx) = cos α·I − i sin α·σx`.
pub fn delta_kick(area: f64) -> Unitary2 {
    su2_exp(area, 0.0, 0.0, 1.0)
}

/// Applies an ideal delta kick of area `area`. The Bloch vector turns by
/// `2α`, twice the RWA rotation for the same area.
pub fn delta_kick_apply(state: &QubitState, area: f64) -> QubitState {
    delta_kick(area).apply(state)
}

/// Free precession from `t_start` to the kick at `t0`, the kick, then free
/// precession to `t_end`. This is the analytic limit of a carrier-free
/// Gaussian pulse as its width goes to zero.
pub fn kick_with_free_precession(
    area: f64,
    params: &QubitParams,
    t_start: f64,
    t0: f64,
    t_end: f64,
) -> Unitary2 {
    free_precession(params, t_end - t0) * delta_kick(area) * free_precession(params, t0 - t_start)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// `R_ν(θ) = exp(−i(θ/2)σ_ν)`.
pub fn rwa_rotation(axis: Axis, angle: f64) -> Unitary2 {
    let half = 0.5 * angle;
    match axis {
        Axis::X => su2_exp(half, 0.0, 0.0, 1.0),
        Axis::Y => su2_exp(0.0, half, 0.0, 1.0),
        Axis::Z => su2_exp(0.0, 0.0, half, 1.0),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use super::*;
    use crate::pulses::PulseSpec;

    const PS: f64 = 1e-12;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn mat_close(a: &Unitary2, b: &Unitary2, tol: f64) -> bool {
        (*a - *b).operator_norm() < tol
    }

    /// Truncated Taylor series of exp(−i dt H), the brute-force oracle.
    fn taylor_exp(hx: f64, hy: f64, hz: f64, dt: f64, terms: usize) -> Unitary2 {
        let h = Hamiltonian { x: hx, y: hy, z: hz };
        let a = Unitary2::from_rows(h.matrix()).scale(Complex64::new(0.0, -dt));
        let mut sum = Unitary2::identity();
        let mut term = Unitary2::identity();
        for k in 1..terms {
            term = (term * a).scale(Complex64::new(1.0 / k as f64, 0.0));
            sum = Unitary2::from_rows({
                let mut m = sum.rows();
                for r in 0..2 {
                    for c in 0..2 {
                        m[r][c] += term.entry(r, c);
                    }
                }
                m
            });
        }
        sum
    }

    fn idle(width: f64) -> PulseSpec {
        PulseSpec::with_amplitude(0.0, 5.0 * PS, width, QubitParams::DEFAULT_OMEGA0).unwrap()
    }

    #[test]
    fn su2_exp_identity_and_half_turn() {
        assert!(mat_close(&su2_exp(0.0, 0.0, 0.0, 3.0), &Unitary2::identity(), 1e-15));
        let dt = 1e-12;
        let u = su2_exp(PI / (2.0 * dt), 0.0, 0.0, dt);
        let minus_i_x = Unitary2::pauli_x().scale(-I);
        assert!(mat_close(&u, &minus_i_x, 1e-12));
    }

    #[test]
    fn su2_exp_matches_taylor_series() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let hx: f64 = rng.gen_range(-1.0..1.0);
            let hy: f64 = rng.gen_range(-1.0..1.0);
            let hz: f64 = rng.gen_range(-1.0..1.0);
            let dt: f64 = rng.gen_range(0.0..0.5);
            let exact = su2_exp(hx, hy, hz, dt);
            let series = taylor_exp(hx, hy, hz, dt, 12);
            assert!(mat_close(&exact, &series, 1e-10));
            assert!(exact.unitarity_error() < 1e-14);
        }
    }

    #[test]
    fn su2_exp_small_angle_branch_is_continuous() {
        let below = su2_exp(1e-5, 0.0, 0.0, 1.0);
        let above = su2_exp(1.0001e-4, 0.0, 0.0, 1.0);
        assert!(close(below.entry(0, 1), Complex64::new(0.0, -(1e-5f64).sin()), 1e-20));
        assert!(close(above.entry(0, 1), Complex64::new(0.0, -(1.0001e-4f64).sin()), 1e-18));
    }

    #[test]
    fn hamiltonian_basics() {
        let params = QubitParams::default();
        let h = hamiltonian_at(&params, &idle(1.0 * PS), 1.0 * PS);
        let m = h.matrix();
        assert_eq!(m[0][0].re, params.omega0() / 2.0);
        assert_eq!(m[1][1].re, -params.omega0() / 2.0);
        assert_eq!(m[0][1], ZERO);
        assert_eq!(m[0][0] + m[1][1], ZERO);

        let spec = PulseSpec::with_area(PI, &params, 69e-9, 23e-9, params.omega0()).unwrap();
        let at_center = hamiltonian_at(&params, &spec, spec.center());
        let expected = params.rabi_per_field() * spec.amplitude() * (params.omega0() * 69e-9).cos();
        assert!((at_center.x - expected).abs() <= 1e-12 * expected.abs());
        let m = at_center.matrix();
        assert_eq!(m[0][1], m[1][0].conj());
    }

    #[test]
    fn free_precession_full_period_restores_relative_phase() {
        let params = QubitParams::default();
        let spec = idle(1.0 * PS);
        let plus = QubitState::from_amplitudes(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        );
        let period = 2.0 * PI / params.omega0();
        let out = step_magnus2(&plus, &params, &spec, 0.0, period);
        // global phase e^{−iπ} only
        assert!(close(out.a0() * plus.a1(), out.a1() * plus.a0(), 1e-12));
        assert!(close(out.a0(), -plus.a0(), 1e-12));
    }

    #[test]
    fn rk4_zero_drive_keeps_populations() {
        let params = QubitParams::default();
        let spec = idle(1.0 * PS);
        let mut state = QubitState::from_amplitudes(
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        );
        let dt = 1e-14;
        for k in 0..1000 {
            state = step_rk4(&state, &params, &spec, k as f64 * dt, dt);
        }
        assert!((state.a0().norm() - 0.6).abs() < 1e-12);
        assert!((state.a1().norm() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn magnus2_norm_over_a_million_steps() {
        let params = QubitParams::default();
        let spec = PulseSpec::with_area(PI / 2.0, &params, 5.0 * PS, 1.0 * PS, params.omega0())
            .unwrap();
        let grid = TimeGrid::new(0.0, 10.0 * PS, 1e-17).unwrap();
        assert_eq!(grid.steps(), 1_000_000);
        let last = evolve_final(&QubitState::ground(), &params, &spec, &grid, Method::Magnus2)
            .unwrap();
        assert!(last.norm_drift() < 1e-9, "{}", last.norm_drift());
    }

    /// Local error of one step against the same interval split into ten
    /// substeps; the log-log slope gives the local order.
    fn local_slope(method: Method, steps: &[f64]) -> f64 {
        let params = QubitParams::default();
        let spec = PulseSpec::with_area(PI / 2.0, &params, 5.0 * PS, 1.0 * PS, params.omega0())
            .unwrap();
        let psi = QubitState::from_amplitudes(
            Complex64::new(0.8, 0.0),
            Complex64::new(0.0, 0.6),
        );
        let t = 4.3 * PS;
        let errs: Vec<(f64, f64)> = steps
            .iter()
            .map(|&dt| {
                let coarse = method.step(&psi, &params, &spec, t, dt);
                let mut fine = psi;
                for k in 0..10 {
                    fine = method.step(&fine, &params, &spec, t + k as f64 * dt / 10.0, dt / 10.0);
                }
                (dt, coarse.distance(&fine))
            })
            .collect();
        let (d0, e0) = errs[0];
        let (d1, e1) = errs[errs.len() - 1];
        (e0 / e1).ln() / (d0 / d1).ln()
    }

    #[test]
    fn magnus2_local_error_is_third_order() {
        let slope = local_slope(Method::Magnus2, &[2e-14, 1e-14, 5e-15, 2.5e-15]);
        assert!((slope - 3.0).abs() < 0.2, "slope {slope}");
    }

    #[test]
    fn rk4_local_error_is_fifth_order() {
        let slope = local_slope(Method::Rk4, &[2e-13, 1e-13, 5e-14, 2.5e-14]);
        assert!((slope - 5.0).abs() < 0.3, "slope {slope}");
    }

    #[test]
    fn zero_drive_propagator_is_free_precession() {
        let params = QubitParams::default();
        let spec = idle(1.0 * PS);
        let grid = TimeGrid::new(0.0, 10.0 * PS, 1e-15).unwrap();
        for method in [Method::Magnus2, Method::Rk4] {
            let u = propagator(&params, &spec, &grid, method).unwrap();
            assert!(mat_close(&u, &free_precession(&params, 10.0 * PS), 1e-9));
        }
    }

    #[test]
    fn propagator_columns_equal_evolve() {
        let params = QubitParams::default();
        let spec = PulseSpec::with_area(PI / 2.0, &params, 5.0 * PS, 0.5 * PS, params.omega0())
            .unwrap();
        let grid = TimeGrid::for_pulse(&params, &spec, 0.0, 10.0 * PS).unwrap();
        let u = propagator(&params, &spec, &grid, Method::Magnus2).unwrap();
        let from0 = evolve(&QubitState::ground(), &params, &spec, &grid, Method::Magnus2).unwrap();
        let from1 = evolve(&QubitState::excited(), &params, &spec, &grid, Method::Magnus2).unwrap();
        assert_eq!(u.entry(0, 0), from0.last().state.a0());
        assert_eq!(u.entry(1, 0), from0.last().state.a1());
        assert_eq!(u.entry(0, 1), from1.last().state.a0());
        assert_eq!(u.entry(1, 1), from1.last().state.a1());
        assert!(u.unitarity_error() < 1e-9);
    }

    #[test]
    fn short_kick_matches_analytic_limit() {
        let params = QubitParams::default();
        let spec = PulseSpec::with_area(PI / 4.0, &params, 5.0 * PS, 0.01 * PS, params.omega0())
            .unwrap()
            .carrier(false);
        let grid = TimeGrid::for_pulse(&params, &spec, 0.0, 10.0 * PS).unwrap();
        let numeric = propagator(&params, &spec, &grid, Method::Magnus2).unwrap();
        let analytic = kick_with_free_precession(PI / 4.0, &params, 0.0, 5.0 * PS, 10.0 * PS);
        let d = numeric.phase_aligned_distance(&analytic);
        assert!(d < 1e-3, "{d}");
    }

    #[test]
    fn kicked_propagator_properties() {
        let params = QubitParams::default();
        let (t, t0) = (7.3 * PS, 5.0 * PS);
        let none = kicked_propagator(0.0, &params, t, t0);
        assert_eq!(none.entry(0, 1), ZERO);
        assert!((none.entry(0, 0).norm() - 1.0).abs() < 1e-15);

        let flip = kicked_propagator(PI / 2.0, &params, t, t0);
        let out = flip.apply(&QubitState::ground());
        let w = params.omega0();
        let expected = -I * Complex64::from_polar(1.0, -w * (t - 2.0 * t0));
        assert!(out.a0().norm() < 1e-15);
        assert!(close(out.a1(), expected, 1e-12));

        for &(alpha, t, t0, w0) in &[(0.3, 1e-12, 2e-13, 1e10), (2.0, 5e-9, 1e-9, 3e10), (1.1, 0.0, 0.0, 1.0)] {
            let p = QubitParams::new(w0, 3e-25).unwrap();
            let u = kicked_propagator(alpha, &p, t, t0);
            assert!((u.entry(0, 1).norm_sqr() - alpha.sin().powi(2)).abs() < 1e-14);
            assert!(u.unitarity_error() < 1e-14);
        }
    }

    #[test]
    fn delta_kick_values() {
        let out = delta_kick_apply(&QubitState::ground(), PI / 2.0);
        assert!(close(out.a1(), -I, 1e-15));
        assert!(out.a0().norm() < 1e-15);

        let half = delta_kick_apply(&QubitState::ground(), PI / 4.0);
        assert!((half.p1() - 0.5).abs() < 1e-15);

        // area α turns the Bloch vector by 2α: same operator as R_x(2α)
        for alpha in [0.1, 0.7, PI / 2.0, 2.5] {
            assert!(mat_close(&delta_kick(alpha), &rwa_rotation(Axis::X, 2.0 * alpha), 1e-15));
        }
    }

    #[test]
    fn rwa_rotation_values() {
        let not = rwa_rotation(Axis::X, PI);
        assert!(mat_close(&not, &Unitary2::pauli_x().scale(-I), 1e-15));
        let out = not.apply(&QubitState::ground());
        assert!(close(out.a1(), -I, 1e-15));

        let eq = rwa_rotation(Axis::X, PI / 2.0).apply(&QubitState::ground());
        assert!((eq.p0() - eq.p1()).abs() < 1e-15);

        for axis in [Axis::X, Axis::Y, Axis::Z] {
            assert_eq!(rwa_rotation(axis, 0.0), Unitary2::identity());
            assert!(rwa_rotation(axis, 1.234).unitarity_error() < 1e-15);
        }
        let ry = rwa_rotation(Axis::Y, PI);
        assert!(mat_close(&ry, &Unitary2::pauli_y().scale(-I), 1e-15));
        let rz = rwa_rotation(Axis::Z, PI);
        assert!(mat_close(&rz, &Unitary2::pauli_z().scale(-I), 1e-15));
    }

    #[test]
    fn phase_aligned_distance_ignores_global_phase() {
        let u = rwa_rotation(Axis::X, 0.9) * rwa_rotation(Axis::Z, 0.4);
        let shifted = u.scale(Complex64::from_polar(1.0, 2.2));
        assert!(u.phase_aligned_distance(&shifted) < 1e-14);
        // relative rotation by angle θ about any axis: 2 sin(θ/4) after phase removal
        let v = u * rwa_rotation(Axis::Y, 0.2);
        let d = v.phase_aligned_distance(&u);
        assert!((d - 2.0 * (0.1f64 / 2.0).sin()).abs() < 1e-14, "{d}");
    }

    #[test]
    fn grid_lands_on_end() {
        let g = TimeGrid::new(0.0, 10.0 * PS, 3e-15).unwrap();
        assert_eq!(g.steps(), 3334);
        assert_eq!(g.time(g.steps()), 10.0 * PS);
        assert!(g.dt() <= 3e-15);
        let exact = TimeGrid::new(0.0, 1.0, 0.25).unwrap();
        assert_eq!(exact.steps(), 4);
        assert!(TimeGrid::new(1.0, 1.0, 0.1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.6).is_err());
    }

    #[test]
    fn evolve_rejects_unnormalized_initial_state() {
        let params = QubitParams::default();
        let spec = idle(1.0 * PS);
        let grid = TimeGrid::new(0.0, 1.0 * PS, 1e-14).unwrap();
        let bad = QubitState::from_amplitudes(ONE, ONE);
        assert!(matches!(
            evolve(&bad, &params, &spec, &grid, Method::Magnus2),
            Err(Error::InvalidParameter { name: "initial", .. })
        ));
        assert!(QubitState::new(ONE, ONE).is_err());
    }

    #[test]
    fn evolve_fails_on_norm_drift() {
        // rk4 with steps far beyond its stability limit
        let params = QubitParams::default();
        let spec = idle(1.0 * PS);
        let grid = TimeGrid::new(0.0, 1e-9, 2.5e-10).unwrap();
        let err = evolve(&QubitState::ground(), &params, &spec, &grid, Method::Rk4).unwrap_err();
        assert!(matches!(err, Error::NormDrift { .. }), "{err}");
    }

    #[test]
    fn evolve_zero_drive_stays_at_north_pole() {
        let params = QubitParams::default();
        let spec = idle(0.1 * PS);
        let grid = TimeGrid::for_pulse(&params, &spec, 0.0, 10.0 * PS).unwrap();
        let traj = evolve(&QubitState::ground(), &params, &spec, &grid, Method::Magnus2).unwrap();
        assert_eq!(traj.len(), grid.steps() + 1);
        assert_eq!(traj.initial().t, 0.0);
        assert_eq!(traj.last().t, 10.0 * PS);
        for s in traj.samples() {
            assert_eq!(s.state.p1(), 0.0);
        }
    }

    #[test]
    fn method_parsing() {
        assert_eq!("magnus2".parse::<Method>().unwrap(), Method::Magnus2);
        assert_eq!("rk4".parse::<Method>().unwrap(), Method::Rk4);
        assert!("euler".parse::<Method>().is_err());
        assert_eq!(Method::Rk4.to_string(), "rk4");
    }
}
