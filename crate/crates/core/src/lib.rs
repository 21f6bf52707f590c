//! Pulse-level simulation of single-qubit gates on a driven two-level system.
//!
//! The crate covers the two control regimes of a qubit under a Gaussian
//! microwave drive:
//!
//! * the adiabatic regime (`ω0·τ ≫ 1`), where the carrier is resonant with
//!   the qubit and the rotating wave approximation holds, and
//! * the diabatic ("kicked") regime (`ω0·τ ≪ 1`), where a picosecond pulse
//!   acts as an impulse and the rotation is set by the pulse area alone.
//!
//! Everything is computed in the laboratory frame and in SI units.
//!
//! Modules:
//!
//! * [`pulses`]: qubit/pulse parameters, area ↔ amplitude ↔ voltage conversions
//! * [`propagation`]: Hamiltonian, steppers, propagators, analytic reference unitaries
//! * [`observables`]: magnetization, Bloch vectors, l1 coherence, fidelities
//! * [`experiments`]: preset scenarios, duration sweeps, regime classification

pub mod error;
pub mod experiments;
pub mod observables;
pub mod propagation;
pub mod pulses;

pub use error::{Error, Result};
pub use experiments::{
    classify_regime, kick_vs_analytic, rabi_doubling_check, scenario_adiabatic, scenario_kick,
    sweep_tau, InitialState, RabiDoubling, Regime, ScenarioConfig, SweepResult, SweepRow,
};
pub use observables::{
    bloch_vector, expect_sigma_z, l1_coherence, not_gate_fidelity, rotating_frame,
    state_fidelity, summarize, BlochPoint, RunSummary,
};
pub use propagation::{
    delta_kick_apply, evolve, free_precession, hamiltonian_at, kick_with_free_precession,
    kicked_propagator, propagator, rwa_rotation, step_magnus2, step_rk4, su2_exp, Axis,
    Hamiltonian, Method, QubitState, Sample, TimeGrid, Trajectory, Unitary2,
};
pub use pulses::{
    amplitude_for_area, area_of, drive_at, effective_kick_area, envelope_at, field_to_voltage,
    peak_rabi_frequency, peak_voltage_pi, AreaEstimate, DeviceGeometry, PulseSpec, QubitParams,
    HBAR,
};
