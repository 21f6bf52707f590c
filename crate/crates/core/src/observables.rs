//! Scalar quantifiers of a qubit state or trajectory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::{QubitState, Trajectory};
use num_complex::Complex64;

/// Tolerance for treating an initial state as `|0⟩` or `|1⟩`.
const BASIS_TOLERANCE: f64 = 1e-9;

/// Expectation values `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// `⟨σz⟩ = |a0|² − |a1|²`.
pub fn expect_sigma_z(state: &QubitState) -> f64 {
    state.p0() - state.p1()
}

/// `(2 Re(a0* a1), 2 Im(a0* a1), |a0|² − |a1|²)`.
pub fn bloch_vector(state: &QubitState) -> BlochPoint {
    let cross = state.a0().conj() * state.a1();
    BlochPoint {
        x: 2.0 * cross.re,
        y: 2.0 * cross.im,
        z: expect_sigma_z(state),
    }
}

/// l1 norm of coherence, `2|a0||a1|`.
pub fn l1_coherence(state: &QubitState) -> f64 {
    2.0 * state.a0().norm() * state.a1().norm()
}

/// Overlap fidelity `|⟨target|state⟩|²`.
pub fn state_fidelity(state: &QubitState, target: &QubitState) -> f64 {
    target.inner(state).norm_sqr()
}

/// Which computational basis state `state` is, if any.
fn basis_index(state: &QubitState) -> Option<usize> {
    if (state.p0() - 1.0).abs() <= BASIS_TOLERANCE && state.p1() <= BASIS_TOLERANCE {
        Some(0)
    } else if (state.p1() - 1.0).abs() <= BASIS_TOLERANCE && state.p0() <= BASIS_TOLERANCE {
        Some(1)
    } else {
        None
    }
}

/// Population transferred to the opposite basis state at the end of the run:
/// `|a1(T)|²` for a run starting in `|0⟩`, `|a0(T)|²` for one starting in `|1⟩`.
pub fn not_gate_fidelity(traj: &Trajectory) -> Result<f64> {
    let last = traj.last().state;
    match basis_index(&traj.initial().state) {
        Some(0) => Ok(last.p1()),
        Some(_) => Ok(last.p0()),
        None => Err(Error::NotBasisState),
    }
}

/// Transforms a lab-frame state into a frame rotating at `frame_frequency`
/// about z: `diag(e^{iωt/2}, e^{−iωt/2})`.
pub fn rotating_frame(state: &QubitState, t: f64, frame_frequency: f64) -> QubitState {
    let phase = 0.5 * frame_frequency * t;
    QubitState::from_amplitudes(
        Complex64::from_polar(1.0, phase) * state.a0(),
        Complex64::from_polar(1.0, -phase) * state.a1(),
    )
}

/// Aggregate figures of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    /// Overlap of the final state with `X|ψ(0)⟩`; for basis-state starts this
    /// is exactly [`not_gate_fidelity`].
    pub final_fidelity: f64,
    /// Largest l1 coherence over the stored samples.
    pub max_coherence: f64,
    pub final_coherence: f64,
    pub final_sz: f64,
    pub final_bloch: BlochPoint,
    /// Largest `|‖ψ‖ − 1|` over the run.
    pub norm_drift: f64,
}

/// Fidelity, coherence extremes, final Bloch point and norm drift of `traj`.
pub fn summarize(traj: &Trajectory) -> RunSummary {
    let initial = traj.initial().state;
    let last = traj.last().state;
    let flipped = QubitState::from_amplitudes(initial.a1(), initial.a0());
    let max_coherence = traj
        .samples()
        .iter()
        .map(|s| l1_coherence(&s.state))
        .fold(0.0, f64::max);
    RunSummary {
        final_fidelity: state_fidelity(&last, &flipped),
        max_coherence,
        final_coherence: l1_coherence(&last),
        final_sz: expect_sigma_z(&last),
        final_bloch: bloch_vector(&last),
        norm_drift: traj.max_norm_drift(),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    use super::*;
    use crate::propagation::{delta_kick_apply, Method, Sample, TimeGrid};
    use crate::pulses::{PulseSpec, QubitParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> QubitState {
        QubitState::from_amplitudes(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0))
    }

    /// Two-sample trajectory ending in `last`.
    fn jump(initial: QubitState, last: QubitState) -> Trajectory {
        let params = QubitParams::default();
        let pulse = PulseSpec::with_amplitude(0.0, 0.0, 1e-12, 0.0).unwrap();
        let grid = TimeGrid::new(0.0, 1.0, 0.5).unwrap();
        Trajectory::from_samples(
            vec![
                Sample { t: 0.0, state: initial },
                Sample { t: 1.0, state: last },
            ],
            Method::Magnus2,
            params,
            pulse,
            grid,
        )
        .unwrap()
    }

    #[test]
    fn sigma_z_values() {
        assert_eq!(expect_sigma_z(&QubitState::ground()), 1.0);
        assert_eq!(expect_sigma_z(&QubitState::excited()), -1.0);
        assert!(expect_sigma_z(&plus()).abs() < 1e-15);
    }

    #[test]
    fn bloch_values() {
        let north = bloch_vector(&QubitState::ground());
        assert_eq!((north.x, north.y, north.z), (0.0, 0.0, 1.0));
        let minus_y = QubitState::from_amplitudes(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2));
        let b = bloch_vector(&minus_y);
        assert!(b.x.abs() < 1e-15 && (b.y + 1.0).abs() < 1e-15 && b.z.abs() < 1e-15);
        let b = bloch_vector(&plus());
        assert!((b.x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherence_values() {
        assert_eq!(l1_coherence(&QubitState::ground()), 0.0);
        for phi in [0.0, 0.4, 2.0, -3.0] {
            let s = QubitState::from_amplitudes(
                c(FRAC_1_SQRT_2, 0.0),
                Complex64::from_polar(FRAC_1_SQRT_2, phi),
            );
            assert!((l1_coherence(&s) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fidelity_values() {
        let psi = QubitState::from_amplitudes(c(0.6, 0.0), c(0.0, 0.8));
        assert!((state_fidelity(&psi, &psi) - 1.0).abs() < 1e-15);
        assert_eq!(state_fidelity(&QubitState::ground(), &QubitState::excited()), 0.0);
        assert!((state_fidelity(&QubitState::ground(), &plus()) - 0.5).abs() < 1e-15);
        assert!((state_fidelity(&psi.with_global_phase(1.3), &psi) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn not_gate_fidelity_cases() {
        let kicked = delta_kick_apply(&QubitState::ground(), PI / 2.0);
        let traj = jump(QubitState::ground(), kicked);
        assert!((not_gate_fidelity(&traj).unwrap() - 1.0).abs() < 1e-15);

        let idle = jump(QubitState::ground(), QubitState::ground());
        assert_eq!(not_gate_fidelity(&idle).unwrap(), 0.0);

        let down = jump(QubitState::excited(), plus());
        assert!((not_gate_fidelity(&down).unwrap() - 0.5).abs() < 1e-15);

        let custom = jump(plus(), plus());
        assert_eq!(not_gate_fidelity(&custom), Err(Error::NotBasisState));
    }

    #[test]
    fn summarize_idle_and_kick() {
        let idle = summarize(&jump(QubitState::ground(), QubitState::ground()));
        assert_eq!(idle.max_coherence, 0.0);
        assert_eq!(idle.final_fidelity, 0.0);
        assert_eq!(idle.final_sz, 1.0);

        let traj = jump(QubitState::ground(), delta_kick_apply(&QubitState::ground(), PI / 2.0));
        let s = summarize(&traj);
        assert_eq!(s.final_fidelity, not_gate_fidelity(&traj).unwrap());
        assert!((s.final_bloch.z + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rotating_frame_basics() {
        let psi = QubitState::from_amplitudes(c(0.6, 0.0), c(0.0, 0.8));
        assert_eq!(rotating_frame(&psi, 3.0, 0.0), psi);
        let r = rotating_frame(&psi, 1e-10, 2.0 * PI * 4.5e9);
        assert!((r.norm() - 1.0).abs() < 1e-15);
        assert!((expect_sigma_z(&r) - expect_sigma_z(&psi)).abs() < 1e-15);
        assert!((l1_coherence(&r) - l1_coherence(&psi)).abs() < 1e-15);
    }
}
