//! Phase bookkeeping for cyclic evolutions.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::{PropagationResult, PulseSchedule};
use crate::linalg::QuantumState;
use crate::model::SpinModel;
use crate::tolerances;

/// Wraps an angle into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Distance between two angles modulo 2 pi.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Phases of one cyclic evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseBreakdown {
    pub total: f64,
    pub dynamical: f64,
    /// total - dynamical.
    pub geometric: f64,
    pub wrapped_geometric: f64,
    pub cyclicity_defect: f64,
}

impl PhaseBreakdown {
    pub fn is_cyclic(&self) -> bool {
        self.cyclicity_defect <= tolerances::CYCLICITY
    }
}

/// arg <psi(0)|psi(T)>, placed on the branch nearest the phase accumulated
/// step by step along the trajectory.
pub fn total_phase(result: &PropagationResult, state0: &QuantumState) -> Result<f64> {
    total_phase_with(result, state0, tolerances::CYCLICITY)
}

pub fn total_phase_with(result: &PropagationResult, state0: &QuantumState, cyclicity: f64) -> Result<f64> {
    let overlap = state0.inner(&result.final_state);
    let defect = 1.0 - overlap.norm();
    if !(defect <= cyclicity) {
        return Err(Error::NotCyclic { defect });
    }
    Ok(unwrap_near(overlap.arg(), result.path_phase))
}

fn unwrap_near(wrapped: f64, reference: f64) -> f64 {
    reference + wrap_phase(wrapped - reference)
}

/// -integral <psi|H(t)|psi> dt by the trapezoid rule on the propagation grid.
pub fn dynamical_phase(result: &PropagationResult) -> Result<f64> {
    let t = &result.time_grid;
    let e = &result.energy_expectation_history;
    if t.len() < 2 || e.len() != t.len() {
        return Err(Error::MissingHistory);
    }
    let integral: f64 = t.windows(2).zip(e.windows(2)).map(|(tw, ew)| 0.5 * (tw[1] - tw[0]) * (ew[0] + ew[1])).sum();
    Ok(-integral)
}

/// Breakdown without the cyclicity check; callers inspect `cyclicity_defect`.
pub fn phase_breakdown(result: &PropagationResult, state0: &QuantumState) -> Result<PhaseBreakdown> {
    let overlap = state0.inner(&result.final_state);
    let total = unwrap_near(overlap.arg(), result.path_phase);
    let dynamical = dynamical_phase(result)?;
    let geometric = total - dynamical;
    Ok(PhaseBreakdown {
        total,
        dynamical,
        geometric,
        wrapped_geometric: wrap_phase(geometric),
        cyclicity_defect: 1.0 - overlap.norm(),
    })
}

/// Berry phase of an adiabatic run: total phase plus the integral of the
/// instantaneous eigenvalue. `energy` is the eigenvalue of the tracked state
/// under the unreversed field; reversed segments contribute with opposite sign.
pub fn adiabatic_berry_phase(
    result: &PropagationResult,
    state0: &QuantumState,
    schedule: &PulseSchedule,
    energy: f64,
) -> f64 {
    let overlap = state0.inner(&result.final_state);
    let total = unwrap_near(overlap.arg(), result.path_phase);
    let eigen_integral: f64 = schedule.segments.iter().map(|s| s.field_sign * s.duration).sum::<f64>() * energy;
    total + eigen_integral
}

/// Aharonov-Anandan breakdown of a cyclic evolution.
pub fn aa_phase(result: &PropagationResult, state0: &QuantumState) -> Result<PhaseBreakdown> {
    let b = phase_breakdown(result, state0)?;
    if !b.is_cyclic() {
        return Err(Error::NotCyclic { defect: b.cyclicity_defect });
    }
    Ok(b)
}

/// A Berry phase on (-pi, pi] together with its unwrapped value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BerryPhase {
    pub wrapped: f64,
    pub unwrapped: f64,
}

/// -sum_k arg <v_k|v_{k+1}> around the closed loop v_0, ..., v_{n-1}, v_0.
pub fn pancharatnam_phase(states: &[QuantumState]) -> Result<f64> {
    if states.len() < 2 {
        return Err(Error::InvalidConfig("a loop needs at least two states".into()));
    }
    let n = states.len();
    Ok(-(0..n).map(|k| states[k].inner(&states[(k + 1) % n]).arg()).sum::<f64>())
}

/// Berry phase of the instantaneous eigenstate `eigenindex` over one turn of
/// the field, from the discrete Pancharatnam product on `grid_points` azimuths.
///
/// The discrete product converges as 1/N^2; the returned value combines the
/// N and N/2 grids to cancel that term.
pub fn berry_phase_connection<M: SpinModel>(model: &M, eigenindex: usize, grid_points: usize) -> Result<BerryPhase> {
    if grid_points < tolerances::MIN_BERRY_GRID {
        return Err(Error::StepCountTooSmall { min: tolerances::MIN_BERRY_GRID, got: grid_points });
    }
    if eigenindex >= model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: eigenindex });
    }
    let n = grid_points + grid_points % 2;
    let states = loop_states(model, eigenindex, n)?;
    let fine = pancharatnam_phase(&states)?;
    let coarse: Vec<QuantumState> = states.iter().step_by(2).copied().collect();
    let coarse = pancharatnam_phase(&coarse)?;
    let unwrapped = (4.0 * fine - coarse) / 3.0;
    Ok(BerryPhase { wrapped: wrap_phase(unwrapped), unwrapped })
}

/// Raw Pancharatnam value on exactly `grid_points` azimuths, without extrapolation.
pub fn berry_phase_raw<M: SpinModel>(model: &M, eigenindex: usize, grid_points: usize) -> Result<f64> {
    pancharatnam_phase(&loop_states(model, eigenindex, grid_points)?)
}

/// Instantaneous eigenstates at phi0 + 2 pi k / n, checking the gap.
pub fn loop_states<M: SpinModel>(model: &M, eigenindex: usize, n: usize) -> Result<Vec<QuantumState>> {
    let f = model.field();
    (0..n)
        .map(|k| {
            let phi = f.phi0 + TAU * k as f64 / n as f64;
            let e = model.instantaneous_eigensystem(phi, 1.0, f.chi)?;
            let gap = e.gap_of(eigenindex);
            if gap < tolerances::MIN_GAP {
                return Err(Error::GapClosed { gap });
            }
            Ok(e.states[eigenindex])
        })
        .collect()
}

/// Omega(theta) = 2 pi (1 - cos theta).
pub fn solid_angle(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::DomainError(format!("cone angle {theta} outside [0, pi]")));
    }
    Ok(TAU * (1.0 - theta.cos()))
}
