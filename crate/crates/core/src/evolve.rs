//! Time evolution under the rotating drive.
//!
//! Two independent routes are provided. The closed form uses the rotating
//! frame, U(t) = exp(-i omega t S_z) exp(-i H~ t), and is restricted to linear
//! phi(t). The stepped route multiplies midpoint propagators
//! exp(-i H(t_mid) dt) and accepts any phi(t) profile that closes the loop.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian_generator, ComplexMatrix, QuantumState, SpectralGenerator, Unitary};
use crate::model::{tilt_operator, SpinModel};
use crate::tolerances;

/// Azimuth profile phi(t) - phi0 over one segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhiProfile {
    /// phi = omega t; closes the loop when |omega| * duration = 2 pi.
    Linear { omega: f64 },
    /// phi = 2 pi (3u^2 - 2u^3) with u = t / duration.
    Smoothstep,
    /// phi sampled on a uniform grid in u = t / duration, linearly interpolated.
    Custom { samples: Vec<f64> },
}

impl PhiProfile {
    /// Linear profile completing one positive turn over `duration`.
    pub fn linear_cycle(duration: f64) -> Self {
        PhiProfile::Linear { omega: TAU / duration }
    }

    /// phi(t) - phi0 at time `t` into a segment of length `duration`.
    pub fn phase_at(&self, t: f64, duration: f64) -> f64 {
        match self {
            PhiProfile::Linear { omega } => omega * t,
            PhiProfile::Smoothstep => {
                let u = (t / duration).clamp(0.0, 1.0);
                TAU * u * u * (3.0 - 2.0 * u)
            }
            PhiProfile::Custom { samples } => {
                let u = (t / duration).clamp(0.0, 1.0);
                let last = samples.len() - 1;
                let x = u * last as f64;
                let k = (x.floor() as usize).min(last - 1);
                let frac = x - k as f64;
                samples[k] * (1.0 - frac) + samples[k + 1] * frac
            }
        }
    }

    /// Total winding phi(duration) - phi(0).
    pub fn winding(&self, duration: f64) -> f64 {
        self.phase_at(duration, duration) - self.phase_at(0.0, duration)
    }
}

/// One cycle of the drive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    pub duration: f64,
    /// +1, or -1 for the reversed field B -> -B.
    pub field_sign: f64,
    pub profile: PhiProfile,
    pub tilt_chi: f64,
}

impl PulseSegment {
    pub fn new(duration: f64, field_sign: f64, profile: PhiProfile, tilt_chi: f64) -> Result<Self> {
        let seg = Self { duration, field_sign, profile, tilt_chi };
        seg.validate()?;
        Ok(seg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidConfig(format!("segment duration must be positive, got {}", self.duration)));
        }
        if self.field_sign != 1.0 && self.field_sign != -1.0 {
            return Err(Error::InvalidConfig("field sign must be +1 or -1".into()));
        }
        if !self.tilt_chi.is_finite() {
            return Err(Error::InvalidConfig("non-finite tilt".into()));
        }
        if let PhiProfile::Custom { samples } = &self.profile {
            if samples.len() < 2 || samples.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidConfig("custom profile needs at least two finite samples".into()));
            }
            if samples[0] != 0.0 {
                return Err(Error::InvalidConfig("custom profile must start at 0".into()));
            }
        }
        let winding = self.profile.winding(self.duration).abs();
        if (winding - TAU).abs() > 1e-9 * TAU {
            return Err(Error::InvalidConfig(format!("profile winds by {winding} rad instead of 2 pi")));
        }
        Ok(())
    }

    /// Copy with the duration replaced; linear profiles are rescaled to still close.
    pub fn with_duration(&self, duration: f64) -> Self {
        let profile = match &self.profile {
            PhiProfile::Linear { omega } => PhiProfile::Linear { omega: omega.signum() * TAU / duration },
            p => p.clone(),
        };
        Self { duration, profile, ..self.clone() }
    }
}

/// Ordered list of cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub segments: Vec<PulseSegment>,
}

impl PulseSchedule {
    pub fn new(segments: Vec<PulseSegment>) -> Result<Self> {
        let s = Self { segments };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::InvalidConfig("schedule has no segments".into()));
        }
        self.segments.iter().try_for_each(PulseSegment::validate)
    }

    /// One cycle of length `duration`.
    pub fn single_cycle(duration: f64, profile: PhiProfile, chi: f64) -> Result<Self> {
        Self::new(vec![PulseSegment::new(duration, 1.0, profile, chi)?])
    }

    /// Two cycles of equal length, the second with the field reversed.
    pub fn echo(duration: f64, profile: PhiProfile, chi: f64) -> Result<Self> {
        Self::new(vec![
            PulseSegment::new(duration, 1.0, profile.clone(), chi)?,
            PulseSegment::new(duration, -1.0, profile, chi)?,
        ])
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn with_segment_duration(&self, duration: f64) -> Self {
        Self { segments: self.segments.iter().map(|s| s.with_duration(duration)).collect() }
    }
}

/// Trajectory and propagator produced by either integration route.
#[derive(Debug, Clone, Serialize)]
pub struct PropagationResult {
    pub initial_state: QuantumState,
    pub final_state: QuantumState,
    pub cycle_unitary: Unitary,
    pub time_grid: Vec<f64>,
    /// States at every grid point, when recorded.
    pub state_history: Option<Vec<QuantumState>>,
    /// <psi|H(t)|psi> at every grid point.
    pub energy_expectation_history: Vec<f64>,
    /// Sum of arg <psi(t_k)|psi(t_k+1)> along the grid.
    pub path_phase: f64,
    /// Largest norm deviation from one along the grid.
    pub max_norm_error: f64,
    /// Largest population transfer between instantaneous eigenstates, for
    /// adiabatic runs.
    pub leakage: Option<f64>,
    /// Steps per segment used by the stepped route (0 for the closed form).
    pub steps_per_segment: usize,
}

impl PropagationResult {
    pub fn final_time(&self) -> f64 {
        self.time_grid.last().copied().unwrap_or(0.0)
    }

    /// 1 - |<psi(0)|psi(T)>|.
    pub fn cyclicity_defect(&self) -> f64 {
        1.0 - self.initial_state.inner(&self.final_state).norm()
    }
}

/// Accumulates grid samples shared by both routes.
struct Recorder {
    times: Vec<f64>,
    energies: Vec<f64>,
    states: Option<Vec<QuantumState>>,
    path_phase: f64,
    max_norm_error: f64,
    last: Option<QuantumState>,
}

impl Recorder {
    fn new(record_states: bool, capacity: usize) -> Self {
        Self {
            times: Vec::with_capacity(capacity),
            energies: Vec::with_capacity(capacity),
            states: record_states.then(|| Vec::with_capacity(capacity)),
            path_phase: 0.0,
            max_norm_error: 0.0,
            last: None,
        }
    }

    fn push(&mut self, t: f64, psi: &QuantumState, h: &ComplexMatrix) {
        if let Some(prev) = &self.last {
            self.path_phase += prev.inner(psi).arg();
        }
        self.max_norm_error = self.max_norm_error.max((psi.norm() - 1.0).abs());
        self.times.push(t);
        self.energies.push(h.expectation(psi));
        if let Some(s) = self.states.as_mut() {
            s.push(*psi);
        }
        self.last = Some(*psi);
    }
}

/// Options for the stepped integrator.
#[derive(Debug, Clone, Copy)]
pub struct StepOptions {
    pub steps_per_segment: usize,
    pub record_states: bool,
    /// Track populations of the instantaneous eigenstates.
    pub track_leakage: bool,
}

impl Default for StepOptions {
    fn default() -> Self {
        Self { steps_per_segment: tolerances::DEFAULT_STEPS_PER_SEGMENT, record_states: false, track_leakage: false }
    }
}

fn check_state<M: SpinModel>(model: &M, state0: &QuantumState) -> Result<()> {
    if state0.dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), got: state0.dim() });
    }
    Ok(())
}

/// Closed-form propagation of one linear segment: the rotating frame turns
/// H(t) into the constant generator H(phi0) - omega S_z.
struct LinearSegmentPropagator {
    frame: SpectralGenerator,
    rotating: SpectralGenerator,
    omega: f64,
}

impl LinearSegmentPropagator {
    fn new<M: SpinModel>(model: &M, sign: f64, chi: f64, omega: f64) -> Result<Self> {
        let phi0 = model.field().phi0;
        let r = tilt_operator(model.dim(), chi);
        let generator = r * model.spin_z() * r.dagger();
        let h_tilde = model.hamiltonian_at(phi0, sign, chi) - generator.scale_real(omega);
        Ok(Self { frame: SpectralGenerator::new(&generator)?, rotating: SpectralGenerator::new(&h_tilde)?, omega })
    }

    fn at(&self, t: f64) -> Result<Unitary> {
        Ok(self.frame.evolve(self.omega * t)?.then_after(&self.rotating.evolve(t)?))
    }
}

/// Closed-form evolution over [0, t] under the model's own linear drive.
pub fn propagate_exact<M: SpinModel>(model: &M, t: f64, state0: &QuantumState) -> Result<PropagationResult> {
    propagate_exact_sampled(model, t, state0, tolerances::DEFAULT_EXACT_SAMPLES)
}

/// As [`propagate_exact`], recording `samples` intervals of history.
pub fn propagate_exact_sampled<M: SpinModel>(
    model: &M,
    t: f64,
    state0: &QuantumState,
    samples: usize,
) -> Result<PropagationResult> {
    check_state(model, state0)?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let f = *model.field();
    let segment = LinearSegmentPropagator::new(model, 1.0, f.chi, f.omega)?;
    let samples = samples.max(1);
    let mut rec = Recorder::new(true, samples + 1);
    for k in 0..=samples {
        let tk = t * k as f64 / samples as f64;
        let psi = segment.at(tk)?.apply(state0);
        rec.push(tk, &psi, &model.hamiltonian_at(f.phi_at(tk), 1.0, f.chi));
    }
    let u = segment.at(t)?;
    finish(state0, u, rec, None, 0)
}

/// Closed-form evolution through a schedule of linear segments.
pub fn propagate_exact_schedule<M: SpinModel>(
    model: &M,
    schedule: &PulseSchedule,
    state0: &QuantumState,
    samples_per_segment: usize,
) -> Result<PropagationResult> {
    check_state(model, state0)?;
    schedule.validate()?;
    let phi0 = model.field().phi0;
    let samples = samples_per_segment.max(1);
    let mut rec = Recorder::new(true, schedule.segments.len() * (samples + 1));
    let mut total = Unitary::identity(model.dim());
    let mut t0 = 0.0;
    for seg in &schedule.segments {
        let PhiProfile::Linear { omega } = seg.profile else {
            return Err(Error::ProfileNotLinear);
        };
        let prop = LinearSegmentPropagator::new(model, seg.field_sign, seg.tilt_chi, omega)?;
        let start = total.apply(state0);
        for k in 0..=samples {
            let tk = seg.duration * k as f64 / samples as f64;
            let psi = prop.at(tk)?.apply(&start);
            rec.push(t0 + tk, &psi, &model.hamiltonian_at(phi0 + omega * tk, seg.field_sign, seg.tilt_chi));
        }
        total = prop.at(seg.duration)?.then_after(&total);
        t0 += seg.duration;
    }
    finish(state0, total, rec, None, 0)
}

/// Time-ordered product of midpoint propagators exp(-i H(t_mid) dt).
pub fn propagate_stepped<M: SpinModel>(
    model: &M,
    schedule: &PulseSchedule,
    state0: &QuantumState,
    steps_per_segment: usize,
) -> Result<PropagationResult> {
    propagate_stepped_with(model, schedule, state0, StepOptions { steps_per_segment, ..StepOptions::default() })
}

pub fn propagate_stepped_with<M: SpinModel>(
    model: &M,
    schedule: &PulseSchedule,
    state0: &QuantumState,
    opts: StepOptions,
) -> Result<PropagationResult> {
    check_state(model, state0)?;
    schedule.validate()?;
    let steps = opts.steps_per_segment;
    if steps < tolerances::MIN_STEPS_PER_SEGMENT {
        return Err(Error::StepCountTooSmall { min: tolerances::MIN_STEPS_PER_SEGMENT, got: steps });
    }
    let phi0 = model.field().phi0;
    let mut rec = Recorder::new(opts.record_states, schedule.segments.len() * (steps + 1));
    let mut total = Unitary::identity(model.dim());
    let mut psi = *state0;
    let mut t0 = 0.0;
    // Index of the instantaneous eigenstate the run starts in.
    let mut tracked: Option<usize> = None;
    let mut leakage: f64 = 0.0;

    for seg in &schedule.segments {
        let dt = seg.duration / steps as f64;
        let h_at = |tau: f64| {
            model.hamiltonian_at(phi0 + seg.profile.phase_at(tau, seg.duration), seg.field_sign, seg.tilt_chi)
        };
        // Populations are measured in the eigenbasis of the unreversed field,
        // which spans the same rays as the reversed one.
        let mut observe = |tau: f64, psi: &QuantumState| -> Result<()> {
            if opts.track_leakage {
                let phi = phi0 + seg.profile.phase_at(tau, seg.duration);
                let e = model.instantaneous_eigensystem(phi, 1.0, seg.tilt_chi)?;
                let p: Vec<f64> = e.states.iter().map(|s| s.inner(psi).norm_sqr()).collect();
                let k = *tracked.get_or_insert_with(|| {
                    (0..p.len()).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(0)
                });
                // Relative to the state norm so rounding drift does not register.
                leakage = leakage.max(1.0 - p[k] / p.iter().sum::<f64>());
            }
            Ok(())
        };

        rec.push(t0, &psi, &h_at(0.0));
        observe(0.0, &psi)?;
        for k in 0..steps {
            let mid = (k as f64 + 0.5) * dt;
            let step = expm_hermitian_generator(&h_at(mid), dt)?;
            psi = step.apply(&psi);
            total = step.then_after(&total);
            let tau = (k + 1) as f64 * dt;
            rec.push(t0 + tau, &psi, &h_at(tau));
            observe(tau, &psi)?;
        }
        t0 += seg.duration;
    }
    finish(state0, total, rec, opts.track_leakage.then_some(leakage), steps)
}

fn finish(
    state0: &QuantumState,
    total: Unitary,
    rec: Recorder,
    leakage: Option<f64>,
    steps: usize,
) -> Result<PropagationResult> {
    let final_state = total.apply(state0);
    Ok(PropagationResult {
        initial_state: *state0,
        final_state,
        cycle_unitary: total,
        time_grid: rec.times,
        state_history: rec.states,
        energy_expectation_history: rec.energies,
        path_phase: rec.path_phase,
        max_norm_error: rec.max_norm_error,
        leakage,
        steps_per_segment: steps,
    })
}

/// Cycle length for a target slowness: omega_mean / gap = slowness.
pub fn adiabatic_period<M: SpinModel>(model: &M, slowness: f64) -> Result<f64> {
    if !(slowness > 0.0 && slowness.is_finite()) {
        return Err(Error::DomainError(format!("slowness must be positive, got {slowness}")));
    }
    let gap = model.instantaneous_gap()?;
    if gap < tolerances::MIN_GAP {
        return Err(Error::GapClosed { gap });
    }
    Ok(TAU / (slowness * gap))
}

/// Slow traversal of `schedule` with every segment stretched so that the mean
/// rotation rate is `slowness` times the smallest instantaneous gap.
pub fn adiabatic_cycle<M: SpinModel>(
    model: &M,
    schedule: &PulseSchedule,
    slowness: f64,
    state0: &QuantumState,
) -> Result<PropagationResult> {
    adiabatic_cycle_with(model, schedule, slowness, state0, adiabatic_steps(slowness))
}

/// Steps per segment used by [`adiabatic_cycle`]: the default, raised so that
/// each step advances the fastest phase by at most ~0.3 rad at small slowness.
pub fn adiabatic_steps(slowness: f64) -> usize {
    let needed = (20.0 / slowness).ceil();
    (needed as usize).max(tolerances::DEFAULT_STEPS_PER_SEGMENT)
}

pub fn adiabatic_cycle_with<M: SpinModel>(
    model: &M,
    schedule: &PulseSchedule,
    slowness: f64,
    state0: &QuantumState,
    steps_per_segment: usize,
) -> Result<PropagationResult> {
    let period = adiabatic_period(model, slowness)?;
    let stretched = schedule.with_segment_duration(period);
    propagate_stepped_with(
        model,
        &stretched,
        state0,
        StepOptions { steps_per_segment, record_states: false, track_leakage: true },
    )
}
