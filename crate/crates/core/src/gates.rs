//! Geometric single-qubit gates, exchange gates and the two-qubit audits.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8, PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::{
    adiabatic_period, adiabatic_steps, propagate_exact_sampled, propagate_exact_schedule, propagate_stepped,
    PhiProfile, PulseSchedule,
};
use crate::linalg::{
    distance_up_to_global_phase, expm_hermitian_generator, makhlin_invariants, pauli, tensor, ComplexMatrix,
    MakhlinInvariants, QuantumState, Unitary, C64,
};
use crate::model::{
    qubit_basis, rotating_frame_eigensystem_two, spin_down_along, spin_up_along, tilt_vector, FieldConfig, SpinModel,
    TwoQubitConfig, Vec3,
};
use crate::phase::{aa_phase, berry_phase_connection, dynamical_phase, phase_distance, wrap_phase};
use crate::tolerances;

/// Gates the toolkit knows how to build or compare against.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GateTarget {
    PiOver8,
    Hadamard,
    SqrtSwap,
    Cnot,
    Cz,
    Custom(Unitary),
}

impl GateTarget {
    pub fn unitary(&self) -> Unitary {
        match self {
            GateTarget::PiOver8 => pi8_gate(),
            GateTarget::Hadamard => hadamard(),
            GateTarget::SqrtSwap => sqrt_swap(),
            GateTarget::Cnot => cnot(),
            GateTarget::Cz => cz(),
            GateTarget::Custom(u) => *u,
        }
    }

    pub fn dim(&self) -> usize {
        self.unitary().dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mechanism {
    BerryEcho,
    AaZeroDynamical,
    ExchangeDynamical,
    HybridSequence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateSpec {
    pub target: GateTarget,
    pub mechanism: Mechanism,
}

impl GateSpec {
    pub fn new(target: GateTarget, mechanism: Mechanism) -> Result<Self> {
        if let GateTarget::Custom(u) = &target {
            let defect = u.matrix().unitarity_defect();
            if defect > tolerances::UNITARITY {
                return Err(Error::NotUnitary { defect });
            }
        }
        Ok(Self { target, mechanism })
    }
}

/// Field and schedule realizing diag(e^{i gamma}, e^{-i gamma}) in the qubit
/// basis, rotated by the tilt.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvedParameters {
    pub mechanism: Mechanism,
    pub field: FieldConfig,
    pub schedule: PulseSchedule,
    pub predicted_gamma: f64,
    /// Axis of the qubit basis, in the x-z plane.
    pub qubit_axis: Vec3,
    pub residuals: BTreeMap<String, f64>,
}

impl SolvedParameters {
    /// Same parameters with every cycle tilted by `chi`.
    pub fn with_chi(mut self, chi: f64) -> Self {
        self.field.chi = chi;
        for s in &mut self.schedule.segments {
            s.tilt_chi = chi;
        }
        self
    }

    pub fn chi(&self) -> f64 {
        self.field.chi
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

/// diag(e^{-i pi/8}, e^{i pi/8}).
pub fn pi8_gate() -> Unitary {
    Unitary::diagonal_phases(&[-FRAC_PI_8, FRAC_PI_8]).expect("2x2")
}

pub fn hadamard() -> Unitary {
    Unitary::new(ComplexMatrix::from_real_rows([[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]))
        .expect("unitary")
}

pub fn cz() -> Unitary {
    Unitary::diagonal_phases(&[0.0, 0.0, 0.0, PI]).expect("4x4")
}

pub fn cnot() -> Unitary {
    Unitary::new(ComplexMatrix::from_real_rows([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]))
    .expect("unitary")
}

pub fn swap() -> Unitary {
    Unitary::new(ComplexMatrix::from_real_rows([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]))
    .expect("unitary")
}

/// R_y(chi) diag(e^{i gamma}, e^{-i gamma}) R_y(chi)^dagger.
pub fn tilted_phase_gate(gamma: f64, chi: f64) -> Unitary {
    let r = pauli::rotation_y(chi);
    let d = ComplexMatrix::diagonal_phases(&[gamma, -gamma]).expect("2x2");
    Unitary::new(r * d * r.dagger()).expect("product of unitaries")
}

fn check_b1(b1: f64) -> Result<()> {
    if !(b1 > 0.0 && b1.is_finite()) {
        return Err(Error::InvalidConfig(format!("B1 must be positive, got {b1}")));
    }
    Ok(())
}

/// Field for a Berry-phase echo gate with gamma = 2 pi B0 / B.
///
/// The cycle length in the returned schedule is nominal; simulated builds
/// stretch it to the requested slowness.
pub fn solve_berry_gate(gamma: f64, b1: f64) -> Result<SolvedParameters> {
    check_b1(b1)?;
    if !gamma.is_finite() {
        return Err(Error::NonFinite);
    }
    let c = gamma / TAU;
    if c.abs() >= 1.0 {
        return Err(Error::Unreachable(format!("|gamma| = {} is not below 2 pi", gamma.abs())));
    }
    let b0 = b1 * c / (1.0 - c * c).sqrt();
    let field = FieldConfig::new(b0, b1, 1.0, 1.0)?;
    let schedule = PulseSchedule::echo(TAU, PhiProfile::linear_cycle(TAU), 0.0)?;
    let predicted = TAU * b0 / field.magnitude();
    let mut residuals = BTreeMap::new();
    residuals.insert("gamma".to_string(), (predicted - gamma).abs());
    residuals.insert("ratio".to_string(), (b0 / b1 - c / (1.0 - c * c).sqrt()).abs());
    Ok(SolvedParameters {
        mechanism: Mechanism::BerryEcho,
        field,
        schedule,
        predicted_gamma: predicted,
        qubit_axis: [b1, 0.0, b0],
        residuals,
    })
}

/// Field for a single-cycle Aharonov-Anandan gate with gamma = pi u / B~,
/// u = B0 + omega/kappa, and vanishing dynamical phase kappa (u^2 + B1^2) = omega u.
///
/// The construction needs omega > 0, so kappa must share the sign of gamma.
pub fn solve_aa_gate(gamma: f64, b1: f64, kappa: f64) -> Result<SolvedParameters> {
    check_b1(b1)?;
    if !(gamma.is_finite() && kappa.is_finite()) {
        return Err(Error::NonFinite);
    }
    if kappa == 0.0 {
        return Err(Error::InvalidConfig("kappa must be nonzero".into()));
    }
    let c = gamma / PI;
    if c.abs() >= 1.0 {
        return Err(Error::Unreachable(format!("|gamma| = {} is not below pi", gamma.abs())));
    }
    if c == 0.0 {
        return Err(Error::Unreachable("gamma = 0 needs an infinite rotation rate".into()));
    }
    let u = b1 * c / (1.0 - c * c).sqrt();
    let omega_over_kappa = (u * u + b1 * b1) / u;
    let omega = kappa * omega_over_kappa;
    if omega <= 0.0 {
        return Err(Error::Unreachable(format!(
            "gamma = {gamma} with kappa = {kappa} needs omega = {omega} < 0; use kappa of the same sign as gamma"
        )));
    }
    let b0 = u - omega_over_kappa;
    let discriminant = omega_over_kappa * omega_over_kappa - 4.0 * b1 * b1;
    if discriminant < 0.0 {
        return Err(Error::NoRealRoot { discriminant });
    }
    let roots = [-1.0, 1.0].map(|s| 0.5 * (-omega_over_kappa + s * discriminant.sqrt()));
    let root_residual = roots.iter().map(|r| (b0 - r).abs()).fold(f64::INFINITY, f64::min);

    let field = FieldConfig::new(b0, b1, omega, kappa)?;
    let period = field.period()?;
    let schedule = PulseSchedule::single_cycle(period, PhiProfile::Linear { omega }, 0.0)?;
    let predicted = PI * u / field.rotating_magnitude();

    let mut residuals = BTreeMap::new();
    residuals.insert("zero_dynamical_condition".to_string(), root_residual);
    residuals.insert("gamma".to_string(), (predicted - gamma).abs());
    let axis = field.rotating_field();
    let basis = Unitary::new(qubit_basis(axis)?)?;
    for (k, name) in [(0, "dynamical_phase_0"), (1, "dynamical_phase_1")] {
        let state = basis.apply(&QuantumState::basis(2, k));
        let r = propagate_exact_sampled(&field, period, &state, tolerances::DEFAULT_EXACT_SAMPLES)?;
        residuals.insert(name.to_string(), dynamical_phase(&r)?.abs());
    }
    Ok(SolvedParameters {
        mechanism: Mechanism::AaZeroDynamical,
        field,
        schedule,
        predicted_gamma: predicted,
        qubit_axis: axis,
        residuals,
    })
}

/// How [`build_geometric_gate`] obtains the cycle unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BuildMode {
    /// The analytic tilted phase gate.
    ClosedForm,
    /// Rotating-frame propagator through the schedule. Berry echoes are
    /// stretched to `slowness` (default 1e-3).
    Exact { slowness: Option<f64> },
    /// Midpoint stepping, with the same stretching rule.
    Stepped { slowness: Option<f64>, steps: Option<usize> },
}

/// A built gate in the qubit basis with its distance to the requested target.
#[derive(Debug, Clone, Serialize)]
pub struct BuiltGate {
    pub unitary: Unitary,
    pub target: Unitary,
    pub distance: f64,
    /// Total schedule duration, zero for the closed form.
    pub duration: f64,
}

pub const DEFAULT_SLOWNESS: f64 = 1e-3;

fn simulation_schedule(params: &SolvedParameters, slowness: Option<f64>) -> Result<PulseSchedule> {
    match params.mechanism {
        Mechanism::BerryEcho => {
            let period = adiabatic_period(&params.field, slowness.unwrap_or(DEFAULT_SLOWNESS))?;
            Ok(params.schedule.with_segment_duration(period))
        }
        _ => Ok(params.schedule.clone()),
    }
}

/// Builds the gate described by `params` and compares it with `spec.target`.
pub fn build_geometric_gate(spec: &GateSpec, params: &SolvedParameters, mode: BuildMode) -> Result<BuiltGate> {
    if !matches!(spec.mechanism, Mechanism::BerryEcho | Mechanism::AaZeroDynamical) {
        return Err(Error::InvalidConfig(format!("{:?} is not a geometric mechanism", spec.mechanism)));
    }
    if spec.target.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: spec.target.dim() });
    }
    let w = Unitary::new(qubit_basis(params.qubit_axis)?)?;
    let (unitary, duration) = match mode {
        BuildMode::ClosedForm => (tilted_phase_gate(params.predicted_gamma, params.chi()), 0.0),
        BuildMode::Exact { slowness } => {
            let sched = simulation_schedule(params, slowness)?;
            let r = propagate_exact_schedule(&params.field, &sched, &QuantumState::up(), 1)?;
            (r.cycle_unitary.in_basis(&w), sched.total_duration())
        }
        BuildMode::Stepped { slowness, steps } => {
            let sched = simulation_schedule(params, slowness)?;
            let steps = steps.unwrap_or_else(|| match params.mechanism {
                Mechanism::BerryEcho => adiabatic_steps(slowness.unwrap_or(DEFAULT_SLOWNESS)),
                _ => tolerances::DEFAULT_STEPS_PER_SEGMENT,
            });
            let r = propagate_stepped(&params.field, &sched, &QuantumState::up(), steps)?;
            (r.cycle_unitary.in_basis(&w), sched.total_duration())
        }
    };
    let target = spec.target.unitary();
    let distance = distance_up_to_global_phase(&unitary, &target)?;
    Ok(BuiltGate { unitary, target, distance, duration })
}

/// exp(-i J t s_alpha . s_beta).
pub fn exchange_gate(j: f64, t: f64) -> Result<Unitary> {
    if !(j.is_finite() && t.is_finite()) {
        return Err(Error::NonFinite);
    }
    expm_hermitian_generator(&pauli::exchange().scale_real(j), t)
}

/// The exchange gate at J t = pi/2 with the triplet sector normalized to +1
/// (the singlet then carries +i).
pub fn sqrt_swap() -> Unitary {
    exchange_gate(1.0, PI / 2.0).expect("finite").scale_phase(FRAC_PI_8)
}

/// (T_a)^2 (T_b^-1)^2 S (T_a)^4 S for the given square-root-of-SWAP S.
pub fn hybrid_product(sqrt: &Unitary) -> Unitary {
    let t = pi8_gate();
    let id = Unitary::identity(2);
    let ta = tensor(&t, &id).expect("2x2");
    let tb_inv = tensor(&id, &t.dagger()).expect("2x2");
    let factors = [ta.pow(2), tb_inv.pow(2), *sqrt, ta.pow(4), *sqrt];
    // Written left to right, so the rightmost factor acts first.
    factors.iter().fold(Unitary::identity(4), |acc, f| acc.then_after(f))
}

#[derive(Debug, Clone, Serialize)]
pub struct HybridReport {
    pub product: Unitary,
    pub distance_to_cz: f64,
    pub distance_to_cnot: f64,
    /// Phase phi with product ~ e^{i phi} CZ.
    pub global_phase_vs_cz: f64,
    pub makhlin: MakhlinInvariants,
    pub cnot_class_deviation: f64,
    /// Makhlin deviation from the CNOT class when S is replaced by its inverse.
    pub inverse_branch_cnot_class_deviation: f64,
}

/// The five-factor sequence with the exchange-generated square root of SWAP.
pub fn hybrid_cnot_sequence() -> Result<HybridReport> {
    let s = sqrt_swap();
    let product = hybrid_product(&s);
    let tr = (cz().matrix().dagger() * *product.matrix()).trace();
    let makhlin = makhlin_invariants(&product)?;
    let inverse = makhlin_invariants(&hybrid_product(&s.dagger()))?;
    Ok(HybridReport {
        distance_to_cz: distance_up_to_global_phase(&product, &cz())?,
        distance_to_cnot: distance_up_to_global_phase(&product, &cnot())?,
        global_phase_vs_cz: tr.arg(),
        cnot_class_deviation: makhlin.deviation(&MakhlinInvariants::CNOT_CLASS),
        inverse_branch_cnot_class_deviation: inverse.deviation(&MakhlinInvariants::CNOT_CLASS),
        makhlin,
        product,
    })
}

/// Whether a two-qubit gate is a product of single-qubit gates.
#[derive(Debug, Clone, Serialize)]
pub struct Factorization {
    pub factorizable: bool,
    pub defect: f64,
    /// Diagonal factors (A, B) with U = A (x) B, for factorizable diagonal input.
    pub factors: Option<(Unitary, Unitary)>,
}

/// Off-diagonal magnitude below which a gate is treated as diagonal.
const DIAGONAL_TOLERANCE: f64 = 1e-10;

/// For diagonal U = diag(e^{ia}, e^{ib}, e^{ic}, e^{id}) the defect is the
/// distance of a - b - c + d from the nearest multiple of 2 pi; otherwise it
/// is the Makhlin distance from the identity class.
pub fn factorization_test(u: &Unitary) -> Result<Factorization> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: u.dim() });
    }
    let m = u.matrix();
    if m.off_diagonal_max() <= DIAGONAL_TOLERANCE {
        let p: Vec<f64> = m.diagonal().iter().map(|z| z.arg()).collect();
        let defect = wrap_phase(p[0] - p[1] - p[2] + p[3]).abs();
        let factorizable = defect <= tolerances::FACTORIZATION;
        let factors = factorizable.then(|| {
            let a = Unitary::diagonal_phases(&[p[0], p[2]]).expect("2x2");
            let b = Unitary::diagonal_phases(&[0.0, p[1] - p[0]]).expect("2x2");
            (a, b)
        });
        return Ok(Factorization { factorizable, defect, factors });
    }
    let defect = makhlin_invariants(u)?.deviation(&MakhlinInvariants::IDENTITY_CLASS);
    Ok(Factorization { factorizable: defect <= tolerances::FACTORIZATION, defect, factors: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeometricMechanism {
    Berry,
    AharonovAnandan,
}

/// Geometric phases of the four two-spin eigenstates and the verdict on the
/// two-qubit gate they generate.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricAudit {
    pub mechanism: GeometricMechanism,
    /// Geometric phase of each eigenstate (Berry) or each rotating-frame
    /// eigenstate over two periods (AA).
    pub phases: [f64; 4],
    /// AA only: the same over a single period.
    pub phases_one_period: Option<[f64; 4]>,
    /// AA only: largest cyclicity defect across the four runs.
    pub cyclicity_defect: Option<f64>,
    /// sum_i e^{i phase_i} |state_i><state_i| in the product qubit basis.
    pub geometric_unitary: Unitary,
    pub factorization: Factorization,
    /// AA with unequal couplings: central difference of each phase in J.
    pub dgamma_dj: Option<[f64; 4]>,
    pub delta_j: Option<f64>,
}

impl GeometricAudit {
    pub fn max_abs_dgamma_dj(&self) -> Option<f64> {
        self.dgamma_dj.map(|d| d.iter().fold(0.0_f64, |m, x| m.max(x.abs())))
    }
}

/// Product basis with columns |u_a u_b>, |u_a d_b>, ... quantized along each
/// spin's own axis.
fn product_basis(axes: [Vec3; 2]) -> Result<Unitary> {
    let single = |n: Vec3| -> Result<Unitary> {
        let cols = [spin_up_along(n)?, spin_down_along(n)?.scale(C64::new(-1.0, 0.0))];
        Unitary::new(ComplexMatrix::from_columns(&cols)?)
    };
    tensor(&single(axes[0])?, &single(axes[1])?)
}

fn assemble(states: &[QuantumState], phases: &[f64; 4], basis: &Unitary) -> Result<Unitary> {
    let mut g = ComplexMatrix::zeros(4);
    for (s, &p) in states.iter().zip(phases) {
        g = g + ComplexMatrix::outer(s, s).scale(C64::from_polar(1.0, p));
    }
    Ok(Unitary::new(g)?.in_basis(basis))
}

/// Per-eigenstate AA geometric phases over one and two periods.
fn aa_phases(cfg: &TwoQubitConfig) -> Result<([f64; 4], [f64; 4], f64, Vec<QuantumState>)> {
    let tau = cfg.field.period()?;
    let eta = rotating_frame_eigensystem_two(cfg)?;
    let mut one = [0.0; 4];
    let mut two = [0.0; 4];
    let mut worst: f64 = 0.0;
    for k in 0..4 {
        let state = eta.states[k];
        let r2 = propagate_exact_sampled(cfg, 2.0 * tau, &state, 2 * tolerances::DEFAULT_EXACT_SAMPLES)?;
        let b2 = aa_phase(&r2, &state)?;
        let r1 = propagate_exact_sampled(cfg, tau, &state, tolerances::DEFAULT_EXACT_SAMPLES)?;
        let b1 = aa_phase(&r1, &state)?;
        two[k] = b2.wrapped_geometric;
        one[k] = b1.wrapped_geometric;
        worst = worst.max(b1.cyclicity_defect).max(b2.cyclicity_defect);
    }
    Ok((one, two, worst, eta.states))
}

/// Runs the Berry or AA analysis on one configuration.
pub fn two_qubit_geometric_audit(cfg: &TwoQubitConfig, mechanism: GeometricMechanism) -> Result<GeometricAudit> {
    cfg.validate()?;
    let f = &cfg.field;
    match mechanism {
        GeometricMechanism::Berry => {
            let mut phases = [0.0; 4];
            for (k, p) in phases.iter_mut().enumerate() {
                *p = berry_phase_connection(cfg, k, tolerances::DEFAULT_BERRY_GRID)?.wrapped;
            }
            let e = cfg.instantaneous_eigensystem(f.phi0, 1.0, f.chi)?;
            let axis = f.field_vector(f.phi0, 1.0, f.chi);
            let g = assemble(&e.states, &phases, &product_basis([axis, axis])?)?;
            Ok(GeometricAudit {
                mechanism,
                phases,
                phases_one_period: None,
                cyclicity_defect: None,
                factorization: factorization_test(&g)?,
                geometric_unitary: g,
                dgamma_dj: None,
                delta_j: None,
            })
        }
        GeometricMechanism::AharonovAnandan => {
            let (one, two, defect, states) = aa_phases(cfg)?;
            let g = assemble(&states, &two, &product_basis(cfg.rotating_fields().map(|b| tilt_vector(b, f.chi)))?)?;
            let (dgamma_dj, delta_j) = if cfg.equal_kappa() {
                (None, None)
            } else {
                let b = f.magnitude();
                let dj = 1e-4 * cfg.j.abs().max((cfg.kappa_alpha * b).abs());
                let (_, plus, _, _) = aa_phases(&cfg.with_j(cfg.j + dj))?;
                let (_, minus, _, _) = aa_phases(&cfg.with_j(cfg.j - dj))?;
                let mut d = [0.0; 4];
                for k in 0..4 {
                    d[k] = wrap_phase(plus[k] - minus[k]) / (2.0 * dj);
                }
                (Some(d), Some(dj))
            };
            Ok(GeometricAudit {
                mechanism,
                phases: two,
                phases_one_period: Some(one),
                cyclicity_defect: Some(defect),
                factorization: factorization_test(&g)?,
                geometric_unitary: g,
                dgamma_dj,
                delta_j,
            })
        }
    }
}

/// Demonstration point for the unequal-coupling AA analysis.
pub fn unequal_kappa_demo_config() -> TwoQubitConfig {
    let field = FieldConfig::new(-0.5, 1.0, 2.0, 1.0).expect("valid");
    TwoQubitConfig::new(field, 1.0, 2.0, 1.0).expect("valid")
}

/// Expected Berry phases 2 pi cos(theta) (1, 0, 0, -1) for the four eigenstates.
pub fn expected_two_qubit_berry(field: &FieldConfig) -> [f64; 4] {
    let g = TAU * field.b0 / field.magnitude();
    [g, 0.0, 0.0, -g]
}

/// Expected equal-coupling AA phases over two periods.
pub fn expected_equal_kappa_aa(cfg: &TwoQubitConfig) -> [f64; 4] {
    let f = &cfg.field;
    let u = f.effective_z_for(cfg.kappa_alpha);
    let g = 2.0 * TAU * u / u.hypot(f.b1);
    [g, 0.0, 0.0, -g]
}

/// Largest wrapped difference between two phase lists.
pub fn max_phase_error(got: &[f64], want: &[f64]) -> f64 {
    got.iter().zip(want).map(|(a, b)| phase_distance(*a, *b)).fold(0.0, f64::max)
}
