//! Spin Hamiltonians under a rotating Zeeman field, with and without
//! isotropic exchange, and their analytic eigensystems.
//!
//! The field is B(phi) = (B1 cos phi, B1 sin phi, B0), optionally tilted as a
//! whole by an active rotation of angle chi about the y axis and reversed in
//! sign for echo segments. Units are natural (hbar = 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigh, pauli, ComplexMatrix, QuantumState, C64};
use crate::tolerances;

/// A real 3-vector.
pub type Vec3 = [f64; 3];

fn norm3(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Active rotation of a vector about y by `chi`; maps z onto (sin chi, 0, cos chi).
pub fn tilt_vector(v: Vec3, chi: f64) -> Vec3 {
    let (s, c) = chi.sin_cos();
    [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]]
}

/// Spin-up state along the direction of `n`, in the gauge
/// cos(t/2)|u> + sin(t/2) e^{i p}|d> with (t, p) the spherical angles of `n`.
pub fn spin_up_along(n: Vec3) -> Result<QuantumState> {
    let (polar, azimuth) = spherical_angles(n)?;
    let (s, c) = (polar / 2.0).sin_cos();
    QuantumState::normalized(&[C64::new(c, 0.0), C64::from_polar(s, azimuth)]).map(|s| s.gauge_fixed())
}

/// Spin-down state along `n`: sin(t/2)|u> - cos(t/2) e^{i p}|d>, gauge fixed.
pub fn spin_down_along(n: Vec3) -> Result<QuantumState> {
    let (polar, azimuth) = spherical_angles(n)?;
    let (s, c) = (polar / 2.0).sin_cos();
    QuantumState::normalized(&[C64::new(s, 0.0), -C64::from_polar(c, azimuth)]).map(|s| s.gauge_fixed())
}

fn spherical_angles(n: Vec3) -> Result<(f64, f64)> {
    let r = norm3(n);
    if r == 0.0 || !r.is_finite() {
        return Err(Error::ZeroField);
    }
    let transverse = n[0].hypot(n[1]);
    Ok((transverse.atan2(n[2]), n[1].atan2(n[0])))
}

/// The rotating drive acting on a single spin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// Static field along z.
    pub b0: f64,
    /// Magnitude of the rotating transverse field.
    pub b1: f64,
    /// Rotation rate for the linear profile phi(t) = phi0 + omega t.
    pub omega: f64,
    /// Gyromagnetic ratio.
    pub kappa: f64,
    /// Tilt of the whole field trajectory about y.
    #[serde(default)]
    pub chi: f64,
    /// Azimuth at t = 0.
    #[serde(default)]
    pub phi0: f64,
}

impl FieldConfig {
    pub fn new(b0: f64, b1: f64, omega: f64, kappa: f64) -> Result<Self> {
        let cfg = Self { b0, b1, omega, kappa, chi: 0.0, phi0: 0.0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = chi;
        self
    }

    pub fn with_phi0(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.b0, self.b1, self.omega, self.kappa, self.chi, self.phi0];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("non-finite field parameter".into()));
        }
        if self.b1 < 0.0 {
            return Err(Error::InvalidConfig("B1 must be non-negative".into()));
        }
        if self.kappa == 0.0 {
            return Err(Error::InvalidConfig("kappa must be nonzero".into()));
        }
        Ok(())
    }

    /// |B| = sqrt(B0^2 + B1^2), constant along the cycle.
    pub fn magnitude(&self) -> f64 {
        self.b0.hypot(self.b1)
    }

    /// Cone angle of the field, in [0, pi].
    pub fn theta(&self) -> f64 {
        self.b1.atan2(self.b0)
    }

    /// B0 + omega / kappa.
    pub fn effective_z(&self) -> f64 {
        self.effective_z_for(self.kappa)
    }

    pub fn effective_z_for(&self, kappa: f64) -> f64 {
        self.b0 + self.omega / kappa
    }

    /// Rotating-frame field (B1 cos phi0, B1 sin phi0, B0 + omega/kappa), untilted.
    pub fn rotating_field(&self) -> Vec3 {
        self.rotating_field_for(self.kappa)
    }

    pub fn rotating_field_for(&self, kappa: f64) -> Vec3 {
        let (s, c) = self.phi0.sin_cos();
        [self.b1 * c, self.b1 * s, self.effective_z_for(kappa)]
    }

    pub fn rotating_magnitude(&self) -> f64 {
        norm3(self.rotating_field())
    }

    /// Cone angle of the rotating-frame field, in [0, pi].
    pub fn theta_tilde(&self) -> f64 {
        self.b1.atan2(self.effective_z())
    }

    /// Field vector at azimuth `phi`, multiplied by `sign` and tilted by `chi`.
    pub fn field_vector(&self, phi: f64, sign: f64, chi: f64) -> Vec3 {
        let (s, c) = phi.sin_cos();
        let b = [sign * self.b1 * c, sign * self.b1 * s, sign * self.b0];
        tilt_vector(b, chi)
    }

    /// Azimuth under the linear profile.
    pub fn phi_at(&self, t: f64) -> f64 {
        self.phi0 + self.omega * t
    }

    /// Cycle period 2 pi / |omega|.
    pub fn period(&self) -> Result<f64> {
        if self.omega == 0.0 {
            return Err(Error::InvalidConfig("omega = 0 has no period".into()));
        }
        Ok(2.0 * std::f64::consts::PI / self.omega.abs())
    }
}

/// Two exchange-coupled spins driven by the same rotating field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitConfig {
    /// Shared drive; its `kappa` is not used for the two-spin Hamiltonian.
    pub field: FieldConfig,
    pub kappa_alpha: f64,
    pub kappa_beta: f64,
    /// Isotropic exchange strength.
    pub j: f64,
}

impl TwoQubitConfig {
    pub fn new(field: FieldConfig, kappa_alpha: f64, kappa_beta: f64, j: f64) -> Result<Self> {
        let cfg = Self { field, kappa_alpha, kappa_beta, j };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        if !(self.kappa_alpha.is_finite() && self.kappa_beta.is_finite() && self.j.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coupling".into()));
        }
        if self.kappa_alpha == 0.0 || self.kappa_beta == 0.0 {
            return Err(Error::InvalidConfig("gyromagnetic ratios must be nonzero".into()));
        }
        Ok(())
    }

    pub fn with_j(mut self, j: f64) -> Self {
        self.j = j;
        self
    }

    pub fn equal_kappa(&self) -> bool {
        self.kappa_alpha == self.kappa_beta
    }

    /// Rotating-frame field seen by each spin, (B1 cos phi0, B1 sin phi0, B0 + omega/kappa_j).
    pub fn rotating_fields(&self) -> [Vec3; 2] {
        [self.field.rotating_field_for(self.kappa_alpha), self.field.rotating_field_for(self.kappa_beta)]
    }
}

/// A one- or two-spin model under the rotating drive.
pub trait SpinModel: Send + Sync {
    fn dim(&self) -> usize;

    fn field(&self) -> &FieldConfig;

    /// Hamiltonian for the field at azimuth `phi`, scaled by `sign` and tilted by `chi`.
    fn hamiltonian_at(&self, phi: f64, sign: f64, chi: f64) -> ComplexMatrix;

    /// Total spin z component, the generator of the field rotation.
    fn spin_z(&self) -> ComplexMatrix;

    /// Instantaneous spectrum at azimuth `phi`, sign and tilt.
    fn instantaneous_eigensystem(&self, phi: f64, sign: f64, chi: f64) -> Result<EigenSystem>;

    /// Hamiltonian under the linear profile, with the configured tilt.
    fn hamiltonian(&self, t: f64) -> ComplexMatrix {
        let f = self.field();
        self.hamiltonian_at(f.phi_at(t), 1.0, f.chi)
    }

    /// Generator of the frame rotation: the spin z operator conjugated by the tilt.
    fn frame_generator(&self) -> ComplexMatrix {
        let r = tilt_operator(self.dim(), self.field().chi);
        r * self.spin_z() * r.dagger()
    }

    /// Time-independent rotating-frame generator H(0) - omega S_z (tilted axis).
    fn rotating_frame_hamiltonian(&self) -> ComplexMatrix {
        self.hamiltonian(0.0) - self.frame_generator().scale_real(self.field().omega)
    }

    /// Smallest level spacing of the instantaneous spectrum.
    fn instantaneous_gap(&self) -> Result<f64> {
        let f = self.field();
        let e = eigh(&self.hamiltonian_at(f.phi0, 1.0, f.chi))?;
        Ok(e.min_gap())
    }
}

/// exp(-i chi S_y) on one spin, or its tensor square on two spins.
pub fn tilt_operator(dim: usize, chi: f64) -> ComplexMatrix {
    let r = pauli::rotation_y(chi);
    match dim {
        2 => r,
        _ => r.kron(&r).expect("2x2 factors"),
    }
}

impl SpinModel for FieldConfig {
    fn dim(&self) -> usize {
        2
    }

    fn field(&self) -> &FieldConfig {
        self
    }

    fn hamiltonian_at(&self, phi: f64, sign: f64, chi: f64) -> ComplexMatrix {
        let b = self.field_vector(phi, sign, chi);
        -pauli::spin_dot(b).scale_real(self.kappa)
    }

    fn spin_z(&self) -> ComplexMatrix {
        pauli::spin()[2]
    }

    fn instantaneous_eigensystem(&self, phi: f64, sign: f64, chi: f64) -> Result<EigenSystem> {
        let b = self.field_vector(phi, sign, chi);
        let mag = norm3(b);
        if mag == 0.0 {
            return Err(Error::ZeroField);
        }
        let half = 0.5 * self.kappa * mag;
        Ok(EigenSystem {
            energies: vec![-half, half],
            states: vec![spin_up_along(b)?, spin_down_along(b)?],
            degenerate: false,
        })
    }
}

impl SpinModel for TwoQubitConfig {
    fn dim(&self) -> usize {
        4
    }

    fn field(&self) -> &FieldConfig {
        &self.field
    }

    fn hamiltonian_at(&self, phi: f64, sign: f64, chi: f64) -> ComplexMatrix {
        let b = self.field.field_vector(phi, sign, chi);
        let sa = pauli::spin_alpha();
        let sb = pauli::spin_beta();
        let mut h = pauli::exchange().scale_real(self.j);
        for k in 0..3 {
            h = h - sa[k].scale_real(self.kappa_alpha * b[k]) - sb[k].scale_real(self.kappa_beta * b[k]);
        }
        h
    }

    fn spin_z(&self) -> ComplexMatrix {
        pauli::total_sz()
    }

    fn instantaneous_eigensystem(&self, phi: f64, sign: f64, chi: f64) -> Result<EigenSystem> {
        let b = self.field.field_vector(phi, sign, chi);
        exchange_eigensystem(b, self.kappa_alpha, self.kappa_beta, self.j)
    }
}

/// Energies and eigenvectors listed in construction order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSystem {
    pub energies: Vec<f64>,
    pub states: Vec<QuantumState>,
    /// Set when two levels coincide identically and the states are a
    /// conventional choice within the degenerate subspace.
    pub degenerate: bool,
}

impl EigenSystem {
    /// Largest ||H v - E v|| over the listed pairs.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        self.states
            .iter()
            .zip(&self.energies)
            .map(|(v, &e)| {
                let hv = h.apply(v);
                hv.amplitudes()
                    .iter()
                    .zip(v.amplitudes())
                    .map(|(a, b)| (a - b * e).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Largest |<v_i|v_j> - delta_ij|.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - target).norm());
            }
        }
        worst
    }

    /// Smallest distance between the energy of `index` and any other level.
    pub fn gap_of(&self, index: usize) -> f64 {
        self.energies
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != index)
            .map(|(_, e)| (e - self.energies[index]).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// -kappa s . B(t) under the linear profile.
pub fn hamiltonian_single(cfg: &FieldConfig, t: f64) -> ComplexMatrix {
    cfg.hamiltonian(t)
}

/// h_alpha + h_beta + J s_alpha . s_beta under the linear profile.
pub fn hamiltonian_two(cfg: &TwoQubitConfig, t: f64) -> ComplexMatrix {
    cfg.hamiltonian(t)
}

/// H(0) - omega S_z for either model.
pub fn rotating_frame_hamiltonian<M: SpinModel>(model: &M) -> ComplexMatrix {
    model.rotating_frame_hamiltonian()
}

/// {|up_B(t)>, |down_B(t)>} with energies -kappa B/2, +kappa B/2.
pub fn eigensystem_single(cfg: &FieldConfig, t: f64) -> Result<EigenSystem> {
    cfg.instantaneous_eigensystem(cfg.phi_at(t), 1.0, cfg.chi)
}

/// (xi_1, xi_2, xi_3, xi_4): |uu>, the two exchange-mixed states with
/// E_2 > E_3, and |dd>, all quantized along B(t).
pub fn eigensystem_two(cfg: &TwoQubitConfig, t: f64) -> Result<EigenSystem> {
    let f = &cfg.field;
    cfg.instantaneous_eigensystem(f.phi_at(t), 1.0, f.chi)
}

/// Eigensystem of -ka s_a . b - kb s_b . b + J s_a . s_b for a common field b.
///
/// The mixed pair solves the 2 x 2 block [[-D - J/4, J/2], [J/2, D - J/4]] on
/// (|ud>, |du>) with D = (ka - kb)|b|/2, giving E = -J/4 +- sqrt(D^2 + J^2/4).
pub fn exchange_eigensystem(b: Vec3, kappa_alpha: f64, kappa_beta: f64, j: f64) -> Result<EigenSystem> {
    let mag = norm3(b);
    if mag == 0.0 {
        return Err(Error::ZeroField);
    }
    let u = spin_up_along(b)?;
    let d = spin_down_along(b)?;
    let uu = u.tensor(&u)?;
    let ud = u.tensor(&d)?;
    let du = d.tensor(&u)?;
    let dd = d.tensor(&d)?;

    let big_d = 0.5 * (kappa_alpha - kappa_beta) * mag;
    let r = big_d.hypot(0.5 * j);
    let degenerate = r == 0.0;
    let (upper, lower) = if degenerate {
        ((1.0, 1.0), (1.0, -1.0))
    } else if big_d >= 0.0 {
        ((0.5 * j, r + big_d), (r + big_d, -0.5 * j))
    } else {
        ((r - big_d, 0.5 * j), (0.5 * j, big_d - r))
    };
    let mix = |(a, c): (f64, f64)| -> Result<QuantumState> {
        let amps: Vec<C64> = ud
            .amplitudes()
            .iter()
            .zip(du.amplitudes())
            .map(|(x, y)| x * a + y * c)
            .collect();
        QuantumState::normalized(&amps).map(|s| s.gauge_fixed())
    };
    let ksum = 0.5 * (kappa_alpha + kappa_beta) * mag;
    Ok(EigenSystem {
        energies: vec![-ksum + 0.25 * j, -0.25 * j + r, -0.25 * j - r, ksum + 0.25 * j],
        states: vec![uu.gauge_fixed(), mix(upper)?, mix(lower)?, dd.gauge_fixed()],
        degenerate,
    })
}

/// Eigenstates of the two-spin rotating-frame generator, labeled like the
/// instantaneous ones: index 0 has the largest overlap with both spins up
/// along their rotating-frame fields, index 3 with both down, and the
/// remaining pair is ordered by decreasing energy.
pub fn rotating_frame_eigensystem_two(cfg: &TwoQubitConfig) -> Result<EigenSystem> {
    let f = &cfg.field;
    let chi = f.chi;
    if cfg.equal_kappa() {
        let bt = tilt_vector(cfg.rotating_fields()[0], chi);
        return exchange_eigensystem(bt, cfg.kappa_alpha, cfg.kappa_beta, cfg.j);
    }
    let h = cfg.rotating_frame_hamiltonian();
    let e = eigh(&h)?;
    let [ba, bb] = cfg.rotating_fields().map(|b| tilt_vector(b, chi));
    let uu = spin_up_along(ba)?.tensor(&spin_up_along(bb)?)?;
    let dd = spin_down_along(ba)?.tensor(&spin_down_along(bb)?)?;

    let overlap = |k: usize, r: &QuantumState| r.inner(&e.vector(k)).norm_sqr();
    let first = (0..4).max_by(|&a, &b| overlap(a, &uu).total_cmp(&overlap(b, &uu))).unwrap_or(0);
    let last = (0..4)
        .filter(|&k| k != first)
        .max_by(|&a, &b| overlap(a, &dd).total_cmp(&overlap(b, &dd)))
        .unwrap_or(3);
    let mut middle: Vec<usize> = (0..4).filter(|&k| k != first && k != last).collect();
    middle.sort_by(|&a, &b| e.values[b].total_cmp(&e.values[a]));
    let order = [first, middle[0], middle[1], last];
    Ok(EigenSystem {
        energies: order.iter().map(|&k| e.values[k]).collect(),
        states: order.iter().map(|&k| e.vector(k).gauge_fixed()).collect(),
        degenerate: e.min_gap() < tolerances::MIN_GAP,
    })
}

/// Qubit basis along the untilted axis n: columns R_y(theta)|u>, R_y(theta)|d>
/// with theta the polar angle of n (which must lie in the x-z plane).
pub fn qubit_basis(axis: Vec3) -> Result<ComplexMatrix> {
    let (polar, _) = spherical_angles(axis)?;
    if axis[1].abs() > 1e-14 * norm3(axis) {
        return Err(Error::BasisUndefined("qubit axis must lie in the x-z plane".into()));
    }
    let polar = if axis[0] < 0.0 { -polar } else { polar };
    Ok(pauli::rotation_y(polar))
}

/// sigma^alpha_n + sigma^beta_n for the unit vector along `n`.
pub fn total_sigma_along(n: Vec3) -> ComplexMatrix {
    let r = norm3(n);
    let unit = if r == 0.0 { [0.0, 0.0, 0.0] } else { [n[0] / r, n[1] / r, n[2] / r] };
    let s = pauli::spin_dot(unit).scale_real(2.0);
    let id = pauli::identity();
    s.kron(&id).expect("2x2") + id.kron(&s).expect("2x2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_hermitian_generator, ZERO};
    use std::f64::consts::PI;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (*a - *b).max_abs() < tol
    }

    #[test]
    fn static_field_hamiltonian() {
        let cfg = FieldConfig::new(1.0, 0.0, 0.7, 1.0).unwrap();
        let expected = pauli::sigma_z().scale_real(-0.5);
        for t in [0.0, 1.3, -4.0] {
            assert!(close(&hamiltonian_single(&cfg, t), &expected, 1e-15));
        }
    }

    #[test]
    fn transverse_field_hamiltonian_at_origin() {
        let cfg = FieldConfig::new(0.0, 1.0, 0.7, 1.0).unwrap();
        assert!(close(&hamiltonian_single(&cfg, 0.0), &pauli::sigma_x().scale_real(-0.5), 1e-15));
    }

    #[test]
    fn single_spectrum_is_plus_minus_kappa_b_over_two() {
        // Oracle: numerical diagonalization.
        let cfg = FieldConfig::new(3.0, 4.0, 0.3, 2.0).unwrap();
        let e = eigh(&hamiltonian_single(&cfg, 0.41)).unwrap();
        assert!((e.values[0] + 5.0).abs() < 1e-13);
        assert!((e.values[1] - 5.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(FieldConfig::new(1.0, -1.0, 0.0, 1.0).is_err());
        assert!(FieldConfig::new(1.0, 1.0, 0.0, 0.0).is_err());
        assert!(FieldConfig::new(f64::NAN, 1.0, 0.0, 1.0).is_err());
        let f = FieldConfig::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(TwoQubitConfig::new(f, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn decoupled_two_spin_limit() {
        let f = FieldConfig::new(0.7, 0.4, 1.1, 1.0).unwrap().with_phi0(0.3);
        let cfg = TwoQubitConfig::new(f, 1.3, -0.6, 0.0).unwrap();
        let t = 0.77;
        let ha = FieldConfig { kappa: 1.3, ..f }.hamiltonian(t);
        let hb = FieldConfig { kappa: -0.6, ..f }.hamiltonian(t);
        let id = pauli::identity();
        let expected = ha.kron(&id).unwrap() + id.kron(&hb).unwrap();
        assert!(close(&hamiltonian_two(&cfg, t), &expected, 1e-15));
    }

    #[test]
    fn pure_exchange_spectrum() {
        let f = FieldConfig::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let cfg = TwoQubitConfig::new(f, 1.0, 1.0, 1.0).unwrap();
        let e = eigh(&hamiltonian_two(&cfg, 0.0)).unwrap();
        let expected = [-0.75, 0.25, 0.25, 0.25];
        for (a, b) in e.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn two_spin_static_field_spectrum_matches_analytic_levels() {
        let f = FieldConfig::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let cfg = TwoQubitConfig::new(f, 1.0, 1.0, 1.0).unwrap();
        let num = eigh(&hamiltonian_two(&cfg, 0.0)).unwrap();
        let mut analytic = eigensystem_two(&cfg, 0.0).unwrap().energies;
        analytic.sort_by(f64::total_cmp);
        // E1 = -1 + 1/4, E2 = 1/4, E3 = -3/4, E4 = 1 + 1/4.
        for (a, b) in num.values().iter().zip(&analytic) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!((analytic[0] + 0.75).abs() < 1e-15 && (analytic[3] - 1.25).abs() < 1e-15);
    }

    #[test]
    fn rotating_frame_reduces_to_h0_without_rotation() {
        let f = FieldConfig::new(0.3, 0.8, 0.0, 1.4).unwrap().with_chi(0.2).with_phi0(0.5);
        assert_eq!((rotating_frame_hamiltonian(&f) - f.hamiltonian(0.0)).max_abs(), 0.0);
    }

    #[test]
    fn rotating_frame_single_spectrum() {
        let f = FieldConfig::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let h = rotating_frame_hamiltonian(&f);
        assert!(close(&h, &(-pauli::spin_dot([1.0, 0.0, 1.0])), 1e-15));
        let e = eigh(&h).unwrap();
        assert!((e.values[0] + 0.5 * 2f64.sqrt()).abs() < 1e-14);
        assert!((e.values[1] - 0.5 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rotating_frame_two_spin_matches_per_spin_fields() {
        let f = FieldConfig::new(0.4, 0.9, 1.7, 1.0).unwrap();
        let cfg = TwoQubitConfig::new(f, 1.2, 0.5, 0.8).unwrap();
        let [ba, bb] = cfg.rotating_fields();
        let sa = pauli::spin_alpha();
        let sb = pauli::spin_beta();
        let mut expected = pauli::exchange().scale_real(cfg.j);
        for k in 0..3 {
            expected = expected - sa[k].scale_real(cfg.kappa_alpha * ba[k]) - sb[k].scale_real(cfg.kappa_beta * bb[k]);
        }
        assert!(close(&rotating_frame_hamiltonian(&cfg), &expected, 1e-14));
    }

    #[test]
    fn rotating_frame_solves_schrodinger_equation() {
        // Oracle: central finite difference of U(t) = e^{-i w t Sz} e^{-i H~ t}.
        let f = FieldConfig::new(-0.3, 0.8, 1.3, 1.0).unwrap().with_phi0(0.4).with_chi(0.3);
        let cfg = TwoQubitConfig::new(f, 0.9, 1.6, 0.7).unwrap();
        let ht = rotating_frame_hamiltonian(&cfg);
        let gen = cfg.frame_generator();
        let u = |t: f64| {
            *expm_hermitian_generator(&gen, f.omega * t).unwrap().matrix()
                * *expm_hermitian_generator(&ht, t).unwrap().matrix()
        };
        let h = 1e-4;
        for k in 0..20 {
            let t = 0.37 * k as f64;
            let deriv = (u(t + h) - u(t - h)).scale(C64::new(0.0, 1.0 / (2.0 * h)));
            let residual = (deriv - hamiltonian_two(&cfg, t) * u(t)).max_abs();
            assert!(residual < 1e-8, "t = {t}: residual {residual:e}");
        }
    }

    #[test]
    fn single_eigensystem_limits() {
        let cfg = FieldConfig::new(2.0, 0.0, 1.0, 1.0).unwrap();
        let e = eigensystem_single(&cfg, 0.7).unwrap();
        assert!((e.states[0].inner(&QuantumState::up()) - 1.0).norm() < 1e-15);
        assert!((e.states[1].inner(&QuantumState::down()) - 1.0).norm() < 1e-15);

        let cfg = FieldConfig::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let e = eigensystem_single(&cfg, 0.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = QuantumState::new(&[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
        let minus = QuantumState::new(&[C64::new(h, 0.0), C64::new(-h, 0.0)]).unwrap();
        assert!((e.states[0].inner(&plus) - 1.0).norm() < 1e-15);
        assert!((e.states[1].inner(&minus) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn single_eigensystem_matches_numerics_up_to_gauge() {
        let cfg = FieldConfig::new(3.0, 4.0, 0.2, 1.0).unwrap();
        let t = 1.9;
        let e = eigensystem_single(&cfg, t).unwrap();
        let num = eigh(&hamiltonian_single(&cfg, t)).unwrap();
        for k in 0..2 {
            let numeric = num.vector(k).gauge_fixed();
            assert!((e.states[k].inner(&numeric) - 1.0).norm() < 1e-12);
            assert!((e.energies[k] - num.values[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_field_has_no_eigenbasis() {
        let cfg = FieldConfig::new(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(eigensystem_single(&cfg, 0.0).unwrap_err(), Error::ZeroField);
    }

    #[test]
    fn equal_kappa_mixed_states_are_triplet_and_singlet() {
        let f = FieldConfig::new(0.6, 0.0, 0.0, 1.0).unwrap();
        let cfg = TwoQubitConfig::new(f, 1.5, 1.5, 0.9).unwrap();
        let e = eigensystem_two(&cfg, 0.0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t0 = QuantumState::new(&[ZERO, C64::new(h, 0.0), C64::new(h, 0.0), ZERO]).unwrap();
        let s0 = QuantumState::new(&[ZERO, C64::new(h, 0.0), C64::new(-h, 0.0), ZERO]).unwrap();
        assert!((e.states[1].inner(&t0).norm() - 1.0).abs() < 1e-14);
        assert!((e.states[2].inner(&s0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn large_zeeman_mismatch_separates_mixed_states() {
        // Oracle: numerical diagonalization at (ka - kb) B / J = 1e3. The
        // higher mixed level is |du> when ka > kb.
        let f = FieldConfig::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let cfg = TwoQubitConfig::new(f, 2.0, 1.0, 1e-3).unwrap();
        let e = eigensystem_two(&cfg, 0.0).unwrap();
        let num = eigh(&hamiltonian_two(&cfg, 0.0)).unwrap();
        let top_mixed = num.vector(2);
        assert!((e.states[1].inner(&top_mixed).norm() - 1.0).abs() < 1e-12);
        assert!(e.states[1].inner(&QuantumState::basis(4, 2)).norm() > 1.0 - 1e-6);
        assert!(e.states[2].inner(&QuantumState::basis(4, 1)).norm() > 1.0 - 1e-6);
    }

    #[test]
    fn outer_levels_sum_to_half_exchange() {
        let f = FieldConfig::new(-0.4, 1.3, 0.5, 1.0).unwrap();
        for (ka, kb, j) in [(1.0, 2.0, 0.3), (-1.0, 0.4, -2.0), (3.0, 3.0, 1.0)] {
            let cfg = TwoQubitConfig::new(f, ka, kb, j).unwrap();
            let e = eigensystem_two(&cfg, 0.2).unwrap();
            assert!((e.energies[0] + e.energies[3] - j / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_exchange_is_flagged() {
        let f = FieldConfig::new(0.5, 0.5, 0.0, 1.0).unwrap();
        let cfg = TwoQubitConfig::new(f, 1.0, 1.0, 0.0).unwrap();
        let e = eigensystem_two(&cfg, 0.0).unwrap();
        assert!(e.degenerate);
        assert!(e.residual(&hamiltonian_two(&cfg, 0.0)) < 1e-14);
    }

    #[test]
    fn eigensystem_two_residual_and_orthonormality() {
        let f = FieldConfig::new(0.3, 0.7, 0.9, 1.0).unwrap().with_chi(0.4).with_phi0(-1.0);
        for (ka, kb, j) in [(1.0, 2.0, 0.3), (-1.0, 0.4, -2.0), (3.0, 3.0, 1.0), (1.0, 0.5, 0.0)] {
            let cfg = TwoQubitConfig::new(f, ka, kb, j).unwrap();
            for t in [0.0, 0.5, 2.0] {
                let e = eigensystem_two(&cfg, t).unwrap();
                assert!(e.residual(&hamiltonian_two(&cfg, t)) < 1e-12);
                assert!(e.orthonormality_defect() < 1e-12);
            }
        }
    }

    #[test]
    fn conserved_total_field_projection() {
        let f = FieldConfig::new(0.3, 0.7, 0.9, 1.0).unwrap().with_chi(0.4);
        let cfg = TwoQubitConfig::new(f, 1.0, 2.3, 0.8).unwrap();
        for t in [0.0, 1.0, 2.5] {
            let b = f.field_vector(f.phi_at(t), 1.0, f.chi);
            let c = total_sigma_along(b).commutator(&hamiltonian_two(&cfg, t));
            assert!(c.max_abs() < 1e-14);
        }
    }

    #[test]
    fn rotating_frame_eigensystem_labels() {
        let f = FieldConfig::new(-0.5, 1.0, 2.0, 1.0).unwrap();
        let cfg = TwoQubitConfig::new(f, 1.0, 2.0, 1.0).unwrap();
        let e = rotating_frame_eigensystem_two(&cfg).unwrap();
        let h = rotating_frame_hamiltonian(&cfg);
        assert!(e.residual(&h) < 1e-12);
        assert!(e.orthonormality_defect() < 1e-12);
        assert!(e.energies[1] > e.energies[2]);
        // Equal ratios use the analytic form.
        let cfg = TwoQubitConfig::new(f, 1.0, 1.0, 1.0).unwrap();
        let e = rotating_frame_eigensystem_two(&cfg).unwrap();
        assert!(e.residual(&rotating_frame_hamiltonian(&cfg)) < 1e-12);
    }

    #[test]
    fn qubit_basis_columns_are_field_eigenstates() {
        let axis = [0.8, 0.0, -0.3];
        let w = qubit_basis(axis).unwrap();
        let up = spin_up_along(axis).unwrap();
        let down = spin_down_along(axis).unwrap();
        let c0 = QuantumState::new(&w.column(0)).unwrap();
        let c1 = QuantumState::new(&w.column(1)).unwrap();
        assert!((c0.inner(&up) - 1.0).norm() < 1e-14);
        assert!((c1.inner(&down).norm() - 1.0).abs() < 1e-14);
        assert!(qubit_basis([0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn theta_uses_two_argument_arctangent() {
        let cfg = FieldConfig::new(-1.0, 1.0, 0.0, 1.0).unwrap();
        assert!((cfg.theta() - 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((cfg.theta().cos() - cfg.b0 / cfg.magnitude()).abs() < 1e-15);
    }
}
