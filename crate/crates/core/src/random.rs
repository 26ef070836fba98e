//! Seeded random configurations, states and gates for property checks.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, QuantumState, Unitary, C64};
use crate::model::{FieldConfig, TwoQubitConfig};

pub const DEFAULT_SEED: u64 = 20_061_123;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random SU(2) element from a uniformly distributed unit quaternion.
pub fn haar_su2<R: Rng>(rng: &mut R) -> Unitary {
    let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / n);
    let m = ComplexMatrix::from_row_major(&[C64::new(a, b), C64::new(c, d), C64::new(-c, d), C64::new(a, -b)])
        .expect("2x2");
    Unitary::new(m).expect("unit quaternion")
}

/// Normalized state with Gaussian amplitudes.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> QuantumState {
    let amps: Vec<C64> = (0..dim).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    QuantumState::normalized(&amps).expect("nonzero with probability one")
}

/// Random Hermitian matrix with entries of order `scale`.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * scale;
        }
    }
    (m + m.dagger()).scale_real(0.5)
}

pub fn random_diagonal_unitary<R: Rng>(rng: &mut R, dim: usize) -> Unitary {
    let phases: Vec<f64> = (0..dim).map(|_| rng.gen_range(-PI..PI)).collect();
    Unitary::diagonal_phases(&phases).expect("dimension 2 or 4")
}

/// A drive with |B| and |kappa| of order one and kappa B tau between
/// roughly 2 and 20.
pub fn random_field<R: Rng>(rng: &mut R) -> FieldConfig {
    let b0 = rng.gen_range(-1.0..1.0);
    let b1 = rng.gen_range(0.2..1.2);
    let omega = rng.gen_range(0.6..2.0);
    let kappa = rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    FieldConfig::new(b0, b1, omega, kappa)
        .expect("valid ranges")
        .with_chi(rng.gen_range(0.0..PI / 2.0))
        .with_phi0(rng.gen_range(0.0..TAU))
}

/// As [`random_field`] with no tilt and phi0 = 0, so the qubit axis lies in
/// the x-z plane.
pub fn random_untilted_field<R: Rng>(rng: &mut R) -> FieldConfig {
    random_field(rng).with_chi(0.0).with_phi0(0.0)
}

pub fn random_two_qubit<R: Rng>(rng: &mut R, equal_kappa: bool) -> TwoQubitConfig {
    let field = random_field(rng);
    let ka = rng.gen_range(0.5..1.5);
    let kb = if equal_kappa { ka } else { rng.gen_range(0.5..2.5) };
    let j = rng.gen_range(-1.0..1.0);
    TwoQubitConfig::new(field, ka, kb, j).expect("valid ranges")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a = random_field(&mut rng(5));
        let b = random_field(&mut rng(5));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_elements_are_special_unitary() {
        let mut r = rng(1);
        for _ in 0..50 {
            let u = haar_su2(&mut r);
            assert!(u.unitarity_defect() < 1e-14);
            assert!((u.matrix().determinant() - 1.0).norm() < 1e-14);
        }
    }
}
