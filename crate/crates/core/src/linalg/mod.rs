//! Fixed-size complex linear algebra for one and two spins.
//!
//! Every object has dimension 2 (one qubit) or 4 (two qubits). The two-qubit
//! basis is ordered |uu>, |ud>, |du>, |dd> with qubit alpha as the left
//! tensor factor and spin-up preceding spin-down.

mod eigen;
mod metrics;

pub use eigen::{eigh, expm_hermitian_generator, HermitianEigen, SpectralGenerator};
pub use metrics::{distance_up_to_global_phase, makhlin_invariants, MakhlinInvariants};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Dense complex square matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "matrix dimension must be 2 or 4");
        Self { dim, data: [ZERO; 16] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; the length fixes the dimension.
    pub fn from_row_major(entries: &[C64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => return Err(Error::DimensionMismatch { expected: 16, got: n }),
        };
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut m = Self::zeros(dim);
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Ok(m)
    }

    /// Diagonal matrix of unit-modulus entries exp(i * phases[k]).
    pub fn diagonal_phases(phases: &[f64]) -> Result<Self> {
        let diag: Vec<C64> = phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
        Self::from_diagonal(&diag)
    }

    /// Outer product |a><b|.
    pub fn outer(a: &QuantumState, b: &QuantumState) -> Self {
        assert_eq!(a.dim, b.dim, "outer product of states with different dimensions");
        let mut m = Self::zeros(a.dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                m[(i, j)] = a.amps[i] * b.amps[j].conj();
            }
        }
        m
    }

    /// Matrix whose columns are the given states.
    pub fn from_columns(cols: &[QuantumState]) -> Result<Self> {
        check_dim(cols.len())?;
        let dim = cols.len();
        let mut m = Self::zeros(dim);
        for (j, c) in cols.iter().enumerate() {
            if c.dim != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: c.dim });
            }
            for i in 0..dim {
                m[(i, j)] = c.amps[i];
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.data.iter_mut().for_each(|z| *z *= s);
        m
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// ||H - H^dagger||_F.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).frobenius_norm()
    }

    /// ||U^dagger U - I||_F.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self - Self::identity(self.dim)).frobenius_norm()
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal_max(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    m = m.max(self[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Kronecker product; only 2 x 2 factors are representable.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.dim });
        }
        if other.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: other.dim });
        }
        let mut m = Self::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m[(2 * i + k, 2 * j + l)] = self[(i, j)] * other[(k, l)];
                    }
                }
            }
        }
        Ok(m)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> C64 {
        let n = self.dim;
        let mut a = *self;
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[(r, col)].norm().total_cmp(&a[(s, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(col, j)];
                    a[(col, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                }
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for r in col + 1..n {
                let f = a[(r, col)] / p;
                for j in col..n {
                    let v = a[(col, j)];
                    a[(r, j)] -= f * v;
                }
            }
        }
        det
    }

    pub fn apply(&self, state: &QuantumState) -> QuantumState {
        assert_eq!(self.dim, state.dim, "matrix/state dimension mismatch");
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..self.dim).map(|j| self[(i, j)] * state.amps[j]).sum();
        }
        QuantumState { dim: self.dim, amps: out }
    }

    /// <a|M|b>.
    pub fn matrix_element(&self, a: &QuantumState, b: &QuantumState) -> C64 {
        a.inner(&self.apply(b))
    }

    /// Real part of <psi|M|psi>.
    pub fn expectation(&self, psi: &QuantumState) -> f64 {
        self.matrix_element(psi, psi).re
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        m
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        self.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        self.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Serialized as `{ "dim": n, "re": [...], "im": [...] }` in row-major order.
impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ComplexMatrix", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("re", &self.entries().iter().map(|z| z.re).collect::<Vec<_>>())?;
        st.serialize_field("im", &self.entries().iter().map(|z| z.im).collect::<Vec<_>>())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            re: Vec<f64>,
            im: Vec<f64>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.re.len() != raw.dim * raw.dim || raw.im.len() != raw.re.len() {
            return Err(serde::de::Error::custom("matrix entry count does not match dim"));
        }
        let entries: Vec<C64> = raw.re.iter().zip(&raw.im).map(|(&r, &i)| C64::new(r, i)).collect();
        ComplexMatrix::from_row_major(&entries).map_err(serde::de::Error::custom)
    }
}

/// Normalized pure state of one or two spins in the lab z basis.
#[derive(Clone, Copy, PartialEq)]
pub struct QuantumState {
    dim: usize,
    amps: [C64; 4],
}

impl QuantumState {
    /// Validates normalization to [`tolerances::NORMALIZATION`].
    pub fn new(amps: &[C64]) -> Result<Self> {
        let s = Self::raw(amps)?;
        let norm = s.norm();
        if (norm - 1.0).abs() > tolerances::NORMALIZATION {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s)
    }

    /// Normalizes the given amplitudes.
    pub fn normalized(amps: &[C64]) -> Result<Self> {
        let s = Self::raw(amps)?;
        let norm = s.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s.scale(C64::new(1.0 / norm, 0.0)))
    }

    fn raw(amps: &[C64]) -> Result<Self> {
        check_dim(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut a = [ZERO; 4];
        a[..amps.len()].copy_from_slice(amps);
        Ok(Self { dim: amps.len(), amps: a })
    }

    /// Computational basis state `index` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!((dim == 2 || dim == 4) && index < dim, "invalid basis state");
        let mut a = [ZERO; 4];
        a[index] = ONE;
        Self { dim, amps: a }
    }

    pub fn up() -> Self {
        Self::basis(2, 0)
    }

    pub fn down() -> Self {
        Self::basis(2, 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps[..self.dim]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other>.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim, "inner product dimension mismatch");
        self.amplitudes().iter().zip(other.amplitudes()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.amps.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        self.scale(C64::from_polar(1.0, phase))
    }

    /// Multiplies by the phase making the first non-negligible amplitude real
    /// and positive.
    pub fn gauge_fixed(&self) -> Self {
        let scale = self.amplitudes().iter().map(|z| z.norm()).fold(0.0, f64::max);
        match self.amplitudes().iter().find(|z| z.norm() > 1e-12 * scale.max(1e-300)) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => *self,
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: self.dim });
        }
        if other.dim != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: other.dim });
        }
        let a = &self.amps;
        let b = &other.amps;
        Ok(Self { dim: 4, amps: [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]] })
    }

    /// Euclidean distance after optimal global phase alignment.
    pub fn ray_distance(&self, other: &Self) -> f64 {
        (1.0 - self.inner(other).norm()).max(0.0).sqrt() * std::f64::consts::SQRT_2
    }
}

impl fmt::Debug for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.amplitudes().iter()).finish()
    }
}

impl Serialize for QuantumState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuantumState", 2)?;
        st.serialize_field("re", &self.amplitudes().iter().map(|z| z.re).collect::<Vec<_>>())?;
        st.serialize_field("im", &self.amplitudes().iter().map(|z| z.im).collect::<Vec<_>>())?;
        st.end()
    }
}

/// A unitary matrix together with its unitarity certificate.
#[derive(Clone, Copy, PartialEq, Serialize)]
pub struct Unitary {
    matrix: ComplexMatrix,
    unitarity_defect: f64,
}

impl Unitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = matrix.unitarity_defect();
        if defect > tolerances::UNITARITY {
            return Err(Error::NotUnitary { defect });
        }
        Ok(Self { matrix, unitarity_defect: defect })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim), unitarity_defect: 0.0 }
    }

    pub fn diagonal_phases(phases: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diagonal_phases(phases)?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.unitarity_defect
    }

    pub fn dagger(&self) -> Self {
        Self { matrix: self.matrix.dagger(), unitarity_defect: self.unitarity_defect }
    }

    /// Matrix product `self * other` (other acts first).
    pub fn then_after(&self, other: &Self) -> Self {
        Self::certify(self.matrix * other.matrix)
    }

    /// Matrix product `other * self` (self acts first).
    pub fn followed_by(&self, other: &Self) -> Self {
        other.then_after(self)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(self.dim()), |acc, _| acc.then_after(self))
    }

    pub fn scale_phase(&self, phase: f64) -> Self {
        Self::certify(self.matrix.scale(C64::from_polar(1.0, phase)))
    }

    pub fn apply(&self, state: &QuantumState) -> QuantumState {
        self.matrix.apply(state)
    }

    /// `basis^dagger * self * basis` for a unitary change of basis.
    pub fn in_basis(&self, basis: &Unitary) -> Self {
        Self::certify(basis.matrix.dagger() * self.matrix * basis.matrix)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        tensor(self, other)
    }

    /// Products of certified unitaries stay unitary to rounding; the defect
    /// is recomputed rather than checked.
    pub(crate) fn certify(matrix: ComplexMatrix) -> Self {
        let defect = matrix.unitarity_defect();
        debug_assert!(defect < 1e-6, "product of unitaries lost unitarity: {defect:e}");
        Self { matrix, unitarity_defect: defect }
    }
}

impl fmt::Debug for Unitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unitary(defect={:e}) {:?}", self.unitarity_defect, self.matrix)
    }
}

/// Kronecker product A (qubit alpha) with B (qubit beta).
pub fn tensor(a: &Unitary, b: &Unitary) -> Result<Unitary> {
    Ok(Unitary::certify(a.matrix.kron(&b.matrix)?))
}

/// Pauli matrices and spin-1/2 operators.
pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_row_major(&[ZERO, ONE, ONE, ZERO]).expect("static")
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_row_major(&[ZERO, -I, I, ZERO]).expect("static")
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_row_major(&[ONE, ZERO, ZERO, -ONE]).expect("static")
    }

    /// Spin operators s = sigma / 2 along x, y, z.
    pub fn spin() -> [ComplexMatrix; 3] {
        [sigma_x().scale_real(0.5), sigma_y().scale_real(0.5), sigma_z().scale_real(0.5)]
    }

    /// s . n for a real 3-vector n.
    pub fn spin_dot(n: [f64; 3]) -> ComplexMatrix {
        let [sx, sy, sz] = spin();
        sx.scale_real(n[0]) + sy.scale_real(n[1]) + sz.scale_real(n[2])
    }

    /// Spin operators of qubit alpha (left factor) embedded in dimension 4.
    pub fn spin_alpha() -> [ComplexMatrix; 3] {
        spin().map(|s| s.kron(&identity()).expect("2x2"))
    }

    /// Spin operators of qubit beta (right factor) embedded in dimension 4.
    pub fn spin_beta() -> [ComplexMatrix; 3] {
        spin().map(|s| identity().kron(&s).expect("2x2"))
    }

    /// s_alpha . s_beta.
    pub fn exchange() -> ComplexMatrix {
        let a = spin_alpha();
        let b = spin_beta();
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    /// Total S_z of the two spins.
    pub fn total_sz() -> ComplexMatrix {
        spin_alpha()[2] + spin_beta()[2]
    }

    /// exp(-i angle sigma_y / 2), the active spin rotation about y.
    pub fn rotation_y(angle: f64) -> ComplexMatrix {
        let (s, c) = (angle / 2.0).sin_cos();
        ComplexMatrix::from_real_rows([[c, -s], [s, c]])
    }

    /// exp(-i angle sigma_z / 2).
    pub fn rotation_z(angle: f64) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[C64::from_polar(1.0, -angle / 2.0), C64::from_polar(1.0, angle / 2.0)])
            .expect("2x2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_identity_is_identity() {
        let id = tensor(&Unitary::identity(2), &Unitary::identity(2)).unwrap();
        assert_eq!(*id.matrix(), ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_of_phase_diagonals() {
        let omega = 0.731_f64;
        let d = Unitary::diagonal_phases(&[omega / 2.0, -omega / 2.0]).unwrap();
        let dd = tensor(&d, &d).unwrap();
        let expected = ComplexMatrix::diagonal_phases(&[omega, 0.0, 0.0, -omega]).unwrap();
        assert!((*dd.matrix() - expected).max_abs() < 1e-15);
    }

    #[test]
    fn basis_ordering_alpha_is_left_factor() {
        let x = Unitary::new(pauli::sigma_x()).unwrap();
        let xa = tensor(&x, &Unitary::identity(2)).unwrap();
        let uu = QuantumState::basis(4, 0);
        let out = xa.apply(&uu);
        assert!((out.inner(&QuantumState::basis(4, 2)).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tensor_rejects_four_dimensional_factor() {
        let err = tensor(&Unitary::identity(4), &Unitary::identity(2)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 4 });
    }

    #[test]
    fn determinant_of_permutation_and_diagonal() {
        let swap = ComplexMatrix::from_real_rows([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]);
        assert!((swap.determinant() + ONE).norm() < 1e-15);
        let d = ComplexMatrix::from_diagonal(&[ONE, I, -ONE, C64::new(2.0, 0.0)]).unwrap();
        assert!((d.determinant() - C64::new(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = ComplexMatrix::from_real_rows([[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn state_rejects_unnormalized_and_wrong_dimension() {
        assert!(matches!(QuantumState::new(&[ONE, ONE]), Err(Error::NotNormalized { .. })));
        assert!(matches!(QuantumState::new(&[ONE, ZERO, ZERO]), Err(Error::UnsupportedDimension(3))));
    }

    #[test]
    fn gauge_fixing_makes_first_amplitude_positive() {
        let s = QuantumState::normalized(&[C64::new(0.0, -1.0), C64::new(1.0, 1.0)]).unwrap().gauge_fixed();
        assert!(s.amplitudes()[0].im.abs() < 1e-15 && s.amplitudes()[0].re > 0.0);
    }

    #[test]
    fn matrix_serde_round_trip() {
        let m = pauli::sigma_y();
        let json = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn exchange_spectrum() {
        let e = eigh(&pauli::exchange()).unwrap();
        let expected = [-0.75, 0.25, 0.25, 0.25];
        for (a, b) in e.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
