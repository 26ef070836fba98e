use super::{ComplexMatrix, QuantumState, Unitary, C64, ZERO};
use crate::error::{Error, Result};
use crate::tolerances;

/// Spectrum of a Hermitian matrix: ascending eigenvalues with orthonormal
/// eigenvectors stored as columns of `vectors`.
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen {
    pub values: [f64; 4],
    pub vectors: ComplexMatrix,
    dim: usize,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values[..self.dim]
    }

    pub fn vector(&self, k: usize) -> QuantumState {
        QuantumState::new(&self.vectors.column(k)).expect("Jacobi eigenvectors are orthonormal")
    }

    /// Smallest spacing between consecutive eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.values().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = h.hermiticity_defect();
    if defect > tolerances::HERMITICITY {
        return Err(Error::NonHermitianInput { defect });
    }
    let n = h.dim();
    // Symmetrize so that rounding in the input does not leak into the rotations.
    let mut a = (*h + h.dagger()).scale_real(0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let phase = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Rotation acting on columns p, q: [[c, s*phase], [-s, c*phase]]
                // applied after removing the phase of a_pq.
                let mut r = ComplexMatrix::identity(n);
                r[(p, p)] = C64::new(c, 0.0);
                r[(p, q)] = C64::new(s, 0.0);
                r[(q, p)] = -phase.conj() * s;
                r[(q, q)] = phase.conj() * c;
                a = r.dagger() * a * r;
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                v = v * r;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let mut values = [0.0; 4];
    let mut vectors = ComplexMatrix::zeros(n);
    for (k, &i) in order.iter().enumerate() {
        values[k] = a[(i, i)].re;
        for row in 0..n {
            vectors[(row, k)] = v[(row, i)];
        }
    }
    Ok(HermitianEigen { values, vectors, dim: n })
}

/// exp(-i H t) for Hermitian H, via its eigendecomposition.
pub fn expm_hermitian_generator(h: &ComplexMatrix, t: f64) -> Result<Unitary> {
    SpectralGenerator::new(h)?.evolve(t)
}

/// A diagonalized Hermitian generator, for repeated exp(-i H t) evaluations.
#[derive(Debug, Clone, Copy)]
pub struct SpectralGenerator {
    eigen: HermitianEigen,
}

impl SpectralGenerator {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        Ok(Self { eigen: eigh(h)? })
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn evolve(&self, t: f64) -> Result<Unitary> {
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        let e = &self.eigen;
        let n = e.dim;
        let mut phases = ComplexMatrix::zeros(n);
        for k in 0..n {
            phases[(k, k)] = C64::from_polar(1.0, -e.values[k] * t);
        }
        Ok(Unitary::certify(e.vectors * phases * e.vectors.dagger()))
    }
}
