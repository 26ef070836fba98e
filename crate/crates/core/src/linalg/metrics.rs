use serde::Serialize;

use super::{ComplexMatrix, Unitary, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

/// Frobenius distance between U and V minimized over a global phase,
/// normalized to [0, 1]: sqrt(2n - 2|tr(U^dagger V)|) / sqrt(2n).
pub fn distance_up_to_global_phase(u: &Unitary, v: &Unitary) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: v.dim() });
    }
    let n = u.dim() as f64;
    // min over phi of ||U - e^{i phi} V||_F^2 equals 2n - 2|tr(U^dagger V)|; the
    // residual form avoids the cancellation of the trace form near zero.
    let overlap = (u.matrix().dagger() * *v.matrix()).trace();
    let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { ONE };
    let residual = (*u.matrix() - v.matrix().scale(phase)).frobenius_norm();
    Ok((residual / (2.0 * n).sqrt()).min(1.0))
}

/// Local-equivalence invariants of a two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MakhlinInvariants {
    pub g1: C64,
    pub g2: f64,
}

impl MakhlinInvariants {
    pub const IDENTITY_CLASS: MakhlinInvariants = MakhlinInvariants { g1: ONE, g2: 3.0 };
    pub const CNOT_CLASS: MakhlinInvariants = MakhlinInvariants { g1: ZERO, g2: 1.0 };

    /// Largest componentwise deviation from `other`.
    pub fn deviation(&self, other: &MakhlinInvariants) -> f64 {
        (self.g1 - other.g1).norm().max((self.g2 - other.g2).abs())
    }
}

/// Columns are the magic (Bell-type) basis in which local gates become real
/// orthogonal matrices.
fn magic_basis() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = C64::new(h, 0.0);
    let i = I * h;
    ComplexMatrix::from_row_major(&[
        r, ZERO, ZERO, i, //
        ZERO, i, r, ZERO, //
        ZERO, i, -r, ZERO, //
        r, ZERO, ZERO, -i,
    ])
    .expect("static")
}

/// Makhlin invariants G1 = tr^2(m) / (16 det U), G2 = (tr^2(m) - tr(m^2)) / (4 det U)
/// with m = U_B^T U_B and U_B the gate in the magic basis.
pub fn makhlin_invariants(u: &Unitary) -> Result<MakhlinInvariants> {
    if u.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: u.dim() });
    }
    let q = magic_basis();
    let ub = q.dagger() * *u.matrix() * q;
    let m = ub.transpose() * ub;
    let det = u.matrix().determinant();
    let tr = m.trace();
    let tr2 = (m * m).trace();
    let g1 = tr * tr / (det * 16.0);
    let g2 = (tr * tr - tr2) / (det * 4.0);
    Ok(MakhlinInvariants { g1, g2: g2.re })
}
