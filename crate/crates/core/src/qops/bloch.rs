use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::matrix::{pauli, tensor, ComplexMatrix, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};

/// Two-qubit state in Pauli coordinates:
/// ρ = ¼(1 + Σ x_j σ_j⊗1 + Σ y_j 1⊗σ_j + Σ V_jk σ_j⊗σ_k).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochForm {
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub v: [[f64; 3]; 3],
}

impl BlochForm {
    /// Decomposes a raw 4×4 matrix; it must be Hermitian within tolerance.
    pub fn from_matrix(rho: &ComplexMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch decomposition needs a two-qubit (4x4) state, got {0}x{0}",
                rho.dim()
            )));
        }
        rho.ensure_hermitian(DEFAULT_TOLERANCE)?;
        let sig = pauli::all();
        let id = pauli::identity();
        let mut form = BlochForm {
            x: [0.0; 3],
            y: [0.0; 3],
            v: [[0.0; 3]; 3],
        };
        for j in 0..3 {
            form.x[j] = rho.expectation(&tensor(&sig[j], &id));
            form.y[j] = rho.expectation(&tensor(&id, &sig[j]));
            for k in 0..3 {
                form.v[j][k] = rho.expectation(&tensor(&sig[j], &sig[k]));
            }
        }
        Ok(form)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let sig = pauli::all();
        let id = pauli::identity();
        let mut acc = ComplexMatrix::identity(4);
        let r = |v: f64| Complex64::new(v, 0.0);
        for j in 0..3 {
            acc = &acc + &tensor(&sig[j], &id).scale(r(self.x[j]));
            acc = &acc + &tensor(&id, &sig[j]).scale(r(self.y[j]));
            for k in 0..3 {
                acc = &acc + &tensor(&sig[j], &sig[k]).scale(r(self.v[j][k]));
            }
        }
        acc.scale(r(0.25))
    }
}

pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochForm> {
    BlochForm::from_matrix(rho.matrix())
}
