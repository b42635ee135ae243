use num_complex::Complex64;

use super::matrix::{herm_eigenvalues, ComplexMatrix, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};

/// A Hermitian, unit-trace, positive semidefinite matrix.
///
/// Validation happens once at construction; every operation that produces a
/// `DensityMatrix` from another one (partial trace, unitary conjugation,
/// channel application) preserves the invariants by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        matrix.ensure_hermitian(tolerance)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tolerance || tr.im.abs() > tolerance {
            return Err(Error::InvalidState(format!(
                "trace is {:.12}{:+.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let min = herm_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -tolerance {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:.3e} is below -{tolerance:.1e}"
            )));
        }
        Ok(Self { matrix, tolerance })
    }

    /// Wraps a matrix whose invariants are guaranteed by the caller.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(populations: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(populations))
    }

    /// |ψ⟩⟨ψ| for a normalized state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi, psi)?)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigenvalues(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Diagonal entries (real parts) in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn evolve_unitary(&self, u: &ComplexMatrix) -> DensityMatrix {
        Self::from_trusted(self.matrix.conjugate_by(u))
    }

    /// Trace distance ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "trace distance between dim {} and dim {}",
                self.dim(),
                other.dim()
            )));
        }
        let diff = &self.matrix - &other.matrix;
        Ok(0.5 * herm_eigenvalues(&diff)?.iter().map(|l| l.abs()).sum::<f64>())
    }
}

/// Reduced matrix over the sites listed in `keep` (in ascending site order).
///
/// `dims` lists the local dimension of each site; site 0 is the leftmost
/// tensor factor.
pub fn reduce(matrix: &ComplexMatrix, keep: &[usize], dims: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || total != matrix.dim() {
        return Err(Error::DimensionMismatch(format!(
            "site dimensions {dims:?} (product {total}) do not match matrix dimension {}",
            matrix.dim()
        )));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem index {k} out of range for {} sites",
                dims.len()
            )));
        }
        if kept[k] {
            return Err(Error::DimensionMismatch(format!("subsystem index {k} listed twice")));
        }
        kept[k] = true;
    }

    // Map every full index to (kept index, traced index).
    let kept_dim: usize = dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let mut kept_idx = vec![0usize; total];
    let mut traced_idx = vec![0usize; total];
    for full in 0..total {
        let (mut rem, mut k, mut t) = (full, 0usize, 0usize);
        let (mut k_stride, mut t_stride) = (1usize, 1usize);
        for (site, &d) in dims.iter().enumerate().rev() {
            let digit = rem % d;
            rem /= d;
            if kept[site] {
                k += digit * k_stride;
                k_stride *= d;
            } else {
                t += digit * t_stride;
                t_stride *= d;
            }
        }
        kept_idx[full] = k;
        traced_idx[full] = t;
    }

    let mut out = ComplexMatrix::zeros(kept_dim);
    for i in 0..total {
        for j in 0..total {
            if traced_idx[i] == traced_idx[j] {
                out[(kept_idx[i], kept_idx[j])] += matrix[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Reduced state of a single subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: usize, dims: &[usize]) -> Result<DensityMatrix> {
    reduce(rho.matrix(), &[keep], dims).map(DensityMatrix::from_trusted)
}

/// Reduced state over several subsystems.
pub fn partial_trace_keep(rho: &DensityMatrix, keep: &[usize], dims: &[usize]) -> Result<DensityMatrix> {
    reduce(rho.matrix(), keep, dims).map(DensityMatrix::from_trusted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::matrix::tensor;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(dim: usize, seed: u64) -> DensityMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = ComplexMatrix::from_fn(dim, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let p = &a * &a.adjoint();
        let tr = p.trace().re;
        DensityMatrix::new(p.scale(c(1.0 / tr, 0.0))).unwrap()
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(DensityMatrix::from_populations(&[0.6, 0.6]).is_err());
        assert!(DensityMatrix::from_populations(&[1.2, -0.2]).is_err());
        let mut m = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn trace_out_product_factor() {
        let a = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::from_populations(&[0.2, 0.8]).unwrap();
        let ab = DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap();
        let ra = partial_trace(&ab, 0, &[2, 2]).unwrap();
        let rb = partial_trace(&ab, 1, &[2, 2]).unwrap();
        assert!(ra.matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(rb.matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let s = 1.0 / 2f64.sqrt();
        let phi = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let rho = DensityMatrix::pure(&phi).unwrap();
        let ra = partial_trace(&rho, 0, &[2, 2]).unwrap();
        assert!(ra.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(partial_trace(&rho, 0, &[2, 3]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(partial_trace(&rho, 2, &[2, 2]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn keeps_middle_site_of_three() {
        let a = DensityMatrix::from_populations(&[0.9, 0.1]).unwrap();
        let b = DensityMatrix::from_populations(&[0.4, 0.6]).unwrap();
        let cc = DensityMatrix::from_populations(&[0.25, 0.75]).unwrap();
        let abc = tensor(&tensor(a.matrix(), b.matrix()), cc.matrix());
        let rho = DensityMatrix::new(abc).unwrap();
        let rb = partial_trace(&rho, 1, &[2, 2, 2]).unwrap();
        assert!(rb.matrix().max_abs_diff(b.matrix()) < 1e-15);
        let rac = partial_trace_keep(&rho, &[0, 2], &[2, 2, 2]).unwrap();
        assert!(rac.matrix().max_abs_diff(&tensor(a.matrix(), cc.matrix())) < 1e-15);
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let z0 = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        let z1 = DensityMatrix::from_populations(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(z0.trace_distance(&z1).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(z0.trace_distance(&z0).unwrap(), 0.0);
    }

    proptest! {
        // Tr_A(a ⊗ b) = Tr(a)·b and Tr_B(a ⊗ b) = a·Tr(b), for arbitrary (not
        // necessarily unit-trace) factors.
        #[test]
        fn partial_trace_of_tensor(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
            let a = random_state(da, seed).matrix().scale(c(1.7, 0.0));
            let b = random_state(db, seed ^ 0xabcd).matrix().scale(c(0.3, 0.0));
            let ab = tensor(&a, &b);
            let tr_a = reduce(&ab, &[1], &[da, db]).unwrap();
            let tr_b = reduce(&ab, &[0], &[da, db]).unwrap();
            prop_assert!(tr_a.max_abs_diff(&b.scale(a.trace())) < 1e-14);
            prop_assert!(tr_b.max_abs_diff(&a.scale(b.trace())) < 1e-14);
        }

        #[test]
        fn partial_trace_preserves_trace_and_hermiticity(seed in any::<u64>()) {
            let rho = random_state(8, seed);
            for keep in 0..3 {
                let r = partial_trace(&rho, keep, &[2, 2, 2]).unwrap();
                prop_assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
                prop_assert!(r.matrix().hermiticity_defect() < 1e-14);
            }
        }
    }
}
