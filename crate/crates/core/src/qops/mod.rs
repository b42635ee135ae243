//! Dense complex-matrix kernel for small Hilbert spaces (dimension ≤ 512).

mod bloch;
mod density;
mod matrix;

pub use num_complex::Complex64;

pub use bloch::{bloch_decompose, BlochForm};
pub use density::{partial_trace, partial_trace_keep, reduce, DensityMatrix};
pub use matrix::{
    commutator, expm_hermitian, herm_eig, herm_eigenvalues, logm_psd, pauli, propagator, tensor,
    tensor_all, ComplexMatrix, HermEig, DEFAULT_TOLERANCE,
};
