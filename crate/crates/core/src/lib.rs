//! Heat-flow reversal between quantum-correlated qubits.
//!
//! * [`qops`]: dense complex-matrix kernel (tensor products, partial traces,
//!   Hermitian eigendecomposition, propagators, Bloch coordinates).
//! * [`spin_states`]: qubit Gibbs states and the correlated two-qubit preparation.
//! * [`exchange`]: the energy-conserving exchange interaction, its propagator,
//!   the equivalent local Kraus channel and the zero-work ledger.
//! * [`thermo`]: entropies, mutual information, relative entropy, geometric
//!   discord and the heat/information ledger.
//! * [`collision`]: randomized pairwise-collision thermalization of a hot qubit
//!   in a bath of up to eight cold qubits.
//! * [`cli`]: configuration, batch runs and CSV/JSON output behind the
//!   `simulate` binary.

pub mod cli;
pub mod collision;
pub mod error;
pub mod exchange;
pub mod qops;
pub mod spin_states;
pub mod thermo;

pub use error::{Error, Result};
