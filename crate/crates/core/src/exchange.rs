//! Partial thermalization between two resonant qubits.
//!
//! The exchange generator (πħJ/2)(σx⊗σy − σy⊗σx) acts only on the
//! single-excitation block {|01⟩, |10⟩}, where the propagator for a contact
//! time τ is a real rotation by πJτ. For uncorrelated inputs the reduced
//! dynamics of either qubit is a generalized amplitude damping channel.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qops::{commutator, pauli, partial_trace, propagator, tensor, ComplexMatrix, DensityMatrix};
use crate::spin_states::{QubitHamiltonian, HBAR_PEV_S};

/// Slack on the upper end of the contact-time window.
const WINDOW_SLACK_MS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeHamiltonian {
    coupling_hz: f64,
    matrix: ComplexMatrix,
}

impl ExchangeHamiltonian {
    pub fn coupling_hz(&self) -> f64 {
        self.coupling_hz
    }

    /// Operator in peV.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// U_τ = exp(−iτH/ħ) for τ in milliseconds.
    pub fn propagator(&self, tau_ms: f64) -> ComplexMatrix {
        propagator(&self.matrix, tau_ms * 1e-3, HBAR_PEV_S).expect("exchange Hamiltonian is Hermitian")
    }
}

pub fn effective_hamiltonian(coupling_hz: f64) -> Result<ExchangeHamiltonian> {
    if !(coupling_hz > 0.0) || !coupling_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "exchange coupling must be positive and finite, got {coupling_hz} Hz"
        )));
    }
    let dm = &tensor(&pauli::x(), &pauli::y()) - &tensor(&pauli::y(), &pauli::x());
    let prefactor = std::f64::consts::PI * HBAR_PEV_S * coupling_hz / 2.0;
    Ok(ExchangeHamiltonian {
        coupling_hz,
        matrix: dm.scale(Complex64::new(prefactor, 0.0)),
    })
}

/// Upper end of the contact-time window, 1/(2J), in milliseconds.
pub fn exchange_window_ms(coupling_hz: f64) -> f64 {
    1e3 / (2.0 * coupling_hz)
}

pub fn in_exchange_window(tau_ms: f64, coupling_hz: f64) -> bool {
    (0.0..=exchange_window_ms(coupling_hz) + WINDOW_SLACK_MS).contains(&tau_ms)
}

/// H_A ⊗ 1 + 1 ⊗ H_B for two identical qubits.
pub fn local_energy_operator(h: &QubitHamiltonian) -> ComplexMatrix {
    let hm = h.matrix();
    let id = pauli::identity();
    &tensor(&hm, &id) + &tensor(&id, &hm)
}

fn ensure_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// U_τ ρ₀ U_τ†. Contact times outside [0, 1/(2J)] are evaluated but logged.
pub fn evolve(rho0: &DensityMatrix, tau_ms: f64, coupling_hz: f64) -> Result<DensityMatrix> {
    ensure_two_qubit(rho0)?;
    let heff = effective_hamiltonian(coupling_hz)?;
    if !in_exchange_window(tau_ms, coupling_hz) {
        log::warn!(
            "contact time {tau_ms} ms lies outside the partial-thermalization window [0, {:.6}] ms",
            exchange_window_ms(coupling_hz)
        );
    }
    Ok(rho0.evolve_unitary(&heff.propagator(tau_ms)))
}

/// Ordered Kraus operators with their completeness defect ‖Σ K†K − 1‖_F.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    completeness_defect: f64,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = match operators.first() {
            Some(k) => k.dim(),
            None => return Err(Error::InvalidParameter("a channel needs at least one Kraus operator".into())),
        };
        if operators.iter().any(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch("Kraus operators of different dimensions".into()));
        }
        let sum = operators
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, k| &acc + &(&k.adjoint() * k));
        let completeness_defect = (&sum - &ComplexMatrix::identity(dim)).frobenius_norm();
        if completeness_defect > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "Kraus operators violate completeness by {completeness_defect:.3e}"
            )));
        }
        Ok(Self {
            operators,
            completeness_defect,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn completeness_defect(&self) -> f64 {
        self.completeness_defect
    }

    /// Σ K ρ K†.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let dim = self.operators[0].dim();
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on dimension {dim}, state has dimension {}",
                rho.dim()
            )));
        }
        let out = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(dim), |acc, k| &acc + &rho.matrix().conjugate_by(k));
        Ok(DensityMatrix::from_trusted(out))
    }
}

/// Generalized amplitude damping with contact time τ.
///
/// `p` is the initial excited population of the partner qubit.
pub fn gad_channel(p: f64, tau_ms: f64, coupling_hz: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("partner population must lie in [0, 1], got {p}")));
    }
    if !(coupling_hz > 0.0) {
        return Err(Error::InvalidParameter(format!("exchange coupling must be positive, got {coupling_hz} Hz")));
    }
    let theta = std::f64::consts::PI * coupling_hz * tau_ms * 1e-3;
    let (s, c) = theta.sin_cos();
    let r = |v: f64| Complex64::new(v, 0.0);
    let m = |a: f64, b: f64, cc: f64, d: f64| ComplexMatrix::from_fn(2, |i, j| r([[a, b], [cc, d]][i][j]));
    let (wd, we) = ((1.0 - p).sqrt(), p.sqrt());
    KrausChannel::new(vec![
        m(wd, 0.0, 0.0, wd * c),
        m(0.0, wd * s, 0.0, 0.0),
        m(we * c, 0.0, 0.0, we),
        m(0.0, 0.0, -we * s, 0.0),
    ])
}

/// Which qubit's reduced dynamics to compare against the local channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    A,
    B,
}

/// Trace distance between the exact reduced state of `site` after U_τ and the
/// local channel applied to its initial marginal, for an arbitrary joint state.
pub fn local_channel_defect(rho_ab: &DensityMatrix, site: Site, tau_ms: f64, coupling_hz: f64) -> Result<f64> {
    ensure_two_qubit(rho_ab)?;
    let (keep, partner) = match site {
        Site::A => (0, 1),
        Site::B => (1, 0),
    };
    let local0 = partial_trace(rho_ab, keep, &[2, 2])?;
    let partner_p = partial_trace(rho_ab, partner, &[2, 2])?.populations()[1];
    let exact = partial_trace(&evolve(rho_ab, tau_ms, coupling_hz)?, keep, &[2, 2])?;
    let channel = gad_channel(partner_p, tau_ms, coupling_hz)?.apply(&local0)?;
    exact.trace_distance(&channel)
}

/// Defect for qubit A starting from the product ρ_A ⊗ ρ_B.
pub fn channel_equivalence_defect(
    rho_a: &DensityMatrix,
    rho_b: &DensityMatrix,
    tau_ms: f64,
    coupling_hz: f64,
) -> Result<f64> {
    if rho_a.dim() != 2 || rho_b.dim() != 2 {
        return Err(Error::DimensionMismatch("channel equivalence needs two single-qubit states".into()));
    }
    let product = DensityMatrix::from_trusted(tensor(rho_a.matrix(), rho_b.matrix()));
    local_channel_defect(&product, Site::A, tau_ms, coupling_hz)
}

/// ‖[χ, H_eff]‖_F; zero is necessary for the correlations to stay
/// thermodynamically inaccessible.
pub fn reversal_criterion(chi: &ComplexMatrix, heff: &ExchangeHamiltonian) -> Result<f64> {
    Ok(commutator(chi, heff.matrix())?.frobenius_norm())
}

/// Energy bookkeeping at one contact time, all in peV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkLedger {
    pub tau_ms: f64,
    /// ⟨H_eff⟩_τ.
    pub interaction_energy: f64,
    /// ⟨H_A + H_B⟩_τ.
    pub local_energy_sum: f64,
    /// |⟨H_A + H_B⟩_τ − ⟨H_A + H_B⟩_0|.
    pub conservation_defect: f64,
}

/// ⟨H_eff⟩ vanishes for real α and equals hJ·Im α otherwise; in both cases it
/// is constant in τ, so switching the interaction on and off costs no work.
pub fn work_ledger(
    rho0: &DensityMatrix,
    tau_grid: &[f64],
    coupling_hz: f64,
    h: &QubitHamiltonian,
) -> Result<Vec<WorkLedger>> {
    ensure_two_qubit(rho0)?;
    let heff = effective_hamiltonian(coupling_hz)?;
    let local = local_energy_operator(h);
    let e0 = rho0.matrix().expectation(&local);
    tau_grid
        .iter()
        .map(|&tau_ms| {
            let rho = rho0.evolve_unitary(&heff.propagator(tau_ms));
            let local_energy_sum = rho.matrix().expectation(&local);
            Ok(WorkLedger {
                tau_ms,
                interaction_energy: rho.matrix().expectation(heff.matrix()),
                local_energy_sum,
                conservation_defect: (local_energy_sum - e0).abs(),
            })
        })
        .collect()
}

/// ‖[U_τ, H_A + H_B]‖_F.
pub fn strict_conservation_defect(tau_ms: f64, coupling_hz: f64, h: &QubitHamiltonian) -> Result<f64> {
    let u = effective_hamiltonian(coupling_hz)?.propagator(tau_ms);
    Ok(commutator(&u, &local_energy_operator(h))?.frobenius_norm())
}
