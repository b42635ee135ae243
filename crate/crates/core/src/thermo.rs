//! Energies, entropies, correlations and the heat/information ledger
//!
//! ```text
//! Q_B (β_B − β_A) = ΔI(A:B) + S(ρ_A^τ‖ρ_A⁰) + S(ρ_B^τ‖ρ_B⁰)
//! ```
//!
//! evaluated along the exchange dynamics. Entropies are in nats, energies in
//! peV, and Q_i = E_i(τ) − E_i(0) is the heat absorbed by qubit i.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::effective_hamiltonian;
use crate::qops::{bloch_decompose, herm_eig, herm_eigenvalues, partial_trace, DensityMatrix, DEFAULT_TOLERANCE};
use crate::spin_states::{correlated_initial_state, population_to_beta, thermal_state, QubitHamiltonian, ThermalSpec};

/// Eigenvalues at or below this are treated as zero before taking logarithms.
pub const EIGENVALUE_CLIP: f64 = 1e-10;

const TWO_QUBITS: [usize; 2] = [2, 2];

/// E = Tr(ρH) for a single qubit.
pub fn internal_energy(rho: &DensityMatrix, h: &QubitHamiltonian) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "internal energy needs a qubit state, got dimension {}",
            rho.dim()
        )));
    }
    Ok(rho.matrix().expectation(&h.matrix()))
}

fn entropy_of_spectrum(values: &[f64]) -> f64 {
    -values
        .iter()
        .filter(|&&l| l > EIGENVALUE_CLIP)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// S = −Tr ρ ln ρ in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues()).max(0.0)
}

/// I(A:B) = S_A + S_B − S_AB.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    ensure_two_qubit(rho_ab)?;
    let sa = von_neumann_entropy(&partial_trace(rho_ab, 0, &TWO_QUBITS)?);
    let sb = von_neumann_entropy(&partial_trace(rho_ab, 1, &TWO_QUBITS)?);
    Ok(sa + sb - von_neumann_entropy(rho_ab))
}

/// S(ρ‖σ) = Tr ρ (ln ρ − ln σ).
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let eig = herm_eig(sigma.matrix())?;
    let mut cross = 0.0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        let v = eig.vector(k);
        let weight = weight_along(rho, &v);
        if lambda > EIGENVALUE_CLIP {
            cross += weight * lambda.ln();
        } else if weight > EIGENVALUE_CLIP {
            return Err(Error::SupportViolation {
                index: k,
                eigenvalue: lambda,
                weight,
            });
        }
    }
    Ok(-von_neumann_entropy(rho) - cross)
}

/// ⟨v|ρ|v⟩.
fn weight_along(rho: &DensityMatrix, v: &[Complex64]) -> f64 {
    let m = rho.matrix();
    let n = m.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

/// Normalized geometric discord 2(Tr Λ − λ_max), Λ = (x xᵀ + V Vᵀ)/4.
pub fn geometric_discord(rho_ab: &DensityMatrix) -> Result<f64> {
    let form = bloch_decompose(rho_ab)?;
    let x = Vector3::from(form.x);
    let v = Matrix3::from_fn(|j, k| form.v[j][k]);
    let lambda = (x * x.transpose() + v * v.transpose()) / 4.0;
    let max = lambda.symmetric_eigenvalues().max();
    Ok(2.0 * (lambda.trace() - max))
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

/// The three prepared initial states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Uncorrelated,
    CorrelatedPhiPi,
    CorrelatedPhiHalfPi,
}

/// Preset populations and correlation amplitude for a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTag {
    pub name: Scenario,
    pub alpha: Complex64,
    /// Excited populations (p_A1, p_B1).
    pub populations: (f64, f64),
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::Uncorrelated,
        Scenario::CorrelatedPhiPi,
        Scenario::CorrelatedPhiHalfPi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Uncorrelated => "uncorrelated",
            Scenario::CorrelatedPhiPi => "correlated_phi_pi",
            Scenario::CorrelatedPhiHalfPi => "correlated_phi_half_pi",
        }
    }

    pub fn tag(&self) -> ScenarioTag {
        let (alpha, populations) = match self {
            Scenario::Uncorrelated => (Complex64::new(0.0, 0.0), (0.29, 0.22)),
            Scenario::CorrelatedPhiPi => (Complex64::new(-0.19, 0.0), (0.28, 0.24)),
            Scenario::CorrelatedPhiHalfPi => (Complex64::new(0.0, -0.17), (0.32, 0.21)),
        };
        ScenarioTag {
            name: *self,
            alpha,
            populations,
        }
    }

    /// Reported spin temperatures (β_A⁻¹, β_B⁻¹) in peV, for cross-checking only.
    pub fn reported_inverse_temperatures(&self) -> (f64, f64) {
        match self {
            Scenario::Uncorrelated => (4.70, 3.30),
            Scenario::CorrelatedPhiPi => (4.30, 3.70),
            Scenario::CorrelatedPhiHalfPi => (5.60, 3.10),
        }
    }

    /// Whether the heat current is expected to run from cold to hot.
    pub fn expects_reversal(&self) -> bool {
        matches!(self, Scenario::CorrelatedPhiPi)
    }

    pub fn initial_state(&self, h: &QubitHamiltonian) -> Result<DensityMatrix> {
        let tag = self.tag();
        let rho_a = thermal_state(&ThermalSpec::ExcitedPopulation(tag.populations.0), h)?;
        let rho_b = thermal_state(&ThermalSpec::ExcitedPopulation(tag.populations.1), h)?;
        correlated_initial_state(&rho_a, &rho_b, tag.alpha)
    }

    /// (β_A, β_B) in peV⁻¹ derived from the preset populations.
    pub fn betas(&self, h: &QubitHamiltonian) -> Result<(f64, f64)> {
        let (pa, pb) = self.tag().populations;
        Ok((population_to_beta(pa, h.gap())?, population_to_beta(pb, h.gap())?))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown scenario '{s}' (expected one of: uncorrelated, correlated_phi_pi, correlated_phi_half_pi)"
                ))
            })
    }
}

/// One row of the heat/information ledger.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermoRecord {
    pub tau_ms: f64,
    #[serde(rename = "E_A_peV")]
    pub e_a: f64,
    #[serde(rename = "E_B_peV")]
    pub e_b: f64,
    #[serde(rename = "Q_A_peV")]
    pub q_a: f64,
    #[serde(rename = "Q_B_peV")]
    pub q_b: f64,
    #[serde(rename = "S_A_nats")]
    pub s_a: f64,
    #[serde(rename = "S_B_nats")]
    pub s_b: f64,
    #[serde(rename = "S_AB_nats")]
    pub s_ab: f64,
    #[serde(rename = "MI_nats")]
    pub mutual_info: f64,
    #[serde(rename = "dMI_nats")]
    pub delta_mi: f64,
    #[serde(rename = "relent_A_nats")]
    pub relent_a: f64,
    #[serde(rename = "relent_B_nats")]
    pub relent_b: f64,
    pub discord: f64,
    /// Q_B (β_B − β_A).
    pub eq5_lhs: f64,
    /// ΔI + S(ρ_A^τ‖ρ_A⁰) + S(ρ_B^τ‖ρ_B⁰).
    pub eq5_rhs: f64,
    pub eq5_residual: f64,
    /// β_A Q_A + β_B Q_B − ΔI; the second law for the pair requires ≥ 0.
    pub clausius_slack: f64,
}

impl ThermoRecord {
    pub const CSV_HEADER: [&'static str; 16] = [
        "tau_ms",
        "E_A_peV",
        "E_B_peV",
        "Q_A_peV",
        "Q_B_peV",
        "S_A_nats",
        "S_B_nats",
        "S_AB_nats",
        "MI_nats",
        "dMI_nats",
        "relent_A_nats",
        "relent_B_nats",
        "discord",
        "eq5_lhs",
        "eq5_rhs",
        "eq5_residual",
    ];

    pub fn csv_values(&self) -> [f64; 16] {
        [
            self.tau_ms,
            self.e_a,
            self.e_b,
            self.q_a,
            self.q_b,
            self.s_a,
            self.s_b,
            self.s_ab,
            self.mutual_info,
            self.delta_mi,
            self.relent_a,
            self.relent_b,
            self.discord,
            self.eq5_lhs,
            self.eq5_rhs,
            self.eq5_residual,
        ]
    }
}

/// Evaluates the ledger at every contact time in `tau_grid` (milliseconds).
///
/// Grid points are independent and evaluated on the current rayon pool;
/// the output keeps grid order.
pub fn ledger(
    rho0: &DensityMatrix,
    beta_a: f64,
    beta_b: f64,
    tau_grid: &[f64],
    coupling_hz: f64,
    h: &QubitHamiltonian,
) -> Result<Vec<ThermoRecord>> {
    ensure_two_qubit(rho0)?;
    if !(beta_b >= beta_a) {
        return Err(Error::InvalidParameter(format!(
            "qubit B must be the colder one: beta_B = {beta_b} < beta_A = {beta_a}"
        )));
    }
    let heff = effective_hamiltonian(coupling_hz)?;
    let rho_a0 = partial_trace(rho0, 0, &TWO_QUBITS)?;
    let rho_b0 = partial_trace(rho0, 1, &TWO_QUBITS)?;
    let e_a0 = internal_energy(&rho_a0, h)?;
    let e_b0 = internal_energy(&rho_b0, h)?;
    let mi0 = mutual_information(rho0)?;

    tau_grid
        .par_iter()
        .map(|&tau_ms| {
            let rho = rho0.evolve_unitary(&heff.propagator(tau_ms));
            let rho_a = partial_trace(&rho, 0, &TWO_QUBITS)?;
            let rho_b = partial_trace(&rho, 1, &TWO_QUBITS)?;
            let e_a = internal_energy(&rho_a, h)?;
            let e_b = internal_energy(&rho_b, h)?;
            let (q_a, q_b) = (e_a - e_a0, e_b - e_b0);
            let s_a = von_neumann_entropy(&rho_a);
            let s_b = von_neumann_entropy(&rho_b);
            let s_ab = entropy_of_spectrum(&herm_eigenvalues(rho.matrix())?).max(0.0);
            let mutual_info = s_a + s_b - s_ab;
            let delta_mi = mutual_info - mi0;
            let relent_a = relative_entropy(&rho_a, &rho_a0)?;
            let relent_b = relative_entropy(&rho_b, &rho_b0)?;
            let eq5_lhs = q_b * (beta_b - beta_a);
            let eq5_rhs = delta_mi + relent_a + relent_b;
            Ok(ThermoRecord {
                tau_ms,
                e_a,
                e_b,
                q_a,
                q_b,
                s_a,
                s_b,
                s_ab,
                mutual_info,
                delta_mi,
                relent_a,
                relent_b,
                discord: geometric_discord(&rho)?,
                eq5_lhs,
                eq5_rhs,
                eq5_residual: eq5_lhs - eq5_rhs,
                clausius_slack: beta_a * q_a + beta_b * q_b - delta_mi,
            })
        })
        .collect()
}

/// `count` points spaced uniformly over [0, t_max_ms], both ends included.
pub fn tau_grid(count: usize, t_max_ms: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| t_max_ms * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Tolerance used when checking ledger invariants.
pub const LEDGER_TOLERANCE: LedgerTolerance = LedgerTolerance {
    eq5_residual: 1e-9,
    negativity: 1e-12,
    heat_balance: 1e-10,
    clausius: 1e-10,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LedgerTolerance {
    pub eq5_residual: f64,
    pub negativity: f64,
    pub heat_balance: f64,
    pub clausius: f64,
}

impl ThermoRecord {
    /// Violated invariants at this grid point, as human-readable messages.
    pub fn invariant_violations(&self) -> Vec<String> {
        let tol = LEDGER_TOLERANCE;
        let mut out = Vec::new();
        if self.eq5_residual.abs() >= tol.eq5_residual {
            out.push(format!("tau {} ms: |eq5 residual| = {:.3e}", self.tau_ms, self.eq5_residual.abs()));
        }
        if self.mutual_info < -tol.negativity {
            out.push(format!("tau {} ms: negative mutual information {:.3e}", self.tau_ms, self.mutual_info));
        }
        if self.relent_a < -tol.negativity || self.relent_b < -tol.negativity {
            out.push(format!("tau {} ms: negative relative entropy", self.tau_ms));
        }
        if (self.q_a + self.q_b).abs() >= tol.heat_balance {
            out.push(format!("tau {} ms: Q_A + Q_B = {:.3e}", self.tau_ms, self.q_a + self.q_b));
        }
        if self.clausius_slack < -tol.clausius {
            out.push(format!("tau {} ms: beta_A Q_A + beta_B Q_B < dI by {:.3e}", self.tau_ms, -self.clausius_slack));
        }
        if !(-DEFAULT_TOLERANCE..=1.0 + DEFAULT_TOLERANCE).contains(&self.discord) {
            out.push(format!("tau {} ms: discord {} outside [0, 1]", self.tau_ms, self.discord));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::{tensor, ComplexMatrix};
    use crate::spin_states::qubit_hamiltonian;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const J: f64 = 215.1;

    fn h1k() -> QubitHamiltonian {
        qubit_hamiltonian(1000.0).unwrap()
    }

    fn bell() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        let z = Complex64::new(0.0, 0.0);
        DensityMatrix::pure(&[Complex64::new(s, 0.0), z, z, Complex64::new(s, 0.0)]).unwrap()
    }

    fn run(scenario: Scenario) -> Vec<ThermoRecord> {
        let h = h1k();
        let (ba, bb) = scenario.betas(&h).unwrap();
        ledger(&scenario.initial_state(&h).unwrap(), ba, bb, &tau_grid(22, 2.32), J, &h).unwrap()
    }

    #[test]
    fn internal_energy_values() {
        let h = h1k();
        let ground = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        assert_eq!(internal_energy(&ground, &h).unwrap(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(internal_energy(&mixed, &h).unwrap(), h.gap() / 2.0, epsilon = 1e-15);
        let p = DensityMatrix::from_populations(&[0.72, 0.28]).unwrap();
        assert_abs_diff_eq!(internal_energy(&p, &h).unwrap(), 1.158, epsilon = 1e-3);
        assert!(internal_energy(&DensityMatrix::maximally_mixed(4), &h).is_err());
    }

    #[test]
    fn entropy_values() {
        let pure = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        assert_abs_diff_eq!(von_neumann_entropy(&DensityMatrix::maximally_mixed(2)), 2f64.ln(), epsilon = 1e-15);
        let d = DensityMatrix::from_populations(&[0.71, 0.29]).unwrap();
        let expected = -(0.71f64 * 0.71f64.ln() + 0.29 * 0.29f64.ln());
        assert_abs_diff_eq!(von_neumann_entropy(&d), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, 0.60215, epsilon = 1e-5);
    }

    #[test]
    fn mutual_information_values() {
        let a = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::from_populations(&[0.2, 0.8]).unwrap();
        let prod = DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap();
        assert_abs_diff_eq!(mutual_information(&prod).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(mutual_information(&bell()).unwrap(), 2.0 * 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn relative_entropy_values() {
        let rho = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        assert_abs_diff_eq!(relative_entropy(&rho, &rho).unwrap(), 0.0, epsilon = 1e-15);
        let z0 = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(relative_entropy(&z0, &mixed).unwrap(), 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn relative_entropy_support_violation() {
        let z0 = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        match relative_entropy(&mixed, &z0) {
            Err(Error::SupportViolation { index, weight, .. }) => {
                assert_eq!(index, 1);
                assert_abs_diff_eq!(weight, 0.5, epsilon = 1e-15);
            }
            other => panic!("expected support violation, got {other:?}"),
        }
    }

    #[test]
    fn relative_entropy_to_gibbs_state() {
        // S(ρ‖ρ_th) = −S(ρ) + β Tr(ρH) + ln Z.
        let h = h1k();
        let beta = 1.0 / 4.3;
        let gibbs = thermal_state(&ThermalSpec::InverseTemperature(4.3), &h).unwrap();
        let z = 1.0 + (-beta * h.gap()).exp();
        let rho = DensityMatrix::from_populations(&[0.6, 0.4]).unwrap();
        let direct = -von_neumann_entropy(&rho) + beta * internal_energy(&rho, &h).unwrap() + z.ln();
        assert_abs_diff_eq!(relative_entropy(&rho, &gibbs).unwrap(), direct, epsilon = 1e-10);
    }

    #[test]
    fn discord_values() {
        let a = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        let b = DensityMatrix::from_populations(&[0.2, 0.8]).unwrap();
        let prod = DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap();
        assert_abs_diff_eq!(geometric_discord(&prod).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(geometric_discord(&bell()).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn discord_of_correlated_preparation() {
        let rho = Scenario::CorrelatedPhiPi.initial_state(&h1k()).unwrap();
        // Λ = diag(0.0361, 0.0361, 0.0615): 2(0.0361 + 0.0361) = 0.1444.
        assert_abs_diff_eq!(geometric_discord(&rho).unwrap(), 0.1444, epsilon = 1e-12);
        let form = bloch_decompose(&rho).unwrap();
        assert_abs_diff_eq!(form.v[0][0], -0.38, epsilon = 1e-15);
        assert_abs_diff_eq!(form.v[1][1], -0.38, epsilon = 1e-15);
        assert_abs_diff_eq!(form.v[2][2], (1.0 - 2.0 * 0.28) * (1.0 - 2.0 * 0.24), epsilon = 1e-15);
    }

    #[test]
    fn discord_invariant_under_local_z_rotations() {
        let rho = Scenario::CorrelatedPhiPi.initial_state(&h1k()).unwrap();
        let d0 = geometric_discord(&rho).unwrap();
        for phi in [0.3, 1.1, 2.9] {
            let rz = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
                (0, 0) => Complex64::new(1.0, 0.0),
                (1, 1) => Complex64::from_polar(1.0, phi),
                _ => Complex64::new(0.0, 0.0),
            });
            let id = ComplexMatrix::identity(2);
            for u in [tensor(&rz, &id), tensor(&id, &rz)] {
                assert_abs_diff_eq!(geometric_discord(&rho.evolve_unitary(&u)).unwrap(), d0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn scenario_names_round_trip() {
        for sc in Scenario::ALL {
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert!("hot".parse::<Scenario>().is_err());
    }

    #[test]
    fn ledger_rejects_wrong_beta_order() {
        let h = h1k();
        let rho = Scenario::Uncorrelated.initial_state(&h).unwrap();
        let (ba, bb) = Scenario::Uncorrelated.betas(&h).unwrap();
        assert!(ledger(&rho, bb, ba, &[0.0], J, &h).is_err());
    }

    #[test]
    fn ledger_identity_for_all_presets() {
        for sc in Scenario::ALL {
            let rows = run(sc);
            assert_eq!(rows.len(), 22);
            assert!(rows[0].delta_mi.abs() < 1e-14);
            for r in &rows {
                assert!(r.eq5_residual.abs() < 1e-9, "{sc}: {r:?}");
                assert!(r.invariant_violations().is_empty(), "{sc}: {:?}", r.invariant_violations());
            }
        }
    }

    #[test]
    fn uncorrelated_second_law_and_monotone_heat() {
        let rows = run(Scenario::Uncorrelated);
        for w in rows.windows(2) {
            assert!(w[1].q_b >= w[0].q_b - 1e-15);
        }
        for r in &rows {
            assert!(r.eq5_lhs >= -1e-12);
            assert!(r.delta_mi >= -1e-12);
        }
    }

    #[test]
    fn correlated_reversal_and_crossing() {
        let rows = run(Scenario::CorrelatedPhiPi);
        for r in rows.iter().filter(|r| r.tau_ms > 0.0 && r.tau_ms < 2.1) {
            assert!(r.eq5_lhs < 0.0, "{r:?}");
            assert!(r.q_a > 0.0);
        }
        assert!(rows.last().unwrap().q_a < 0.0);
    }

    #[test]
    fn correlated_mutual_information_dips_and_recovers() {
        let rows = run(Scenario::CorrelatedPhiPi);
        let (imin, _) = rows
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.mutual_info.total_cmp(&b.1.mutual_info))
            .unwrap();
        assert!((rows[imin].tau_ms - 1.05).abs() < 0.11);
        assert!(rows[0].mutual_info > 0.0);
        let near_2_1 = rows.iter().min_by(|a, b| (a.tau_ms - 2.1).abs().total_cmp(&(b.tau_ms - 2.1).abs())).unwrap();
        assert!((near_2_1.mutual_info - rows[0].mutual_info).abs() < 0.02);
    }

    #[test]
    fn grid_is_inclusive() {
        let g = tau_grid(22, 2.32);
        assert_eq!(g.len(), 22);
        assert_eq!(g[0], 0.0);
        assert_abs_diff_eq!(g[21], 2.32, epsilon = 1e-15);
        assert_abs_diff_eq!(g[1], 0.110476, epsilon = 1e-6);
    }

    proptest! {
        #[test]
        fn ledger_identity_holds_for_arbitrary_admissible_states(
            pa in 0.2f64..0.45, db in 0.01f64..0.15, frac in 0.0f64..1.0, phase in -3.2f64..3.2, tau in 0.0f64..2.32
        ) {
            let h = h1k();
            let pb = pa - db;
            let bound = crate::spin_states::population_alpha_bound(pa, pb);
            let rho_a = thermal_state(&ThermalSpec::ExcitedPopulation(pa), &h).unwrap();
            let rho_b = thermal_state(&ThermalSpec::ExcitedPopulation(pb), &h).unwrap();
            let rho = correlated_initial_state(&rho_a, &rho_b, Complex64::from_polar(frac * bound * 0.999, phase)).unwrap();
            let ba = population_to_beta(pa, h.gap()).unwrap();
            let bb = population_to_beta(pb, h.gap()).unwrap();
            let rows = ledger(&rho, ba, bb, &[tau], J, &h).unwrap();
            prop_assert!(rows[0].eq5_residual.abs() < 1e-9);
            prop_assert!(rows[0].clausius_slack >= -1e-10);
        }
    }
}
