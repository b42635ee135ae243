//! Single-qubit Hamiltonians, Gibbs states, and the correlated two-qubit
//! initial state ρ = ρ_A ⊗ ρ_B + α|01⟩⟨10| + α*|10⟩⟨01|.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qops::{tensor, ComplexMatrix, DensityMatrix, DEFAULT_TOLERANCE};

/// Planck constant (CODATA 2018) in peV·s.
pub const PLANCK_PEV_S: f64 = 4.135667696e-3;

/// Reduced Planck constant in peV·s.
pub const HBAR_PEV_S: f64 = PLANCK_PEV_S / (2.0 * std::f64::consts::PI);

/// Slack allowed when checking |α| against the positivity bound.
pub const ALPHA_BOUND_SLACK: f64 = 1e-12;

/// H = hν₀(1 − σz)/2 = diag(0, hν₀).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitHamiltonian {
    nu0_hz: f64,
    gap_pev: f64,
}

impl QubitHamiltonian {
    pub fn nu0_hz(&self) -> f64 {
        self.nu0_hz
    }

    /// Level splitting hν₀ in peV.
    pub fn gap(&self) -> f64 {
        self.gap_pev
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[0.0, self.gap_pev])
    }
}

pub fn qubit_hamiltonian(nu0_hz: f64) -> Result<QubitHamiltonian> {
    if !(nu0_hz >= 0.0) || !nu0_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "qubit frequency must be finite and non-negative, got {nu0_hz} Hz"
        )));
    }
    Ok(QubitHamiltonian {
        nu0_hz,
        gap_pev: PLANCK_PEV_S * nu0_hz,
    })
}

/// A qubit Gibbs state, given either by its temperature or by its excited
/// population. The other parameterization is derived from the level gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThermalSpec {
    /// β⁻¹ = k_B T in peV. Zero is the ground state, infinity the maximally mixed state.
    InverseTemperature(f64),
    /// p₁ ∈ [0, 0.5).
    ExcitedPopulation(f64),
}

impl ThermalSpec {
    pub fn inverse_temperature(pev: f64) -> Result<Self> {
        let spec = ThermalSpec::InverseTemperature(pev);
        spec.validate()?;
        Ok(spec)
    }

    pub fn excited_population(p1: f64) -> Result<Self> {
        let spec = ThermalSpec::ExcitedPopulation(p1);
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ThermalSpec::InverseTemperature(t) if t >= 0.0 => Ok(()),
            ThermalSpec::InverseTemperature(t) => Err(Error::InvalidParameter(format!(
                "inverse temperature must be non-negative, got {t} peV"
            ))),
            ThermalSpec::ExcitedPopulation(p) if (0.0..0.5).contains(&p) => Ok(()),
            ThermalSpec::ExcitedPopulation(p) => Err(Error::InvalidParameter(format!(
                "excited population must lie in [0, 0.5), got {p}"
            ))),
        }
    }

    /// p₁ = e^{−β·gap} / (1 + e^{−β·gap}).
    pub fn excited_population_for(&self, gap: f64) -> f64 {
        match *self {
            ThermalSpec::ExcitedPopulation(p) => p,
            ThermalSpec::InverseTemperature(_) if gap == 0.0 => 0.5,
            ThermalSpec::InverseTemperature(t) => 1.0 / (1.0 + (gap / t).exp()),
        }
    }

    /// β in peV⁻¹.
    pub fn beta_for(&self, gap: f64) -> f64 {
        match *self {
            ThermalSpec::InverseTemperature(t) => 1.0 / t,
            ThermalSpec::ExcitedPopulation(p) => {
                population_to_beta(p, gap).expect("validated excited population")
            }
        }
    }

    /// β⁻¹ in peV.
    pub fn inverse_temperature_for(&self, gap: f64) -> f64 {
        match *self {
            ThermalSpec::InverseTemperature(t) => t,
            ThermalSpec::ExcitedPopulation(_) => 1.0 / self.beta_for(gap),
        }
    }
}

/// exp(−βH)/Z as a diagonal 2×2 state.
pub fn thermal_state(spec: &ThermalSpec, h: &QubitHamiltonian) -> Result<DensityMatrix> {
    spec.validate()?;
    let p1 = spec.excited_population_for(h.gap());
    DensityMatrix::from_populations(&[1.0 - p1, p1])
}

/// Inverts the Gibbs relation: β = ln((1 − p₁)/p₁) / gap, in peV⁻¹.
pub fn population_to_beta(p1: f64, gap: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&p1) {
        return Err(Error::InvalidParameter(format!(
            "excited population must lie in [0, 0.5), got {p1}; negative temperatures are not supported"
        )));
    }
    if !(gap > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "level gap must be positive to define a temperature, got {gap} peV"
        )));
    }
    if p1 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(((1.0 - p1) / p1).ln() / gap)
}

/// Largest |α| keeping the correlated state positive:
/// e^{−gap(β_A+β_B)/2}/(Z_A Z_B) = √(p_A0 p_A1 p_B0 p_B1).
pub fn alpha_bound(spec_a: &ThermalSpec, spec_b: &ThermalSpec, gap: f64) -> f64 {
    let pa = spec_a.excited_population_for(gap);
    let pb = spec_b.excited_population_for(gap);
    population_alpha_bound(pa, pb)
}

pub(crate) fn population_alpha_bound(pa1: f64, pb1: f64) -> f64 {
    ((1.0 - pa1) * pa1 * (1.0 - pb1) * pb1).sqrt()
}

/// Complex correlation amplitude α = |α| e^{iφ}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSpec {
    pub alpha: Complex64,
}

impl CorrelationSpec {
    pub fn new(alpha: Complex64) -> Self {
        Self { alpha }
    }

    pub fn from_polar(magnitude: f64, phase: f64) -> Self {
        Self {
            alpha: Complex64::from_polar(magnitude, phase),
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.alpha.norm()
    }

    pub fn phase(&self) -> f64 {
        self.alpha.arg()
    }

    pub fn check_bound(&self, bound: f64) -> Result<()> {
        let magnitude = self.magnitude();
        if magnitude > bound + ALPHA_BOUND_SLACK {
            return Err(Error::AlphaOutOfBounds { magnitude, bound });
        }
        Ok(())
    }
}

/// χ = α|01⟩⟨10| + α*|10⟩⟨01| on two qubits.
pub fn correlation_term(alpha: Complex64) -> ComplexMatrix {
    let mut chi = ComplexMatrix::zeros(4);
    chi[(1, 2)] = alpha;
    chi[(2, 1)] = alpha.conj();
    chi
}

fn diagonal_qubit_population(rho: &DensityMatrix, label: &str) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "{label} must be a single-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let off = rho.matrix()[(0, 1)].norm();
    if off > DEFAULT_TOLERANCE {
        return Err(Error::InvalidState(format!(
            "{label} must be diagonal in the energy basis (|ρ01| = {off:.3e})"
        )));
    }
    Ok(rho.matrix()[(1, 1)].re)
}

/// ρ_A ⊗ ρ_B + α|01⟩⟨10| + α*|10⟩⟨01|.
pub fn correlated_initial_state(
    rho_a: &DensityMatrix,
    rho_b: &DensityMatrix,
    alpha: Complex64,
) -> Result<DensityMatrix> {
    let pa1 = diagonal_qubit_population(rho_a, "rho_A")?;
    let pb1 = diagonal_qubit_population(rho_b, "rho_B")?;
    CorrelationSpec::new(alpha).check_bound(population_alpha_bound(pa1, pb1))?;
    let product = tensor(rho_a.matrix(), rho_b.matrix());
    DensityMatrix::new(&product + &correlation_term(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qops::{herm_eigenvalues, partial_trace};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const GAP_1KHZ: f64 = 4.135667696;

    fn h1k() -> QubitHamiltonian {
        qubit_hamiltonian(1000.0).unwrap()
    }

    fn qubit(p1: f64) -> DensityMatrix {
        thermal_state(&ThermalSpec::ExcitedPopulation(p1), &h1k()).unwrap()
    }

    #[test]
    fn one_kilohertz_gap() {
        let h = h1k();
        assert_abs_diff_eq!(h.gap(), GAP_1KHZ, epsilon = 1e-12);
        let excited = DensityMatrix::from_populations(&[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(excited.matrix().expectation(&h.matrix()), h.gap(), epsilon = 1e-15);
    }

    #[test]
    fn zero_frequency_is_zero_operator() {
        let h = qubit_hamiltonian(0.0).unwrap();
        assert_eq!(h.matrix(), ComplexMatrix::zeros(2));
        assert!(qubit_hamiltonian(-1.0).is_err());
    }

    #[test]
    fn gibbs_population_for_table_temperature() {
        let rho = thermal_state(&ThermalSpec::InverseTemperature(4.70), &h1k()).unwrap();
        // 1 / (1 + exp(4.135667696 / 4.70))
        assert_abs_diff_eq!(rho.populations()[1], 0.293_192_430_5, epsilon = 1e-9);
        assert!((rho.populations()[1] - 0.29).abs() < 0.01);
    }

    #[test]
    fn temperature_limits() {
        let cold = thermal_state(&ThermalSpec::InverseTemperature(0.0), &h1k()).unwrap();
        assert_eq!(cold.populations(), vec![1.0, 0.0]);
        let hot = thermal_state(&ThermalSpec::InverseTemperature(f64::INFINITY), &h1k()).unwrap();
        assert_eq!(hot.populations(), vec![0.5, 0.5]);
    }

    #[test]
    fn table_populations_to_temperature() {
        let t1 = 1.0 / population_to_beta(0.22, GAP_1KHZ).unwrap();
        let t2 = 1.0 / population_to_beta(0.28, GAP_1KHZ).unwrap();
        assert_abs_diff_eq!(t1, 3.2676, epsilon = 1e-4);
        assert_abs_diff_eq!(t2, 4.3789, epsilon = 1e-4);
        assert_eq!(population_to_beta(0.0, GAP_1KHZ).unwrap(), f64::INFINITY);
        assert!(population_to_beta(0.5, GAP_1KHZ).is_err());
        assert!(population_to_beta(0.2, 0.0).is_err());
    }

    #[test]
    fn alpha_bound_values() {
        let inf = ThermalSpec::InverseTemperature(f64::INFINITY);
        assert_abs_diff_eq!(alpha_bound(&inf, &inf, GAP_1KHZ), 0.25, epsilon = 1e-15);
        let a = ThermalSpec::ExcitedPopulation(0.28);
        let b = ThermalSpec::ExcitedPopulation(0.24);
        let expected = (0.72f64 * 0.28 * 0.76 * 0.24).sqrt();
        assert_abs_diff_eq!(alpha_bound(&a, &b, GAP_1KHZ), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.1918, epsilon = 1e-4);
    }

    #[test]
    fn bound_matches_exponential_form() {
        let (ta, tb) = (4.3, 3.7);
        let (ba, bb) = (1.0 / ta, 1.0 / tb);
        let za = 1.0 + (-ba * GAP_1KHZ).exp();
        let zb = 1.0 + (-bb * GAP_1KHZ).exp();
        let direct = (-GAP_1KHZ * (ba + bb) / 2.0).exp() / (za * zb);
        let bound = alpha_bound(
            &ThermalSpec::InverseTemperature(ta),
            &ThermalSpec::InverseTemperature(tb),
            GAP_1KHZ,
        );
        assert_abs_diff_eq!(bound, direct, epsilon = 1e-15);
    }

    #[test]
    fn state_at_bound_is_singular() {
        for (pa, pb) in [(0.28, 0.24), (0.32, 0.21), (0.1, 0.45), (0.3, 0.2)] {
            let bound = population_alpha_bound(pa, pb);
            let rho = correlated_initial_state(&qubit(pa), &qubit(pb), Complex64::new(-bound, 0.0)).unwrap();
            assert!(rho.min_eigenvalue().abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_beyond_bound_rejected_with_bound() {
        let err = correlated_initial_state(&qubit(0.28), &qubit(0.24), Complex64::new(0.2, 0.0)).unwrap_err();
        match err {
            Error::AlphaOutOfBounds { magnitude, bound } => {
                assert_abs_diff_eq!(magnitude, 0.2);
                assert_abs_diff_eq!(bound, 0.19176, epsilon = 1e-5);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn zero_alpha_is_product() {
        let (a, b) = (qubit(0.29), qubit(0.22));
        let rho = correlated_initial_state(&a, &b, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(rho.matrix(), &tensor(a.matrix(), b.matrix()));
    }

    #[test]
    fn table_rows_are_valid_states() {
        for (pa, pb, alpha) in [
            (0.28, 0.24, Complex64::new(-0.19, 0.0)),
            (0.32, 0.21, Complex64::new(0.0, -0.17)),
        ] {
            let (a, b) = (qubit(pa), qubit(pb));
            let rho = correlated_initial_state(&a, &b, alpha).unwrap();
            assert!(rho.min_eigenvalue() >= -1e-10);
            assert!(partial_trace(&rho, 0, &[2, 2]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
            assert!(partial_trace(&rho, 1, &[2, 2]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
        }
    }

    #[test]
    fn rejects_non_diagonal_marginal() {
        let s = 0.5f64.sqrt();
        let plus = DensityMatrix::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap();
        assert!(correlated_initial_state(&plus, &qubit(0.2), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn positivity_frontier_on_grid() {
        for i in 0..10 {
            let pa = 0.05 + 0.04 * i as f64;
            let pb = 0.45 - 0.035 * i as f64;
            let bound = population_alpha_bound(pa, pb);
            let (a, b) = (qubit(pa), qubit(pb));
            let mut last = f64::INFINITY;
            for k in 0..=20 {
                let mag = bound * k as f64 / 20.0;
                let rho = correlated_initial_state(&a, &b, Complex64::from_polar(mag, 0.7)).unwrap();
                let min = herm_eigenvalues(rho.matrix()).unwrap()[3];
                assert!(min <= last + 1e-15);
                last = min;
            }
            assert!(last.abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_spec_polar() {
        let c = CorrelationSpec::from_polar(0.17, -std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(c.alpha.im, -0.17, epsilon = 1e-15);
        assert_abs_diff_eq!(c.magnitude(), 0.17, epsilon = 1e-15);
        assert_abs_diff_eq!(c.phase(), -std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn population_round_trip(p1 in 1e-6f64..0.4999) {
            let beta = population_to_beta(p1, GAP_1KHZ).unwrap();
            let rho = thermal_state(&ThermalSpec::InverseTemperature(1.0 / beta), &h1k()).unwrap();
            prop_assert!((rho.populations()[1] - p1).abs() < 1e-12);
        }

        #[test]
        fn local_gibbs_invariance(pa in 0.0f64..0.499, pb in 0.0f64..0.499, frac in 0.0f64..1.0, phase in -3.2f64..3.2) {
            let (a, b) = (qubit(pa), qubit(pb));
            let alpha = Complex64::from_polar(frac * population_alpha_bound(pa, pb), phase);
            let rho = correlated_initial_state(&a, &b, alpha).unwrap();
            prop_assert!(partial_trace(&rho, 0, &[2, 2]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
            prop_assert!(partial_trace(&rho, 1, &[2, 2]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
        }
    }
}
