//! Randomized pairwise-collision ("gossip") thermalization.
//!
//! One hot system qubit (site 0) and `n_bath` cold bath qubits start in
//! local Gibbs states, with an optional correlation α(|01⟩⟨10| + |10⟩⟨01|)
//! between sites 0 and 1. Each step picks an unordered pair (j, k) uniformly
//! among all pairs and applies U_λ = exp[λ(|01⟩⟨10| − |10⟩⟨01|)] on it, with
//! λ drawn from N(0, σ).
//!
//! Basis indices are big-endian in the site label: site 0 is the most
//! significant bit.
//!
//! Random numbers come from `ChaCha8Rng::seed_from_u64(seed)`. Each step
//! draws the pair index with `random_range(0..n_pairs)` (pairs enumerated as
//! (0,1), (0,2), …, (1,2), …) and then λ from `rand_distr::Normal`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qops::{herm_eigenvalues, tensor, tensor_all, ComplexMatrix, DensityMatrix};
use crate::spin_states::{
    alpha_bound, correlated_initial_state, qubit_hamiltonian, thermal_state, QubitHamiltonian, ThermalSpec,
};

/// Largest number of sites (system + bath); keeps the state at dimension ≤ 512.
pub const MAX_SITES: usize = 9;

/// Energy excursions smaller than this are treated as rounding, not crossings.
pub const CROSSING_TOLERANCE_PEV: f64 = 1e-9;

/// Allowed drift of the trace and of the smallest eigenvalue after a run.
pub const STATE_DRIFT_BUDGET: f64 = 1e-8;

/// α = √0.0336, the positivity bound for excited populations 0.3 and 0.2.
pub fn canonical_alpha() -> f64 {
    0.0336f64.sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollisionConfig {
    /// Number of bath qubits N.
    pub n_bath: usize,
    pub steps: usize,
    /// Standard deviation of the rotation angle λ.
    pub lambda_sigma: f64,
    /// Real correlation amplitude between sites 0 and 1.
    pub alpha: f64,
    pub hot: ThermalSpec,
    pub cold: ThermalSpec,
    pub nu0_hz: f64,
    pub seed: u64,
    pub smoothing_window: usize,
}

impl Default for CollisionConfig {
    /// Eight bath qubits, 10⁴ steps, σ = π/50, hot p₁ = 0.3 (β⁻¹ ≈ 4.881 peV),
    /// cold p₁ = 0.2 (β⁻¹ ≈ 2.983 peV), no correlation.
    fn default() -> Self {
        Self {
            n_bath: 8,
            steps: 10_000,
            lambda_sigma: std::f64::consts::PI / 50.0,
            alpha: 0.0,
            hot: ThermalSpec::ExcitedPopulation(0.3),
            cold: ThermalSpec::ExcitedPopulation(0.2),
            nu0_hz: 1000.0,
            seed: 0,
            smoothing_window: 201,
        }
    }
}

impl CollisionConfig {
    pub fn canonical(n_bath: usize, correlated: bool, seed: u64) -> Self {
        Self {
            n_bath,
            seed,
            alpha: if correlated { canonical_alpha() } else { 0.0 },
            ..Self::default()
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_bath + 1
    }

    pub fn hamiltonian(&self) -> Result<QubitHamiltonian> {
        qubit_hamiltonian(self.nu0_hz)
    }

    /// Every violated constraint, or an empty list.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n_bath == 0 || self.n_sites() > MAX_SITES {
            out.push(format!("n_bath must lie in 1..={}, got {}", MAX_SITES - 1, self.n_bath));
        }
        if !(self.lambda_sigma >= 0.0) || !self.lambda_sigma.is_finite() {
            out.push(format!("lambda_sigma must be finite and non-negative, got {}", self.lambda_sigma));
        }
        if self.smoothing_window == 0 {
            out.push("smoothing_window must be positive".into());
        }
        if !(self.nu0_hz > 0.0) || !self.nu0_hz.is_finite() {
            out.push(format!("nu0_hz must be positive, got {}", self.nu0_hz));
        }
        for (label, spec) in [("hot", &self.hot), ("cold", &self.cold)] {
            if let Err(e) = spec.validate() {
                out.push(format!("{label}: {e}"));
            }
        }
        if out.is_empty() {
            let gap = crate::spin_states::PLANCK_PEV_S * self.nu0_hz;
            let bound = alpha_bound(&self.hot, &self.cold, gap);
            if !self.alpha.is_finite() || self.alpha.abs() > bound + crate::spin_states::ALPHA_BOUND_SLACK {
                out.push(format!("alpha = {} exceeds the positivity bound {bound}", self.alpha));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }
}

/// (ρ₀ ⊗ ρ₁ + χ₀₁) ⊗ ρ₂ ⊗ … ⊗ ρ_N.
pub fn build_network_state(cfg: &CollisionConfig) -> Result<DensityMatrix> {
    cfg.validate()?;
    let h = cfg.hamiltonian()?;
    let hot = thermal_state(&cfg.hot, &h)?;
    let cold = thermal_state(&cfg.cold, &h)?;
    let pair = correlated_initial_state(&hot, &cold, Complex64::new(cfg.alpha, 0.0))?;
    let rest = tensor_all(std::iter::repeat_n(cold.matrix(), cfg.n_bath - 1));
    // A tensor product of positive factors is positive, so validating the
    // 4×4 pair state is enough.
    Ok(DensityMatrix::from_trusted(tensor(pair.matrix(), &rest)))
}

#[inline]
fn site_bit(site: usize, n_sites: usize) -> usize {
    1 << (n_sites - 1 - site)
}

/// Index pairs (a, b) with site j in |0⟩, site k in |1⟩ for `a` and the
/// opposite for `b`; U_λ rotates each such plane.
fn rotation_planes(j: usize, k: usize, n_sites: usize) -> Vec<(usize, usize)> {
    let (bj, bk) = (site_bit(j, n_sites), site_bit(k, n_sites));
    (0..1usize << n_sites)
        .filter(|&a| a & bj == 0 && a & bk != 0)
        .map(|a| (a, a ^ bj ^ bk))
        .collect()
}

fn check_pair(j: usize, k: usize, n_sites: usize) -> Result<()> {
    if j == k {
        return Err(Error::InvalidParameter(format!("collision pair needs two distinct sites, got ({j}, {k})")));
    }
    if j >= n_sites || k >= n_sites || n_sites > MAX_SITES {
        return Err(Error::InvalidParameter(format!(
            "sites ({j}, {k}) out of range for {n_sites} sites (at most {MAX_SITES})"
        )));
    }
    Ok(())
}

/// Dense U_λ acting on sites (j, k) of an `n_sites`-qubit register.
pub fn pair_unitary(lambda: f64, j: usize, k: usize, n_sites: usize) -> Result<ComplexMatrix> {
    check_pair(j, k, n_sites)?;
    let (s, c) = lambda.sin_cos();
    let mut u = ComplexMatrix::identity(1 << n_sites);
    for (a, b) in rotation_planes(j, k, n_sites) {
        u[(a, a)] = Complex64::new(c, 0.0);
        u[(a, b)] = Complex64::new(s, 0.0);
        u[(b, a)] = Complex64::new(-s, 0.0);
        u[(b, b)] = Complex64::new(c, 0.0);
    }
    Ok(u)
}

/// ρ ← U_λ ρ U_λ† in place, touching only the rotated rows and columns.
pub fn apply_pair_rotation(rho: &mut ComplexMatrix, lambda: f64, j: usize, k: usize, n_sites: usize) -> Result<()> {
    check_pair(j, k, n_sites)?;
    if rho.dim() != 1 << n_sites {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for {n_sites} sites",
            rho.dim()
        )));
    }
    rotate_planes(rho, lambda, &rotation_planes(j, k, n_sites));
    Ok(())
}

fn rotate_planes(rho: &mut ComplexMatrix, lambda: f64, planes: &[(usize, usize)]) {
    let (s, c) = lambda.sin_cos();
    let n = rho.dim();
    let data = rho.as_mut_slice();
    // Rows: U ρ.
    for &(a, b) in planes {
        for col in 0..n {
            let (x, y) = (data[a * n + col], data[b * n + col]);
            data[a * n + col] = x * c + y * s;
            data[b * n + col] = y * c - x * s;
        }
    }
    // Columns: (U ρ) Uᵀ.
    for row in data.chunks_exact_mut(n) {
        for &(a, b) in planes {
            let (x, y) = (row[a], row[b]);
            row[a] = x * c + y * s;
            row[b] = y * c - x * s;
        }
    }
}

/// Mean energy of every site, gap · P(site excited).
fn site_energies(rho: &ComplexMatrix, n_sites: usize, gap: f64) -> Vec<f64> {
    let mut e = vec![0.0; n_sites];
    for idx in 0..rho.dim() {
        let p = rho[(idx, idx)].re;
        for (site, es) in e.iter_mut().enumerate() {
            if idx & site_bit(site, n_sites) != 0 {
                *es += p;
            }
        }
    }
    e.iter_mut().for_each(|x| *x *= gap);
    e
}

/// Unordered pair number `index` in the order (0,1), (0,2), …, (1,2), ….
fn pair_from_index(mut index: usize, n_sites: usize) -> (usize, usize) {
    for j in 0..n_sites {
        let row = n_sites - 1 - j;
        if index < row {
            return (j, j + 1 + index);
        }
        index -= row;
    }
    unreachable!("pair index out of range")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// Colliding sites; `None` for the initial record.
    pub pair: Option<(usize, usize)>,
    pub lambda: f64,
    pub e_system: f64,
    pub e_sites: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionTrace {
    /// Initial record followed by one record per step.
    pub records: Vec<StepRecord>,
    pub n_sites: usize,
    /// Initial energy of the hot system qubit (upper band edge).
    pub e_hot_init: f64,
    /// Initial energy of a cold bath qubit (lower band edge).
    pub e_cold_init: f64,
    /// Initial total energy Σ_i E_i.
    pub e_total: f64,
    pub smoothing_window: usize,
    /// Largest |Σ_i E_i(t) − Σ_i E_i(0)| over the run.
    pub max_energy_drift: f64,
    /// Trace of the final state, before any renormalization.
    pub final_trace: f64,
    pub final_min_eigenvalue: f64,
    /// Whether the final state had to be renormalized.
    pub renormalized: bool,
}

impl CollisionTrace {
    pub fn steps(&self) -> usize {
        self.records.len() - 1
    }

    pub fn system_energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.e_system).collect()
    }

    /// Total energy spread evenly over all sites.
    pub fn mean_energy(&self) -> f64 {
        self.e_total / self.n_sites as f64
    }

    pub fn smoothed_system_energy(&self) -> Vec<f64> {
        centered_moving_average(&self.system_energies(), self.smoothing_window)
    }
}

/// Centered moving average; the window shrinks symmetrically-truncated at the ends.
pub fn centered_moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window.max(1) / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Runs the collision model.
pub fn run_gossip(cfg: &CollisionConfig) -> Result<CollisionTrace> {
    run_gossip_with_snapshots(cfg, &[]).map(|(trace, _)| trace)
}

/// Runs the collision model and copies the full state after each step listed
/// in `snapshot_steps` (step 0 is the initial state).
pub fn run_gossip_with_snapshots(
    cfg: &CollisionConfig,
    snapshot_steps: &[usize],
) -> Result<(CollisionTrace, Vec<(usize, ComplexMatrix)>)> {
    let rho0 = build_network_state(cfg)?;
    let gap = cfg.hamiltonian()?.gap();
    let n_sites = cfg.n_sites();
    let n_pairs = n_sites * (n_sites - 1) / 2;
    let normal = Normal::new(0.0, cfg.lambda_sigma)
        .map_err(|e| Error::InvalidParameter(format!("lambda distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut rho = rho0.into_matrix();
    let mut snapshots = Vec::new();
    if snapshot_steps.contains(&0) {
        snapshots.push((0, rho.clone()));
    }

    let e0 = site_energies(&rho, n_sites, gap);
    let e_total: f64 = e0.iter().sum();
    let mut records = Vec::with_capacity(cfg.steps + 1);
    records.push(StepRecord {
        step: 0,
        pair: None,
        lambda: 0.0,
        e_system: e0[0],
        e_sites: e0.clone(),
    });

    let mut max_energy_drift = 0.0_f64;
    for step in 1..=cfg.steps {
        let (j, k) = pair_from_index(rng.random_range(0..n_pairs), n_sites);
        let lambda = normal.sample(&mut rng);
        rotate_planes(&mut rho, lambda, &rotation_planes(j, k, n_sites));

        let e = site_energies(&rho, n_sites, gap);
        max_energy_drift = max_energy_drift.max((e.iter().sum::<f64>() - e_total).abs());
        records.push(StepRecord {
            step,
            pair: Some((j, k)),
            lambda,
            e_system: e[0],
            e_sites: e,
        });
        if snapshot_steps.contains(&step) {
            snapshots.push((step, rho.clone()));
        }
    }

    let final_trace = rho.trace().re;
    let final_min_eigenvalue = herm_eigenvalues(&rho)?.last().copied().unwrap_or(0.0);
    let mut renormalized = false;
    if (final_trace - 1.0).abs() > STATE_DRIFT_BUDGET {
        log::warn!("trace drifted to {final_trace}; renormalizing final state");
        renormalized = true;
    }
    if final_min_eigenvalue < -STATE_DRIFT_BUDGET {
        log::warn!("final state has eigenvalue {final_min_eigenvalue:.3e} below the drift budget");
    }

    let trace = CollisionTrace {
        records,
        n_sites,
        e_hot_init: e0[0],
        e_cold_init: e0[1],
        e_total,
        smoothing_window: cfg.smoothing_window,
        max_energy_drift,
        final_trace,
        final_min_eigenvalue,
        renormalized,
    };
    Ok((trace, snapshots))
}

/// Correlated and uncorrelated runs driven by one random stream.
#[derive(Clone, Debug)]
pub struct PairedRun {
    pub correlated: CollisionTrace,
    pub uncorrelated: CollisionTrace,
}

pub fn run_paired(cfg: &CollisionConfig) -> Result<PairedRun> {
    let plain = CollisionConfig {
        alpha: 0.0,
        ..cfg.clone()
    };
    let (correlated, uncorrelated) = rayon::join(|| run_gossip(cfg), || run_gossip(&plain));
    Ok(PairedRun {
        correlated: correlated?,
        uncorrelated: uncorrelated?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingDirection {
    AboveHot,
    BelowCold,
}

impl CrossingDirection {
    pub fn as_str(&self) -> &'static str {
        match self {
            CrossingDirection::AboveHot => "above_hot",
            CrossingDirection::BelowCold => "below_cold",
        }
    }
}

/// First step of an excursion of the system energy outside [E_cold, E_hot].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub step: usize,
    pub direction: CrossingDirection,
    /// Distance outside the band at that step, in peV.
    pub margin: f64,
}

/// Excursions of the raw (or smoothed) system energy beyond the initial band
/// by more than [`CROSSING_TOLERANCE_PEV`]. One event per excursion.
pub fn detect_crossings(trace: &CollisionTrace, use_smoothed: bool) -> Vec<CrossingEvent> {
    let series = if use_smoothed {
        trace.smoothed_system_energy()
    } else {
        trace.system_energies()
    };
    let (lo, hi) = (trace.e_cold_init, trace.e_hot_init);
    let mut events = Vec::new();
    let mut current: Option<CrossingDirection> = None;
    for (rec, &e) in trace.records.iter().zip(&series) {
        let state = if e - hi > CROSSING_TOLERANCE_PEV {
            Some((CrossingDirection::AboveHot, e - hi))
        } else if lo - e > CROSSING_TOLERANCE_PEV {
            Some((CrossingDirection::BelowCold, lo - e))
        } else {
            None
        };
        match state {
            Some((direction, margin)) if current != Some(direction) => {
                events.push(CrossingEvent {
                    step: rec.step,
                    direction,
                    margin,
                });
                current = Some(direction);
            }
            Some(_) => {}
            None => current = None,
        }
    }
    events
}
