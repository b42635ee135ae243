//! τ-grid sweep of one two-qubit preset.

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode, OutputFormat};
use super::emit;
use crate::error::{Error, Result};
use crate::exchange::evolve;
use crate::spin_states::qubit_hamiltonian;
use crate::thermo::{ledger, tau_grid, ThermoRecord, LEDGER_TOLERANCE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    /// Some grid point has Q_B (β_B − β_A) < −1e-12.
    pub reversal_detected: bool,
    /// From the last grid point before Q_A turns positive to the
    /// interpolated zero of Q_A after the positive span.
    pub reversal_window_ms: Option<(f64, f64)>,
    pub mi_minimum_ms: f64,
    pub eq5_max_residual: f64,
    pub expected_reversal: bool,
    pub violations: Vec<String>,
    pub checks_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: ExperimentConfig,
    pub summary: SweepSummary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<ThermoRecord>,
}

/// Q_A is treated as positive above this, in peV.
const HEAT_SIGN_FLOOR: f64 = 1e-12;

/// First contiguous span with Q_A > 0, widened to the grid point before it
/// and closed at the linearly interpolated zero after it.
pub fn reversal_window(records: &[ThermoRecord]) -> Option<(f64, f64)> {
    let first = records.iter().position(|r| r.q_a > HEAT_SIGN_FLOOR)?;
    let last = first + records[first..].iter().take_while(|r| r.q_a > HEAT_SIGN_FLOOR).count() - 1;
    let start = if first == 0 { records[0].tau_ms } else { records[first - 1].tau_ms };
    let end = match records.get(last + 1) {
        Some(next) => {
            let (a, b) = (&records[last], next);
            a.tau_ms + (b.tau_ms - a.tau_ms) * a.q_a / (a.q_a - b.q_a)
        }
        None => records[last].tau_ms,
    };
    Some((start, end))
}

pub fn summarize(cfg: &ExperimentConfig, records: &[ThermoRecord]) -> SweepSummary {
    let reversal_detected = records.iter().any(|r| r.eq5_lhs < -LEDGER_TOLERANCE.negativity);
    let mi_minimum_ms = records
        .iter()
        .min_by(|a, b| a.mutual_info.total_cmp(&b.mutual_info))
        .map_or(0.0, |r| r.tau_ms);
    let eq5_max_residual = records.iter().map(|r| r.eq5_residual.abs()).fold(0.0, f64::max);
    let mut violations: Vec<String> = records.iter().flat_map(|r| r.invariant_violations()).collect();
    let expected_reversal = cfg.scenario.expects_reversal();
    if reversal_detected != expected_reversal {
        violations.push(format!(
            "scenario {} expects reversal = {expected_reversal}, observed {reversal_detected}",
            cfg.scenario
        ));
    }
    SweepSummary {
        reversal_detected,
        reversal_window_ms: reversal_window(records),
        mi_minimum_ms,
        eq5_max_residual,
        expected_reversal,
        checks_passed: violations.is_empty(),
        violations,
    }
}

/// Evaluates the ledger over the grid without writing anything.
pub fn compute_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    if cfg.mode != Mode::TwoQubitSweep {
        return Err(Error::InvalidParameter("run_two_qubit_sweep needs mode two_qubit_sweep".into()));
    }
    cfg.validate()?;
    let h = qubit_hamiltonian(cfg.nu0_hz)?;
    let rho0 = cfg.scenario.initial_state(&h)?;
    let (beta_a, beta_b) = cfg.scenario.betas(&h)?;
    let grid = tau_grid(cfg.tau_grid.count, cfg.tau_grid.t_max_ms);
    let records = ledger(&rho0, beta_a, beta_b, &grid, cfg.coupling_hz, &h)?;
    Ok(SweepReport {
        summary: summarize(cfg, &records),
        config: cfg.clone(),
        records,
    })
}

/// Runs the sweep and writes `thermo.csv` + `run.json` (CSV format) or a
/// single `run.json` holding the records (JSON format) under `output_dir`.
pub fn run_two_qubit_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let mut report = compute_sweep(cfg)?;
    let out = &cfg.output_dir;
    std::fs::create_dir_all(out)?;

    if !cfg.dump_density.is_empty() {
        let h = qubit_hamiltonian(cfg.nu0_hz)?;
        let rho0 = cfg.scenario.initial_state(&h)?;
        for &idx in &cfg.dump_density {
            let tau = report.records[idx].tau_ms;
            let rho = evolve(&rho0, tau, cfg.coupling_hz)?;
            emit::write_density_csv(&out.join(format!("density_tau{idx:02}.csv")), rho.matrix())?;
        }
    }

    match cfg.format {
        OutputFormat::Csv => {
            emit::write_thermo_csv(&out.join("thermo.csv"), &report.records)?;
            let records = std::mem::take(&mut report.records);
            emit::write_json(&out.join("run.json"), &report)?;
            report.records = records;
        }
        OutputFormat::Json => emit::write_json(&out.join("run.json"), &report)?,
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::Scenario;

    fn cfg(scenario: Scenario) -> ExperimentConfig {
        ExperimentConfig {
            scenario,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn uncorrelated_preset_has_no_reversal() {
        let rep = compute_sweep(&cfg(Scenario::Uncorrelated)).unwrap();
        assert!(!rep.summary.reversal_detected);
        assert!(rep.summary.reversal_window_ms.is_none());
        assert!(rep.summary.checks_passed, "{:?}", rep.summary.violations);
        for r in &rep.records {
            assert!(r.q_a <= 1e-15 && r.q_b >= -1e-15);
        }
    }

    #[test]
    fn correlated_preset_reverses() {
        let rep = compute_sweep(&cfg(Scenario::CorrelatedPhiPi)).unwrap();
        let s = &rep.summary;
        assert!(s.reversal_detected && s.checks_passed, "{:?}", s.violations);
        let (start, end) = s.reversal_window_ms.unwrap();
        assert_eq!(start, 0.0);
        assert!((end - 2.17).abs() < 0.11, "{end}");
        assert!((s.mi_minimum_ms - 1.05).abs() <= 0.111, "{}", s.mi_minimum_ms);
    }

    #[test]
    fn half_pi_preset_has_no_reversal() {
        let rep = compute_sweep(&cfg(Scenario::CorrelatedPhiHalfPi)).unwrap();
        assert!(!rep.summary.reversal_detected);
        assert!(rep.summary.checks_passed);
    }

    #[test]
    fn window_interpolation() {
        let mk = |tau_ms: f64, q_a: f64| ThermoRecord {
            tau_ms,
            q_a,
            ..compute_sweep(&cfg(Scenario::Uncorrelated)).unwrap().records[0].clone()
        };
        let rows = [mk(0.0, 0.0), mk(1.0, 0.5), mk(2.0, 0.25), mk(3.0, -0.25)];
        assert_eq!(reversal_window(&rows), Some((0.0, 2.5)));
        let open = [mk(0.0, 0.1), mk(1.0, 0.2)];
        assert_eq!(reversal_window(&open), Some((0.0, 1.0)));
    }

    #[test]
    fn wrong_mode_is_rejected() {
        let c = ExperimentConfig {
            mode: Mode::Collision,
            ..ExperimentConfig::default()
        };
        assert!(compute_sweep(&c).is_err());
    }

    #[test]
    fn writes_csv_and_echo() {
        let dir = tempfile::tempdir().unwrap();
        let c = ExperimentConfig {
            output_dir: dir.path().to_path_buf(),
            dump_density: vec![0, 21],
            ..ExperimentConfig::default()
        };
        run_two_qubit_sweep(&c).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("thermo.csv")).unwrap();
        assert_eq!(csv.lines().count(), 23);
        assert!(csv.starts_with("tau_ms,E_A_peV,E_B_peV,Q_A_peV,Q_B_peV,"));
        let echo: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
        let back = ExperimentConfig::from_json_str(&echo["config"].to_string()).unwrap();
        assert_eq!(back, c);
        assert!(dir.path().join("density_tau21.csv").exists());
    }
}
