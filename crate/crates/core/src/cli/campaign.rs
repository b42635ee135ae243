//! Collision-model runs: one or more seeds, optionally paired with α = 0.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode, OutputFormat};
use super::emit;
use crate::collision::{
    detect_crossings, run_gossip_with_snapshots, CollisionConfig, CollisionTrace, CrossingEvent, STATE_DRIFT_BUDGET,
};
use crate::error::{Error, Result};
use crate::qops::ComplexMatrix;

/// Allowed drift of Σ_i E_i over a run, in peV.
pub const ENERGY_DRIFT_BUDGET_PEV: f64 = 1e-9;

/// Energies in peV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub alpha: f64,
    pub crossings: usize,
    pub e_hot_init: f64,
    pub e_cold_init: f64,
    pub e_mean: f64,
    pub final_smoothed: f64,
    pub max_energy_drift: f64,
    pub final_trace: f64,
    pub final_min_eigenvalue: f64,
    pub renormalized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub correlated: RunSummary,
    pub uncorrelated: Option<RunSummary>,
    /// Correlated run crosses the band while the paired α = 0 run does not.
    pub reversal_contrast: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub seeds: usize,
    /// Seeds whose (correlated) run recorded at least one crossing.
    pub seeds_with_crossings: usize,
    /// Seeds showing the correlated/uncorrelated contrast (paired runs only).
    pub seeds_with_contrast: Option<usize>,
    pub violations: Vec<String>,
    pub checks_passed: bool,
}

/// A finished run with everything needed for output.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub trace: CollisionTrace,
    pub crossings: Vec<CrossingEvent>,
    pub snapshots: Vec<(usize, ComplexMatrix)>,
}

#[derive(Clone, Debug)]
pub struct SeedOutput {
    pub seed: u64,
    pub correlated: RunOutput,
    pub uncorrelated: Option<RunOutput>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: ExperimentConfig,
    pub summary: CampaignSummary,
    pub runs: Vec<SeedSummary>,
}

fn run_one(cfg: &CollisionConfig, snapshots: &[usize]) -> Result<RunOutput> {
    let (trace, snapshots) = run_gossip_with_snapshots(cfg, snapshots)?;
    let crossings = detect_crossings(&trace, false);
    Ok(RunOutput {
        trace,
        crossings,
        snapshots,
    })
}

fn run_summary(alpha: f64, run: &RunOutput) -> RunSummary {
    let t = &run.trace;
    RunSummary {
        alpha,
        crossings: run.crossings.len(),
        e_hot_init: t.e_hot_init,
        e_cold_init: t.e_cold_init,
        e_mean: t.mean_energy(),
        final_smoothed: *t.smoothed_system_energy().last().expect("trace has an initial record"),
        max_energy_drift: t.max_energy_drift,
        final_trace: t.final_trace,
        final_min_eigenvalue: t.final_min_eigenvalue,
        renormalized: t.renormalized,
    }
}

fn run_violations(seed: u64, label: &str, r: &RunSummary) -> Vec<String> {
    let mut out = Vec::new();
    if r.max_energy_drift >= ENERGY_DRIFT_BUDGET_PEV {
        out.push(format!("seed {seed} {label}: energy drift {:.3e} peV", r.max_energy_drift));
    }
    if (r.final_trace - 1.0).abs() > STATE_DRIFT_BUDGET || r.final_min_eigenvalue < -STATE_DRIFT_BUDGET {
        out.push(format!(
            "seed {seed} {label}: final state drifted (trace {}, min eigenvalue {:.3e})",
            r.final_trace, r.final_min_eigenvalue
        ));
    }
    out
}

/// Runs every seed (fanned out on the current rayon pool) without writing.
pub fn compute_campaign(cfg: &ExperimentConfig) -> Result<(CampaignReport, Vec<SeedOutput>)> {
    if cfg.mode != Mode::Collision {
        return Err(Error::InvalidParameter("run_collision needs mode collision".into()));
    }
    cfg.validate()?;
    let paired = cfg.collision.paired;
    let outputs = cfg
        .seeds()
        .into_par_iter()
        .map(|seed| {
            let base = cfg.collision_config(seed);
            let correlated = run_one(&base, &cfg.dump_density)?;
            let uncorrelated = if paired {
                Some(run_one(&CollisionConfig { alpha: 0.0, ..base }, &cfg.dump_density)?)
            } else {
                None
            };
            Ok(SeedOutput {
                seed,
                correlated,
                uncorrelated,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let runs: Vec<SeedSummary> = outputs
        .iter()
        .map(|o| {
            let correlated = run_summary(cfg.collision.alpha, &o.correlated);
            let uncorrelated = o.uncorrelated.as_ref().map(|u| run_summary(0.0, u));
            violations.extend(run_violations(o.seed, "correlated", &correlated));
            if let Some(u) = &uncorrelated {
                violations.extend(run_violations(o.seed, "uncorrelated", u));
            }
            SeedSummary {
                seed: o.seed,
                reversal_contrast: uncorrelated
                    .as_ref()
                    .map(|u| correlated.crossings > 0 && u.crossings == 0),
                correlated,
                uncorrelated,
            }
        })
        .collect();

    let summary = CampaignSummary {
        seeds: runs.len(),
        seeds_with_crossings: runs.iter().filter(|r| r.correlated.crossings > 0).count(),
        seeds_with_contrast: paired.then(|| runs.iter().filter(|r| r.reversal_contrast == Some(true)).count()),
        checks_passed: violations.is_empty(),
        violations,
    };
    let report = CampaignReport {
        config: cfg.clone(),
        summary,
        runs,
    };
    Ok((report, outputs))
}

#[derive(Serialize)]
struct JsonRun<'a> {
    seed: u64,
    alpha: f64,
    trace: &'a CollisionTrace,
    crossings: &'a [CrossingEvent],
}

fn write_run(dir: &Path, suffix: &str, run: &RunOutput, format: OutputFormat) -> Result<()> {
    if format == OutputFormat::Csv {
        emit::write_trace_csv(&dir.join(format!("trace{suffix}.csv")), &run.trace)?;
        emit::write_crossings_csv(&dir.join(format!("crossings{suffix}.csv")), &run.crossings)?;
    }
    for (step, rho) in &run.snapshots {
        emit::write_density_csv(&dir.join(format!("density{suffix}_step{step}.csv")), rho)?;
    }
    Ok(())
}

/// Runs the campaign and writes, per seed, `trace*.csv` and `crossings*.csv`
/// (suffixed `_correlated` / `_uncorrelated` for paired runs, inside
/// `seed_<n>/` when there are several seeds) plus a top-level `run.json`.
/// With JSON format the traces go into `run.json` instead.
pub fn run_collision(cfg: &ExperimentConfig) -> Result<CampaignReport> {
    let (report, outputs) = compute_campaign(cfg)?;
    let out = &cfg.output_dir;
    std::fs::create_dir_all(out)?;
    let many = outputs.len() > 1;
    let mut json_runs = Vec::new();
    for o in &outputs {
        let dir = if many { out.join(format!("seed_{}", o.seed)) } else { out.clone() };
        std::fs::create_dir_all(&dir)?;
        match &o.uncorrelated {
            Some(u) => {
                write_run(&dir, "_correlated", &o.correlated, cfg.format)?;
                write_run(&dir, "_uncorrelated", u, cfg.format)?;
            }
            None => write_run(&dir, "", &o.correlated, cfg.format)?,
        }
        json_runs.push(JsonRun {
            seed: o.seed,
            alpha: cfg.collision.alpha,
            trace: &o.correlated.trace,
            crossings: &o.correlated.crossings,
        });
        if let Some(u) = &o.uncorrelated {
            json_runs.push(JsonRun {
                seed: o.seed,
                alpha: 0.0,
                trace: &u.trace,
                crossings: &u.crossings,
            });
        }
    }

    #[derive(Serialize)]
    struct Full<'a> {
        #[serde(flatten)]
        report: &'a CampaignReport,
        traces: Vec<JsonRun<'a>>,
    }
    match cfg.format {
        OutputFormat::Csv => emit::write_json(&out.join("run.json"), &report)?,
        OutputFormat::Json => emit::write_json(
            &out.join("run.json"),
            &Full {
                report: &report,
                traces: json_runs,
            },
        )?,
    }
    Ok(report)
}
