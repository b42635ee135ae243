//! Batch front end behind the `simulate` binary: configuration, sweeps,
//! collision campaigns and file output.

mod campaign;
mod config;
pub mod emit;
mod sweep;

pub use campaign::{
    compute_campaign, run_collision, CampaignReport, CampaignSummary, RunOutput, RunSummary, SeedOutput, SeedSummary,
    ENERGY_DRIFT_BUDGET_PEV,
};
pub use config::{
    load_config, CollisionSection, ExperimentConfig, Mode, OutputFormat, Overrides, TauGrid, WINDOW_SLACK_S,
};
pub use sweep::{compute_sweep, reversal_window, run_two_qubit_sweep, summarize, SweepReport, SweepSummary};

use crate::error::Result;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const EXPECTATION_FAILED: i32 = 2;
}

/// Runs whichever mode `cfg` selects and returns whether all checks passed.
pub fn run(cfg: &ExperimentConfig) -> Result<bool> {
    match cfg.mode {
        Mode::TwoQubitSweep => run_two_qubit_sweep(cfg).map(|r| r.summary.checks_passed),
        Mode::Collision => run_collision(cfg).map(|r| r.summary.checks_passed),
    }
}
