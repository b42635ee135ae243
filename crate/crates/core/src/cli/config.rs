//! Experiment configuration: a flat JSON document, every field optional.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::collision::{canonical_alpha, CollisionConfig, MAX_SITES};
use crate::error::{Error, Result};
use crate::spin_states::ThermalSpec;
use crate::thermo::Scenario;

/// Allowed overshoot of the exchange window, in seconds.
pub const WINDOW_SLACK_S: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    TwoQubitSweep,
    Collision,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TauGrid {
    pub count: usize,
    pub t_max_ms: f64,
}

impl Default for TauGrid {
    fn default() -> Self {
        Self {
            count: 22,
            t_max_ms: 2.32,
        }
    }
}

/// Collision-model parameters; `nu0_hz` and `seed` come from the top level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CollisionSection {
    pub n_bath: usize,
    pub steps: usize,
    pub lambda_sigma: f64,
    pub alpha: f64,
    pub hot: ThermalSpec,
    pub cold: ThermalSpec,
    pub smoothing_window: usize,
    /// Also run α = 0 on the same random stream.
    pub paired: bool,
    /// Number of consecutive seeds starting at the top-level seed.
    pub seeds: usize,
}

impl Default for CollisionSection {
    fn default() -> Self {
        let base = CollisionConfig::default();
        Self {
            n_bath: base.n_bath,
            steps: base.steps,
            lambda_sigma: base.lambda_sigma,
            alpha: canonical_alpha(),
            hot: base.hot,
            cold: base.cold,
            smoothing_window: base.smoothing_window,
            paired: true,
            seeds: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub scenario: Scenario,
    pub tau_grid: TauGrid,
    /// Exchange coupling J in Hz.
    #[serde(rename = "J")]
    pub coupling_hz: f64,
    pub nu0_hz: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub format: OutputFormat,
    pub allow_out_of_window: bool,
    /// Grid indices (two-qubit) or step numbers (collision) at which to write ρ.
    pub dump_density: Vec<usize>,
    pub collision: CollisionSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::TwoQubitSweep,
            scenario: Scenario::CorrelatedPhiPi,
            tau_grid: TauGrid::default(),
            coupling_hz: 215.1,
            nu0_hz: 1000.0,
            output_dir: PathBuf::from("out"),
            seed: 0,
            format: OutputFormat::Csv,
            allow_out_of_window: false,
            dump_density: Vec::new(),
            collision: CollisionSection::default(),
        }
    }
}

const TOP_KEYS: &[&str] = &[
    "mode",
    "scenario",
    "tau_grid",
    "J",
    "nu0_hz",
    "output_dir",
    "seed",
    "format",
    "allow_out_of_window",
    "dump_density",
    "collision",
];
const GRID_KEYS: &[&str] = &["count", "t_max_ms"];
const COLLISION_KEYS: &[&str] = &[
    "n_bath",
    "steps",
    "lambda_sigma",
    "alpha",
    "hot",
    "cold",
    "smoothing_window",
    "paired",
    "seeds",
];

/// Structural pass: unknown keys and type errors. Returns the parsed config
/// when the known keys deserialize, together with every problem found.
fn parse_structure(text: &str) -> (Option<ExperimentConfig>, Vec<String>) {
    let value: Value = if text.trim().is_empty() {
        Value::Object(Default::default())
    } else {
        match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return (None, vec![format!("malformed config: {e}")]),
        }
    };
    let Value::Object(mut map) = value else {
        return (None, vec!["config must be a JSON object".into()]);
    };

    let mut problems = Vec::new();
    let nested = [("tau_grid", GRID_KEYS), ("collision", COLLISION_KEYS)];
    for key in map.keys().filter(|k| !TOP_KEYS.contains(&k.as_str())) {
        problems.push(format!("unknown key '{key}'"));
    }
    map.retain(|k, _| TOP_KEYS.contains(&k.as_str()));
    for (key, allowed) in nested {
        if let Some(Value::Object(inner)) = map.get_mut(key) {
            for k in inner.keys().filter(|k| !allowed.contains(&k.as_str())) {
                problems.push(format!("unknown key '{key}.{k}'"));
            }
            // Drop them so type errors in the known keys still surface.
            inner.retain(|k, _| allowed.contains(&k.as_str()));
        }
    }
    match serde_json::from_value::<ExperimentConfig>(Value::Object(map)) {
        Ok(cfg) => (Some(cfg), problems),
        Err(e) => {
            problems.push(format!("invalid value: {e}"));
            (None, problems)
        }
    }
}

impl ExperimentConfig {
    /// Parses a JSON document, reporting every unknown key and range violation.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let (cfg, mut problems) = parse_structure(text);
        if let Some(cfg) = &cfg {
            problems.extend(cfg.violations());
        }
        match cfg {
            Some(cfg) if problems.is_empty() => Ok(cfg),
            _ => Err(Error::Config(problems)),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(vec![format!("cannot read {}: {e}", path.display())]))?;
        Self::from_json_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Exchange window 1/(2J) in milliseconds.
    pub fn window_ms(&self) -> f64 {
        500.0 / self.coupling_hz
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.coupling_hz > 0.0) || !self.coupling_hz.is_finite() {
            out.push(format!("J must be positive, got {}", self.coupling_hz));
        }
        if !(self.nu0_hz > 0.0) || !self.nu0_hz.is_finite() {
            out.push(format!("nu0_hz must be positive, got {}", self.nu0_hz));
        }
        if self.tau_grid.count < 2 {
            out.push(format!("tau_grid.count must be at least 2, got {}", self.tau_grid.count));
        }
        if !(self.tau_grid.t_max_ms > 0.0) || !self.tau_grid.t_max_ms.is_finite() {
            out.push(format!("tau_grid.t_max_ms must be positive, got {}", self.tau_grid.t_max_ms));
        } else if self.coupling_hz > 0.0
            && !self.allow_out_of_window
            && self.tau_grid.t_max_ms * 1e-3 > 1.0 / (2.0 * self.coupling_hz) + WINDOW_SLACK_S
        {
            out.push(format!(
                "tau_grid.t_max_ms = {} exceeds the exchange window 1/(2J) = {:.4} ms (pass --allow-out-of-window to override)",
                self.tau_grid.t_max_ms,
                self.window_ms()
            ));
        }
        if self.mode == Mode::TwoQubitSweep {
            if let Some(&bad) = self.dump_density.iter().find(|&&i| i >= self.tau_grid.count) {
                out.push(format!("dump_density index {bad} is outside the {}-point grid", self.tau_grid.count));
            }
        }
        let c = &self.collision;
        if c.seeds == 0 {
            out.push("collision.seeds must be positive".into());
        }
        if c.n_bath == 0 || c.n_bath + 1 > MAX_SITES {
            out.push(format!("collision.n_bath must lie in 1..={}, got {}", MAX_SITES - 1, c.n_bath));
        } else if self.nu0_hz > 0.0 {
            out.extend(
                self.collision_config(self.seed)
                    .violations()
                    .into_iter()
                    .map(|v| format!("collision: {v}")),
            );
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

    pub fn collision_config(&self, seed: u64) -> CollisionConfig {
        let c = &self.collision;
        CollisionConfig {
            n_bath: c.n_bath,
            steps: c.steps,
            lambda_sigma: c.lambda_sigma,
            alpha: c.alpha,
            hot: c.hot,
            cold: c.cold,
            nu0_hz: self.nu0_hz,
            seed,
            smoothing_window: c.smoothing_window,
        }
    }

    /// Seeds of the campaign: `seed`, `seed + 1`, ….
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.collision.seeds as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub scenario: Option<Scenario>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub allow_out_of_window: bool,
    pub dump_density: Option<Vec<usize>>,
    pub n_bath: Option<usize>,
    pub steps: Option<usize>,
    pub seeds: Option<usize>,
    pub alpha: Option<f64>,
    pub unpaired: bool,
}

/// Reads `path` (or starts from defaults), applies `overrides` and validates.
pub fn load_config(path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentConfig> {
    let (mut cfg, mut problems) = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(vec![format!("cannot read {}: {e}", p.display())]))?;
            // Range checks wait until the flags are applied.
            match parse_structure(&text) {
                (Some(cfg), problems) => (cfg, problems),
                (None, problems) => return Err(Error::Config(problems)),
            }
        }
        None => (ExperimentConfig::default(), Vec::new()),
    };
    let o = overrides;
    if let Some(m) = o.mode {
        cfg.mode = m;
    }
    if let Some(s) = o.scenario {
        cfg.scenario = s;
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(d) = &o.output_dir {
        cfg.output_dir = d.clone();
    }
    if let Some(f) = o.format {
        cfg.format = f;
    }
    cfg.allow_out_of_window |= o.allow_out_of_window;
    if let Some(d) = &o.dump_density {
        cfg.dump_density = d.clone();
    }
    if let Some(n) = o.n_bath {
        cfg.collision.n_bath = n;
    }
    if let Some(n) = o.steps {
        cfg.collision.steps = n;
    }
    if let Some(n) = o.seeds {
        cfg.collision.seeds = n;
    }
    if let Some(a) = o.alpha {
        cfg.collision.alpha = a;
    }
    if o.unpaired {
        cfg.collision.paired = false;
    }
    problems.extend(cfg.violations());
    if problems.is_empty() {
        Ok(cfg)
    } else {
        Err(Error::Config(problems))
    }
}
