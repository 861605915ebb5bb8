//! Monte Carlo harness: random networks, seeded trials and tabular output.

mod bounded;
mod compare;
mod connected;
mod network_gen;
mod output;

use serde::{Deserialize, Serialize};

use crate::coverage::Rect;
use crate::error::{invalid, Result};
use crate::localizer::SAFE_SPACING_RATIO;

pub use bounded::{run_bounded_suite, BoundedRow, BoundedSummary};
pub use compare::{
    improvement_percent, run_compare, CompareRow, CompareSummary, ImprovementRow, REFERENCE_HEXAGON,
};
pub use connected::{run_connected_suite, run_connected_trial, ConnectedRow, ConnectedSummary};
pub use network_gen::{gen_connected_network, NETWORK_REJECTION_BUDGET};
pub use output::{write_rows, OutputFormat};

/// Trials per cell when none is given.
pub const DEFAULT_TRIALS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Connected,
    Bounded,
    Compare,
    Plan,
    Verify,
}

/// Coverage margin: fixed meters or a fraction `r/k` of the range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Margin {
    Meters(f64),
    RangeOver(f64),
}

impl Margin {
    pub fn resolve(self, r: f64) -> f64 {
        match self {
            Margin::Meters(x) => x,
            Margin::RangeOver(k) => r / k,
        }
    }
}

impl std::str::FromStr for Margin {
    type Err = String;

    /// `0.5` or `r/15`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let parsed = match s.strip_prefix("r/") {
            Some(k) => k.parse().map(Margin::RangeOver),
            None => s.parse().map(Margin::Meters),
        };
        match parsed {
            Ok(m @ (Margin::Meters(v) | Margin::RangeOver(v))) if v > 0.0 && v.is_finite() => Ok(m),
            _ => Err(format!("expected a positive number or r/K, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Sensor counts; one cell per value.
    pub n: Vec<usize>,
    pub area: Rect,
    /// Communication ranges; one cell per value.
    pub r: Vec<f64>,
    /// Beacon divisors, `u = r/k`; one cell per value.
    pub k: Vec<u32>,
    /// Margin override; each mode has its own default.
    pub x: Option<Margin>,
    pub trials: usize,
    pub seed: u64,
    pub grid_step: f64,
    /// Allow `u > r/7.5`, where the `r/2` guarantee no longer holds.
    pub allow_unsafe: bool,
}

impl ExperimentConfig {
    pub fn new(mode: Mode) -> Self {
        let area = match mode {
            Mode::Connected => Rect::square(50.0),
            _ => Rect::square(200.0),
        };
        let n = match mode {
            Mode::Connected => vec![50],
            _ => vec![100],
        };
        Self {
            mode,
            n,
            area,
            r: vec![10.0],
            k: vec![10],
            x: None,
            trials: DEFAULT_TRIALS,
            seed: 0,
            grid_step: 2.0,
            allow_unsafe: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.n.is_empty() || self.r.is_empty() || self.k.is_empty() {
            return Err(invalid("n, r and k need at least one value"));
        }
        if self.n.iter().any(|&n| n == 0) {
            return Err(invalid("sensor count must be at least 1"));
        }
        if self.r.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(invalid("communication range must be positive"));
        }
        if self.k.iter().any(|&k| k < 2) {
            return Err(invalid("k must be at least 2 so that u < r"));
        }
        if !(self.grid_step > 0.0) {
            return Err(invalid("grid step must be positive"));
        }
        Ok(())
    }

    /// Cells of the `(r, k)` grid in configuration order.
    pub fn range_cells(&self) -> Vec<(f64, u32)> {
        self.r
            .iter()
            .flat_map(|&r| self.k.iter().map(move |&k| (r, k)))
            .collect()
    }

    /// Rejects `u > r/7.5` unless unsafe spacing was allowed.
    pub fn check_spacing(&self) -> Result<()> {
        if self.allow_unsafe {
            return Ok(());
        }
        match self
            .k
            .iter()
            .find(|&&k| 1.0 / k as f64 > SAFE_SPACING_RATIO)
        {
            Some(k) => Err(invalid(format!(
                "u = r/{k} exceeds r/7.5; pass --unsafe to run outside the error guarantee"
            ))),
            None => Ok(()),
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

/// Mean and sample standard deviation.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-trial outcome shared by the connected and bounded suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub per_sensor_errors: Vec<f64>,
    pub mean_error: f64,
    pub max_error: f64,
    pub path_length: f64,
    pub localized_fraction: f64,
}

impl TrialResult {
    pub(crate) fn from_errors(seed: u64, errors: &[Option<f64>], path_length: f64) -> Self {
        let per_sensor_errors: Vec<f64> = errors.iter().flatten().copied().collect();
        let (mean_error, _) = mean_std(&per_sensor_errors);
        Self {
            seed,
            max_error: per_sensor_errors.iter().copied().fold(0.0, f64::max),
            mean_error,
            localized_fraction: per_sensor_errors.len() as f64 / errors.len().max(1) as f64,
            per_sensor_errors,
            path_length,
        }
    }
}
