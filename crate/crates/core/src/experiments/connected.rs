use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::localizer::LocalizationParams;
use crate::protocol::{run_localization, LocalizationResult};

use super::{gen_connected_network, mean_std, ExperimentConfig, TrialResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectedRow {
    pub n: usize,
    pub r: f64,
    pub k: u32,
    pub u: f64,
    pub mean_error: f64,
    pub std_error: f64,
    pub max_error: f64,
    pub mean_path: f64,
    pub localized_fraction: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectedSummary {
    pub rows: Vec<ConnectedRow>,
    /// Trials grouped by cell, in cell order then seed order.
    pub trials: Vec<Vec<TrialResult>>,
    /// Broken guarantees: unlocalized sensors, or errors of `r/2` or more
    /// with safe spacing.
    pub violations: Vec<String>,
}

/// One seeded network and localization run; the anchor starts at the
/// lower-left corner of the area.
pub fn run_connected_trial(
    cfg: &ExperimentConfig,
    n: usize,
    params: &LocalizationParams,
    seed: u64,
) -> Result<LocalizationResult> {
    let net = gen_connected_network(n, &cfg.area, params.r, seed)?;
    run_localization(&net, params, cfg.area.origin, seed)
}

pub fn run_connected_suite(cfg: &ExperimentConfig) -> Result<ConnectedSummary> {
    cfg.validate()?;
    cfg.check_spacing()?;
    let mut rows = Vec::new();
    let mut all_trials = Vec::new();
    let mut violations = Vec::new();
    for &n in &cfg.n {
        for (r, k) in cfg.range_cells() {
            let params = LocalizationParams::with_divisor(r, k)?;
            let trials: Vec<TrialResult> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = cfg.trial_seed(t);
                    let res = run_connected_trial(cfg, n, &params, seed)?;
                    Ok(TrialResult::from_errors(
                        seed,
                        &res.errors,
                        res.total_path_length,
                    ))
                })
                .collect::<Result<_>>()?;

            for t in &trials {
                if t.localized_fraction < 1.0 {
                    violations.push(format!(
                        "n={n} r={r} k={k} seed={}: {:.3} of sensors localized",
                        t.seed, t.localized_fraction
                    ));
                }
                if params.is_safe_spacing() && t.max_error >= 0.5 * r {
                    violations.push(format!(
                        "n={n} r={r} k={k} seed={}: error {:.3} reaches r/2",
                        t.seed, t.max_error
                    ));
                }
            }
            let means: Vec<f64> = trials.iter().map(|t| t.mean_error).collect();
            let paths: Vec<f64> = trials.iter().map(|t| t.path_length).collect();
            let (mean_error, std_error) = mean_std(&means);
            rows.push(ConnectedRow {
                n,
                r,
                k,
                u: params.u,
                mean_error,
                std_error,
                max_error: trials.iter().map(|t| t.max_error).fold(0.0, f64::max),
                mean_path: mean_std(&paths).0,
                localized_fraction: mean_std(
                    &trials
                        .iter()
                        .map(|t| t.localized_fraction)
                        .collect::<Vec<_>>(),
                )
                .0,
                trials: trials.len(),
            });
            all_trials.push(trials);
        }
    }
    Ok(ConnectedSummary {
        rows,
        trials: all_trials,
        violations,
    })
}
