use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coverage::{coverage_margin, localize_against_plan, plan_rect_path, Rect};
use crate::error::Result;
use crate::geom::Point2D;
use crate::localizer::LocalizationParams;

use super::{mean_std, ExperimentConfig, TrialResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedRow {
    pub width: f64,
    pub height: f64,
    pub n: usize,
    pub r: f64,
    pub k: u32,
    pub u: f64,
    pub x: f64,
    pub plan_length: f64,
    pub hexagons: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub max_error: f64,
    pub localized_fraction: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedSummary {
    pub rows: Vec<BoundedRow>,
    pub trials: Vec<Vec<TrialResult>>,
    /// Broken guarantees where they apply: safe spacing and a margin no
    /// smaller than the coverage margin.
    pub violations: Vec<String>,
}

fn scatter(area: &Rect, n: usize, seed: u64) -> Vec<Point2D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            area.origin
                + Point2D::new(
                    rng.gen::<f64>() * area.width,
                    rng.gen::<f64>() * area.height,
                )
        })
        .collect()
}

/// Plans the region once per `(r, k)` cell, scatters `n` sensors per trial
/// and localizes them from the plan's beacons. The margin defaults to `u`.
pub fn run_bounded_suite(cfg: &ExperimentConfig) -> Result<BoundedSummary> {
    cfg.validate()?;
    cfg.check_spacing()?;
    let mut rows = Vec::new();
    let mut all_trials = Vec::new();
    let mut violations = Vec::new();
    for &n in &cfg.n {
        for (r, k) in cfg.range_cells() {
            let params = LocalizationParams::with_divisor(r, k)?;
            let x = cfg.x.map_or(params.u, |m| m.resolve(r));
            let plan = plan_rect_path(&cfg.area, r, x, params.u)?;
            let guaranteed =
                params.is_safe_spacing() && x >= coverage_margin(r, params.u)? * (1.0 - 1e-12);

            let trials: Vec<TrialResult> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = cfg.trial_seed(t);
                    let outcomes =
                        localize_against_plan(&plan, &scatter(&cfg.area, n, seed), &params);
                    let errors: Vec<Option<f64>> = outcomes.iter().map(|o| o.error).collect();
                    TrialResult::from_errors(seed, &errors, plan.total_length)
                })
                .collect();

            if guaranteed {
                for t in &trials {
                    if t.localized_fraction < 1.0 || t.max_error >= 0.5 * r {
                        violations.push(format!(
                            "n={n} r={r} k={k} seed={}: localized {:.3}, max error {:.3}",
                            t.seed, t.localized_fraction, t.max_error
                        ));
                    }
                }
            }
            let means: Vec<f64> = trials.iter().map(|t| t.mean_error).collect();
            let (mean_error, std_error) = mean_std(&means);
            rows.push(BoundedRow {
                width: cfg.area.width,
                height: cfg.area.height,
                n,
                r,
                k,
                u: params.u,
                x,
                plan_length: plan.total_length,
                hexagons: plan.hexagons.len(),
                mean_error,
                std_error,
                max_error: trials.iter().map(|t| t.max_error).fold(0.0, f64::max),
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
    Ok(BoundedSummary {
        rows,
        trials: all_trials,
        violations,
    })
}
