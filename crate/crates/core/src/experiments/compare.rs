use serde::{Deserialize, Serialize};

use crate::comparators::{Scheme, SchemeParams};
use crate::coverage::{d_hexagon_formula, plan_rect_path, Rect};
use crate::error::{invalid, Result};

use super::ExperimentConfig;

/// Margins `r/k` compared.
pub const COMPARE_DIVISORS: [u32; 3] = [10, 15, 20];

/// Reference measured hexagon lengths for `L = 200`, `r = 10`, per divisor.
pub const REFERENCE_HEXAGON: [(u32, f64); 3] = [(10, 4987.0), (15, 4292.0), (20, 4271.0)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub l: f64,
    pub r: f64,
    pub k: u32,
    pub x: f64,
    pub hexagon_formula: f64,
    pub hexagon_planned: f64,
    /// Reference measurement, only for `L = 200`, `r = 10`.
    pub hexagon_reference: Option<f64>,
    pub chia_ho_ou: f64,
    pub doublescan: f64,
    pub hilbert: f64,
    pub circles: f64,
    pub s_curves: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementRow {
    pub r: f64,
    pub scheme: String,
    /// Which hexagon column was compared: formula, planned or reference.
    pub hexagon: String,
    pub improvement_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub table: Vec<CompareRow>,
    pub improvements: Vec<ImprovementRow>,
}

/// Relative saving of `hexagon` over `other`, summed over the margin grid:
/// `(sum(other) - sum(hexagon)) / sum(other) * 100`.
pub fn improvement_percent(hexagon: &[f64], other: &[f64]) -> f64 {
    let h: f64 = hexagon.iter().sum();
    let o: f64 = other.iter().sum();
    (o - h) / o * 100.0
}

fn competitor(row: &CompareRow, s: Scheme) -> f64 {
    match s {
        Scheme::ChiaHoOu => row.chia_ho_ou,
        Scheme::Doublescan => row.doublescan,
        Scheme::Hilbert => row.hilbert,
        Scheme::Circles => row.circles,
        Scheme::SCurves => row.s_curves,
        Scheme::Hexagon => row.hexagon_formula,
    }
}

/// Competitor formulas against the hexagon formula, the planner's measured
/// length (with `u = r/k`) and, for the reference case, the measured column.
pub fn run_compare(cfg: &ExperimentConfig) -> Result<CompareSummary> {
    cfg.validate()?;
    let l = cfg.area.width;
    if (cfg.area.height - l).abs() > 1e-9 * l {
        return Err(invalid("comparison needs a square area"));
    }
    let region = Rect::square(l);
    let mut table = Vec::new();
    let mut improvements = Vec::new();
    for &r in &cfg.r {
        let with_reference = l == 200.0 && r == 10.0;
        let mut rows = Vec::new();
        for k in COMPARE_DIVISORS {
            let p = SchemeParams::new(l, r, k)?;
            let x = r / k as f64;
            let value = |s: Scheme| s.path_length(&p).expect("competitor");
            rows.push(CompareRow {
                l,
                r,
                k,
                x,
                hexagon_formula: d_hexagon_formula(l, r, x)?,
                hexagon_planned: plan_rect_path(&region, r, x, x)?.total_length,
                hexagon_reference: with_reference
                    .then(|| {
                        REFERENCE_HEXAGON
                            .iter()
                            .find(|(rk, _)| *rk == k)
                            .map(|(_, v)| *v)
                    })
                    .flatten(),
                chia_ho_ou: value(Scheme::ChiaHoOu),
                doublescan: value(Scheme::Doublescan),
                hilbert: value(Scheme::Hilbert),
                circles: value(Scheme::Circles),
                s_curves: value(Scheme::SCurves),
            });
        }

        let mut columns: Vec<(&str, Vec<f64>)> = vec![
            ("formula", rows.iter().map(|r| r.hexagon_formula).collect()),
            ("planned", rows.iter().map(|r| r.hexagon_planned).collect()),
        ];
        if with_reference {
            columns.push((
                "reference",
                rows.iter().filter_map(|r| r.hexagon_reference).collect(),
            ));
        }
        for (label, hex) in &columns {
            for s in Scheme::COMPETITORS {
                let other: Vec<f64> = rows.iter().map(|row| competitor(row, s)).collect();
                improvements.push(ImprovementRow {
                    r,
                    scheme: s.name().to_string(),
                    hexagon: label.to_string(),
                    improvement_percent: improvement_percent(hex, &other),
                });
            }
        }
        table.extend(rows);
    }
    Ok(CompareSummary {
        table,
        improvements,
    })
}
