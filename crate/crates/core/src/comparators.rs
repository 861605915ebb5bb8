//! Closed-form path lengths of competing anchor trajectories over an
//! `L x L` square, with resolution `r/k`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub l: f64,
    pub r: f64,
    pub k: u32,
}

impl SchemeParams {
    pub fn new(l: f64, r: f64, k: u32) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(invalid("square side must be positive"));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("range must be positive"));
        }
        if k < 2 {
            return Err(invalid("k must be at least 2"));
        }
        Ok(Self { l, r, k })
    }

    fn res(&self) -> f64 {
        self.r / self.k as f64
    }

    /// `r - r/k`.
    fn step(&self) -> f64 {
        self.r - self.res()
    }
}

pub fn d_chia_ho_ou(p: &SchemeParams) -> f64 {
    let span = p.l + 2.0 * p.r;
    let lines = (span / p.step()).ceil();
    span * (lines + 1.0) + p.step() * lines
}

/// Same trajectory length as [`d_chia_ho_ou`].
pub fn d_scan(p: &SchemeParams) -> f64 {
    d_chia_ho_ou(p)
}

pub fn d_doublescan(p: &SchemeParams) -> f64 {
    let reach = p.l + p.r + p.res();
    2.0 * ((reach / (2.0 * p.step()) + 1.0) * (p.l + 2.0 * p.r) + reach)
}

pub fn d_hilbert(p: &SchemeParams) -> f64 {
    let cells = (p.l + 2.0 * p.r) / p.step();
    cells * cells * p.step()
}

/// `N` is used as a real number; no ceiling.
pub fn d_circles(p: &SchemeParams) -> f64 {
    let n = (p.l / 2f64.sqrt() - p.r) / p.step();
    n * n * PI * p.step() + p.l
}

pub fn d_s_curves(p: &SchemeParams) -> f64 {
    let reach = p.l + p.r + p.res();
    (reach / (1.5 * p.r) + 1.0) * (p.l + 2.0 * p.r) / 2.0 * PI + reach + p.step() * PI / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    Hexagon,
    ChiaHoOu,
    Doublescan,
    Hilbert,
    Circles,
    SCurves,
}

impl Scheme {
    pub const COMPETITORS: [Scheme; 5] = [
        Scheme::ChiaHoOu,
        Scheme::Doublescan,
        Scheme::Hilbert,
        Scheme::Circles,
        Scheme::SCurves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Hexagon => "hexagon",
            Scheme::ChiaHoOu => "chia_ho_ou",
            Scheme::Doublescan => "doublescan",
            Scheme::Hilbert => "hilbert",
            Scheme::Circles => "circles",
            Scheme::SCurves => "s_curves",
        }
    }

    /// Path length of a competitor; `None` for the hexagon scheme, whose
    /// length depends on the margin rather than on `k` alone.
    pub fn path_length(self, p: &SchemeParams) -> Option<f64> {
        match self {
            Scheme::Hexagon => None,
            Scheme::ChiaHoOu => Some(d_chia_ho_ou(p)),
            Scheme::Doublescan => Some(d_doublescan(p)),
            Scheme::Hilbert => Some(d_hilbert(p)),
            Scheme::Circles => Some(d_circles(p)),
            Scheme::SCurves => Some(d_s_curves(p)),
        }
    }

    /// Coefficient of `L^2 / r` in the scheme's path length.
    pub fn leading_coefficient(self, k: u32) -> f64 {
        let k = k as f64;
        let scan = k / (k - 1.0);
        match self {
            Scheme::Hexagon => {
                let a = 2.0 * k / (2.0 * k - 1.0);
                let s3 = 3f64.sqrt();
                a * (a + 1.0 / s3) / s3
            }
            Scheme::ChiaHoOu | Scheme::Doublescan | Scheme::Hilbert => scan,
            Scheme::SCurves => PI / 3.0 * scan,
            Scheme::Circles => PI / 2.0 * scan,
        }
    }
}

/// Leading coefficients of every scheme, hexagon first.
pub fn leading_coefficients(k: u32) -> Result<Vec<(Scheme, f64)>> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    let all = std::iter::once(Scheme::Hexagon).chain(Scheme::COMPETITORS);
    Ok(all.map(|s| (s, s.leading_coefficient(k))).collect())
}
