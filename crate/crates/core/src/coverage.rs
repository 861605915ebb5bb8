//! Deployment-agnostic anchor path over a rectangle.
//!
//! The region is tiled with coverage hexagons of side `2r - X`. The anchor
//! walks the side-`r` hexagon inscribed in each tile's communication circle,
//! row after row in serpentine order, and only broadcasts on those
//! perimeters. Every point of a coverage hexagon then hears two beacon points
//! at least `r - u` apart.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geom::{polyline_length, Lrh, Point2D};
use crate::localizer::{localize_from_log, lrh_schedule, BeaconRecord, LocalizationParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub width: f64,
    pub height: f64,
    /// Lower-left corner.
    pub origin: Point2D,
}

impl Rect {
    pub fn new(width: f64, height: f64, origin: Point2D) -> Result<Self> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(invalid("rectangle sides must be positive"));
        }
        Ok(Self {
            width,
            height,
            origin,
        })
    }

    /// `side x side` square at the origin. Panics on a non-positive side.
    pub fn square(side: f64) -> Self {
        Self::new(side, side, Point2D::ORIGIN).expect("positive side")
    }

    pub fn contains(&self, p: Point2D) -> bool {
        let q = p - self.origin;
        (0.0..=self.width).contains(&q.x) && (0.0..=self.height).contains(&q.y)
    }

    /// Points `origin + (i, j) * step` inside the rectangle, row-major.
    pub fn grid(&self, step: f64) -> Vec<Point2D> {
        let nx = (self.width / step + 1e-9).floor() as usize;
        let ny = (self.height / step + 1e-9).floor() as usize;
        let mut pts = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            for i in 0..=nx {
                pts.push(self.origin + Point2D::new(i as f64 * step, j as f64 * step));
            }
        }
        pts
    }
}

/// Margin `X = r + u/2 - sqrt(4r^2 - 3u^2)/2` by which the coverage hexagon
/// falls short of side `2r`. It solves `(r - X)^2 + u^2 + (r - X)u = r^2`.
pub fn coverage_margin(r: f64, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < r) {
        return Err(invalid("coverage margin needs 0 < u < r"));
    }
    Ok(r + 0.5 * u - 0.5 * (4.0 * r * r - 3.0 * u * u).sqrt())
}

/// Closed-form path length for an `L x L` square.
pub fn d_hexagon_formula(l: f64, r: f64, x: f64) -> Result<f64> {
    if !(l > 0.0 && r > 0.0 && x > 0.0 && x < 2.0 * r) {
        return Err(invalid("formula needs L, r, X > 0 and X < 2r"));
    }
    let s = 2.0 * r - x;
    let per_row = (l / (3f64.sqrt() * s)).ceil();
    let rows = (2.0 * l / (3.0 * s)).ceil();
    Ok(per_row * rows * 6.0 * r + l * rows + 3.0 * r * rows + l)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingPlan {
    /// Tile centers row by row, each row left to right.
    pub hex_centers: Vec<Point2D>,
    /// Tiles in each row, bottom row first.
    pub row_lengths: Vec<usize>,
    /// `ceil(width / (sqrt(3) S))` for `S = 2r - X`.
    pub hexes_per_row: usize,
    /// `ceil(2 height / (3 S))`.
    pub row_count: usize,
    pub side: f64,
    pub coverage_side: f64,
}

impl TilingPlan {
    pub fn rows(&self) -> Vec<&[Point2D]> {
        let mut out = Vec::with_capacity(self.row_lengths.len());
        let mut at = 0;
        for &n in &self.row_lengths {
            out.push(&self.hex_centers[at..at + n]);
            at += n;
        }
        out
    }
}

/// Every lattice tile that meets the region.
///
/// Tiles are pointy-topped (a vertex straight up), rows `1.5 S` apart and
/// neighbors `sqrt(3) S` apart, odd rows shifted by half a pitch. The bottom
/// row's lowest vertices sit half a side below the region. Offset rows need
/// one tile more than the nominal count and the last row half a row more,
/// so the actual counts can exceed the nominal ones.
pub fn tile_rect(region: &Rect, r: f64, x: f64) -> Result<TilingPlan> {
    if !(r > 0.0 && x > 0.0 && x < 2.0 * r) {
        return Err(invalid("tiling needs r > 0 and 0 < X < 2r"));
    }
    let s = 2.0 * r - x;
    let pitch = 3f64.sqrt() * s;
    let eps = 1e-9 * s;
    let mut hex_centers = Vec::new();
    let mut row_lengths = Vec::new();
    for j in 0.. {
        let yc = 0.5 * s + 1.5 * s * j as f64;
        if yc - s >= region.height - eps {
            break;
        }
        let offset = if j % 2 == 0 { 0.5 * pitch } else { 0.0 };
        let mut n = 0;
        for i in 0.. {
            let xc = offset + i as f64 * pitch;
            if xc - 0.5 * pitch >= region.width - eps {
                break;
            }
            if xc + 0.5 * pitch > eps {
                hex_centers.push(region.origin + Point2D::new(xc, yc));
                n += 1;
            }
        }
        row_lengths.push(n);
    }
    Ok(TilingPlan {
        hex_centers,
        row_lengths,
        hexes_per_row: (region.width / pitch).ceil() as usize,
        row_count: (2.0 * region.height / (3.0 * s)).ceil() as usize,
        side: r,
        coverage_side: s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaypointKind {
    /// A beacon goes out here; the anchor broadcasts along the hexagon side
    /// that ends here.
    Beacon,
    /// Silent movement.
    Transit,
}

impl WaypointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WaypointKind::Beacon => "beacon",
            WaypointKind::Transit => "transit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPlan {
    pub waypoints: Vec<Point2D>,
    pub kinds: Vec<WaypointKind>,
    pub beacon_spacing: f64,
    pub total_length: f64,
    /// Hexagons in traversal order, each starting at its entry vertex.
    pub hexagons: Vec<Lrh>,
    /// Path length travelled when each hexagon is entered.
    pub hexagon_offsets: Vec<f64>,
}

impl PathPlan {
    /// Visits `hexagons` in order from `start`, entering each at the vertex
    /// nearest to where the anchor is and leaving from the same vertex.
    pub fn from_hexagons(start: Point2D, hexagons: &[Lrh], u: f64) -> Result<Self> {
        let mut waypoints = vec![start];
        let mut kinds = vec![WaypointKind::Transit];
        let mut odometer = 0.0;
        let mut pos = start;
        let mut ordered = Vec::with_capacity(hexagons.len());
        let mut offsets = Vec::with_capacity(hexagons.len());
        for h in hexagons {
            let h = h.rotated_start(h.nearest_vertex(pos));
            // Validates that u divides the side.
            lrh_schedule(&h, u)?;
            odometer += pos.distance(h.vertices[0]);
            offsets.push(odometer);
            for v in h.closed_polyline() {
                waypoints.push(v);
                kinds.push(WaypointKind::Beacon);
            }
            odometer += h.perimeter();
            pos = h.vertices[0];
            ordered.push(h);
        }
        let total_length = polyline_length(&waypoints)?;
        Ok(Self {
            waypoints,
            kinds,
            beacon_spacing: u,
            total_length,
            hexagons: ordered,
            hexagon_offsets: offsets,
        })
    }

    /// Plan without hexagon `index`, as if the anchor had skipped it.
    pub fn without_hexagon(&self, index: usize) -> Result<Self> {
        let mut hexes = self.hexagons.clone();
        hexes.remove(index);
        Self::from_hexagons(self.waypoints[0], &hexes, self.beacon_spacing)
    }

    /// Beacons heard at `sensor`, timed for an anchor moving at `speed`.
    pub fn beacon_log(&self, sensor: Point2D, r: f64, speed: f64) -> Result<Vec<BeaconRecord>> {
        let mut log = Vec::new();
        for (h, &offset) in self.hexagons.iter().zip(&self.hexagon_offsets) {
            if h.center.distance(sensor) > 2.0 * r + 1e-9 * r {
                continue;
            }
            for (i, p) in lrh_schedule(h, self.beacon_spacing)?
                .into_iter()
                .enumerate()
            {
                if p.distance(sensor) <= r {
                    let time = (offset + i as f64 * self.beacon_spacing) / speed;
                    log.push(BeaconRecord {
                        time,
                        anchor_position: p,
                        lrh: Some(*h),
                    });
                }
            }
        }
        Ok(log)
    }

    /// `x,y,kind` rows, `kind` being `beacon` or `transit`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "kind"])?;
        for (p, k) in self.waypoints.iter().zip(&self.kinds) {
            w.write_record([
                format!("{:.6}", p.x),
                format!("{:.6}", p.y),
                k.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Serpentine plan over the tiling of `region`, starting at its origin.
pub fn plan_rect_path(region: &Rect, r: f64, x: f64, u: f64) -> Result<PathPlan> {
    LocalizationParams::from_spacing(r, u)?.beacon_divisions()?;
    let tiling = tile_rect(region, r, x)?;
    let mut hexagons = Vec::with_capacity(tiling.hex_centers.len());
    for (j, row) in tiling.rows().into_iter().enumerate() {
        let mut row = row.to_vec();
        if j % 2 == 1 {
            row.reverse();
        }
        for c in row {
            hexagons.push(Lrh::with_orientation(c, r, FRAC_PI_2)?);
        }
    }
    PathPlan::from_hexagons(region.origin, &hexagons, u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub worst_error: f64,
    pub mean_error: f64,
    pub uncovered: Vec<Point2D>,
    /// Smallest, over localized sensors, of the beacon point separation used.
    pub min_pair_distance: f64,
    pub sensors_checked: usize,
}

/// Result of localizing one sensor from a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorOutcome {
    pub position: Point2D,
    pub error: Option<f64>,
    pub separation: Option<f64>,
}

/// Runs the full localization pipeline for each sensor against `plan`.
pub fn localize_against_plan(
    plan: &PathPlan,
    sensors: &[Point2D],
    params: &LocalizationParams,
) -> Vec<SensorOutcome> {
    sensors
        .par_iter()
        .map(|&s| {
            let est = plan
                .beacon_log(s, params.r, params.speed())
                .and_then(|log| localize_from_log(&log, params));
            match est {
                Ok(e) => SensorOutcome {
                    position: s,
                    error: Some(e.position.distance(s)),
                    separation: e.separation,
                },
                Err(_) => SensorOutcome {
                    position: s,
                    error: None,
                    separation: None,
                },
            }
        })
        .collect()
}

/// Places a virtual sensor on every grid point of `region` and localizes it.
pub fn verify_coverage(
    plan: &PathPlan,
    region: &Rect,
    params: &LocalizationParams,
    grid_step: f64,
) -> Result<CoverageReport> {
    if !(grid_step > 0.0) {
        return Err(invalid("grid step must be positive"));
    }
    let outcomes = localize_against_plan(plan, &region.grid(grid_step), params);
    Ok(summarize(&outcomes))
}

pub fn summarize(outcomes: &[SensorOutcome]) -> CoverageReport {
    let errors: Vec<f64> = outcomes.iter().filter_map(|o| o.error).collect();
    CoverageReport {
        worst_error: errors.iter().copied().fold(0.0, f64::max),
        mean_error: if errors.is_empty() {
            0.0
        } else {
            errors.iter().sum::<f64>() / errors.len() as f64
        },
        uncovered: outcomes
            .iter()
            .filter(|o| o.error.is_none())
            .map(|o| o.position)
            .collect(),
        min_pair_distance: outcomes
            .iter()
            .filter_map(|o| o.separation)
            .fold(f64::INFINITY, f64::min),
        sensors_checked: outcomes.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_examples() {
        let x = coverage_margin(10.0, 1.0).unwrap();
        assert!((x - (10.5 - 397f64.sqrt() / 2.0)).abs() < 1e-12);
        assert!((x - 0.53757).abs() < 1e-5);
        let small = coverage_margin(10.0, 0.001).unwrap();
        assert!((small - 0.0005).abs() < 1e-6);
        assert!(coverage_margin(10.0, 10.0).is_err());
    }

    // Oracle: bisection on the triangle relation
    // (r - X)^2 + u^2 - 2(r - X)u cos(120 deg) = r^2.
    #[test]
    fn margin_matches_triangle_solve() {
        for (r, u) in [(10.0, 1.0), (20.0, 2.5), (5.0, 0.1)] {
            let f = |x: f64| {
                let a: f64 = r - x;
                a * a + u * u - 2.0 * a * u * (2.0 * std::f64::consts::PI / 3.0).cos() - r * r
            };
            let (mut lo, mut hi) = (0.0, u);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert!((coverage_margin(r, u).unwrap() - lo).abs() < 1e-9);
        }
    }

    #[test]
    fn formula_examples() {
        assert_eq!(d_hexagon_formula(200.0, 10.0, 1.0).unwrap(), 5400.0);
        assert_eq!(d_hexagon_formula(200.0, 10.0, 0.5).unwrap(), 4330.0);
        assert!(d_hexagon_formula(0.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn tiling_counts() {
        let t = tile_rect(&Rect::square(200.0), 10.0, 1.0).unwrap();
        assert_eq!((t.hexes_per_row, t.row_count), (7, 8));
        assert_eq!(t.hex_centers.len(), 56);
        assert_eq!(t.row_lengths.len(), 8);
        let pitch = 3f64.sqrt() * 19.0;
        let rows = t.rows();
        assert!((rows[0][1].x - rows[0][0].x - pitch).abs() < 1e-9);
        assert!((rows[1][0].y - rows[0][0].y - 28.5).abs() < 1e-9);
        assert!((rows[0][0].x - rows[1][0].x - pitch / 2.0).abs() < 1e-9);
    }

    #[test]
    fn tiny_region_is_one_hexagon() {
        let plan = plan_rect_path(&Rect::square(1.0), 10.0, 1.0, 1.0).unwrap();
        assert_eq!(plan.hexagons.len(), 1);
        let entry = plan.waypoints[0].distance(plan.waypoints[1]);
        assert!((plan.total_length - 60.0 - entry).abs() < 1e-9);
    }

    #[test]
    fn plan_length_and_flags() {
        let plan = plan_rect_path(&Rect::square(200.0), 10.0, 1.0, 1.0).unwrap();
        assert!(plan.total_length <= 5400.0);
        assert_eq!(plan.waypoints.len(), 1 + 7 * plan.hexagons.len());
        assert_eq!(plan.kinds[0], WaypointKind::Transit);
        assert!((polyline_length(&plan.waypoints).unwrap() - plan.total_length).abs() < 1e-9);
    }

    #[test]
    fn non_integer_divisor_rejected() {
        assert!(plan_rect_path(&Rect::square(100.0), 10.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn corner_grid() {
        let region = Rect::square(200.0);
        assert_eq!(region.grid(200.0).len(), 4);
        let plan = plan_rect_path(&region, 10.0, 1.0, 1.0).unwrap();
        let p = LocalizationParams::from_spacing(10.0, 1.0).unwrap();
        let rep = verify_coverage(&plan, &region, &p, 200.0).unwrap();
        assert_eq!(rep.sensors_checked, 4);
    }

    #[test]
    fn csv_header() {
        let plan = plan_rect_path(&Rect::square(1.0), 10.0, 1.0, 1.0).unwrap();
        let mut buf = Vec::new();
        plan.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,y,kind\n0.000000,0.000000,transit\n"));
        assert_eq!(text.lines().count(), 1 + plan.waypoints.len());
    }
}
