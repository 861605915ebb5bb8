//! Two-beacon-point range-free localization.
//!
//! A sensor records every beacon it hears. Beacons bordered by a silence of
//! at least `t0` are *beacon points*: the anchor was entering or leaving the
//! sensor's communication disk there, so the sensor lies in the annulus of
//! radii `r - u` and `r` around each of them. Two such annuli meet in two
//! symmetric regions; a representative point of each region is a candidate
//! and the known hexagon broadcast schedule picks the right one.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geom::{tol, Lrh, Point2D};

/// `u/r` below which the two-beacon error bound stays under `r/2`.
pub const SAFE_SPACING_RATIO: f64 = 1.0 / 7.5;

/// Exact `u/r` admissible for every sensor within `3r/2` of a hexagon
/// center to get two beacon points at least `r - u` apart:
/// `(sqrt(3)(sqrt(13) - 1) - 4) / (4 (sqrt(3) - 1))`, about 0.1752.
pub fn three_halves_reach_spacing_ratio() -> f64 {
    let s3 = 3f64.sqrt();
    (s3 * (13f64.sqrt() - 1.0) - 4.0) / (4.0 * (s3 - 1.0))
}

/// `u/r` at which the corner angle of the inner construction becomes a
/// right angle: `(sqrt(2) - 1) / sqrt(2)`, about 0.2929.
pub fn right_angle_spacing_ratio() -> f64 {
    (2f64.sqrt() - 1.0) / 2f64.sqrt()
}

/// `u/r` where the outer chord at the case boundary reaches `r`:
/// `(2 - sqrt(3)) / 2`, about 0.134.
pub fn outer_chord_spacing_ratio() -> f64 {
    (2.0 - 3f64.sqrt()) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationParams {
    /// Communication range shared by anchor and sensors.
    pub r: f64,
    /// Beacon distance: anchor travel between broadcasts.
    pub u: f64,
    /// Broadcast period in seconds.
    pub t: f64,
    /// Silence needed on one side of a beacon for it to be a beacon point.
    pub t0: f64,
}

impl LocalizationParams {
    pub fn new(r: f64, u: f64, t: f64, t0: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("communication range must be positive"));
        }
        if !(u > 0.0 && u < r) {
            return Err(invalid("beacon distance must satisfy 0 < u < r"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid("broadcast period must be positive"));
        }
        if !(t0 > t && t0 < 2.0 * t) {
            return Err(invalid("waiting time must satisfy t < t0 < 2t"));
        }
        Ok(Self { r, u, t, t0 })
    }

    /// Anchor speed of 1 m/s, so `t = u` seconds and `t0 = 1.5 t`.
    pub fn from_spacing(r: f64, u: f64) -> Result<Self> {
        Self::new(r, u, u, 1.5 * u)
    }

    /// `u = r / k`.
    pub fn with_divisor(r: f64, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(invalid("beacon divisor k must be at least 2"));
        }
        Self::from_spacing(r, r / k as f64)
    }

    /// Anchor speed implied by `u = speed * t`.
    pub fn speed(&self) -> f64 {
        self.u / self.t
    }

    /// Number of broadcasts per hexagon side; `r/u` must be an integer.
    pub fn beacon_divisions(&self) -> Result<u32> {
        let k = self.r / self.u;
        let rounded = k.round();
        if rounded < 1.0 || (k - rounded).abs() > 1e-9 * k.max(1.0) {
            return Err(Error::InvalidBeaconSpacing);
        }
        Ok(rounded as u32)
    }

    /// Whether `u` is inside the `u <= r/7.5` regime with the `r/2` guarantee.
    pub fn is_safe_spacing(&self) -> bool {
        self.u <= self.r * SAFE_SPACING_RATIO * (1.0 + 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeaconRecord {
    pub time: f64,
    pub anchor_position: Point2D,
    /// Hexagon the anchor was traversing, when it was traversing one.
    pub lrh: Option<Lrh>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BeaconKind {
    GapBefore,
    GapAfter,
    /// Silence on both sides: a single heard beacon.
    Isolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeaconPoint {
    pub position: Point2D,
    pub time: f64,
    pub kind: BeaconKind,
    /// Index of the originating record in the log.
    pub index: usize,
}

/// Records bordered by a silence of more than `t0` on at least one side.
///
/// The first and last records always qualify. Output is in log order.
pub fn extract_beacon_points(
    log: &[BeaconRecord],
    params: &LocalizationParams,
) -> Result<Vec<BeaconPoint>> {
    extract_beacon_points_at(log, params, None)
}

/// Like [`extract_beacon_points`], evaluated by a sensor at time `now`: the
/// last record only counts as followed by silence once `t0` has elapsed.
pub fn extract_beacon_points_at(
    log: &[BeaconRecord],
    params: &LocalizationParams,
    now: Option<f64>,
) -> Result<Vec<BeaconPoint>> {
    if log.windows(2).any(|w| !(w[1].time > w[0].time)) {
        return Err(Error::UnsortedBeaconLog);
    }
    let t0 = params.t0;
    let mut out = Vec::new();
    for (i, rec) in log.iter().enumerate() {
        let x = rec.time;
        let gap_before = i == 0 || log[i - 1].time < x - t0;
        let gap_after = match log.get(i + 1) {
            Some(next) => next.time > x + t0,
            None => now.map_or(true, |n| n > x + t0),
        };
        let kind = match (gap_before, gap_after) {
            (true, true) => BeaconKind::Isolated,
            (true, false) => BeaconKind::GapBefore,
            (false, true) => BeaconKind::GapAfter,
            (false, false) => continue,
        };
        out.push(BeaconPoint {
            position: rec.anchor_position,
            time: x,
            kind,
            index: i,
        });
    }
    Ok(out)
}

/// The two mirror-image position estimates from a pair of beacon points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidatePair {
    /// Estimate on the left of the directed line `c1 -> c2`.
    pub q: Point2D,
    /// Estimate on the right.
    pub q_mirror: Point2D,
    pub nn_length: f64,
    pub tt_length: f64,
}

/// Distances of the annulus-intersection construction for separation `l`,
/// measured in the frame centered at the midpoint of the beacon points with
/// the y-axis on the perpendicular bisector.
#[derive(Debug, Clone, Copy)]
struct AnnulusFrame {
    /// Height of the corner T where one outer and one inner circle meet.
    corner_height: f64,
    nn_length: f64,
    tt_length: f64,
}

fn annulus_frame(l: f64, r: f64, u: f64) -> AnnulusFrame {
    let half = 0.5 * l;
    let outer_height = (r * r - half * half).max(0.0).sqrt();
    let inner = r - u;

    // The inner circles stop meeting at l = 2(r - u); from there on the two
    // candidate regions merge and NN' is the whole outer chord.
    let nn_length = if l < 2.0 * inner {
        outer_height - (inner * inner - half * half).max(0.0).sqrt()
    } else {
        2.0 * outer_height
    };

    // T: Circle(c1, r) meets Circle(c2, r - u). Past l = 2r - u they no
    // longer meet and the corner collapses onto the line c1c2.
    let (corner_height, tt_length) = if l <= 2.0 * r - u {
        let from_c1 = (l * l + r * r - inner * inner) / (2.0 * l);
        let h = (r * r - from_c1 * from_c1).max(0.0).sqrt();
        (h, (r * r - inner * inner) / l)
    } else {
        (0.0, 2.0 * r - l)
    };

    AnnulusFrame {
        corner_height,
        nn_length,
        tt_length,
    }
}

/// Candidate positions from beacon points `c1` and `c2`.
///
/// Each candidate is where the segment NN' on the perpendicular bisector
/// crosses the line TT' (parallel to c1c2), on its side of c1c2.
pub fn candidate_positions(
    c1: Point2D,
    c2: Point2D,
    params: &LocalizationParams,
) -> Result<CandidatePair> {
    let (r, u) = (params.r, params.u);
    let l = c1.distance(c2);
    if l <= tol(r) || l > 2.0 * r + tol(r) {
        return Err(Error::NoValidIntersection);
    }
    let frame = annulus_frame(l.min(2.0 * r), r, u);
    let mid = c1.midpoint(c2);
    let normal = ((c2 - c1) * (1.0 / l)).perp();
    Ok(CandidatePair {
        q: mid + normal * frame.corner_height,
        q_mirror: mid - normal * frame.corner_height,
        nn_length: frame.nn_length,
        tt_length: frame.tt_length,
    })
}

/// Worst-case localization error for beacon points `l` apart:
/// `max(NN'/2, TT'/2)`, valid for `r - u <= l <= 2r`.
pub fn error_bound(l: f64, params: &LocalizationParams) -> Result<f64> {
    let (r, u) = (params.r, params.u);
    let eps = tol(r);
    if !(l >= r - u - eps && l <= 2.0 * r + eps) {
        return Err(Error::OutOfTheoremRange);
    }
    let frame = annulus_frame(l.clamp(r - u, 2.0 * r), r, u);
    Ok(0.5 * frame.nn_length.max(frame.tt_length))
}

/// Broadcast positions of one traversal of `lrh`: start at the first vertex,
/// every `u` meters, finishing back on the first vertex.
pub fn lrh_schedule(lrh: &Lrh, u: f64) -> Result<Vec<Point2D>> {
    let k = LocalizationParams {
        r: lrh.circumradius,
        u,
        t: 1.0,
        t0: 1.5,
    }
    .beacon_divisions()?;
    let mut pts = Vec::with_capacity(6 * k as usize + 1);
    for i in 0..6 {
        let a = lrh.vertices[i];
        let b = lrh.vertices[(i + 1) % 6];
        for j in 0..k {
            pts.push(a.lerp(b, j as f64 / k as f64));
        }
    }
    pts.push(lrh.vertices[0]);
    Ok(pts)
}

type CellKey = (i64, i64);

fn quantize(p: Point2D) -> CellKey {
    ((p.x * 1e6).round() as i64, (p.y * 1e6).round() as i64)
}

fn expected_hearing(candidate: Point2D, schedule: &[Point2D], r: f64) -> BTreeSet<CellKey> {
    schedule
        .iter()
        .filter(|s| candidate.distance(**s) <= r + tol(r))
        .map(|s| quantize(*s))
        .collect()
}

/// Picks the candidate whose expected set of heard schedule positions equals
/// `received_positions` exactly.
pub fn disambiguate(
    pair: &CandidatePair,
    received_positions: &[Point2D],
    lrh: &Lrh,
    full_schedule: &[Point2D],
    r: f64,
) -> Result<Point2D> {
    debug_assert!(full_schedule.len() >= 6, "schedule must cover {lrh:?}");
    let received: BTreeSet<CellKey> = received_positions.iter().map(|p| quantize(*p)).collect();
    let q_ok = expected_hearing(pair.q, full_schedule, r) == received;
    let m_ok = expected_hearing(pair.q_mirror, full_schedule, r) == received;
    match (q_ok, m_ok) {
        (true, true) if pair.q.approx_eq(pair.q_mirror) => Ok(pair.q),
        (true, true) => Err(Error::AmbiguousPosition),
        (true, false) => Ok(pair.q),
        (false, true) => Ok(pair.q_mirror),
        (false, false) => Err(Error::InconsistentObservation),
    }
}

/// Like [`disambiguate`], but for estimates that carry error: picks the
/// candidate whose expected hearing set differs from the received set in the
/// fewest schedule positions. A tie between candidates less than `r/2`
/// apart yields their midpoint.
pub fn disambiguate_nearest(
    pair: &CandidatePair,
    received_positions: &[Point2D],
    full_schedule: &[Point2D],
    r: f64,
) -> Result<Point2D> {
    if pair.q.approx_eq(pair.q_mirror) {
        return Ok(pair.q);
    }
    let received: BTreeSet<CellKey> = received_positions.iter().map(|p| quantize(*p)).collect();
    let mismatch = |c: Point2D| {
        expected_hearing(c, full_schedule, r)
            .symmetric_difference(&received)
            .count()
    };
    let (dq, dm) = (mismatch(pair.q), mismatch(pair.q_mirror));
    match dq.cmp(&dm) {
        std::cmp::Ordering::Less => Ok(pair.q),
        std::cmp::Ordering::Greater => Ok(pair.q_mirror),
        // Close candidates both fit; anything between them is as good.
        std::cmp::Ordering::Equal if pair.q.distance(pair.q_mirror) <= 0.5 * r => {
            Ok(pair.q.midpoint(pair.q_mirror))
        }
        std::cmp::Ordering::Equal => Err(Error::AmbiguousPosition),
    }
}

/// Outcome of localizing one sensor from its beacon log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub position: Point2D,
    /// `None` when the sensor heard a whole traversal and sits at its center.
    pub beacon_points: Option<(Point2D, Point2D)>,
    /// Distance between the two beacon points used.
    pub separation: Option<f64>,
    /// Worst-case error, when the separation is at least `r - u`.
    pub error_bound: Option<f64>,
    /// Hexagon traversals the sensor heard.
    pub traversals: usize,
}

/// Beacon points of one hexagon traversal.
///
/// The silence rule is applied along the closed perimeter schedule, so the
/// seam where the traversal starts and ends is not mistaken for the edge of
/// the sensor's disk: a heard schedule position qualifies when a cyclic
/// neighbor on the schedule went unheard.
pub fn lrh_beacon_points(log: &[BeaconRecord], lrh: &Lrh, u: f64) -> Result<Vec<Point2D>> {
    let schedule = lrh_schedule(lrh, u)?;
    let cycle = &schedule[..schedule.len() - 1];
    let received: BTreeSet<CellKey> = log
        .iter()
        .filter(|rec| rec.lrh.as_ref() == Some(lrh))
        .map(|rec| quantize(rec.anchor_position))
        .collect();
    let heard: Vec<bool> = cycle
        .iter()
        .map(|p| received.contains(&quantize(*p)))
        .collect();
    let n = cycle.len();
    Ok((0..n)
        .filter(|&i| heard[i] && (!heard[(i + n - 1) % n] || !heard[(i + 1) % n]))
        .map(|i| cycle[i])
        .collect())
}

/// Distinct hexagons in the log, in order of first appearance.
pub fn heard_traversals(log: &[BeaconRecord]) -> Vec<Lrh> {
    let mut out: Vec<Lrh> = Vec::new();
    for h in log.iter().filter_map(|rec| rec.lrh.as_ref()) {
        if !out.contains(h) {
            out.push(*h);
        }
    }
    out
}

/// Localizes a sensor from every hexagon traversal it heard.
///
/// Beacon points of all traversals are pooled and the widest pair is used.
/// The error bound only applies when that pair is at least `r - u` apart.
/// The mirror ambiguity is settled against the schedules of all heard
/// traversals.
pub fn localize_from_log(log: &[BeaconRecord], params: &LocalizationParams) -> Result<Estimate> {
    let traversals = heard_traversals(log);
    let mut points = Vec::new();
    let mut schedule = Vec::new();
    for lrh in &traversals {
        points.extend(lrh_beacon_points(log, lrh, params.u)?);
        schedule.extend(lrh_schedule(lrh, params.u)?);
    }

    let mut best: Option<(f64, Point2D, Point2D)> = None;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let l = a.distance(*b);
            if best.map_or(true, |(bl, ..)| l > bl) {
                best = Some((l, *a, *b));
            }
        }
    }

    let Some((l, c1, c2)) = best else {
        // Every vertex heard means every vertex is within r, which only the
        // center satisfies.
        return traversals
            .iter()
            .find(|h| {
                h.vertices
                    .iter()
                    .all(|v| log.iter().any(|rec| rec.anchor_position.approx_eq(*v)))
            })
            .map(|h| Estimate {
                position: h.center,
                beacon_points: None,
                separation: None,
                error_bound: Some(0.0),
                traversals: traversals.len(),
            })
            .ok_or(Error::InsufficientBeaconPoints);
    };
    let bound = error_bound(l, params).ok();
    let pair = candidate_positions(c1, c2, params)?;
    let received: Vec<Point2D> = log
        .iter()
        .filter(|rec| rec.lrh.is_some())
        .map(|rec| rec.anchor_position)
        .collect();
    let position = disambiguate_nearest(&pair, &received, &schedule, params.r)?;
    Ok(Estimate {
        position,
        beacon_points: Some((c1, c2)),
        separation: Some(l),
        error_bound: bound,
        traversals: traversals.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::lrh_from_vertex;

    fn params(r: f64, u: f64) -> LocalizationParams {
        LocalizationParams::from_spacing(r, u).unwrap()
    }

    fn rec(time: f64) -> BeaconRecord {
        BeaconRecord {
            time,
            anchor_position: Point2D::new(time, 0.0),
            lrh: None,
        }
    }

    // Oracle: for each record check every other record for membership in
    // the two silence windows.
    fn beacon_times_oracle(times: &[f64], t0: f64) -> Vec<f64> {
        times
            .iter()
            .filter(|&&x| {
                let before = times.iter().any(|&y| y >= x - t0 && y < x);
                let after = times.iter().any(|&y| y > x && y <= x + t0);
                !before || !after
            })
            .copied()
            .collect()
    }

    #[test]
    fn one_contact_interval() {
        let p = LocalizationParams::new(10.0, 1.0, 1.0, 1.5).unwrap();
        let log: Vec<_> = [0.0, 1.0, 2.0, 3.0].into_iter().map(rec).collect();
        let bps = extract_beacon_points(&log, &p).unwrap();
        assert_eq!(bps.len(), 2);
        assert_eq!((bps[0].time, bps[0].kind), (0.0, BeaconKind::GapBefore));
        assert_eq!((bps[1].time, bps[1].kind), (3.0, BeaconKind::GapAfter));
    }

    #[test]
    fn two_contact_intervals_match_oracle() {
        let p = LocalizationParams::new(10.0, 1.0, 1.0, 1.5).unwrap();
        let times = [0.0, 1.0, 2.0, 10.0, 11.0, 12.0];
        let log: Vec<_> = times.into_iter().map(rec).collect();
        let got: Vec<f64> = extract_beacon_points(&log, &p)
            .unwrap()
            .iter()
            .map(|b| b.time)
            .collect();
        assert_eq!(got, vec![0.0, 2.0, 10.0, 12.0]);
        assert_eq!(got, beacon_times_oracle(&times, 1.5));
    }

    #[test]
    fn empty_and_unsorted_logs() {
        let p = params(10.0, 1.0);
        assert!(extract_beacon_points(&[], &p).unwrap().is_empty());
        let log = vec![rec(2.0), rec(1.0)];
        assert_eq!(
            extract_beacon_points(&log, &p),
            Err(Error::UnsortedBeaconLog)
        );
        let dup = vec![rec(1.0), rec(1.0)];
        assert_eq!(
            extract_beacon_points(&dup, &p),
            Err(Error::UnsortedBeaconLog)
        );
    }

    #[test]
    fn trailing_record_waits_for_silence() {
        let p = LocalizationParams::new(10.0, 1.0, 1.0, 1.5).unwrap();
        let log: Vec<_> = [0.0, 1.0, 2.0].into_iter().map(rec).collect();
        let early = extract_beacon_points_at(&log, &p, Some(3.0)).unwrap();
        assert_eq!(early.len(), 1);
        let late = extract_beacon_points_at(&log, &p, Some(3.6)).unwrap();
        assert_eq!(late.len(), 2);
    }

    #[test]
    fn isolated_record() {
        let p = LocalizationParams::new(10.0, 1.0, 1.0, 1.5).unwrap();
        let log: Vec<_> = [0.0, 5.0, 6.0].into_iter().map(rec).collect();
        let bps = extract_beacon_points(&log, &p).unwrap();
        assert_eq!(bps[0].kind, BeaconKind::Isolated);
        assert_eq!(bps.len(), 3);
    }

    #[test]
    fn params_validation() {
        assert!(LocalizationParams::new(10.0, 1.0, 1.0, 1.0).is_err());
        assert!(LocalizationParams::new(10.0, 1.0, 1.0, 2.0).is_err());
        assert!(LocalizationParams::new(10.0, 10.0, 1.0, 1.5).is_err());
        assert!(LocalizationParams::new(-1.0, 0.5, 1.0, 1.5).is_err());
        assert_eq!(params(10.0, 1.0).beacon_divisions(), Ok(10));
        assert_eq!(
            params(10.0, 3.0).beacon_divisions(),
            Err(Error::InvalidBeaconSpacing)
        );
        assert!(params(10.0, 10.0 / 7.5).is_safe_spacing());
        assert!(!params(10.0, 1.4).is_safe_spacing());
    }

    #[test]
    fn case_one_candidates() {
        let p = params(10.0, 1.0);
        let pair =
            candidate_positions(Point2D::new(-4.5, 0.0), Point2D::new(4.5, 0.0), &p).unwrap();
        assert!((pair.q.x).abs() < 1e-12 && (pair.q.y - 8.3148).abs() < 1e-4);
        assert!((pair.q_mirror.y + 8.3148).abs() < 1e-4);
        assert!((pair.nn_length - 1.1361).abs() < 1e-4);
        assert!((pair.tt_length - 2.1111).abs() < 1e-4);
    }

    // Oracle: brute-force grid over the upper half plane, keep points inside
    // both annuli; the candidate must lie in (or on the edge of) that region.
    #[test]
    fn case_one_candidate_inside_annulus_region() {
        let p = params(10.0, 1.0);
        let (c1, c2) = (Point2D::new(-4.5, 0.0), Point2D::new(4.5, 0.0));
        let pair = candidate_positions(c1, c2, &p).unwrap();
        let in_annuli = |q: Point2D| {
            let (d1, d2) = (q.distance(c1), q.distance(c2));
            (9.0..=10.0).contains(&d1) && (9.0..=10.0).contains(&d2)
        };
        let step = 0.005;
        let mut region = Vec::new();
        for i in -600..=600 {
            for j in 0..=2200 {
                let q = Point2D::new(i as f64 * step, j as f64 * step);
                if in_annuli(q) {
                    region.push(q);
                }
            }
        }
        assert!(!region.is_empty());
        let nearest = region
            .iter()
            .map(|q| q.distance(pair.q))
            .fold(f64::INFINITY, f64::min);
        assert!(
            nearest <= step,
            "candidate {:?} is {nearest} from region",
            pair.q
        );
        // Region extent agrees with the constructed segment lengths.
        let ymax = region.iter().map(|q| q.y).fold(f64::MIN, f64::max);
        let ymin = region
            .iter()
            .filter(|q| q.x.abs() < step)
            .map(|q| q.y)
            .fold(f64::MAX, f64::min);
        assert!((ymax - ymin - pair.nn_length).abs() < 0.02);
    }

    #[test]
    fn case_two_chord() {
        let p = params(10.0, 1.0);
        let pair =
            candidate_positions(Point2D::new(-9.5, 0.0), Point2D::new(9.5, 0.0), &p).unwrap();
        let chord = 2.0 * (100.0f64 - 90.25).sqrt();
        assert!((pair.nn_length - 6.2450).abs() < 1e-4);
        assert!((pair.nn_length - chord).abs() < 1e-12);
        // The inner-outer corners no longer meet: the candidates coincide.
        assert!(pair.q.approx_eq(pair.q_mirror));
    }

    #[test]
    fn coincident_beacon_points_rejected() {
        let p = params(10.0, 1.0);
        assert_eq!(
            candidate_positions(Point2D::ORIGIN, Point2D::ORIGIN, &p),
            Err(Error::NoValidIntersection)
        );
        assert_eq!(
            candidate_positions(Point2D::ORIGIN, Point2D::new(20.5, 0.0), &p),
            Err(Error::NoValidIntersection)
        );
        assert_eq!(
            Error::NoValidIntersection.to_string(),
            "no valid intersection"
        );
    }

    #[test]
    fn error_bound_examples() {
        let p = params(10.0, 1.0);
        let b = error_bound(9.0, &p).unwrap();
        assert!((b - 1.0556).abs() < 1e-4);
        let b = error_bound(18.0, &p).unwrap();
        assert!((b - 4.3589).abs() < 1e-4);
        assert!(b < 5.0);
        assert_eq!(error_bound(25.0, &p), Err(Error::OutOfTheoremRange));
        assert_eq!(error_bound(8.5, &p), Err(Error::OutOfTheoremRange));
    }

    #[test]
    fn spacing_constants() {
        assert!((three_halves_reach_spacing_ratio() - 0.1752).abs() < 1e-4);
        assert!((right_angle_spacing_ratio() - 1.0 / 3.4142).abs() < 1e-4);
        assert!(outer_chord_spacing_ratio() > SAFE_SPACING_RATIO);
    }

    fn hex() -> Lrh {
        lrh_from_vertex(Point2D::ORIGIN, Point2D::new(10.0, 0.0)).unwrap()
    }

    fn hearing(truth: Point2D, schedule: &[Point2D], r: f64) -> Vec<Point2D> {
        schedule
            .iter()
            .copied()
            .filter(|s| truth.distance(*s) <= r)
            .collect()
    }

    #[test]
    fn schedule_layout() {
        let s = lrh_schedule(&hex(), 1.0).unwrap();
        assert_eq!(s.len(), 61);
        let h = hex();
        for v in h.vertices {
            assert!(s.iter().any(|p| p.approx_eq(v)));
        }
        assert_eq!(lrh_schedule(&h, 3.0), Err(Error::InvalidBeaconSpacing));
    }

    #[test]
    fn disambiguation_from_ground_truth() {
        let lrh = hex();
        let schedule = lrh_schedule(&lrh, 1.0).unwrap();
        let truth = Point2D::new(12.0, 3.0);
        let received = hearing(truth, &schedule, 10.0);
        // Candidate pair with the truth on one side and a far mirror.
        let pair = CandidatePair {
            q: truth,
            q_mirror: Point2D::new(25.0, -10.0),
            nn_length: 1.0,
            tt_length: 1.0,
        };
        assert_eq!(
            disambiguate(&pair, &received, &lrh, &schedule, 10.0),
            Ok(truth)
        );

        let swapped = CandidatePair {
            q: pair.q_mirror,
            q_mirror: pair.q,
            ..pair
        };
        let mirror_set = hearing(swapped.q_mirror, &schedule, 10.0);
        assert_eq!(
            disambiguate(&swapped, &mirror_set, &lrh, &schedule, 10.0),
            Ok(truth)
        );

        let near = CandidatePair {
            q: Point2D::new(5.0, 0.0),
            q_mirror: Point2D::new(-5.0, 0.0),
            ..pair
        };
        assert_eq!(
            disambiguate(&near, &[], &lrh, &schedule, 10.0),
            Err(Error::InconsistentObservation)
        );
    }

    #[test]
    fn ambiguous_when_both_match() {
        let lrh = hex();
        let schedule = lrh_schedule(&lrh, 1.0).unwrap();
        // Two far-away points hear nothing.
        let pair = CandidatePair {
            q: Point2D::new(100.0, 0.0),
            q_mirror: Point2D::new(-100.0, 0.0),
            nn_length: 0.0,
            tt_length: 0.0,
        };
        assert_eq!(
            disambiguate(&pair, &[], &lrh, &schedule, 10.0),
            Err(Error::AmbiguousPosition)
        );
    }

    #[test]
    fn localizes_neighbor_of_hexagon_center() {
        let p = params(10.0, 1.0);
        let lrh = hex();
        let truth = Point2D::new(6.0, 7.0);
        let log: Vec<BeaconRecord> = lrh_schedule(&lrh, 1.0)
            .unwrap()
            .into_iter()
            .enumerate()
            .filter(|(_, s)| truth.distance(*s) <= 10.0)
            .map(|(i, s)| BeaconRecord {
                time: 100.0 + i as f64,
                anchor_position: s,
                lrh: Some(lrh),
            })
            .collect();
        let est = localize_from_log(&log, &p).unwrap();
        assert!(est.separation.unwrap() >= 9.0);
        assert!(est.position.distance(truth) < 5.0);
        assert!(est.position.distance(truth) <= est.error_bound.unwrap() + 1e-9);
    }

    #[test]
    fn whole_traversal_pins_the_center() {
        let p = params(10.0, 1.0);
        let lrh = Lrh::with_orientation(Point2D::new(3.0, 4.0), 10.0, 0.3).unwrap();
        let log: Vec<BeaconRecord> = lrh_schedule(&lrh, 1.0)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, s)| BeaconRecord {
                time: i as f64,
                anchor_position: s,
                lrh: Some(lrh),
            })
            .collect();
        let est = localize_from_log(&log, &p).unwrap();
        assert_eq!(est.position, lrh.center);
        assert_eq!(est.separation, None);
    }

    #[test]
    fn no_hexagon_no_estimate() {
        let p = params(10.0, 1.0);
        let log: Vec<_> = [0.0, 1.0, 10.0].into_iter().map(rec).collect();
        assert_eq!(
            localize_from_log(&log, &p),
            Err(Error::InsufficientBeaconPoints)
        );
    }
}
