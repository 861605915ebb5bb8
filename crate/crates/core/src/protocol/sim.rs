use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{polyline_length, Circle, Lrh, Point2D};
use crate::localizer::{
    candidate_positions, error_bound, extract_beacon_points_at, localize_from_log, lrh_schedule,
    BeaconPoint, BeaconRecord, LocalizationParams,
};

use super::network::{Network, SensorId, SensorNode};

/// Random-walk segments allowed before bootstrap gives up.
pub const DEFAULT_BOOTSTRAP_BUDGET: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnchorMode {
    Bootstrap,
    LrhTraversal,
    Approach,
    AwaitDestination,
    Transit,
    Done,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorState {
    pub position: Point2D,
    pub stack: Vec<SensorId>,
    pub mode: AnchorMode,
    pub path_trace: Vec<Point2D>,
    pub current_lrh: Option<Lrh>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Actor {
    Anchor,
    Sensor(SensorId),
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actor::Anchor => write!(f, "anchor"),
            Actor::Sensor(id) => write!(f, "sensor:{id}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlnReply {
    pub id: SensorId,
    pub nln_degree: usize,
    pub position: Point2D,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    /// `owner` is the sensor the hexagon is built around.
    Beacon {
        position: Point2D,
        lrh: Option<Lrh>,
        owner: Option<SensorId>,
    },
    PositionAnnounce {
        position: Point2D,
    },
    NlnRequest,
    NlnReply(NlnReply),
    NextDestination {
        target: SensorId,
        position: Point2D,
        nln_degree: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub sender: Actor,
    pub payload: Payload,
}

/// One line of the replay log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub actor: Actor,
    pub event: String,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapOutcome {
    pub sensor: SensorId,
    pub anchor_end: Point2D,
    pub path: Vec<Point2D>,
    pub path_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationResult {
    pub estimates: Vec<Option<Point2D>>,
    pub errors: Vec<Option<f64>>,
    pub path_trace: Vec<Point2D>,
    pub total_path_length: f64,
    pub lrh_count: usize,
    pub events: Vec<Event>,
    pub bootstrap_sensor: SensorId,
    /// Random-walk length before the first sensor was localized.
    pub bootstrap_length: f64,
    /// Straight move from the end of the walk onto the first hexagon.
    pub initial_approach_length: f64,
    /// Sensors in push order.
    pub pushed: Vec<SensorId>,
    /// Times a destination was chosen that had already been visited.
    pub anomalies: usize,
    pub final_stack_len: usize,
}

impl LocalizationResult {
    pub fn localized_fraction(&self) -> f64 {
        let n = self.estimates.len();
        self.estimates.iter().filter(|e| e.is_some()).count() as f64 / n.max(1) as f64
    }

    pub fn max_error(&self) -> Option<f64> {
        self.errors.iter().flatten().copied().reduce(f64::max)
    }

    pub fn mean_error(&self) -> Option<f64> {
        let errs: Vec<f64> = self.errors.iter().flatten().copied().collect();
        (!errs.is_empty()).then(|| errs.iter().sum::<f64>() / errs.len() as f64)
    }

    /// Walk plus the approach onto the first hexagon.
    pub fn bootstrap_allowance(&self) -> f64 {
        self.bootstrap_length + self.initial_approach_length
    }
}

/// Argmax of the reported NLN-degrees, smallest id on ties.
pub fn select_next_destination(replies: &[NlnReply]) -> Option<NlnReply> {
    replies
        .iter()
        .copied()
        .min_by(|a, b| b.nln_degree.cmp(&a.nln_degree).then(a.id.cmp(&b.id)))
}

/// Worst-case traversal length: an LRH for every sensor but one plus a hop
/// of at most `2r` per edge but one, on top of the bootstrap allowance.
pub fn path_length_bound(net: &Network, bootstrap_allowance: f64) -> f64 {
    let v = net.len().saturating_sub(1) as f64;
    let e = net.edge_count().saturating_sub(1) as f64;
    6.0 * net.r * v + 2.0 * net.r * e + bootstrap_allowance
}

fn fmt_point(p: Point2D) -> String {
    format!("x={:.6};y={:.6}", p.x, p.y)
}

struct Simulator {
    params: LocalizationParams,
    sensors: Vec<SensorNode>,
    anchor: AnchorState,
    odometer: f64,
    next_broadcast: f64,
    events: Vec<Event>,
    lrh_count: usize,
    /// Hexagons walked so far and the sensor each was built around.
    lrh_owners: Vec<(Lrh, SensorId)>,
}

impl Simulator {
    fn new(net: &Network, params: LocalizationParams, start: Point2D) -> Self {
        Self {
            params,
            sensors: net.sensors.clone(),
            anchor: AnchorState {
                position: start,
                stack: Vec::new(),
                mode: AnchorMode::Bootstrap,
                path_trace: vec![start],
                current_lrh: None,
            },
            odometer: 0.0,
            next_broadcast: 0.0,
            events: Vec::new(),
            lrh_count: 0,
            lrh_owners: Vec::new(),
        }
    }

    fn now(&self) -> f64 {
        self.odometer / self.params.speed()
    }

    fn log(&mut self, actor: Actor, event: &str, payload: String) {
        self.events.push(Event {
            time: self.now(),
            actor,
            event: event.to_string(),
            payload,
        });
    }

    /// Delivers a beacon to every sensor within range.
    fn broadcast(&mut self, position: Point2D, odometer: f64, lrh: Option<Lrh>) {
        let time = odometer / self.params.speed();
        let r = self.params.r;
        for s in &mut self.sensors {
            if s.true_position.distance(position) <= r {
                s.beacon_log.push(BeaconRecord {
                    time,
                    anchor_position: position,
                    lrh,
                });
            }
        }
    }

    /// Straight move, broadcasting every `u` of travel. A broadcast due
    /// exactly at the end of the move is deferred to the next movement.
    fn move_to(&mut self, target: Point2D) {
        let from = self.anchor.position;
        let len = from.distance(target);
        if len == 0.0 {
            return;
        }
        let start = self.odometer;
        let end = start + len;
        let eps = 1e-9 * self.params.u;
        while self.next_broadcast < end - eps {
            let at = self.next_broadcast;
            let p = from.lerp(target, (at - start) / len);
            self.broadcast(p, at, None);
            self.next_broadcast += self.params.u;
        }
        self.odometer = end;
        self.anchor.position = target;
        self.anchor.path_trace.push(target);
    }

    /// Full perimeter from the first vertex back to it, broadcasting the
    /// hexagon schedule with the hexagon attached.
    fn traverse_lrh(&mut self, lrh: Lrh) -> Result<()> {
        let schedule = lrh_schedule(&lrh, self.params.u)?;
        let start = self.odometer;
        for (i, p) in schedule.iter().enumerate() {
            self.broadcast(*p, start + i as f64 * self.params.u, Some(lrh));
        }
        self.anchor.path_trace.extend(lrh.vertices.iter().skip(1));
        self.anchor.path_trace.push(lrh.vertices[0]);
        self.odometer = start + (schedule.len() - 1) as f64 * self.params.u;
        self.next_broadcast = self.odometer + self.params.u;
        self.anchor.position = lrh.vertices[0];
        Ok(())
    }

    fn set_estimate(&mut self, id: SensorId, position: Point2D) {
        debug_assert!(self.sensors[id].estimated_position.is_none());
        self.sensors[id].estimated_position = Some(position);
        self.log(Actor::Sensor(id), "localized", fmt_point(position));
        // PositionAnnounce reaches exactly the unit-disk neighbors.
        let nbd: Vec<SensorId> = self.sensors[id].neighbor_ids.iter().copied().collect();
        for j in nbd {
            let s = &mut self.sensors[j];
            s.nln_degree = s.nln_degree.saturating_sub(1);
        }
    }

    /// Sensors use hexagons built around one of their neighbors, and only
    /// pairs covered by the error bound; otherwise they wait for a later
    /// hexagon.
    fn try_localize_all(&mut self) {
        for id in 0..self.sensors.len() {
            let s = &self.sensors[id];
            if s.is_localized() {
                continue;
            }
            let log: Vec<BeaconRecord> = s
                .beacon_log
                .iter()
                .filter(|b| {
                    b.lrh.is_some_and(|h| {
                        self.lrh_owners
                            .iter()
                            .any(|(o, owner)| *o == h && s.neighbor_ids.contains(owner))
                    })
                })
                .cloned()
                .collect();
            if log.is_empty() {
                continue;
            }
            if let Ok(est) = localize_from_log(&log, &self.params) {
                if est.error_bound.is_some() {
                    self.set_estimate(id, est.position);
                }
            }
        }
    }

    fn bootstrap(&mut self, rng: &mut ChaCha8Rng, budget: usize) -> Result<SensorId> {
        let r = self.params.r;
        let (mut lo, mut hi) = (self.anchor.position, self.anchor.position);
        for s in &self.sensors {
            let p = s.true_position;
            lo = Point2D::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2D::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        // The walk must be able to leave every sensor's range, otherwise a
        // tight cluster never hears silence.
        let pad = Point2D::new(1.5 * r, 1.5 * r);
        let (lo, hi) = (lo - pad, hi + pad);

        self.anchor.mode = AnchorMode::Bootstrap;
        self.log(
            Actor::Anchor,
            "bootstrap_start",
            fmt_point(self.anchor.position),
        );
        for _ in 0..budget {
            let theta: f64 = rng.gen_range(0.0..TAU);
            let mut dir = Point2D::new(theta.cos(), theta.sin());
            let mut remaining = 2.0 * r;
            while remaining > 1e-12 {
                let p = self.anchor.position;
                let hit_x = wall_distance(p.x, dir.x, lo.x, hi.x);
                let hit_y = wall_distance(p.y, dir.y, lo.y, hi.y);
                let hit = hit_x.min(hit_y);
                if hit >= remaining {
                    self.move_to(p + dir * remaining);
                    remaining = 0.0;
                } else {
                    let q = p + dir * hit;
                    self.move_to(Point2D::new(q.x.clamp(lo.x, hi.x), q.y.clamp(lo.y, hi.y)));
                    remaining -= hit;
                    if hit_x <= hit {
                        dir.x = -dir.x;
                    }
                    if hit_y <= hit {
                        dir.y = -dir.y;
                    }
                }
            }
            let now = self.now();
            for id in 0..self.sensors.len() {
                let points = extract_beacon_points_at(
                    &self.sensors[id].beacon_log,
                    &self.params,
                    Some(now),
                )?;
                if let Some(pos) = bootstrap_estimate(&points, &self.params) {
                    self.set_estimate(id, pos);
                    return Ok(id);
                }
            }
        }
        Err(Error::BootstrapFailed)
    }

    fn localized_replies(&self, id: SensorId) -> Vec<NlnReply> {
        self.sensors[id]
            .neighbor_ids
            .iter()
            .filter_map(|&j| {
                let s = &self.sensors[j];
                s.estimated_position.map(|p| NlnReply {
                    id: j,
                    nln_degree: s.nln_degree,
                    position: p,
                })
            })
            .collect()
    }

    fn estimate_of(&self, id: SensorId) -> Point2D {
        self.sensors[id]
            .estimated_position
            .expect("stacked sensors are localized")
    }

    fn run(&mut self, first: SensorId) -> Result<(Vec<SensorId>, usize, f64)> {
        let r = self.params.r;
        let mut pushed = vec![first];
        let mut visited = BTreeSet::from([first]);
        let mut anomalies = 0;
        let mut initial_approach = None;
        self.anchor.stack.push(first);
        self.log(Actor::Anchor, "push", format!("id={first}"));

        let mut needs_lrh = true;
        while let Some(&top) = self.anchor.stack.last() {
            let est = self.estimate_of(top);
            if needs_lrh {
                self.anchor.mode = AnchorMode::Approach;
                let before = self.odometer;
                let vertex = Circle::new(est, r)?.closest_point(self.anchor.position);
                self.move_to(vertex);
                initial_approach.get_or_insert(self.odometer - before);

                let lrh = Lrh::from_vertex(est, vertex)?;
                self.anchor.mode = AnchorMode::LrhTraversal;
                self.anchor.current_lrh = Some(lrh);
                self.lrh_owners.push((lrh, top));
                self.log(
                    Actor::Anchor,
                    "lrh_start",
                    format!("id={top};{}", fmt_point(vertex)),
                );
                self.traverse_lrh(lrh)?;
                self.lrh_count += 1;
                self.anchor.current_lrh = None;
                self.log(Actor::Anchor, "lrh_end", format!("id={top}"));

                self.anchor.mode = AnchorMode::Transit;
                let target = self.anchor.position.step_towards(est, 0.5 * r);
                self.move_to(target);
                self.try_localize_all();
            }

            self.anchor.mode = AnchorMode::AwaitDestination;
            self.log(Actor::Anchor, "nln_request", format!("to={top}"));
            let replies = self.localized_replies(top);
            let choice = select_next_destination(&replies);
            let payload = match choice {
                Some(c) => format!("id={};nln={};{}", c.id, c.nln_degree, fmt_point(c.position)),
                None => "none".to_string(),
            };
            self.log(Actor::Sensor(top), "next_destination", payload);

            match choice {
                Some(c) if c.nln_degree > 0 && !visited.contains(&c.id) => {
                    visited.insert(c.id);
                    pushed.push(c.id);
                    self.anchor.stack.push(c.id);
                    self.log(Actor::Anchor, "push", format!("id={}", c.id));
                    needs_lrh = true;
                    continue;
                }
                Some(c) if c.nln_degree > 0 => {
                    anomalies += 1;
                    self.log(Actor::Anchor, "anomaly", format!("revisit id={}", c.id));
                }
                _ => {}
            }

            self.anchor.stack.pop();
            self.log(Actor::Anchor, "pop", format!("id={top}"));
            if let Some(&new_top) = self.anchor.stack.last() {
                self.anchor.mode = AnchorMode::Transit;
                let est = self.estimate_of(new_top);
                let d = self.anchor.position.distance(est);
                if d > 0.5 * r {
                    let target = self.anchor.position.step_towards(est, d - 0.5 * r);
                    self.move_to(target);
                }
                needs_lrh = false;
            }
        }
        self.anchor.mode = AnchorMode::Done;
        self.log(
            Actor::Anchor,
            "done",
            format!("lrh_count={}", self.lrh_count),
        );
        Ok((pushed, anomalies, initial_approach.unwrap_or(0.0)))
    }
}

/// Distance along `dir` from `p` to the first wall of `[lo, hi]`.
fn wall_distance(p: f64, dir: f64, lo: f64, hi: f64) -> f64 {
    if dir > 0.0 {
        ((hi - p) / dir).max(0.0)
    } else if dir < 0.0 {
        ((lo - p) / dir).max(0.0)
    } else {
        f64::INFINITY
    }
}

/// Beacon points considered by the bootstrap, most recent last.
const BOOTSTRAP_WINDOW: usize = 12;

/// Three-beacon-point estimate used before any hexagon exists.
///
/// Pairs of recent beacon points are tried widest first. A pair gives two
/// mirror candidates; the point farthest from the pair's line decides,
/// provided the candidates fit its annulus clearly differently. The widest
/// pair alone is not enough: near a full diameter the candidates merge and
/// never separate.
fn bootstrap_estimate(points: &[BeaconPoint], params: &LocalizationParams) -> Option<Point2D> {
    let (r, u) = (params.r, params.u);
    // A first record heard before `t0` of listening has no confirmed silence
    // in front of it.
    let pts: Vec<Point2D> = points
        .iter()
        .filter(|b| b.index > 0 || b.time >= params.t0)
        .map(|b| b.position)
        .collect();
    let pts = &pts[pts.len().saturating_sub(BOOTSTRAP_WINDOW)..];
    if pts.len() < 3 {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            pairs.push((pts[i].distance(pts[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let ring = r - 0.5 * u;
    pairs.into_iter().find_map(|(l, i, j)| {
        error_bound(l, params).ok()?;
        let (c1, c2) = (pts[i], pts[j]);
        let axis = (c2 - c1) * (1.0 / l);
        let third = pts.iter().copied().max_by(|a, b| {
            axis.cross(*a - c1)
                .abs()
                .total_cmp(&axis.cross(*b - c1).abs())
        })?;
        if axis.cross(third - c1).abs() < u {
            return None;
        }
        let pair = candidate_positions(c1, c2, params).ok()?;
        let fit = |q: Point2D| (q.distance(third) - ring).abs();
        let (fq, fm) = (fit(pair.q), fit(pair.q_mirror));
        if (fq - fm).abs() < 0.25 * r {
            return None;
        }
        Some(if fq < fm { pair.q } else { pair.q_mirror })
    })
}

fn check_params(params: &LocalizationParams) -> Result<()> {
    params.beacon_divisions().map(|_| ())
}

/// Random walk until one sensor can localize itself from three beacon points.
pub fn bootstrap_localize(
    net: &Network,
    params: &LocalizationParams,
    anchor_start: Point2D,
    seed: u64,
) -> Result<BootstrapOutcome> {
    bootstrap_localize_with_budget(net, params, anchor_start, seed, DEFAULT_BOOTSTRAP_BUDGET)
}

pub fn bootstrap_localize_with_budget(
    net: &Network,
    params: &LocalizationParams,
    anchor_start: Point2D,
    seed: u64,
    budget: usize,
) -> Result<BootstrapOutcome> {
    check_params(params)?;
    let mut sim = Simulator::new(net, *params, anchor_start);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sensor = sim.bootstrap(&mut rng, budget)?;
    Ok(BootstrapOutcome {
        sensor,
        anchor_end: sim.anchor.position,
        path_length: sim.odometer,
        path: sim.anchor.path_trace,
    })
}

/// Localizes the whole network with a single mobile anchor.
pub fn run_localization(
    net: &Network,
    params: &LocalizationParams,
    anchor_start: Point2D,
    seed: u64,
) -> Result<LocalizationResult> {
    check_params(params)?;
    if (net.r - params.r).abs() > 1e-9 * params.r {
        return Err(crate::error::invalid("network and anchor ranges differ"));
    }
    let mut sim = Simulator::new(net, *params, anchor_start);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = sim.bootstrap(&mut rng, DEFAULT_BOOTSTRAP_BUDGET)?;
    let bootstrap_length = sim.odometer;
    let (pushed, anomalies, initial_approach_length) = sim.run(first)?;
    let total_path_length = polyline_length(&sim.anchor.path_trace)?;
    Ok(LocalizationResult {
        estimates: sim.sensors.iter().map(|s| s.estimated_position).collect(),
        errors: sim.sensors.iter().map(SensorNode::error).collect(),
        total_path_length,
        path_trace: sim.anchor.path_trace,
        lrh_count: sim.lrh_count,
        events: sim.events,
        bootstrap_sensor: first,
        bootstrap_length,
        initial_approach_length,
        pushed,
        anomalies,
        final_stack_len: sim.anchor.stack.len(),
    })
}
