use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geom::Point2D;
use crate::localizer::BeaconRecord;

pub type SensorId = usize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorNode {
    pub id: SensorId,
    pub true_position: Point2D,
    pub estimated_position: Option<Point2D>,
    pub neighbor_ids: BTreeSet<SensorId>,
    /// Neighbors not yet localized, as far as this sensor has been told.
    pub nln_degree: usize,
    pub beacon_log: Vec<BeaconRecord>,
}

impl SensorNode {
    pub fn is_localized(&self) -> bool {
        self.estimated_position.is_some()
    }

    /// Error of the estimate against the ground truth.
    pub fn error(&self) -> Option<f64> {
        self.estimated_position
            .map(|e| e.distance(self.true_position))
    }
}

/// Sensors joined by the unit-disk relation of radius `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub sensors: Vec<SensorNode>,
    pub r: f64,
}

impl Network {
    /// Builds the unit-disk graph; sensor ids are positions in `positions`.
    pub fn new(positions: &[Point2D], r: f64) -> Result<Self> {
        if positions.is_empty() {
            return Err(invalid("network needs at least one sensor"));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("communication range must be positive"));
        }
        if positions.iter().any(|p| !p.is_finite()) {
            return Err(invalid("sensor positions must be finite"));
        }
        let adjacency = unit_disk_adjacency(positions, r);
        if !is_connected(&adjacency) {
            return Err(Error::DisconnectedNetwork);
        }
        let sensors = positions
            .iter()
            .zip(adjacency)
            .enumerate()
            .map(|(id, (&p, nbd))| SensorNode {
                id,
                true_position: p,
                estimated_position: None,
                nln_degree: nbd.len(),
                neighbor_ids: nbd,
                beacon_log: Vec::new(),
            })
            .collect();
        Ok(Self { sensors, r })
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.sensors
            .iter()
            .map(|s| s.neighbor_ids.len())
            .sum::<usize>()
            / 2
    }

    pub fn positions(&self) -> Vec<Point2D> {
        self.sensors.iter().map(|s| s.true_position).collect()
    }

    /// Every sensor has degree at most two and the graph is a single path.
    pub fn is_line_graph(&self) -> bool {
        let n = self.len();
        n == 1
            || (self.edge_count() == n - 1
                && self.sensors.iter().all(|s| s.neighbor_ids.len() <= 2))
    }
}

pub fn unit_disk_adjacency(positions: &[Point2D], r: f64) -> Vec<BTreeSet<SensorId>> {
    let mut adj = vec![BTreeSet::new(); positions.len()];
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            if positions[i].distance(positions[j]) <= r {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    adj
}

pub fn is_connected(adjacency: &[BTreeSet<SensorId>]) -> bool {
    if adjacency.is_empty() {
        return true;
    }
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                queue.push_back(j);
            }
        }
    }
    count == adjacency.len()
}
