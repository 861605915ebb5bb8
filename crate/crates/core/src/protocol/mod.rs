//! Single mobile anchor localizing a connected network hexagon by hexagon.
//!
//! The anchor bootstraps one sensor with a random walk, then runs a
//! depth-first exploration: traverse a hexagon around the sensor on top of
//! its stack, let the sensor pick the neighbor with the most unlocalized
//! neighbors, and either move there or backtrack.

mod export;
mod network;
mod sim;

pub use export::{write_event_log_csv, write_path_trace_csv};
pub use network::{is_connected, unit_disk_adjacency, Network, SensorId, SensorNode};
pub use sim::{
    bootstrap_localize, bootstrap_localize_with_budget, path_length_bound, run_localization,
    select_next_destination, Actor, AnchorMode, AnchorState, BootstrapOutcome, Event,
    LocalizationResult, Message, NlnReply, Payload, DEFAULT_BOOTSTRAP_BUDGET,
};
