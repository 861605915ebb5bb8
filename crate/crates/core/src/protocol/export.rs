use std::io::Write;

use crate::geom::Point2D;

use super::sim::Event;

/// `time,actor,event,payload` lines, one per event.
pub fn write_event_log_csv<W: Write>(events: &[Event], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time", "actor", "event", "payload"])?;
    for e in events {
        w.write_record([
            format!("{:.6}", e.time),
            e.actor.to_string(),
            e.event.clone(),
            e.payload.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Two-column `x,y` waypoint list.
pub fn write_path_trace_csv<W: Write>(trace: &[Point2D], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y"])?;
    for p in trace {
        w.write_record([format!("{:.6}", p.x), format!("{:.6}", p.y)])?;
    }
    w.flush()?;
    Ok(())
}
