//! Range-free sensor localization with a mobile anchor that traverses
//! regular hexagons, plus coverage planning and path-length comparators.

pub mod comparators;
pub mod coverage;
pub mod error;
pub mod experiments;
pub mod geom;
pub mod localizer;
pub mod protocol;

pub use error::{Error, Result};
pub use geom::{Circle, Lrh, Point2D};
