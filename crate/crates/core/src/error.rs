use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate hexagon")]
    DegenerateHexagon,
    #[error("coincident circles")]
    CoincidentCircles,
    #[error("empty polyline")]
    EmptyPolyline,
    #[error("unsorted beacon log")]
    UnsortedBeaconLog,
    #[error("no valid intersection")]
    NoValidIntersection,
    #[error("ambiguous position")]
    AmbiguousPosition,
    #[error("inconsistent observation")]
    InconsistentObservation,
    #[error("out of theorem range")]
    OutOfTheoremRange,
    #[error("invalid beacon spacing")]
    InvalidBeaconSpacing,
    #[error("insufficient beacon points")]
    InsufficientBeaconPoints,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("network is disconnected")]
    DisconnectedNetwork,
    #[error("bootstrap failed")]
    BootstrapFailed,
    #[error("could not generate connected network")]
    NetworkGeneration,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
