use thiserror::Error;

use crate::ntxy::PedestrianId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate observation for pedestrian {pedestrian} at t={time}")]
    DuplicateObservation { pedestrian: PedestrianId, time: f64 },

    #[error("pedestrian {pedestrian}: time step {delta} is not a multiple of frame interval {frame_interval}")]
    Cadence {
        pedestrian: PedestrianId,
        delta: f64,
        frame_interval: f64,
    },

    #[error("pedestrian {pedestrian}: gap of {missing} frames between t={from} and t={to} exceeds the limit of {limit}")]
    Ungapfillable {
        pedestrian: PedestrianId,
        from: f64,
        to: f64,
        missing: usize,
        limit: usize,
    },

    #[error("invalid window [{start}, {end}]: start must be before end")]
    InvalidWindow { start: f64, end: f64 },

    #[error("pedestrian {pedestrian}: needs at least 2 observations, has {count}")]
    InsufficientObservations {
        pedestrian: PedestrianId,
        count: usize,
    },

    #[error("pedestrian {pedestrian}: frames are not contiguous at t={time}")]
    NonContiguous { pedestrian: PedestrianId, time: f64 },

    #[error("pedestrian {pedestrian}: stationary, uncomfortability and delay are undefined")]
    Stationary { pedestrian: PedestrianId },

    #[error("performance index undefined: {0}")]
    UndefinedPi(String),

    #[error("no pedestrians to aggregate")]
    NoPedestrians,

    #[error("pedestrian {pedestrian}: zero net displacement, direction undefined")]
    UndefinedDirection { pedestrian: PedestrianId },

    #[error("reports are not comparable: {0}")]
    IncomparableReports(String),

    #[error("invalid {what}: {message}")]
    InvalidParameter { what: &'static str, message: String },

    #[error("scenario key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            what,
            message: message.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
