use thiserror::Error;

use crate::geom::{GeomError, Point};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("segment {p1} -> {p2} is too short to carry a frame")]
    DegenerateSegment { p1: Point, p2: Point },
    #[error("point {0} lies on the demand set; the inverse-distance integral diverges")]
    SingularPoint(Point),
    #[error("point outside polygon: {0}")]
    ExteriorPoint(Point),
    #[error("start point {0} is not in the polygon interior")]
    StartNotInterior(Point),
    #[error("objective increased at iteration {iteration}: {before} -> {after}")]
    DescentViolated { iteration: usize, before: f64, after: f64 },
    #[error("sites {0} and {1} coincide")]
    DuplicateSites(usize, usize),
    #[error("k must be at least 1")]
    NoSites,
    #[error("grid resolution {resolution} leaves no sample inside the polygon")]
    EmptyGrid { resolution: f64 },
    #[error("cell {index}: {source}")]
    Cell {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid setting: {0}")]
    InvalidSetting(&'static str),
}
