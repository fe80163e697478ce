//! Planar computational geometry with exact predicates: Delaunay
//! triangulation, segment intersection, simplicity of closed polylines and
//! Hausdorff distance.

mod delaunay;
mod metric;
pub mod predicates;

use thiserror::Error;

pub use delaunay::{delaunay, hilbert_order, Triangulation};
pub use metric::{densify, hausdorff_distance, hausdorff_distance_with, is_simple_closed};
pub use predicates::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("need at least three distinct points")]
    TooFewPoints,
    #[error("all points are collinear")]
    AllCollinear,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("empty input")]
    Empty,
    #[error("triangulation invariant violated: {0}")]
    Internal(String),
}
