use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::Vec2;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point ({}, {}) has no unique closest boundary point", .0.x, .0.y)]
    NonUniqueProjection(Vec2),

    #[error("projection of ({}, {}) did not converge", .0.x, .0.y)]
    ProjectionFailed(Vec2),

    #[error("parallel contour through ({}, {}) leaves the Neumann region at arc length {arc_length}", point.x, point.y)]
    ContourLeavesNeumannRegion { point: Vec2, arc_length: f64 },

    #[error("point ({}, {}) lies outside the computational domain", .0.x, .0.y)]
    OutsideComputationalDomain(Vec2),

    #[error("cannot decompose B(x, {delta}) at ({}, {}) against the boundary", x.x, x.y)]
    RegionDecompositionFailure { x: Vec2, delta: f64 },

    #[error("node {node} has {found} neighbors, at least {required} are needed")]
    InsufficientNeighbors { node: usize, found: usize, required: usize },

    #[error("GMLS normal equations at node {node} are singular (condition estimate {cond:e})")]
    SingularNormalEquations { node: usize, cond: f64 },

    #[error("corner angle {0} is outside (0, pi)")]
    DegenerateCornerFrame(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("assembly failed at {} node(s); first failure at node {}: {}", .0.len(), .0[0].0, .0[0].1)]
    Assembly(Vec<(usize, Box<Error>)>),
}
