//! Floating-point hyperbolic geometry in the Poincaré disk.
//!
//! Isometries are stored as real `SL(2, R)` matrices acting on the upper
//! half-plane and conjugated to the disk through the fixed Cayley map
//! `w = (z - i) / (z + i)`. Everything public speaks disk coordinates; the
//! half-plane representation only leaks out inside the crate, where the
//! lift-counting code needs well-conditioned local frames.

mod frame;
mod geodesic;
mod mobius;
mod point;

pub use geodesic::{cross, cross_with, crosses_segment, crosses_segment_with, dist_point_geodesic, Geodesic, Segment, MIN_SEGMENT_LENGTH};
pub use mobius::{IsometryKind, MobiusMap};
pub use point::{dist, BoundaryAngle, DiskPoint};

pub(crate) use frame::{scaling, Hit, SegmentFrame};
pub(crate) use point::{dist_uhp, ProjPoint};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Two boundary points closer than this (in radians) are treated as equal.
pub const ANGULAR_TOLERANCE: f64 = 1e-9;

/// A geodesic meeting a segment's line at an angle whose sine is below this
/// is treated as sharing an endpoint with that line, not as crossing it.
pub const TRANSVERSE_TOLERANCE: f64 = 1e-6;

/// `||tr| - 2|` below this is classified parabolic (or identity).
pub const TRACE_TOLERANCE: f64 = 1e-9;

/// A geodesic crossing a segment within this hyperbolic distance of an
/// endpoint is treated as passing through that endpoint.
pub const POSITION_TOLERANCE: f64 = 1e-7;

/// Points of the disk must satisfy `|z| < 1 - DISK_MARGIN`.
pub const DISK_MARGIN: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("isometry is not hyperbolic (trace {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("matrix has non-positive determinant {det}")]
    InvalidMatrix { det: f64 },
    #[error("point {re} + {im}i is not inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },
    #[error("geodesic endpoints {0} and {1} coincide")]
    DegenerateGeodesic(f64, f64),
}

/// Comparison tolerances shared by the crossing predicates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub angular: f64,
    pub transverse: f64,
    pub position: f64,
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            angular: ANGULAR_TOLERANCE,
            transverse: TRANSVERSE_TOLERANCE,
            position: POSITION_TOLERANCE,
            trace: TRACE_TOLERANCE,
        }
    }
}
