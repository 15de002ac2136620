use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GeometryError, DISK_MARGIN};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point of the open unit disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    z: Complex64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { z: Complex64::new(0.0, 0.0) };

    pub fn new(re: f64, im: f64) -> Result<Self, GeometryError> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self, GeometryError> {
        if !(z.norm() < 1.0 - DISK_MARGIN) {
            return Err(GeometryError::OutsideDisk { re: z.re, im: z.im });
        }
        Ok(Self { z })
    }

    /// Point at hyperbolic distance `r` from the origin in direction `angle`.
    pub fn polar(r: f64, angle: f64) -> Result<Self, GeometryError> {
        Self::from_complex(Complex64::from_polar((r / 2.0).tanh(), angle))
    }

    pub fn complex(&self) -> Complex64 {
        self.z
    }

    pub fn re(&self) -> f64 {
        self.z.re
    }

    pub fn im(&self) -> f64 {
        self.z.im
    }

    pub(crate) fn to_uhp(self) -> Complex64 {
        I * (1.0 + self.z) / (1.0 - self.z)
    }

    /// Inverse Cayley map. Points are clamped just inside the disk, which
    /// only matters for half-plane points further than ~28 from `i`.
    pub(crate) fn from_uhp(z: Complex64) -> Self {
        let w = (z - I) / (z + I);
        let n = w.norm();
        let limit = 1.0 - 2.0 * DISK_MARGIN;
        if n < limit {
            Self { z: w }
        } else {
            Self { z: w * (limit / n) }
        }
    }
}

/// Hyperbolic distance in the disk model.
pub fn dist(p: DiskPoint, q: DiskPoint) -> f64 {
    let num = (p.z - q.z).norm();
    if num == 0.0 {
        return 0.0;
    }
    let fp = (1.0 - p.z.norm()) * (1.0 + p.z.norm());
    let fq = (1.0 - q.z.norm()) * (1.0 + q.z.norm());
    2.0 * (num / (fp * fq).sqrt()).asinh()
}

/// Hyperbolic distance between two upper half-plane points.
pub(crate) fn dist_uhp(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    if num == 0.0 {
        return 0.0;
    }
    2.0 * (num / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// A point of the boundary circle, stored as an angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct BoundaryAngle(f64);

impl BoundaryAngle {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        Self(t)
    }

    pub fn radians(&self) -> f64 {
        self.0
    }

    /// Point `e^{iθ}` of the unit circle.
    pub fn on_circle(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }

    /// Circular distance to another boundary point, in `[0, π]`.
    pub fn separation(&self, other: BoundaryAngle) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(TAU - d)
    }

    pub(crate) fn to_proj(self) -> ProjPoint {
        let half = self.0 / 2.0;
        ProjPoint::new(-half.cos(), half.sin())
    }
}

/// Point of the half-plane boundary `R ∪ {∞}` in homogeneous coordinates
/// `(p : q)`, normalized to unit length. Represents the real number `p / q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct ProjPoint {
    pub p: f64,
    pub q: f64,
}

impl ProjPoint {
    pub const ZERO: ProjPoint = ProjPoint { p: 0.0, q: 1.0 };
    pub const INFINITY: ProjPoint = ProjPoint { p: 1.0, q: 0.0 };

    pub fn new(p: f64, q: f64) -> Self {
        let n = p.hypot(q);
        Self { p: p / n, q: q / n }
    }

    /// Disk angle of the Cayley image of this point.
    pub fn to_angle(self) -> BoundaryAngle {
        BoundaryAngle::new(2.0 * self.q.atan2(-self.p))
    }

    /// True when the two homogeneous vectors span the same line, compared
    /// through the sine of the angle between them.
    pub fn approx_eq(self, other: ProjPoint, tol: f64) -> bool {
        (self.p * other.q - self.q * other.p).abs() <= tol
    }
}
