use serde::{Deserialize, Serialize};

use super::frame::{geodesic_frame, SegmentFrame};
use super::point::ProjPoint;
use super::{dist, BoundaryAngle, DiskPoint, GeometryError, Tolerances, ANGULAR_TOLERANCE};

/// Unoriented complete geodesic, stored by its endpoints with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    lo: BoundaryAngle,
    hi: BoundaryAngle,
}

impl Geodesic {
    pub fn new(u: BoundaryAngle, v: BoundaryAngle) -> Result<Self, GeometryError> {
        if u.separation(v) < ANGULAR_TOLERANCE {
            return Err(GeometryError::DegenerateGeodesic(u.radians(), v.radians()));
        }
        Ok(Self::new_unchecked(u, v))
    }

    pub fn from_angles(u: f64, v: f64) -> Result<Self, GeometryError> {
        Self::new(BoundaryAngle::new(u), BoundaryAngle::new(v))
    }

    pub(crate) fn new_unchecked(u: BoundaryAngle, v: BoundaryAngle) -> Self {
        if u.radians() <= v.radians() {
            Self { lo: u, hi: v }
        } else {
            Self { lo: v, hi: u }
        }
    }

    pub(crate) fn from_proj(u: ProjPoint, v: ProjPoint) -> Self {
        Self::new_unchecked(u.to_angle(), v.to_angle())
    }

    pub fn endpoints(&self) -> (BoundaryAngle, BoundaryAngle) {
        (self.lo, self.hi)
    }

    pub(crate) fn proj_endpoints(&self) -> (ProjPoint, ProjPoint) {
        (self.lo.to_proj(), self.hi.to_proj())
    }

    /// Equality of endpoint sets, each endpoint within `tol` on the circle.
    pub fn approx_eq(&self, other: &Geodesic, tol: f64) -> bool {
        let straight = self.lo.separation(other.lo) <= tol && self.hi.separation(other.hi) <= tol;
        let swapped = self.lo.separation(other.hi) <= tol && self.hi.separation(other.lo) <= tol;
        straight || swapped
    }

    /// Point at signed distance `s` from the foot of the perpendicular
    /// dropped from the origin, measured towards `hi`.
    pub fn point_at(&self, s: f64) -> DiskPoint {
        let (u, v) = self.proj_endpoints();
        let frame = geodesic_frame(u, v);
        let w = frame.apply_uhp(num_complex::Complex64::new(0.0, 1.0));
        let foot = num_complex::Complex64::new(0.0, w.norm() * s.exp());
        DiskPoint::from_uhp(frame.inverse().apply_uhp(foot))
    }
}

/// Transversality of two geodesics: their endpoints strictly interleave.
/// Geodesics sharing an endpoint (within the angular tolerance) do not cross.
pub fn cross(g1: &Geodesic, g2: &Geodesic) -> bool {
    cross_with(g1, g2, ANGULAR_TOLERANCE)
}

pub fn cross_with(g1: &Geodesic, g2: &Geodesic, tol: f64) -> bool {
    let (a1, a2) = g1.endpoints();
    let (b1, b2) = g2.endpoints();
    for a in [a1, a2] {
        for b in [b1, b2] {
            if a.separation(b) <= tol {
                return false;
            }
        }
    }
    let inside = |b: BoundaryAngle| a1.radians() < b.radians() && b.radians() < a2.radians();
    inside(b1) != inside(b2)
}

/// A geodesic segment `[x, y]`, with each endpoint optionally excluded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x: DiskPoint,
    pub y: DiskPoint,
    pub include_x: bool,
    pub include_y: bool,
}

/// Segments shorter than this are rejected unless built with [`Segment::degenerate`].
pub const MIN_SEGMENT_LENGTH: f64 = 1e-9;

impl Segment {
    pub fn new(x: DiskPoint, y: DiskPoint, include_x: bool, include_y: bool) -> Result<Self, GeometryError> {
        if dist(x, y) < MIN_SEGMENT_LENGTH {
            return Err(GeometryError::DegenerateGeodesic(0.0, 0.0));
        }
        Ok(Self { x, y, include_x, include_y })
    }

    /// `[x, y]`, both endpoints included.
    pub fn closed(x: DiskPoint, y: DiskPoint) -> Result<Self, GeometryError> {
        Self::new(x, y, true, true)
    }

    /// `[x, y)`.
    pub fn half_open(x: DiskPoint, y: DiskPoint) -> Result<Self, GeometryError> {
        Self::new(x, y, true, false)
    }

    /// The zero-length segment `[x, x]`, crossed by nothing.
    pub fn degenerate(x: DiskPoint) -> Self {
        Self { x, y: x, include_x: true, include_y: true }
    }

    pub fn is_degenerate(&self) -> bool {
        dist(self.x, self.y) < MIN_SEGMENT_LENGTH
    }

    pub fn length(&self) -> f64 {
        dist(self.x, self.y)
    }

    /// The midpoint of the segment.
    pub fn midpoint(&self) -> DiskPoint {
        let frame = SegmentFrame::between(self.x.to_uhp(), self.y.to_uhp());
        DiskPoint::from_uhp(frame.to_local.inverse().apply_uhp(num_complex::Complex64::new(0.0, 1.0)))
    }

    /// The complete geodesic through both endpoints.
    pub fn chord(&self) -> Result<Geodesic, GeometryError> {
        let frame = SegmentFrame::between(self.x.to_uhp(), self.y.to_uhp());
        let back = frame.to_local.inverse();
        Geodesic::new(back.apply_proj(ProjPoint::ZERO).to_angle(), back.apply_proj(ProjPoint::INFINITY).to_angle())
    }

    pub(crate) fn frame(&self) -> SegmentFrame {
        SegmentFrame::between(self.x.to_uhp(), self.y.to_uhp())
    }
}

/// Whether `g` is transverse to `s`, honoring the inclusion flags.
///
/// The chord through both endpoints never counts, and neither does a
/// geodesic passing through an excluded endpoint.
pub fn crosses_segment(g: &Geodesic, s: &Segment) -> bool {
    crosses_segment_with(g, s, &Tolerances::default())
}

pub fn crosses_segment_with(g: &Geodesic, s: &Segment, tol: &Tolerances) -> bool {
    if s.is_degenerate() {
        return false;
    }
    let frame = s.frame();
    let (u, v) = g.proj_endpoints();
    let lu = frame.to_local.apply_proj(u);
    let lv = frame.to_local.apply_proj(v);
    frame.counts(lu, lv, s.include_x, s.include_y, tol)
}

/// Distance from a point to a complete geodesic.
pub fn dist_point_geodesic(p: DiskPoint, g: &Geodesic) -> f64 {
    let (u, v) = g.proj_endpoints();
    let frame = geodesic_frame(u, v);
    let w = frame.apply_uhp(p.to_uhp());
    (w.re.abs() / w.im).asinh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::MobiusMap;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn geo(u: f64, v: f64) -> Geodesic {
        Geodesic::from_angles(u, v).unwrap()
    }

    #[test]
    fn interleaved_endpoints_cross() {
        assert!(cross(&geo(0.0, PI), &geo(FRAC_PI_2, 3.0 * FRAC_PI_2)));
    }

    #[test]
    fn nested_endpoints_do_not_cross() {
        assert!(!cross(&geo(0.0, PI), &geo(FRAC_PI_4, FRAC_PI_2)));
    }

    #[test]
    fn shared_endpoint_is_not_transverse() {
        assert!(!cross(&geo(0.0, PI), &geo(PI, 3.0 * FRAC_PI_2)));
        assert!(!cross(&geo(0.0, PI), &geo(PI + 1e-10, 3.0 * FRAC_PI_2)));
    }

    #[test]
    fn degenerate_geodesic_rejected() {
        assert!(Geodesic::from_angles(1.0, 1.0 + 1e-12).is_err());
        assert!(Geodesic::from_angles(0.0, std::f64::consts::TAU - 1e-12).is_err());
    }

    #[test]
    fn transverse_through_midpoint() {
        let x = DiskPoint::new(-0.5, 0.0).unwrap();
        let y = DiskPoint::new(0.5, 0.0).unwrap();
        let s = Segment::closed(x, y).unwrap();
        assert!(crosses_segment(&geo(FRAC_PI_2, 3.0 * FRAC_PI_2), &s));
        assert!(!crosses_segment(&geo(0.2, 1.0), &s));
    }

    #[test]
    fn chord_is_excluded() {
        let x = DiskPoint::new(-0.5, 0.0).unwrap();
        let y = DiskPoint::new(0.5, 0.0).unwrap();
        let s = Segment::closed(x, y).unwrap();
        assert!(!crosses_segment(&geo(0.0, PI), &s));
        let t = Segment::closed(DiskPoint::new(0.1, 0.3).unwrap(), DiskPoint::new(-0.4, 0.2).unwrap()).unwrap();
        assert!(!crosses_segment(&t.chord().unwrap(), &t));
    }

    #[test]
    fn endpoint_flags_control_geodesics_through_endpoints() {
        // Vertical diameter passes through the origin.
        let o = DiskPoint::ORIGIN;
        let y = DiskPoint::new(0.6, 0.0).unwrap();
        let g = geo(FRAC_PI_2, 3.0 * FRAC_PI_2);
        assert!(crosses_segment(&g, &Segment::new(o, y, true, true).unwrap()));
        assert!(!crosses_segment(&g, &Segment::new(o, y, false, true).unwrap()));
        assert!(!crosses_segment(&g, &Segment::new(y, o, true, false).unwrap()));
        assert!(crosses_segment(&g, &Segment::new(y, o, false, true).unwrap()));
    }

    #[test]
    fn degenerate_segment_is_never_crossed() {
        let s = Segment::degenerate(DiskPoint::ORIGIN);
        assert!(!crosses_segment(&geo(1.0, 4.0), &s));
        assert!(Segment::closed(DiskPoint::ORIGIN, DiskPoint::ORIGIN).is_err());
    }

    #[test]
    fn distance_to_geodesic() {
        let g = geo(FRAC_PI_2, 3.0 * FRAC_PI_2);
        assert!(dist_point_geodesic(DiskPoint::ORIGIN, &g).abs() < 1e-12);
        let p = DiskPoint::new(0.5, 0.0).unwrap();
        assert!((dist_point_geodesic(p, &g) - dist(DiskPoint::ORIGIN, p)).abs() < 1e-12);
        for s in [-2.0, 0.0, 1.5] {
            let q = g.point_at(s);
            assert!(dist_point_geodesic(q, &g) < 1e-9);
        }
    }

    #[test]
    fn point_at_measures_arclength() {
        let g = geo(0.3, 2.5);
        let p = g.point_at(-1.0);
        let q = g.point_at(2.0);
        assert!((dist(p, q) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn midpoint_splits_segment() {
        let s = Segment::closed(DiskPoint::new(0.1, 0.7).unwrap(), DiskPoint::new(-0.6, -0.2).unwrap()).unwrap();
        let m = s.midpoint();
        assert!((dist(s.x, m) - dist(m, s.y)).abs() < 1e-9);
        assert!((2.0 * dist(s.x, m) - s.length()).abs() < 1e-9);
    }

    #[test]
    fn crossing_is_isometry_invariant() {
        let m = MobiusMap::disk_rotation(1.1).compose(&MobiusMap::disk_translation(1.7));
        let g1 = geo(0.4, 3.3);
        let g2 = geo(2.0, 5.0);
        assert_eq!(cross(&g1, &g2), cross(&m.apply_geodesic(&g1), &m.apply_geodesic(&g2)));
    }
}
