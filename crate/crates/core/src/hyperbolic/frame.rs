//! Local coordinates adapted to a segment.
//!
//! A [`SegmentFrame`] is an isometry taking a segment onto the piece of the
//! imaginary axis between `i e^{-h}` and `i e^{h}` of the upper half-plane.
//! Crossing a segment then reduces to a sign test on the two endpoints of a
//! geodesic, and the crossing height is `sqrt(-uv)`.

use num_complex::Complex64;

use super::point::{dist_uhp, ProjPoint};
use super::{GeometryError, MobiusMap, Tolerances};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Isometry of the half-plane sending `u ↦ 0` and `v ↦ ∞`.
pub(crate) fn geodesic_frame(u: ProjPoint, v: ProjPoint) -> MobiusMap {
    let (mut a, mut b, c, d) = (u.q, -u.p, v.q, -v.p);
    if a * d - b * c < 0.0 {
        a = -a;
        b = -b;
    }
    MobiusMap::from_raw([a, b, c, d])
}

pub(crate) fn scaling(factor: f64) -> MobiusMap {
    let s = factor.sqrt();
    MobiusMap::from_raw([s, 0.0, 0.0, 1.0 / s])
}

/// Where a geodesic crosses a framed segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Hit {
    Start,
    Interior,
    End,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct SegmentFrame {
    pub to_local: MobiusMap,
    pub half_length: f64,
    /// Whether the scaling by `e^{2h}` in local coordinates is the conjugate
    /// of a group element, as it is on the axis of that element.
    pub periodic: bool,
}

impl SegmentFrame {
    /// Frame for the segment between two half-plane points.
    pub fn between(zx: Complex64, zy: Complex64) -> Self {
        let sy = zx.im.sqrt();
        let to_unit = MobiusMap::from_raw([1.0 / sy, -zx.re / sy, 0.0, sy]);
        let w = to_unit.apply_uhp(zy);
        let d = dist_uhp(I, w);
        if d < 1e-15 {
            return Self { to_local: to_unit, half_length: 0.0, periodic: false };
        }
        let phi = ((w - I) / (w + I)).arg();
        let rot = MobiusMap::disk_rotation(-phi);
        let to_local = scaling((-d / 2.0).exp()).compose(&rot).compose(&to_unit);
        Self { to_local, half_length: d / 2.0, periodic: false }
    }

    /// Frame for `[o, m·o]` where `o` is the disk origin.
    pub fn from_origin(m: &MobiusMap) -> Self {
        Self::between(I, m.orbit_of_i())
    }

    /// Frame for the fundamental segment `[x, m·x]` of a hyperbolic map on its
    /// axis, where `x` sits at signed distance `offset` (towards the attracting
    /// end) from the foot of the perpendicular from the origin.
    pub fn on_axis(m: &MobiusMap, offset: f64) -> Result<Self, GeometryError> {
        let (rep, att) = m.fixed_points()?;
        let (mut rp, mut rq) = (rep.p, rep.q);
        if att.p * rq - rp * att.q < 0.0 {
            rp = -rp;
            rq = -rq;
        }
        let to_axis = MobiusMap::from_raw([att.p, rp, att.q, rq]).inverse();
        let foot = to_axis.apply_uhp(I).norm() * offset.exp();
        let h = m.translation_length()? / 2.0;
        let to_local = scaling((-h).exp() / foot).compose(&to_axis);
        Ok(Self { to_local, half_length: h, periodic: true })
    }

    /// Same chord and length, start point moved forward by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self { to_local: scaling((-delta).exp()).compose(&self.to_local), ..*self }
    }

    pub fn local_start(&self) -> Complex64 {
        Complex64::new(0.0, (-self.half_length).exp())
    }

    pub fn local_end(&self) -> Complex64 {
        Complex64::new(0.0, self.half_length.exp())
    }

    /// Distance from a point in local coordinates to the segment.
    pub fn dist_to_segment(&self, z: Complex64) -> f64 {
        let h = self.half_length;
        let r = z.norm();
        if r >= (-h).exp() && r <= h.exp() {
            (z.re.abs() / z.im).asinh()
        } else {
            dist_uhp(z, self.local_start()).min(dist_uhp(z, self.local_end()))
        }
    }

    /// Log-height at which a geodesic with local endpoints `u`, `v` crosses
    /// the imaginary axis, or `None` when it is not transverse to it: the
    /// endpoints are on the same side, or the sine of the crossing angle is
    /// at most `transverse_tol`.
    ///
    /// The angle is read off after scaling the crossing to height 1, where the
    /// endpoints become `-1/r` and `r`; it is independent of the height, so
    /// crossings far along a long segment are judged like nearby ones.
    pub fn crossing_height(u: ProjPoint, v: ProjPoint, transverse_tol: f64) -> Option<f64> {
        if u.p == 0.0 || u.q == 0.0 || v.p == 0.0 || v.q == 0.0 || (u.p * u.q) * (v.p * v.q) > 0.0 {
            return None;
        }
        let (lu, lv) = (u.p.abs().ln() - u.q.abs().ln(), v.p.abs().ln() - v.q.abs().ln());
        let sine = 1.0 / (0.5 * (lu - lv)).cosh();
        if !(sine > transverse_tol) {
            return None;
        }
        Some(0.5 * (lu + lv))
    }

    /// Classifies a crossing height relative to the segment.
    pub fn locate(&self, t: f64, position_tol: f64) -> Option<Hit> {
        let h = self.half_length;
        if (t + h).abs() <= position_tol {
            Some(Hit::Start)
        } else if (t - h).abs() <= position_tol {
            Some(Hit::End)
        } else if -h < t && t < h {
            Some(Hit::Interior)
        } else {
            None
        }
    }

    pub fn hit(&self, u: ProjPoint, v: ProjPoint, tol: &Tolerances) -> Option<Hit> {
        if self.half_length <= 0.0 {
            return None;
        }
        Self::crossing_height(u, v, tol.transverse).and_then(|t| self.locate(t, tol.position))
    }

    /// Whether a geodesic with local endpoints `u`, `v` is counted for this
    /// segment under the inclusion flags.
    pub fn counts(&self, u: ProjPoint, v: ProjPoint, include_x: bool, include_y: bool, tol: &Tolerances) -> bool {
        match self.hit(u, v, tol) {
            Some(Hit::Interior) => true,
            Some(Hit::Start) => include_x,
            Some(Hit::End) => include_y,
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::DiskPoint;

    fn close(a: Complex64, b: Complex64) -> bool {
        dist_uhp(a, b) < 1e-9
    }

    #[test]
    fn between_maps_endpoints_to_standard_position() {
        let x = DiskPoint::new(0.3, -0.2).unwrap().to_uhp();
        let y = DiskPoint::new(-0.7, 0.55).unwrap().to_uhp();
        let f = SegmentFrame::between(x, y);
        assert!(close(f.to_local.apply_uhp(x), f.local_start()));
        assert!(close(f.to_local.apply_uhp(y), f.local_end()));
        assert!((2.0 * f.half_length - dist_uhp(x, y)).abs() < 1e-12);
    }

    #[test]
    fn from_origin_handles_far_points() {
        let m = MobiusMap::disk_rotation(0.7).compose(&MobiusMap::disk_translation(18.0));
        let f = SegmentFrame::from_origin(&m);
        assert!((f.half_length - 9.0).abs() < 1e-9);
        assert!(close(f.to_local.apply_uhp(I), f.local_start()));
        assert!(dist_uhp(f.to_local.compose(&m).orbit_of_i(), f.local_end()) < 1e-7);
    }

    #[test]
    fn on_axis_frames_the_translation() {
        let m = MobiusMap::new(2.0, 1.0, 3.0, 2.0).unwrap();
        for offset in [-0.5, 0.0, 1.3] {
            let f = SegmentFrame::on_axis(&m, offset).unwrap();
            let local = f.to_local.compose(&m).compose(&f.to_local.inverse());
            let expected = scaling((2.0 * f.half_length).exp());
            assert!(local.approx_eq(&expected, 1e-9), "{local:?}");
        }
        let f = SegmentFrame::on_axis(&m, 0.0).unwrap();
        // The start point is the foot of the perpendicular from the origin.
        let back = f.to_local.inverse().apply_uhp(f.local_start());
        let foot_dist = dist_uhp(back, I);
        let g = m.axis().unwrap();
        assert!((foot_dist - crate::hyperbolic::dist_point_geodesic(DiskPoint::ORIGIN, &g)).abs() < 1e-9);
    }

    #[test]
    fn crossing_height_sign_test() {
        let u = ProjPoint::new(-2.0, 1.0);
        let v = ProjPoint::new(8.0, 1.0);
        let t = SegmentFrame::crossing_height(u, v, 1e-9).unwrap();
        assert!((t - 4.0f64.ln()).abs() < 1e-12);
        assert!(SegmentFrame::crossing_height(ProjPoint::new(1.0, 1.0), v, 1e-9).is_none());
        assert!(SegmentFrame::crossing_height(ProjPoint::ZERO, v, 1e-9).is_none());
        assert!(SegmentFrame::crossing_height(u, ProjPoint::INFINITY, 1e-9).is_none());
        for t in [-30.0f64, 0.0, 30.0] {
            let (u, v) = (ProjPoint::new(-(t.exp()), 1.0), ProjPoint::new(t.exp(), 1.0));
            assert!((SegmentFrame::crossing_height(u, v, 1e-6).unwrap() - t).abs() < 1e-9);
            let (u, v) = (ProjPoint::new(-(t - 20.0).exp(), 1.0), ProjPoint::new((t + 20.0).exp(), 1.0));
            assert!(SegmentFrame::crossing_height(u, v, 1e-6).is_none());
        }
    }

    #[test]
    fn distance_to_segment_cases() {
        let f = SegmentFrame { to_local: MobiusMap::IDENTITY, half_length: 1.0, periodic: false };
        assert!(f.dist_to_segment(I).abs() < 1e-15);
        assert!((f.dist_to_segment(Complex64::new(0.0, 5f64.exp())) - 4.0).abs() < 1e-12);
        let z = Complex64::new(1.0, 1.0);
        assert!((f.dist_to_segment(z) - 1f64.asinh()).abs() < 1e-12);
    }
}
