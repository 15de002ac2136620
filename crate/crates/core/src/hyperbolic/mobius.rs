use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::ProjPoint;
use super::{BoundaryAngle, DiskPoint, Geodesic, GeometryError, TRACE_TOLERANCE};

/// Orientation-preserving isometry of the hyperbolic plane.
///
/// Stored as a real matrix `[[a, b], [c, d]]` with `ad - bc = 1`, acting on the
/// upper half-plane by `z ↦ (az + b) / (cz + d)`. `M` and `-M` are the same
/// map; the stored sign is chosen so that the trace is nonnegative (or, for
/// traceless matrices, so that the largest entry is positive).
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    m: [f64; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryKind {
    Identity,
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// `ad - bc` without cancellation error, via fused multiply-add.
fn kahan_det(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = b * c;
    let e = (-b).mul_add(c, w);
    let f = a.mul_add(d, -w);
    f + e
}

impl fmt::Debug for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "MobiusMap[[{a}, {b}], [{c}, {d}]]")
    }
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap { m: [1.0, 0.0, 0.0, 1.0] };

    /// Builds a map from matrix entries, rescaling to determinant one.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeometryError> {
        let det = kahan_det(a, b, c, d);
        if !(det > 0.0) || !det.is_finite() {
            return Err(GeometryError::InvalidMatrix { det });
        }
        Ok(Self::from_raw([a, b, c, d]))
    }

    /// Entries assumed to have determinant close to one.
    pub(crate) fn from_raw(m: [f64; 4]) -> Self {
        Self { m }.renormalized()
    }

    /// Products of unimodular matrices keep their entries: once the entries are
    /// large the computed determinant is dominated by cancellation, and
    /// dividing by it would perturb an otherwise accurate product.
    fn sign_normalized(mut m: [f64; 4]) -> Self {
        let tr = m[0] + m[3];
        let flip = if tr.abs() > 1e-6 {
            tr < 0.0
        } else {
            let (mut best, mut idx) = (0.0, 0);
            for (i, v) in m.iter().enumerate() {
                if v.abs() > best {
                    best = v.abs();
                    idx = i;
                }
            }
            m[idx] < 0.0
        };
        if flip {
            for v in &mut m {
                *v = -*v;
            }
        }
        Self { m }
    }

    /// Entries already normalized, taken verbatim.
    pub(crate) fn from_normalized(m: [f64; 4]) -> Self {
        Self { m }
    }

    fn renormalized(self) -> Self {
        let [a, b, c, d] = self.m;
        let det = kahan_det(a, b, c, d);
        let noise = 8.0 * f64::EPSILON * (a * d).abs().max((b * c).abs()).max(1.0);
        let s = if (det - 1.0).abs() > noise { det.sqrt().recip() } else { 1.0 };
        Self::sign_normalized([a * s, b * s, c * s, d * s])
    }

    /// Rotation of the disk about the origin by `angle`.
    pub fn disk_rotation(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self::from_raw([c, s, -s, c])
    }

    /// Translation by `distance` along the real diameter of the disk, moving
    /// the origin towards `+1`.
    pub fn disk_translation(distance: f64) -> Self {
        let e = (distance / 2.0).exp();
        Self::from_raw([e, 0.0, 0.0, 1.0 / e])
    }

    /// Matrix entries `[a, b, c, d]` of the half-plane action.
    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.m;
        kahan_det(a, b, c, d)
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let [a, b, c, d] = self.m;
        let [p, q, r, s] = other.m;
        Self::sign_normalized([a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s])
    }

    pub fn inverse(&self) -> MobiusMap {
        let [a, b, c, d] = self.m;
        Self::sign_normalized([d, -b, -c, a])
    }

    pub fn pow(&self, n: i32) -> MobiusMap {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = MobiusMap::IDENTITY;
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Largest entrywise difference, minimized over the sign ambiguity.
    pub fn distance_to(&self, other: &MobiusMap) -> f64 {
        let plus = self.m.iter().zip(other.m.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let minus = self.m.iter().zip(other.m.iter()).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        self.distance_to(other) <= tol
    }

    pub fn classify(&self) -> IsometryKind {
        self.classify_with(TRACE_TOLERANCE)
    }

    pub fn classify_with(&self, tol: f64) -> IsometryKind {
        if self.approx_eq(&MobiusMap::IDENTITY, tol) {
            return IsometryKind::Identity;
        }
        let t = self.trace().abs();
        if t > 2.0 + tol {
            IsometryKind::Hyperbolic
        } else if t < 2.0 - tol {
            IsometryKind::Elliptic
        } else {
            IsometryKind::Parabolic
        }
    }

    fn require_hyperbolic(&self) -> Result<(), GeometryError> {
        match self.classify() {
            IsometryKind::Hyperbolic => Ok(()),
            _ => Err(GeometryError::NotHyperbolic { trace: self.trace() }),
        }
    }

    /// `2 arccosh(|tr| / 2)`.
    pub fn translation_length(&self) -> Result<f64, GeometryError> {
        self.require_hyperbolic()?;
        Ok(2.0 * (self.trace().abs() / 2.0).acosh())
    }

    /// Repelling and attracting fixed points on the half-plane boundary.
    pub(crate) fn fixed_points(&self) -> Result<(ProjPoint, ProjPoint), GeometryError> {
        self.require_hyperbolic()?;
        let [a, b, c, d] = self.m;
        let t = a + d;
        let root = ((t - 2.0) * (t + 2.0)).sqrt();
        let big = (t + root) / 2.0;
        let small = 1.0 / big;
        let eigvec = |lambda: f64| {
            let (p1, q1) = (b, lambda - a);
            let (p2, q2) = (lambda - d, c);
            if p1.hypot(q1) >= p2.hypot(q2) {
                ProjPoint::new(p1, q1)
            } else {
                ProjPoint::new(p2, q2)
            }
        };
        Ok((eigvec(small), eigvec(big)))
    }

    /// Invariant geodesic of a hyperbolic map.
    pub fn axis(&self) -> Result<Geodesic, GeometryError> {
        let (rep, att) = self.fixed_points()?;
        Geodesic::new(rep.to_angle(), att.to_angle())
    }

    /// Repelling and attracting fixed points as disk boundary angles.
    pub fn boundary_fixed_points(&self) -> Result<(BoundaryAngle, BoundaryAngle), GeometryError> {
        let (rep, att) = self.fixed_points()?;
        Ok((rep.to_angle(), att.to_angle()))
    }

    pub(crate) fn apply_uhp(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.m;
        (a * z + b) / (c * z + d)
    }

    /// Image of `i`, computed without cancellation.
    pub(crate) fn orbit_of_i(&self) -> Complex64 {
        let [a, b, c, d] = self.m;
        let n = c * c + d * d;
        Complex64::new((a * c + b * d) / n, 1.0 / n)
    }

    pub(crate) fn apply_proj(&self, x: ProjPoint) -> ProjPoint {
        let [a, b, c, d] = self.m;
        ProjPoint::new(a * x.p + b * x.q, c * x.p + d * x.q)
    }

    pub fn apply(&self, p: DiskPoint) -> DiskPoint {
        DiskPoint::from_uhp(self.apply_uhp(p.to_uhp()))
    }

    pub fn apply_boundary(&self, t: BoundaryAngle) -> BoundaryAngle {
        self.apply_proj(t.to_proj()).to_angle()
    }

    pub fn apply_geodesic(&self, g: &Geodesic) -> Geodesic {
        let (u, v) = g.endpoints();
        Geodesic::new_unchecked(self.apply_boundary(u), self.apply_boundary(v))
    }
}

impl Mul for MobiusMap {
    type Output = MobiusMap;

    fn mul(self, rhs: MobiusMap) -> MobiusMap {
        self.compose(&rhs)
    }
}

impl Mul for &MobiusMap {
    type Output = MobiusMap;

    fn mul(self, rhs: &MobiusMap) -> MobiusMap {
        self.compose(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::dist;
    use std::f64::consts::PI;

    fn sample() -> MobiusMap {
        MobiusMap::new(2.0, 1.0, 3.0, 2.0).unwrap()
    }

    #[test]
    fn compose_with_identity_and_inverse() {
        let m = sample();
        assert!(m.compose(&MobiusMap::IDENTITY).approx_eq(&m, 1e-15));
        assert!(m.compose(&m.inverse()).approx_eq(&MobiusMap::IDENTITY, 1e-12));
    }

    #[test]
    fn normalizes_determinant_and_sign() {
        let m = MobiusMap::new(-4.0, -2.0, -6.0, -4.0).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-12);
        assert!(m.trace() > 0.0);
        assert!(MobiusMap::new(1.0, 2.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn classification_by_trace() {
        assert_eq!(MobiusMap::IDENTITY.classify(), IsometryKind::Identity);
        assert_eq!(MobiusMap::new(3.0, 1.0, -1.0, 0.0).unwrap().classify(), IsometryKind::Hyperbolic);
        assert_eq!(MobiusMap::new(1.0, 1.0, 0.0, 1.0).unwrap().classify(), IsometryKind::Parabolic);
        assert_eq!(MobiusMap::disk_rotation(0.3).classify(), IsometryKind::Elliptic);
    }

    #[test]
    fn translation_length_of_trace_three() {
        let m = MobiusMap::new(3.0, 1.0, -1.0, 0.0).unwrap();
        let l = m.translation_length().unwrap();
        assert!((l - 2.0 * 1.5f64.acosh()).abs() < 1e-12);
        assert!((l - 1.924847).abs() < 1e-6);
        assert!((m.inverse().translation_length().unwrap() - l).abs() < 1e-12);
        assert!(MobiusMap::disk_rotation(1.0).translation_length().is_err());
    }

    #[test]
    fn rotation_and_translation_conventions() {
        let p = DiskPoint::new(0.5, 0.0).unwrap();
        let q = MobiusMap::disk_rotation(PI / 2.0).apply(p);
        assert!((q.complex() - Complex64::new(0.0, 0.5)).norm() < 1e-12);
        let t = MobiusMap::disk_translation(1.0).apply(DiskPoint::ORIGIN);
        assert!((t.re() - 0.5f64.tanh()).abs() < 1e-12 && t.im().abs() < 1e-12);
    }

    #[test]
    fn axis_of_diagonal_map() {
        let m = MobiusMap::disk_translation(2.0);
        let g = m.axis().unwrap();
        let (lo, hi) = g.endpoints();
        // Cayley images of 0 and ∞ are -1 and +1.
        assert!(lo.radians().abs() < 1e-12);
        assert!((hi.radians() - PI).abs() < 1e-12);
        let (rep, att) = m.boundary_fixed_points().unwrap();
        assert!(att.separation(BoundaryAngle::new(0.0)) < 1e-12);
        assert!(rep.separation(BoundaryAngle::new(PI)) < 1e-12);
    }

    #[test]
    fn axis_is_invariant_and_realizes_translation_length() {
        let m = sample();
        let g = m.axis().unwrap();
        assert!(m.apply_geodesic(&g).approx_eq(&g, 1e-9));
        let l = m.translation_length().unwrap();
        let (u, v) = g.endpoints();
        // Points on the axis: images of the real diameter under a map sending ±1 to u, v.
        for s in [-1.0, 0.0, 0.7, 2.0] {
            let p = g.point_at(s);
            assert!((dist(p, m.apply(p)) - l).abs() < 1e-6, "{u:?} {v:?}");
        }
    }

    #[test]
    fn axis_equivariance() {
        let m = sample();
        let g = MobiusMap::disk_rotation(0.4).compose(&MobiusMap::disk_translation(0.8));
        let conj = g.compose(&m).compose(&g.inverse());
        assert!(conj.axis().unwrap().approx_eq(&g.apply_geodesic(&m.axis().unwrap()), 1e-9));
    }

    #[test]
    fn power_lengths_scale() {
        let m = sample();
        let l = m.translation_length().unwrap();
        for n in 1..=5 {
            assert!((m.pow(n).translation_length().unwrap() - n as f64 * l).abs() < 1e-6);
        }
    }
}
