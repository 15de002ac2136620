use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::ExponentError;
use crate::currents::{d_eta_with, intersection_with, Current, LiftSearch};
use crate::group::{enumerate_elements, ConjClass, GroupElement, GroupPresentation, Word};
use crate::hyperbolic::{dist_point_geodesic, BoundaryAngle, DiskPoint, Geodesic, MobiusMap};

/// Closed arc of the boundary circle, running counterclockwise from `start`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryArc {
    pub start: f64,
    pub length: f64,
}

fn ccw(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TAU)
}

impl BoundaryArc {
    pub fn centered(center: BoundaryAngle, half_width: f64) -> Self {
        Self { start: (center.radians() - half_width).rem_euclid(TAU), length: 2.0 * half_width }
    }

    pub fn end(&self) -> f64 {
        (self.start + self.length).rem_euclid(TAU)
    }

    pub fn contains(&self, theta: BoundaryAngle) -> bool {
        ccw(self.start, theta.radians()) <= self.length
    }

    pub fn contains_arc(&self, other: &BoundaryArc) -> bool {
        self.contains(BoundaryAngle::new(other.start)) && ccw(self.start, other.start) + other.length <= self.length
    }

    pub fn intersects(&self, other: &BoundaryArc) -> bool {
        self.contains(BoundaryAngle::new(other.start)) || other.contains(BoundaryAngle::new(self.start))
    }

    /// The closure of the complementary arc.
    pub fn complement(&self) -> Self {
        Self { start: self.end(), length: TAU - self.length }
    }

    /// Image under an orientation-preserving isometry.
    pub fn image(&self, m: &MobiusMap) -> Self {
        let f = |t: f64| m.apply_boundary(BoundaryAngle::new(t)).radians();
        let (s, mid, e) = (f(self.start), f(self.start + self.length / 2.0), f(self.start + self.length));
        Self { start: s, length: (ccw(s, mid) + ccw(mid, e)).min(TAU) }
    }

    fn grid(&self, k: usize) -> impl Iterator<Item = BoundaryAngle> + '_ {
        (0..=k).map(move |j| BoundaryAngle::new(self.start + self.length * j as f64 / k as f64))
    }
}

/// A normalizer `r` with boundary arcs `U ∋ r⁺` (attracting) and
/// `V ∋ r⁻` (repelling) such that every geodesic from `U` to `V` passes
/// within `d` of the origin, `rⁿ(∂H² ∖ V) ⊂ U` and `r⁻ⁿ(∂H² ∖ U) ⊂ V`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PingPong {
    pub r: GroupElement,
    pub n: usize,
    pub u: BoundaryArc,
    pub v: BoundaryArc,
    pub d: f64,
}

const GRID: usize = 16;
const MAX_HALVINGS: usize = 40;
const MAX_POWER: usize = 256;

impl PingPong {
    /// Takes for `r` the generator whose axis passes closest to the origin,
    /// shrinks `U` and `V` until the chord condition holds on a grid of
    /// boundary points, then raises `n` until both containments hold.
    pub fn construct(p: &GroupPresentation, d: f64) -> Result<Self, ExponentError> {
        let candidates = ["a", "b", "c", "d"].map(|s| GroupElement::from_word(s.parse::<Word>().expect("generator"), p));
        let (r, axis) = candidates
            .into_iter()
            .filter_map(|g| g.matrix.axis().ok().map(|a| (g, a)))
            .min_by(|x, y| dist_point_geodesic(DiskPoint::ORIGIN, &x.1).total_cmp(&dist_point_geodesic(DiskPoint::ORIGIN, &y.1)))
            .expect("generators are hyperbolic");
        if dist_point_geodesic(DiskPoint::ORIGIN, &axis) > p.inradius() {
            return Err(ExponentError::InvalidParameter("no generator axis meets the octagon".into()));
        }
        let (rep, att) = r.matrix.boundary_fixed_points().map_err(crate::currents::CurrentError::from)?;
        let mut half = PI / 4.0;
        let (u, v) = 'shrink: {
            for _ in 0..MAX_HALVINGS {
                let (u, v) = (BoundaryArc::centered(att, half), BoundaryArc::centered(rep, half));
                if !u.intersects(&v) && chords_within(&u, &v, d) {
                    break 'shrink (u, v);
                }
                half /= 2.0;
            }
            return Err(ExponentError::InvalidParameter(format!("no arcs around the fixed points of {} satisfy the chord condition for D = {d}", r.word)));
        };
        let mut rn = MobiusMap::IDENTITY;
        for n in 1..=MAX_POWER {
            rn = rn.compose(&r.matrix);
            if u.contains_arc(&v.complement().image(&rn)) && v.contains_arc(&u.complement().image(&rn.inverse())) {
                return Ok(Self { r, n, u, v, d });
            }
        }
        Err(ExponentError::InvalidParameter(format!("no power of {} up to {MAX_POWER} maps the complement of V into U", r.word)))
    }

    /// `γU ∩ V = ∅`.
    pub fn u_free(&self, g: &MobiusMap) -> bool {
        !self.u.image(g).intersects(&self.v)
    }

    /// `γV ∩ U = ∅`.
    pub fn v_free(&self, g: &MobiusMap) -> bool {
        !self.v.image(g).intersects(&self.u)
    }
}

fn chords_within(u: &BoundaryArc, v: &BoundaryArc, d: f64) -> bool {
    u.grid(GRID).all(|x| {
        v.grid(GRID).all(|y| Geodesic::new(x, y).map_or(false, |g| dist_point_geodesic(DiskPoint::ORIGIN, &g) <= d))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PingPongRow {
    /// Word-length radius.
    pub radius: usize,
    pub elements: u64,
    /// Elements with `γU ∩ V = ∅`.
    pub u_free: u64,
    /// Elements with `γV ∩ U = ∅`.
    pub v_free: u64,
    /// Elements with neither property.
    pub violations: u64,
    /// `2·u_free ≥ elements`.
    pub half_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PingPongReport {
    pub setup: PingPong,
    pub depth: usize,
    pub rows: Vec<PingPongRow>,
    /// Shortest element with `γU ∩ V ≠ ∅` and `γV ∩ U ≠ ∅`, with its
    /// fixed points (repelling, attracting).
    pub first_violation: Option<(String, f64, f64)>,
}

impl PingPongReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks that every element of word length at most `depth` satisfies
/// `γU ∩ V = ∅` or `γV ∩ U = ∅`, with `D` the octagon diameter.
pub fn verify_ping_pong(depth: usize, p: &GroupPresentation) -> Result<PingPongReport, ExponentError> {
    if depth == 0 {
        return Err(ExponentError::InvalidDepth);
    }
    let setup = PingPong::construct(p, p.diameter())?;
    let report = verify_ping_pong_over(&setup, &enumerate_elements(p, depth), depth);
    match &report.first_violation {
        None => Ok(report),
        Some((word, _, _)) => Err(ExponentError::AssertionFailure {
            check: "ping-pong",
            r: word.len() as f64,
            detail: format!("{word} meets V from U and U from V"),
        }),
    }
}

/// The split of the elements of length at most `depth`, violations included.
pub fn verify_ping_pong_over(setup: &PingPong, elements: &[GroupElement], depth: usize) -> PingPongReport {
    let mut rows: Vec<PingPongRow> = (0..=depth)
        .map(|radius| PingPongRow { radius, elements: 0, u_free: 0, v_free: 0, violations: 0, half_bound: true })
        .collect();
    let mut first_violation = None;
    for g in elements.iter().filter(|g| g.word_length() <= depth) {
        let (uf, vf) = (setup.u_free(&g.matrix), setup.v_free(&g.matrix));
        let bad = !uf && !vf;
        if bad && first_violation.is_none() {
            let (rep, att) = g.matrix.boundary_fixed_points().map_or((f64::NAN, f64::NAN), |(r, a)| (r.radians(), a.radians()));
            first_violation = Some((g.word.to_string(), rep, att));
        }
        for row in rows.iter_mut().skip(g.word_length()) {
            row.elements += 1;
            row.u_free += uf as u64;
            row.v_free += vf as u64;
            row.violations += bad as u64;
        }
    }
    for row in &mut rows {
        row.half_bound = 2 * row.u_free >= row.elements;
    }
    PingPongReport { setup: setup.clone(), depth, rows, first_violation }
}

/// `f(γ) = rⁿ γ rⁿ`.
pub fn normalize_axis(gamma: &GroupElement, r: &GroupElement, n: usize, p: &GroupPresentation) -> GroupElement {
    let rn = GroupElement::from_word(r.word.pow(n), p);
    rn.compose(gamma).compose(&rn)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizationCheck {
    pub element: GroupElement,
    /// Whether `γU ∩ V = ∅`, the case the bounds are claimed for.
    pub applies: bool,
    /// Distance from the origin to the axis of `f(γ)`.
    pub axis_distance: Option<f64>,
    /// `i(η, [f(γ)])`.
    pub intersection: Option<f64>,
    /// `d_η(γo, o) + 2d_η(o, q) + 2d_η(rⁿq, q)` with `q` the point of the
    /// axis of `f(γ)` closest to the origin.
    pub bound: Option<f64>,
}

/// Normalizes `γ` and, when `γU ∩ V = ∅`, checks that the axis of `f(γ)`
/// passes within `D` of the origin and that
/// `i(η, [f(γ)]) ≤ d_η(γo, o) + 2d_η(o, q) + 2d_η(rⁿq, q)`.
pub fn check_normalization(
    eta: &Current,
    gamma: &GroupElement,
    setup: &PingPong,
    p: &GroupPresentation,
    search: &LiftSearch,
) -> Result<NormalizationCheck, ExponentError> {
    let f = normalize_axis(gamma, &setup.r, setup.n, p);
    if !setup.u_free(&gamma.matrix) {
        return Ok(NormalizationCheck { element: f, applies: false, axis_distance: None, intersection: None, bound: None });
    }
    let failed = |distance: f64| ExponentError::NormalizationFailed { word: f.word.to_string(), distance };
    let axis = f.matrix.axis().map_err(|_| failed(f64::INFINITY))?;
    let distance = dist_point_geodesic(DiskPoint::ORIGIN, &axis);
    if distance > setup.d {
        return Err(failed(distance));
    }
    let class = ConjClass::from_element(&f, p).map_err(|_| failed(distance))?;
    let i = intersection_with(eta, &class, p, search)?;
    let o = DiskPoint::ORIGIN;
    let q = axis.point_at(0.0);
    let rn = setup.r.matrix.pow(setup.n as i32);
    let bound = d_eta_with(eta, gamma.matrix.apply(o), o, p, search)?
        + 2.0 * d_eta_with(eta, o, q, p, search)?
        + 2.0 * d_eta_with(eta, rn.apply(q), q, p, search)?;
    if i > bound + 1e-9 {
        return Err(ExponentError::AssertionFailure {
            check: "normalization cost",
            r: bound,
            detail: format!("i(η, [{}]) = {i} exceeds {bound} for γ = {}", f.word, gamma.word),
        });
    }
    Ok(NormalizationCheck { element: f, applies: true, axis_distance: Some(distance), intersection: Some(i), bound: Some(bound) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_genus2;

    #[test]
    fn arcs() {
        let a = BoundaryArc { start: 6.0, length: 1.0 };
        assert!(a.contains(BoundaryAngle::new(0.5)));
        assert!(!a.contains(BoundaryAngle::new(1.0)));
        assert!(a.intersects(&BoundaryArc { start: 0.7, length: 0.5 }));
        assert!(!a.intersects(&BoundaryArc { start: 1.0, length: 4.0 }));
        assert!(a.contains_arc(&BoundaryArc { start: 6.1, length: 0.6 }));
        assert!(!a.contains_arc(&BoundaryArc { start: 6.1, length: 1.0 }));
        let c = a.complement();
        assert!((c.length + a.length - TAU).abs() < 1e-15);
        let id = a.image(&MobiusMap::IDENTITY);
        assert!((id.start - a.start).abs() < 1e-12 && (id.length - a.length).abs() < 1e-12);
    }

    #[test]
    fn construction_meets_its_conditions() {
        let p = standard_genus2().unwrap();
        let pp = PingPong::construct(&p, p.diameter()).unwrap();
        assert!(!pp.u.intersects(&pp.v));
        let rn = pp.r.matrix.pow(pp.n as i32);
        assert!(pp.u.contains_arc(&pp.v.complement().image(&rn)));
        assert!(pp.u_free(&pp.r.matrix) && pp.v_free(&MobiusMap::IDENTITY) && pp.u_free(&MobiusMap::IDENTITY));
        let f = normalize_axis(&GroupElement::identity(), &pp.r, pp.n, &p);
        assert_eq!(f.word, pp.r.word.pow(2 * pp.n));
    }
}
