//! Counting lifts of closed geodesics across segments.
//!
//! Every lift `L` crossing a segment is charged to the tile of the octagon
//! tiling containing a point of `L` just past the crossing. Translating that
//! tile back to the fundamental octagon carries `L` to one of the finitely
//! many lifts meeting the octagon, so the lifts crossing a segment are found
//! by pairing the tiles near it with those base lifts and keeping the pairs
//! where the tile is the charged one. Each lift is then seen exactly once.

use num_complex::Complex64;

use super::{Current, CurrentError};
use crate::group::tiling::{owns, tiles_near, BaseLift};
use crate::group::{ConjClass, GroupPresentation};
use crate::hyperbolic::{dist, DiskPoint, Geodesic, Hit, ProjPoint, Segment, SegmentFrame, Tolerances, MIN_SEGMENT_LENGTH};

/// How far a crossing is followed along the lift before choosing its tile.
const PROBE_STEP: f64 = 1e-4;

/// Shift applied to the base point of an axis segment when a lift passes
/// through one of its ends.
pub const NUDGE: f64 = 1e-6;
const MAX_NUDGES: usize = 8;

/// Parameters of the tile search around a segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftSearch {
    /// Tiles with centers within `circumradius + margin` of the segment are
    /// scanned.
    pub margin: f64,
    /// When set, the scan is repeated out to this much further, and a
    /// crossing charged to a tile in the extra band is reported as
    /// [`CurrentError::PruningNotConverged`].
    pub certify: Option<f64>,
    pub tolerances: Tolerances,
}

impl Default for LiftSearch {
    fn default() -> Self {
        Self { margin: 1e-3, certify: Some(0.5), tolerances: Tolerances::default() }
    }
}

impl LiftSearch {
    /// The same search without the certification band.
    pub fn uncertified(self) -> Self {
        Self { certify: None, ..self }
    }
}

/// Distinct geodesics with the total weight they carry.
#[derive(Clone, Debug, Default)]
pub struct LiftSet {
    entries: Vec<(Geodesic, f64)>,
}

impl LiftSet {
    fn insert(&mut self, g: Geodesic, w: f64, tol: f64) {
        match self.entries.iter_mut().find(|(h, _)| h.approx_eq(&g, tol)) {
            Some((_, acc)) => *acc += w,
            None => self.entries.push((g, w)),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Geodesic, f64)> {
        self.entries.iter()
    }

    pub fn geodesics(&self) -> impl Iterator<Item = &Geodesic> {
        self.entries.iter().map(|(g, _)| g)
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    /// Weight carried by `g`, or `None` if it is not in the set.
    pub fn weight_of(&self, g: &Geodesic, tol: f64) -> Option<f64> {
        self.entries.iter().find(|(h, _)| h.approx_eq(g, tol)).map(|(_, w)| *w)
    }

    pub fn contains(&self, g: &Geodesic, tol: f64) -> bool {
        self.weight_of(g, tol).is_some()
    }
}

struct Scan {
    weight: f64,
    endpoint_hit: bool,
    lifts: LiftSet,
}

/// Point of the geodesic with local endpoints `u`, `v` at distance
/// [`PROBE_STEP`] past its crossing with the imaginary axis at log-height
/// `t`, moving towards the positive endpoint.
fn probe_point(u: ProjPoint, v: ProjPoint, t: f64) -> Complex64 {
    let scaled = |x: ProjPoint| x.p.signum() * x.q.signum() * (x.p.abs().ln() - x.q.abs().ln() - t).exp();
    let (x1, x2) = (scaled(u), scaled(v));
    let (pos, neg) = if x1 > 0.0 { (x1, x2) } else { (x2, x1) };
    let center = 0.5 * (pos + neg);
    let radius = 0.5 * (pos - neg);
    let phi = 1f64.atan2(-center);
    let phi = phi - PROBE_STEP * phi.sin();
    (Complex64::new(center, 0.0) + Complex64::from_polar(radius, phi)) * t.exp()
}

fn scan(
    atoms: &[(f64, &[BaseLift])],
    frame: &SegmentFrame,
    include: (bool, bool),
    p: &GroupPresentation,
    search: &LiftSearch,
    collect: bool,
) -> Result<Scan, CurrentError> {
    let mut out = Scan { weight: 0.0, endpoint_hit: false, lifts: LiftSet::default() };
    if frame.half_length <= 0.0 {
        return Ok(out);
    }
    let radius = p.circumradius() + search.margin;
    let outer = radius + search.certify.unwrap_or(0.0);
    let tol = &search.tolerances;
    let back = frame.to_local.inverse();
    for tile in tiles_near(p, frame, outer) {
        let inner = frame.dist_to_segment(tile.orbit_of_i()) <= radius;
        for (w, lifts) in atoms {
            for lift in lifts.iter() {
                let (lu, lv) = (tile.apply_proj(lift.u), tile.apply_proj(lift.v));
                let Some(t) = SegmentFrame::crossing_height(lu, lv, tol.transverse) else { continue };
                let Some(hit) = frame.locate(t, tol.position) else { continue };
                if !owns(p, &tile, probe_point(lu, lv, t)) {
                    continue;
                }
                if !inner {
                    return Err(CurrentError::PruningNotConverged { radius });
                }
                let counted = match hit {
                    Hit::Interior => true,
                    Hit::Start => {
                        out.endpoint_hit = true;
                        include.0
                    }
                    Hit::End => {
                        out.endpoint_hit = true;
                        include.1
                    }
                };
                if counted {
                    out.weight += w;
                    if collect {
                        let g = Geodesic::from_proj(back.apply_proj(lu), back.apply_proj(lv));
                        out.lifts.insert(g, *w, tol.angular);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn current_atoms<'a>(eta: &'a Current, p: &GroupPresentation) -> Vec<(f64, &'a [BaseLift])> {
    eta.atoms().iter().map(|a| (a.weight, a.class.domain_lifts(p))).collect()
}

/// Distinct lifts of the closed geodesic of `c` transverse to `s`, each with
/// the multiplicity of `c` as a power of a primitive class.
pub fn lifts_crossing(c: &ConjClass, s: &Segment, p: &GroupPresentation) -> Result<LiftSet, CurrentError> {
    lifts_crossing_with(c, s, p, &LiftSearch::default())
}

pub fn lifts_crossing_with(c: &ConjClass, s: &Segment, p: &GroupPresentation, search: &LiftSearch) -> Result<LiftSet, CurrentError> {
    lifts_crossing_current(&Current::single(c.clone()), s, p, search)
}

/// The lifts of all atoms of `eta` transverse to `s`, weighted by `eta`.
pub fn lifts_crossing_current(eta: &Current, s: &Segment, p: &GroupPresentation, search: &LiftSearch) -> Result<LiftSet, CurrentError> {
    if s.is_degenerate() {
        return Ok(LiftSet::default());
    }
    let atoms = current_atoms(eta, p);
    Ok(scan(&atoms, &s.frame(), (s.include_x, s.include_y), p, search, true)?.lifts)
}

/// `d_η(x, y) = η(T[x, y])`.
///
/// ```
/// use geocurrents::currents::{d_eta, Current};
/// use geocurrents::group::standard_genus2;
/// use geocurrents::hyperbolic::DiskPoint;
///
/// let p = standard_genus2().unwrap();
/// let eta = Current::from_words(&[(1.0, "a"), (1.0, "b")], &p).unwrap();
/// let x = DiskPoint::new(0.1, 0.2).unwrap();
/// let y = DiskPoint::new(-0.6, 0.5).unwrap();
/// assert_eq!(d_eta(&eta, x, x, &p).unwrap(), 0.0);
/// assert_eq!(d_eta(&eta, x, y, &p).unwrap(), d_eta(&eta, y, x, &p).unwrap());
/// ```
pub fn d_eta(eta: &Current, x: DiskPoint, y: DiskPoint, p: &GroupPresentation) -> Result<f64, CurrentError> {
    d_eta_with(eta, x, y, p, &LiftSearch::default())
}

pub fn d_eta_with(eta: &Current, x: DiskPoint, y: DiskPoint, p: &GroupPresentation, search: &LiftSearch) -> Result<f64, CurrentError> {
    if dist(x, y) < MIN_SEGMENT_LENGTH {
        return Ok(0.0);
    }
    d_eta_frame(eta, &SegmentFrame::between(x.to_uhp(), y.to_uhp()), p, search)
}

/// `η(T[x, y])` for the closed segment described by `frame`.
pub(crate) fn d_eta_frame(eta: &Current, frame: &SegmentFrame, p: &GroupPresentation, search: &LiftSearch) -> Result<f64, CurrentError> {
    Ok(scan(&current_atoms(eta, p), frame, (true, true), p, search, false)?.weight)
}

/// `i(η, c) = η(T[x, γx))` for `x` on the axis of the representative `γ`.
pub fn intersection(eta: &Current, c: &ConjClass, p: &GroupPresentation) -> Result<f64, CurrentError> {
    intersection_with(eta, c, p, &LiftSearch::default())
}

pub fn intersection_with(eta: &Current, c: &ConjClass, p: &GroupPresentation, search: &LiftSearch) -> Result<f64, CurrentError> {
    let frame = SegmentFrame::on_axis(&c.representative().matrix, 0.0)?;
    intersection_frame(eta, &frame, p, search)
}

/// `η(T[x, γx))` on a framed fundamental segment of an axis, moving `x`
/// along the axis when a lift passes through an end.
fn intersection_frame(eta: &Current, frame: &SegmentFrame, p: &GroupPresentation, search: &LiftSearch) -> Result<f64, CurrentError> {
    let atoms = current_atoms(eta, p);
    let mut f = *frame;
    let mut result = scan(&atoms, &f, (true, false), p, search, false)?;
    for _ in 0..MAX_NUDGES {
        if !result.endpoint_hit {
            break;
        }
        f = f.shifted(NUDGE);
        result = scan(&atoms, &f, (true, false), p, search, false)?;
    }
    Ok(result.weight)
}

/// `i(c₁, c₂)`.
pub fn intersection_classes(c1: &ConjClass, c2: &ConjClass, p: &GroupPresentation) -> Result<f64, CurrentError> {
    intersection(&Current::single(c1.clone()), c2, p)
}
