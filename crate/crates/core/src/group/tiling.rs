//! Searches over the tiling of the plane by translates of the octagon.
//!
//! Tiles are handled through local matrices `L = F ∘ β`, where `F` maps the
//! plane into the coordinates of some [`SegmentFrame`] and `β` is a group
//! element; the tile `βN` has center `L·i` in local coordinates.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_complex::Complex64;

use super::enumerate::OrbitIndex;
use super::presentation::GroupPresentation;
use crate::hyperbolic::{dist_uhp, scaling, MobiusMap, ProjPoint, SegmentFrame};

const SLACK: f64 = 1e-6;
const TIE: f64 = 1e-9;
const DOMAIN_TOLERANCE: f64 = 1e-7;

/// Greedy descent from tile `start` to the tile containing `target`.
/// Each step moves to a neighbor whose center is closer to the target; this
/// terminates in the tile containing it because the octagon is the Dirichlet
/// domain of the origin.
pub(crate) fn locate(p: &GroupPresentation, start: MobiusMap, target: Complex64) -> MobiusMap {
    let mut cur = start;
    let mut best = dist_uhp(cur.orbit_of_i(), target);
    loop {
        let mut next = None;
        for g in p.letter_matrices() {
            let cand = cur.compose(g);
            let d = dist_uhp(cand.orbit_of_i(), target);
            if d < best - 1e-12 {
                best = d;
                next = Some(cand);
            }
        }
        match next {
            Some(n) => cur = n,
            None => return cur,
        }
    }
}

/// Local matrices of every tile whose center lies within `radius` of the
/// framed segment.
///
/// Breadth-first over side-adjacent tiles, pruned at `radius` plus the
/// circumradius: tiles meeting a neighborhood of the segment form a
/// side-connected family, and each has its center that close.
///
/// Chained products lose relative accuracy like `e^t` at distance `t` from
/// where the chain starts. On a periodic frame the search therefore also
/// starts from the translate of the first tile to the far end, so no tile
/// is more than half the segment away from a source.
pub(crate) fn tiles_near(p: &GroupPresentation, frame: &SegmentFrame, radius: f64) -> Vec<MobiusMap> {
    let start = locate(p, frame.to_local, frame.local_start());
    let prune = radius + p.circumradius() + SLACK;
    let mut index = OrbitIndex::new();
    index.insert(start.orbit_of_i());
    let mut queue = VecDeque::from([start]);
    if frame.periodic {
        let end = scaling((2.0 * frame.half_length).exp()).compose(&start);
        if index.insert(end.orbit_of_i()) {
            queue.push_back(end);
        }
    }
    let mut out = Vec::new();
    while let Some(tile) = queue.pop_front() {
        if frame.dist_to_segment(tile.orbit_of_i()) <= radius {
            out.push(tile);
        }
        for g in p.letter_matrices() {
            let next = tile.compose(g);
            let z = next.orbit_of_i();
            if frame.dist_to_segment(z) <= prune && index.insert(z) {
                queue.push_back(next);
            }
        }
    }
    out
}

fn center_order(a: Complex64, b: Complex64) -> Ordering {
    let scale = a.im.max(b.im);
    if (a.re - b.re).abs() > 1e-9 * scale {
        a.re.total_cmp(&b.re)
    } else {
        a.im.total_cmp(&b.im)
    }
}

/// Whether the tile with local matrix `tile` is the one charged for the
/// point `z`: `z` lies in the tile, and on a shared boundary the tile with
/// the smaller center wins.
pub(crate) fn owns(p: &GroupPresentation, tile: &MobiusMap, z: Complex64) -> bool {
    let c = tile.orbit_of_i();
    let d0 = dist_uhp(c, z);
    for g in p.letter_matrices() {
        let cn = tile.compose(g).orbit_of_i();
        let d = dist_uhp(cn, z);
        if d < d0 - TIE || ((d - d0).abs() <= TIE && center_order(cn, c) == Ordering::Less) {
            return false;
        }
    }
    true
}

/// A lift of a closed geodesic, in global half-plane coordinates.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BaseLift {
    pub u: ProjPoint,
    pub v: ProjPoint,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum LiftFilter {
    /// Lifts meeting the closed fundamental octagon.
    MeetsDomain,
    /// Lifts within the given distance of the origin.
    Within(f64),
}

const OFFSETS: [f64; 4] = [0.318_309_886, 0.577_215_664, 0.141_421_356, 0.723_606_797];

/// Lifts of the axis of `m` selected by `filter`, one per coset of `⟨m⟩`.
///
/// A lift `β⁻¹·A` is taken for each tile `βN` whose center projects into the
/// half-open fundamental segment `[x, m·x)` of the axis `A`. When `m` is a
/// proper power `m₀ᵏ`, every lift appears `k` times.
pub(crate) fn base_lifts(p: &GroupPresentation, m: &MobiusMap, filter: LiftFilter) -> Vec<BaseLift> {
    let radius = match filter {
        LiftFilter::MeetsDomain => p.circumradius(),
        LiftFilter::Within(r) => r,
    } + SLACK;
    for (attempt, offset) in OFFSETS.iter().enumerate() {
        let Ok(frame) = SegmentFrame::on_axis(m, *offset) else { return Vec::new() };
        let h = frame.half_length;
        let tiles = tiles_near(p, &frame, radius);
        let mut tied = false;
        let mut out = Vec::new();
        for tile in &tiles {
            let z = tile.orbit_of_i();
            let s = z.norm().ln();
            if (s + h).abs() < 1e-9 || (s - h).abs() < 1e-9 {
                tied = true;
                break;
            }
            if !(-h <= s && s < h) {
                continue;
            }
            let keep = match filter {
                LiftFilter::MeetsDomain => {
                    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                    for v in p.vertices_uhp() {
                        let w = tile.apply_uhp(*v);
                        let sd = (w.re / w.im).asinh();
                        lo = lo.min(sd);
                        hi = hi.max(sd);
                    }
                    lo <= DOMAIN_TOLERANCE && hi >= -DOMAIN_TOLERANCE
                }
                LiftFilter::Within(r) => (z.re.abs() / z.im).asinh() <= r,
            };
            if keep {
                let back = tile.inverse();
                out.push(BaseLift { u: back.apply_proj(ProjPoint::ZERO), v: back.apply_proj(ProjPoint::INFINITY) });
            }
        }
        if !tied || attempt + 1 == OFFSETS.len() {
            return out;
        }
    }
    Vec::new()
}

const HYPERCYCLE_OFFSET: f64 = 1e-6;
/// Distinct tile centers are at least twice the inradius apart.
const SAME_TILE: f64 = 0.1;

/// Side crossings of the curve at distance `1e-6` from the axis of `m`, on
/// the side given by the sign of `side`, over one period.
///
/// The offset curve is invariant under `m` and avoids the vertices of the
/// tiling, so the letters read off form a word for a conjugate of `m`.
pub(crate) fn cutting_sequence(p: &GroupPresentation, m: &MobiusMap, side: f64) -> Option<Vec<super::word::Letter>> {
    use super::word::Letter;
    let frame = SegmentFrame::on_axis(m, OFFSETS[0]).ok()?;
    let h = frame.half_length;
    let alpha = HYPERCYCLE_OFFSET.sinh().atan();
    let omega = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 - side.signum() * alpha);
    let u_end = h.exp();
    let mut u = (-h).exp();
    let start = locate(p, frame.to_local, omega * u);
    let mut tile = start;
    let mut letters = Vec::new();
    let limit = 64 + (40.0 * (2.0 * h + 1.0)) as usize;
    loop {
        let c = tile.orbit_of_i();
        let fc = |z: Complex64| ((omega * z.conj()).re / z.im, z.norm_sqr() / z.im, 1.0 / z.im);
        let (bc, cc, ac) = fc(c);
        let mut best: Option<(f64, usize)> = None;
        for (k, g) in p.letter_matrices().iter().enumerate() {
            let cn = tile.compose(g).orbit_of_i();
            let (bn, cnn, an) = fc(cn);
            // F(u) = A u² + B u + C is negative where the curve is closer to
            // the current center.
            let (a, b, cq) = (ac - an, -2.0 * (bc - bn), cc - cnn);
            for root in quadratic_roots(a, b, cq) {
                let slope = 2.0 * a * root + b;
                if root > u * (1.0 + 1e-13) && slope > 0.0 && best.map_or(true, |(r, _)| root < r) {
                    best = Some((root, k));
                }
            }
        }
        let (root, k) = best?;
        if root >= u_end {
            break;
        }
        letters.push(Letter::ALL[k]);
        tile = tile.compose(&p.letter_matrices()[k]);
        u = root;
        if letters.len() > limit {
            return None;
        }
    }
    let expected = MobiusMap::from_raw([h.exp(), 0.0, 0.0, (-h).exp()]).compose(&start);
    (dist_uhp(expected.orbit_of_i(), tile.orbit_of_i()) < SAME_TILE).then_some(letters)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-300 || (a.abs() < 1e-14 * b.abs()) {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut r = vec![q / a];
    if q != 0.0 {
        r.push(c / q);
    }
    r
}

/// Removes repeated geodesics, comparing endpoint sets.
pub(crate) fn distinct_lifts(lifts: &[BaseLift], tol: f64) -> Vec<BaseLift> {
    let mut out: Vec<BaseLift> = Vec::new();
    for l in lifts {
        let dup = out.iter().any(|o| {
            (o.u.approx_eq(l.u, tol) && o.v.approx_eq(l.v, tol)) || (o.u.approx_eq(l.v, tol) && o.v.approx_eq(l.u, tol))
        });
        if !dup {
            out.push(*l);
        }
    }
    out
}
