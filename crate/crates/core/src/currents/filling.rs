use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lifts::{d_eta_with, intersection_with, LiftSearch};
use super::{Current, CurrentError};
use crate::group::{enumerate_conjugacy_classes, ConjClass, GroupPresentation};
use crate::hyperbolic::{DiskPoint, MobiusMap, Segment};

/// Settings for the segment stage of [`filling_probe`].
#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub seed: u64,
    /// Number of random geodesics; each contributes two consecutive segments.
    pub geodesics: usize,
    pub search: LiftSearch,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { seed: 0x9e37_79b9, geodesics: 64, search: LiftSearch::default() }
    }
}

#[derive(Clone, Debug)]
pub enum Witness {
    /// A closed geodesic with zero intersection with the current.
    Class(ConjClass),
    /// A segment of length `2·diameter + 1` crossed by no lift.
    Segment(Segment),
}

#[derive(Clone, Debug)]
pub enum ProbeOutcome {
    /// No witness found; `epsilon` is the least `d_η` seen over `segments`
    /// random segments. This is evidence of filling, not a proof.
    PassedProbe { epsilon: f64, segments: usize },
    FailedWitness(Witness),
}

impl ProbeOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ProbeOutcome::PassedProbe { .. })
    }
}

/// Looks for evidence that `eta` is not filling.
///
/// First every class with a cyclically reduced word of length at most
/// `depth` is tested for zero intersection with `eta`, classes outside the
/// support before those in it. If none is found, random segments of length
/// `2·diameter + 1` are checked for positive `d_η`.
pub fn filling_probe(eta: &Current, depth: usize, p: &GroupPresentation) -> Result<ProbeOutcome, CurrentError> {
    filling_probe_with(eta, depth, p, &ProbeConfig::default())
}

pub fn filling_probe_with(eta: &Current, depth: usize, p: &GroupPresentation, cfg: &ProbeConfig) -> Result<ProbeOutcome, CurrentError> {
    if depth == 0 {
        return Err(CurrentError::InvalidDepth);
    }
    let classes = enumerate_conjugacy_classes(p, depth);
    let (support, rest): (Vec<_>, Vec<_>) = classes.into_iter().partition(|c| eta.contains(c));
    for c in rest.into_iter().chain(support) {
        if intersection_with(eta, &c, p, &cfg.search)? == 0.0 {
            return Ok(ProbeOutcome::FailedWitness(Witness::Class(c)));
        }
    }
    let step = 2.0 * p.diameter() + 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut epsilon = f64::INFINITY;
    let mut segments = 0;
    for _ in 0..cfg.geodesics {
        let r = rng.gen::<f64>() * p.circumradius();
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let psi = rng.gen::<f64>() * std::f64::consts::TAU;
        let base = MobiusMap::disk_rotation(theta)
            .compose(&MobiusMap::disk_translation(r))
            .compose(&MobiusMap::disk_rotation(psi));
        let at = |s: f64| base.compose(&MobiusMap::disk_translation(s)).apply(DiskPoint::ORIGIN);
        for k in [-1.0, 0.0] {
            let (x, y) = (at(k * step), at((k + 1.0) * step));
            let d = d_eta_with(eta, x, y, p, &cfg.search)?;
            segments += 1;
            if d == 0.0 {
                let s = Segment::closed(x, y)?;
                return Ok(ProbeOutcome::FailedWitness(Witness::Segment(s)));
            }
            epsilon = epsilon.min(d);
        }
    }
    Ok(ProbeOutcome::PassedProbe { epsilon, segments })
}
