use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::ExponentError;
use crate::currents::{d_eta_frame, intersection_with, Current, CurrentError, LiftSearch};
use crate::group::{enumerate_conjugacy_classes, enumerate_elements, ConjClass, GroupElement, GroupPresentation};
use crate::hyperbolic::SegmentFrame;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// Orbit points counted by `d_η(γo, o)`.
    Orbit,
    /// Conjugacy classes counted by `i(η, c)`.
    Classes,
    /// Conjugacy classes counted by translation length.
    Length,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Entry {
    value: f64,
    level: usize,
    multiplicity: u64,
}

/// Cumulative counts `N(R)` at the observed values `R`.
///
/// Every observation remembers the enumeration level (word length) that
/// produced it, so the series of any smaller depth can be recovered.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSeries {
    kind: SeriesKind,
    depth: usize,
    entries: Vec<Entry>,
    points: Vec<(f64, u64)>,
}

impl GrowthSeries {
    /// Series of single observations `(value, level)` with `level ≤ depth`.
    pub fn from_observations(
        kind: SeriesKind,
        depth: usize,
        observations: impl IntoIterator<Item = (f64, usize)>,
    ) -> Result<Self, ExponentError> {
        let entries = observations.into_iter().map(|(value, level)| Entry { value, level, multiplicity: 1 }).collect();
        Self::from_entries(kind, depth, entries)
    }

    /// Series with the given cumulative counts, all attributed to `depth`.
    pub fn from_points(kind: SeriesKind, depth: usize, points: &[(f64, u64)]) -> Result<Self, ExponentError> {
        let mut entries = Vec::with_capacity(points.len());
        let mut last: Option<(f64, u64)> = None;
        for &(r, n) in points {
            if let Some((r0, n0)) = last {
                if !(r > r0) {
                    return Err(ExponentError::InvalidSeries(format!("R values not strictly increasing at {r}")));
                }
                if n < n0 {
                    return Err(ExponentError::InvalidSeries(format!("count decreases at R = {r}")));
                }
            }
            let added = n - last.map_or(0, |(_, n0)| n0);
            if added > 0 {
                entries.push(Entry { value: r, level: depth, multiplicity: added });
            }
            last = Some((r, n));
        }
        let mut s = Self::from_entries(kind, depth, entries)?;
        s.points = points.to_vec();
        Ok(s)
    }

    fn from_entries(kind: SeriesKind, depth: usize, mut entries: Vec<Entry>) -> Result<Self, ExponentError> {
        if let Some(e) = entries.iter().find(|e| !e.value.is_finite() || e.level > depth) {
            return Err(ExponentError::InvalidSeries(format!("observation {} at level {}", e.value, e.level)));
        }
        entries.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.level.cmp(&b.level)));
        let mut points: Vec<(f64, u64)> = Vec::new();
        let mut total = 0;
        for e in &entries {
            total += e.multiplicity;
            match points.last_mut() {
                Some((r, n)) if *r == e.value => *n = total,
                _ => points.push((e.value, total)),
            }
        }
        Ok(Self { kind, depth, entries, points })
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `(R, N(R))` with `R` strictly increasing.
    pub fn points(&self) -> &[(f64, u64)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of observations, counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.points.last().map_or(0, |p| p.1)
    }

    /// Largest observed value.
    pub fn r_max(&self) -> Option<f64> {
        self.points.last().map(|p| p.0)
    }

    /// `N(r)`: observations with value `≤ r`.
    pub fn count_at(&self, r: f64) -> u64 {
        let k = self.points.partition_point(|p| p.0 <= r);
        if k == 0 {
            0
        } else {
            self.points[k - 1].1
        }
    }

    /// Number of observations at each point, `N(Rₖ) − N(Rₖ₋₁)`.
    pub fn multiplicities(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        let mut prev = 0;
        self.points.iter().map(move |&(r, n)| {
            let m = n - prev;
            prev = n;
            (r, m)
        })
    }

    /// The series an enumeration to `depth` would have produced.
    pub fn restricted(&self, depth: usize) -> Self {
        let entries = self.entries.iter().filter(|e| e.level <= depth).copied().collect();
        Self::from_entries(self.kind, depth.min(self.depth), entries).expect("a sub-series of a valid series is valid")
    }

    /// The points with `R ≤ r_hi`.
    pub fn truncated(&self, r_hi: f64) -> Self {
        let entries = self.entries.iter().filter(|e| e.value <= r_hi).copied().collect();
        Self::from_entries(self.kind, self.depth, entries).expect("a sub-series of a valid series is valid")
    }

    /// Largest `R` up to which the counts have settled in depth: for every
    /// point `R' ≤ R`, at least a fraction `1 − tau` of `N(R')` is already
    /// reached one level earlier. `None` when even the first point fails.
    pub fn stable_radius(&self, tau: f64) -> Option<f64> {
        if self.depth == 0 {
            return None;
        }
        let before = self.restricted(self.depth - 1);
        let mut radius = None;
        for &(r, n) in &self.points {
            if (before.count_at(r) as f64) < (1.0 - tau) * n as f64 {
                break;
            }
            radius = Some(r);
        }
        radius
    }

    /// The part of the series below [`stable_radius`](Self::stable_radius).
    pub fn trusted(&self, tau: f64) -> Self {
        match self.stable_radius(tau) {
            Some(r) => self.truncated(r),
            None => Self { entries: Vec::new(), points: Vec::new(), ..self.clone() },
        }
    }

    /// One JSON object per point.
    pub fn write_json_lines(&self, mut out: impl Write) -> io::Result<()> {
        #[derive(Serialize)]
        struct Record {
            record: &'static str,
            kind: SeriesKind,
            depth: usize,
            r: f64,
            count: u64,
        }
        for &(r, count) in &self.points {
            let rec = Record { record: "point", kind: self.kind, depth: self.depth, r, count };
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn check_depth(depth: usize) -> Result<(), ExponentError> {
    if depth == 0 {
        Err(ExponentError::InvalidDepth)
    } else {
        Ok(())
    }
}

/// `N(R) = Card{γ : |γ| ≤ depth, d_η(γo, o) ≤ R}`.
pub fn orbit_series(eta: &Current, depth: usize, p: &GroupPresentation) -> Result<GrowthSeries, ExponentError> {
    check_depth(depth)?;
    orbit_series_over(eta, &enumerate_elements(p, depth), depth, p, &LiftSearch::default())
}

/// [`orbit_series`] over a precomputed enumeration; elements longer than
/// `depth` are skipped.
pub fn orbit_series_over(
    eta: &Current,
    elements: &[GroupElement],
    depth: usize,
    p: &GroupPresentation,
    search: &LiftSearch,
) -> Result<GrowthSeries, ExponentError> {
    check_depth(depth)?;
    let obs = elements
        .par_iter()
        .filter(|g| g.word_length() <= depth)
        .map(|g| Ok((d_eta_frame(eta, &SegmentFrame::from_origin(&g.matrix), p, search)?, g.word_length())))
        .collect::<Result<Vec<_>, CurrentError>>()?;
    GrowthSeries::from_observations(SeriesKind::Orbit, depth, obs)
}

/// `N(R) = Card{c : |c| ≤ depth, i(η, c) ≤ R}` over unoriented classes.
pub fn class_series(eta: &Current, depth: usize, p: &GroupPresentation) -> Result<GrowthSeries, ExponentError> {
    check_depth(depth)?;
    class_series_over(eta, &enumerate_conjugacy_classes(p, depth), depth, p, &LiftSearch::default())
}

pub fn class_series_over(
    eta: &Current,
    classes: &[ConjClass],
    depth: usize,
    p: &GroupPresentation,
    search: &LiftSearch,
) -> Result<GrowthSeries, ExponentError> {
    check_depth(depth)?;
    let obs = classes
        .par_iter()
        .filter(|c| c.cyclic_word().len() <= depth)
        .map(|c| Ok((intersection_with(eta, c, p, search)?, c.cyclic_word().len())))
        .collect::<Result<Vec<_>, CurrentError>>()?;
    GrowthSeries::from_observations(SeriesKind::Classes, depth, obs)
}

/// `N(R) = Card{c : |c| ≤ depth, ℓ(c) ≤ R}`.
pub fn length_series(depth: usize, p: &GroupPresentation) -> Result<GrowthSeries, ExponentError> {
    check_depth(depth)?;
    length_series_over(&enumerate_conjugacy_classes(p, depth), depth)
}

pub fn length_series_over(classes: &[ConjClass], depth: usize) -> Result<GrowthSeries, ExponentError> {
    check_depth(depth)?;
    let obs = classes.iter().filter(|c| c.cyclic_word().len() <= depth).map(|c| (c.length(), c.cyclic_word().len()));
    GrowthSeries::from_observations(SeriesKind::Length, depth, obs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_counts() {
        let s = GrowthSeries::from_observations(SeriesKind::Orbit, 2, [(1.0, 1), (0.0, 0), (1.0, 2), (2.5, 2)]).unwrap();
        assert_eq!(s.points(), &[(0.0, 1), (1.0, 3), (2.5, 4)]);
        assert_eq!(s.count_at(0.5), 1);
        assert_eq!(s.count_at(-1.0), 0);
        assert_eq!(s.count_at(10.0), 4);
        assert_eq!(s.restricted(1).points(), &[(0.0, 1), (1.0, 2)]);
        assert_eq!(s.truncated(1.0).points(), &[(0.0, 1), (1.0, 3)]);
        assert_eq!(s.multiplicities().collect::<Vec<_>>(), [(0.0, 1), (1.0, 2), (2.5, 1)]);
        assert!(GrowthSeries::from_observations(SeriesKind::Orbit, 1, [(1.0, 2)]).is_err());
    }

    #[test]
    fn stable_radius_stops_at_the_first_unsettled_point() {
        let obs = [(1.0, 1), (2.0, 1), (2.0, 2), (3.0, 2), (3.0, 2)];
        let s = GrowthSeries::from_observations(SeriesKind::Length, 2, obs).unwrap();
        assert_eq!(s.stable_radius(0.1), Some(1.0));
        assert_eq!(s.stable_radius(0.5), Some(2.0));
        assert_eq!(s.trusted(0.1).points(), &[(1.0, 1)]);
    }

    #[test]
    fn points_are_validated() {
        assert!(GrowthSeries::from_points(SeriesKind::Orbit, 1, &[(1.0, 2), (1.0, 3)]).is_err());
        assert!(GrowthSeries::from_points(SeriesKind::Orbit, 1, &[(1.0, 2), (2.0, 1)]).is_err());
        let s = GrowthSeries::from_points(SeriesKind::Orbit, 1, &[(1.0, 2), (2.0, 2), (3.0, 7)]).unwrap();
        assert_eq!(s.points(), &[(1.0, 2), (2.0, 2), (3.0, 7)]);
    }
}
