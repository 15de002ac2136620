use rayon::prelude::*;
use serde::Serialize;

use super::{class_series, orbit_series, ExponentError, GrowthSeries, SeriesKind};
use crate::currents::{intersection_with, Current, CurrentError, LiftSearch};
use crate::group::{enumerate_conjugacy_classes, ConjClass, GroupPresentation};

/// `K`: the `η`-mass of the geodesics meeting the fundamental octagon.
pub fn mass_near_domain(eta: &Current, p: &GroupPresentation) -> f64 {
    eta.atoms().iter().map(|a| a.weight * a.class.domain_lifts(p).len() as f64).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InjectionReport {
    pub depth: usize,
    pub k: f64,
    /// Values of `R` checked.
    pub checked: usize,
    /// `(R, Card 𝒞_η(R), Card Γ_η(R + 2K))` where the two counts are closest.
    pub tightest: Option<(f64, u64, u64)>,
}

/// Checks `Card 𝒞_η(R) ≤ Card Γ_η(R + 2K)` at every observed `R`.
pub fn verify_injection(eta: &Current, depth: usize, p: &GroupPresentation) -> Result<InjectionReport, ExponentError> {
    let orbit = orbit_series(eta, depth, p)?;
    let classes = class_series(eta, depth, p)?;
    verify_injection_over(eta, &orbit, &classes, p)
}

pub fn verify_injection_over(
    eta: &Current,
    orbit: &GrowthSeries,
    classes: &GrowthSeries,
    p: &GroupPresentation,
) -> Result<InjectionReport, ExponentError> {
    if orbit.kind() != SeriesKind::Orbit || classes.kind() != SeriesKind::Classes {
        return Err(ExponentError::InvalidParameter("expected an orbit series and a class series".into()));
    }
    let k = mass_near_domain(eta, p);
    let mut tightest: Option<(f64, u64, u64)> = None;
    for &(r, c) in classes.points() {
        let g = orbit.count_at(r + 2.0 * k);
        if c > g {
            return Err(ExponentError::AssertionFailure {
                check: "injection",
                r,
                detail: format!("{c} classes but {g} orbit points within R + 2K = {}", r + 2.0 * k),
            });
        }
        if tightest.map_or(true, |(_, c0, g0)| g - c < g0 - c0) {
            tightest = Some((r, c, g));
        }
    }
    Ok(InjectionReport { depth: classes.depth().min(orbit.depth()), k, checked: classes.points().len(), tightest })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberRow {
    pub r: f64,
    /// `Card 𝒞_η(R)`.
    pub classes: u64,
    /// Largest fiber `Card(π⁻¹([γ]) ∩ B_η(R))` over `[γ] ∈ 𝒞_η(R)`.
    pub max_fiber: u64,
    /// `Card B_η(R)`.
    pub fibers: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberReport {
    pub depth: usize,
    pub d: f64,
    pub rows: Vec<FiberRow>,
    pub max_ratio: f64,
    /// First `R` of the top half of the range, where the ratio must not increase.
    pub tail_start: f64,
}

/// Counts, for each class, the conjugates whose axes pass within `d` of the
/// origin, and checks that the largest such fiber over `𝒞_η(R)` grows at most
/// linearly in `R`.
pub fn verify_fiber_bound(eta: &Current, depth: usize, d: f64, p: &GroupPresentation) -> Result<FiberReport, ExponentError> {
    if depth == 0 {
        return Err(ExponentError::InvalidDepth);
    }
    verify_fiber_bound_over(eta, &enumerate_conjugacy_classes(p, depth), depth, d, p, &LiftSearch::default())
}

pub fn verify_fiber_bound_over(
    eta: &Current,
    classes: &[ConjClass],
    depth: usize,
    d: f64,
    p: &GroupPresentation,
    search: &LiftSearch,
) -> Result<FiberReport, ExponentError> {
    if !(d >= p.diameter()) {
        return Err(ExponentError::InvalidParameter(format!("D = {d} is below the octagon diameter {}", p.diameter())));
    }
    let mut data = classes
        .par_iter()
        .filter(|c| c.cyclic_word().len() <= depth)
        .map(|c| Ok((intersection_with(eta, c, p, search)?, c.lifts_near_origin(d, p) as u64)))
        .collect::<Result<Vec<_>, CurrentError>>()?;
    data.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rows: Vec<FiberRow> = Vec::new();
    let (mut count, mut max_fiber, mut fibers) = (0, 0, 0);
    for (k, &(r, f)) in data.iter().enumerate() {
        count += 1;
        max_fiber = max_fiber.max(f);
        fibers += f;
        if data.get(k + 1).map_or(true, |next| next.0 != r) {
            if r <= 0.0 {
                return Err(ExponentError::AssertionFailure {
                    check: "fiber bound",
                    r,
                    detail: format!("{count} classes with zero intersection, largest fiber {max_fiber}"),
                });
            }
            rows.push(FiberRow { r, classes: count, max_fiber, fibers, ratio: max_fiber as f64 / r });
        }
    }
    let r_max = rows.last().map_or(0.0, |row| row.r);
    let tail_start = rows.iter().map(|row| row.r).find(|&r| r >= r_max / 2.0).unwrap_or(r_max);
    for pair in rows.windows(2).filter(|w| w[0].r >= tail_start) {
        if pair[1].ratio > pair[0].ratio {
            return Err(ExponentError::AssertionFailure {
                check: "fiber bound",
                r: pair[1].r,
                detail: format!("max fiber / R rises from {} to {}", pair[0].ratio, pair[1].ratio),
            });
        }
    }
    let max_ratio = rows.iter().map(|row| row.ratio).fold(0.0, f64::max);
    Ok(FiberReport { depth, d, rows, max_ratio, tail_start })
}
