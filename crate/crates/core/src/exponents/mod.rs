//! Growth of orbits and of closed geodesics measured by a current, and
//! finite checks of the counting lemmas relating the two.
//!
//! The critical exponents are estimated by a least-squares fit of
//! `log N(R)` against `R` on the upper half of the observed range, where
//! `N(R)` counts orbit points with `d_η(γo, o) ≤ R` or classes with
//! `i(η, c) ≤ R` among those reached by a finite enumeration.

mod estimate;
mod pingpong;
mod series;
mod verify;

use thiserror::Error;

use crate::currents::CurrentError;

pub use estimate::{estimate_exponent, estimate_trusted, ExponentEstimate, MIN_OBSERVATIONS};
pub use pingpong::{check_normalization, normalize_axis, verify_ping_pong, verify_ping_pong_over, BoundaryArc, NormalizationCheck, PingPong, PingPongReport, PingPongRow};
pub use series::{
    class_series, class_series_over, length_series, length_series_over, orbit_series, orbit_series_over, GrowthSeries, SeriesKind,
};
pub use verify::{mass_near_domain, verify_fiber_bound, verify_fiber_bound_over, verify_injection, verify_injection_over, FiberReport, FiberRow, InjectionReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExponentError {
    #[error("not enough data: {found} {what}, {needed} needed")]
    InsufficientData { what: &'static str, found: u64, needed: u64 },
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{check} fails at R = {r}: {detail}")]
    AssertionFailure { check: &'static str, r: f64, detail: String },
    #[error("axis of {word} stays at distance {distance} from the origin")]
    NormalizationFailed { word: String, distance: f64 },
    #[error(transparent)]
    Current(#[from] CurrentError),
}
