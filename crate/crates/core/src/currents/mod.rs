//! Discrete geodesic currents: finite weighted sums of closed geodesics.
//!
//! A current `η = Σ wᵢ·cᵢ` assigns to a set of geodesics of the plane the
//! weighted number of lifts of the `cᵢ` it contains. The quantities built on
//! it are the intersection number `i(η, c) = η(T[x, γx))` and the quasi-metric
//! `d_η(x, y) = η(T[x, y])`, where `T[x, y]` is the set of geodesics transverse
//! to the closed segment `[x, y]`, those through `x` or `y` included and the
//! chord through both excluded.

mod filling;
mod lifts;

use std::fmt;

use thiserror::Error;

use crate::group::{ConjClass, GroupPresentation, Word};
use crate::hyperbolic::GeometryError;

pub use filling::{filling_probe, filling_probe_with, ProbeConfig, ProbeOutcome};
pub use lifts::{
    d_eta, d_eta_with, intersection, intersection_classes, intersection_with, lifts_crossing, lifts_crossing_current,
    lifts_crossing_with, LiftSearch, LiftSet,
};
pub(crate) use lifts::d_eta_frame;
pub use filling::Witness;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurrentError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: weight {weight} is not positive")]
    NonPositiveWeight { line: usize, weight: f64 },
    #[error("current has no atoms")]
    EmptyCurrent,
    #[error("lift search did not converge: a crossing is charged to a tile beyond radius {radius}")]
    PruningNotConverged { radius: f64 },
    #[error("depth must be at least 1")]
    InvalidDepth,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One weighted closed geodesic of a current.
#[derive(Clone, Debug)]
pub struct Atom {
    pub weight: f64,
    pub class: ConjClass,
}

/// A nonempty current with positive weights and pairwise distinct classes.
#[derive(Clone, Debug)]
pub struct Current {
    atoms: Vec<Atom>,
}

impl Current {
    /// Merges repeated classes by adding weights, keeping first-seen order.
    pub fn new(atoms: impl IntoIterator<Item = (f64, ConjClass)>) -> Result<Self, CurrentError> {
        let mut merged: Vec<Atom> = Vec::new();
        for (i, (weight, class)) in atoms.into_iter().enumerate() {
            if !(weight > 0.0) || !weight.is_finite() {
                return Err(CurrentError::NonPositiveWeight { line: i + 1, weight });
            }
            match merged.iter_mut().find(|a| a.class == class) {
                Some(a) => a.weight += weight,
                None => merged.push(Atom { weight, class }),
            }
        }
        if merged.is_empty() {
            return Err(CurrentError::EmptyCurrent);
        }
        Ok(Self { atoms: merged })
    }

    /// The current of a single closed geodesic with weight one.
    pub fn single(class: ConjClass) -> Self {
        Self { atoms: vec![Atom { weight: 1.0, class }] }
    }

    /// Builds a current from `(weight, word)` pairs.
    pub fn from_words(atoms: &[(f64, &str)], p: &GroupPresentation) -> Result<Self, CurrentError> {
        let mut parsed = Vec::with_capacity(atoms.len());
        for (i, (w, s)) in atoms.iter().enumerate() {
            parsed.push((*w, parse_class(s, i + 1, p)?));
        }
        Self::new(parsed)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Whether `c` is one of the atoms.
    pub fn contains(&self, c: &ConjClass) -> bool {
        self.atoms.iter().any(|a| &a.class == c)
    }

    /// `λ·η` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self, CurrentError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(CurrentError::NonPositiveWeight { line: 0, weight: lambda });
        }
        let atoms = self.atoms.iter().map(|a| Atom { weight: a.weight * lambda, class: a.class.clone() }).collect();
        Ok(Self { atoms })
    }

    /// `self + other`, merging shared classes.
    pub fn sum(&self, other: &Current) -> Current {
        let all = self.atoms.iter().chain(&other.atoms).map(|a| (a.weight, a.class.clone()));
        Self::new(all).expect("sum of nonempty currents")
    }

    /// The current in file format, one `<weight> <word>` line per atom.
    pub fn to_text(&self) -> String {
        self.atoms.iter().map(|a| format!("{} {}\n", a.weight, a.class.cyclic_word())).collect()
    }
}

impl fmt::Display for Current {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·{}", a.weight, a.class)?;
        }
        Ok(())
    }
}

fn parse_class(word: &str, line: usize, p: &GroupPresentation) -> Result<ConjClass, CurrentError> {
    let w: Word = word.parse().map_err(|e| CurrentError::Parse { line, message: format!("{e}") })?;
    ConjClass::from_word(&w, p).map_err(|e| CurrentError::Parse { line, message: format!("{word}: {e}") })
}

/// Parses the text format: one `<weight> <word>` atom per line, `#` starting
/// a comment, blank lines ignored.
///
/// ```
/// use geocurrents::currents::parse_current;
/// use geocurrents::group::standard_genus2;
///
/// let p = standard_genus2().unwrap();
/// let eta = parse_current("1.0 a\n2.0 baB  # a conjugate of a\n", &p).unwrap();
/// assert_eq!(eta.len(), 1);
/// assert_eq!(eta.atoms()[0].weight, 3.0);
/// ```
pub fn parse_current(text: &str, p: &GroupPresentation) -> Result<Current, CurrentError> {
    let mut atoms = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let (Some(ws), Some(word), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(CurrentError::Parse { line, message: format!("expected `<weight> <word>`, got {content:?}") });
        };
        let weight: f64 = ws.parse().map_err(|_| CurrentError::Parse { line, message: format!("bad weight {ws:?}") })?;
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(CurrentError::NonPositiveWeight { line, weight });
        }
        atoms.push((weight, parse_class(word, line, p)?));
    }
    Current::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_genus2;

    #[test]
    fn parse_examples() {
        let p = standard_genus2().unwrap();
        let one = parse_current("1.0 a", &p).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.atoms()[0].class.to_string(), "[a]");
        let merged = parse_current("1.0 a\n2.0 baB", &p).unwrap();
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.atoms()[0].weight, 3.0);
        assert!(matches!(parse_current("-1 a", &p), Err(CurrentError::NonPositiveWeight { line: 1, .. })));
        assert!(matches!(parse_current("0 a", &p), Err(CurrentError::NonPositiveWeight { .. })));
        assert!(matches!(parse_current("# nothing\n\n", &p), Err(CurrentError::EmptyCurrent)));
        assert!(matches!(parse_current("1.0 axb", &p), Err(CurrentError::Parse { line: 1, .. })));
        assert!(matches!(parse_current("1.0", &p), Err(CurrentError::Parse { .. })));
        assert!(matches!(parse_current("1.0 a b", &p), Err(CurrentError::Parse { .. })));
        assert!(matches!(parse_current("x a", &p), Err(CurrentError::Parse { .. })));
        assert!(matches!(parse_current("1.0 abABcdCD", &p), Err(CurrentError::Parse { .. })));
    }

    #[test]
    fn text_round_trip() {
        let p = standard_genus2().unwrap();
        let eta = parse_current("1 a\n0.5 b # comment\n\n2.5 abcd\n", &p).unwrap();
        let back = parse_current(&eta.to_text(), &p).unwrap();
        assert_eq!(back.len(), eta.len());
        for (x, y) in eta.atoms().iter().zip(back.atoms()) {
            assert_eq!(x.weight, y.weight);
            assert_eq!(x.class, y.class);
        }
    }

    #[test]
    fn scaling_and_sums() {
        let p = standard_genus2().unwrap();
        let eta = Current::from_words(&[(1.0, "a"), (2.0, "b")], &p).unwrap();
        assert_eq!(eta.scaled(2.0).unwrap().total_weight(), 6.0);
        assert!(eta.scaled(0.0).is_err());
        let s = eta.sum(&Current::from_words(&[(1.0, "A"), (1.0, "c")], &p).unwrap());
        assert_eq!(s.len(), 3);
        assert_eq!(s.total_weight(), 5.0);
    }
}
