use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::presentation::GroupPresentation;
use super::word::{Letter, Word};
use crate::hyperbolic::{dist_uhp, MobiusMap};

/// A group element with a cached matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub word: Word,
    pub matrix: MobiusMap,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self { word: Word::empty(), matrix: MobiusMap::IDENTITY }
    }

    pub fn from_word(word: Word, p: &GroupPresentation) -> Self {
        let matrix = p.word_to_matrix(&word);
        Self { word, matrix }
    }

    pub fn word_length(&self) -> usize {
        self.word.len()
    }

    pub fn inverse(&self) -> Self {
        Self { word: self.word.inverse(), matrix: self.matrix.inverse() }
    }

    pub fn compose(&self, other: &GroupElement) -> Self {
        Self { word: self.word.concat(&other.word).free_reduce(), matrix: self.matrix.compose(&other.matrix) }
    }
}

const CELL: f64 = 0.5;
const SAME_POINT: f64 = 0.1;

/// Spatial hash of half-plane points. Orbit points of the base point are at
/// least twice the inradius apart, so points closer than `SAME_POINT` are
/// the same orbit point.
#[derive(Default)]
pub(crate) struct OrbitIndex {
    cells: HashMap<(i64, i64), Vec<u32>>,
    points: Vec<Complex64>,
}

impl OrbitIndex {
    pub fn new() -> Self {
        Self::default()
    }

    fn row(z: Complex64) -> i64 {
        (z.im.ln() / CELL).floor() as i64
    }

    fn column(x: f64, row: i64) -> i64 {
        (x / (CELL * (row as f64 * CELL).exp())).floor() as i64
    }

    fn key(z: Complex64) -> (i64, i64) {
        let r = Self::row(z);
        (r, Self::column(z.re, r))
    }

    pub fn find(&self, z: Complex64) -> Option<u32> {
        let r0 = Self::row(z);
        for r in r0 - 1..=r0 + 1 {
            let c0 = Self::column(z.re, r);
            for c in c0 - 1..=c0 + 1 {
                if let Some(v) = self.cells.get(&(r, c)) {
                    for &i in v {
                        if dist_uhp(self.points[i as usize], z) < SAME_POINT {
                            return Some(i);
                        }
                    }
                }
            }
        }
        None
    }

    /// Inserts `z` unless an equal point is present; returns whether it was new.
    pub fn insert(&mut self, z: Complex64) -> bool {
        if self.find(z).is_some() {
            return false;
        }
        let idx = self.points.len() as u32;
        self.points.push(z);
        self.cells.entry(Self::key(z)).or_default().push(idx);
        true
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.points.len()
    }
}

/// All elements of word length at most `max_len`, in breadth-first order
/// (by length, then by the order of discovery).
///
/// Two words are the same element when they move the base point to the same
/// orbit point; the action is free, so this is exact. Each element keeps the
/// first word found, which is a geodesic word and hence Dehn-reduced.
pub fn enumerate_elements(p: &GroupPresentation, max_len: usize) -> Vec<GroupElement> {
    let mut index = OrbitIndex::new();
    index.insert(MobiusMap::IDENTITY.orbit_of_i());
    let mut out = vec![GroupElement::identity()];
    let mut level_start = 0;
    for _ in 0..max_len {
        let level_end = out.len();
        for idx in level_start..level_end {
            let last = out[idx].word.last();
            for l in Letter::ALL {
                if Some(l.inverse()) == last {
                    continue;
                }
                let m = out[idx].matrix.compose(p.letter_matrix(l));
                if index.insert(m.orbit_of_i()) {
                    let mut word = out[idx].word.clone();
                    word.push(l);
                    out.push(GroupElement { word, matrix: m });
                }
            }
        }
        level_start = level_end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_genus2;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_depths() {
        let p = standard_genus2().unwrap();
        assert_eq!(enumerate_elements(&p, 0).len(), 1);
        assert_eq!(enumerate_elements(&p, 1).len(), 9);
        assert_eq!(enumerate_elements(&p, 2).len(), 9 + 8 * 7);
    }

    #[test]
    fn index_separates_nearby_points() {
        let mut idx = OrbitIndex::new();
        assert!(idx.insert(Complex64::new(0.0, 1.0)));
        assert!(!idx.insert(Complex64::new(0.01, 1.0)));
        assert!(idx.insert(Complex64::new(0.5, 1.0)));
        assert!(!idx.insert(Complex64::new(0.5, 1.0 + 1e-9)));
        assert!(idx.insert(Complex64::new(1e6, 3e-4)));
        assert!(!idx.insert(Complex64::new(1e6 + 1e-7, 3e-4)));
        assert_eq!(idx.len(), 3);
    }

    #[test]
    fn index_finds_points_across_cell_boundaries() {
        let mut idx = OrbitIndex::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12345);
        let mut next = || rng.gen::<f64>();
        let mut pts = Vec::new();
        for _ in 0..2000 {
            let z = Complex64::new(next() * 40.0 - 20.0, (next() * 10.0 - 5.0).exp());
            if idx.insert(z) {
                pts.push(z);
            }
        }
        for z in pts {
            let w = z + Complex64::new(0.03 * z.im, 0.02 * z.im);
            assert!(idx.find(w).is_some());
        }
    }
}
