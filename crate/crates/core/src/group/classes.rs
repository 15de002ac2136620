use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::dehn::cyclic_dehn_reduce;
use super::enumerate::GroupElement;
use super::presentation::GroupPresentation;
use super::tiling::{base_lifts, cutting_sequence, BaseLift, LiftFilter};
use super::word::{Letter, Word};
use super::GroupError;
use crate::hyperbolic::Geodesic;

/// Canonical key of the unoriented conjugacy class of `w`, or `None` for the
/// identity.
///
/// The closed geodesic of the class is pushed off itself to either side and
/// the sides of the fundamental octagon it crosses are read off; the key is
/// the least rotation of either reading or of its inverse. Both readings are
/// shortest words for the class.
pub fn canonical_cyclic_word(w: &Word, p: &GroupPresentation) -> Option<Word> {
    let reduced = cyclic_dehn_reduce(w, p);
    if reduced.is_empty() {
        return None;
    }
    let m = p.word_to_matrix(&reduced);
    let mut best: Option<Word> = None;
    for side in [1.0, -1.0] {
        if let Some(letters) = cutting_sequence(p, &m, side) {
            let key = Word::from_letters(letters).min_cyclic_form();
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
        }
    }
    Some(best.unwrap_or_else(|| reduced.min_cyclic_form()))
}

/// Unoriented conjugacy class of a nontrivial element.
#[derive(Clone, Serialize)]
pub struct ConjClass {
    cyclic_word: Word,
    representative: GroupElement,
    length: f64,
    axis: Geodesic,
    #[serde(skip)]
    lifts: OnceLock<Vec<BaseLift>>,
}

impl ConjClass {
    pub fn from_word(w: &Word, p: &GroupPresentation) -> Result<Self, GroupError> {
        let key = canonical_cyclic_word(w, p).ok_or(GroupError::IdentityClass)?;
        Self::from_canonical(key, p)
    }

    pub fn from_element(g: &GroupElement, p: &GroupPresentation) -> Result<Self, GroupError> {
        Self::from_word(&g.word, p)
    }

    fn from_canonical(cyclic_word: Word, p: &GroupPresentation) -> Result<Self, GroupError> {
        let representative = GroupElement::from_word(cyclic_word.clone(), p);
        let length = representative
            .matrix
            .translation_length()
            .map_err(|e| GroupError::ConstructionFailed(format!("{cyclic_word}: {e}")))?;
        let axis = representative.matrix.axis().map_err(|e| GroupError::ConstructionFailed(e.to_string()))?;
        Ok(Self { cyclic_word, representative, length, axis, lifts: OnceLock::new() })
    }

    pub fn cyclic_word(&self) -> &Word {
        &self.cyclic_word
    }

    pub fn representative(&self) -> &GroupElement {
        &self.representative
    }

    /// Length of the closed geodesic.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Axis of the representative.
    pub fn axis(&self) -> &Geodesic {
        &self.axis
    }

    /// The class of the `n`-th power.
    pub fn power(&self, n: usize, p: &GroupPresentation) -> Result<Self, GroupError> {
        Self::from_word(&self.cyclic_word.pow(n), p)
    }

    /// Lifts meeting the fundamental octagon, with multiplicity for powers.
    pub(crate) fn domain_lifts(&self, p: &GroupPresentation) -> &[BaseLift] {
        self.lifts.get_or_init(|| base_lifts(p, &self.representative.matrix, LiftFilter::MeetsDomain))
    }

    /// Number of distinct lifts within `radius` of the origin.
    pub fn lifts_near_origin(&self, radius: f64, p: &GroupPresentation) -> usize {
        self.lifts_within(radius, p).len()
    }

    /// The distinct lifts within `radius` of the origin.
    pub fn lifts_within(&self, radius: f64, p: &GroupPresentation) -> Vec<Geodesic> {
        let lifts = base_lifts(p, &self.representative.matrix, LiftFilter::Within(radius));
        super::tiling::distinct_lifts(&lifts, 1e-8).into_iter().map(|l| Geodesic::from_proj(l.u, l.v)).collect()
    }
}

impl fmt::Debug for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConjClass([{}], length {:.6})", self.cyclic_word, self.length)
    }
}

impl fmt::Display for ConjClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.cyclic_word)
    }
}

impl PartialEq for ConjClass {
    fn eq(&self, other: &Self) -> bool {
        self.cyclic_word == other.cyclic_word
    }
}

impl Eq for ConjClass {}

impl Hash for ConjClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cyclic_word.hash(state);
    }
}

impl PartialOrd for ConjClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order on canonical words.
impl Ord for ConjClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.cyclic_word.len(), &self.cyclic_word).cmp(&(other.cyclic_word.len(), &other.cyclic_word))
    }
}

/// Whether two classes have the same closed geodesic, decided from their
/// lifts through the fundamental octagon.
pub fn same_closed_geodesic(x: &ConjClass, y: &ConjClass, p: &GroupPresentation) -> bool {
    if (x.length - y.length).abs() > 1e-6 {
        return false;
    }
    let ly = y.domain_lifts(p);
    x.domain_lifts(p).iter().any(|a| {
        ly.iter().any(|b| {
            (a.u.approx_eq(b.u, 1e-8) && a.v.approx_eq(b.v, 1e-8)) || (a.u.approx_eq(b.v, 1e-8) && a.v.approx_eq(b.u, 1e-8))
        })
    })
}

struct ClassSearch<'a> {
    p: &'a GroupPresentation,
    forbidden: Vec<[Letter; 5]>,
    max_len: usize,
    word: Vec<Letter>,
    found: Vec<Word>,
}

impl ClassSearch<'_> {
    fn ends_with_forbidden(&self) -> bool {
        let n = self.word.len();
        n >= 5 && self.forbidden.iter().any(|f| self.word[n - 5..] == f[..])
    }

    fn cyclic_window<const K: usize>(&self, start: usize) -> [Letter; K] {
        let n = self.word.len();
        std::array::from_fn(|j| self.word[(start + j) % n])
    }

    fn accept(&self) -> bool {
        let n = self.word.len();
        if n >= 2 && self.word[0] == self.word[n - 1].inverse() {
            return false;
        }
        if n >= 5 {
            for start in n - 4..n {
                let win: [Letter; 5] = self.cyclic_window(start);
                if self.forbidden.contains(&win) {
                    return false;
                }
            }
        }
        let w = Word::from_letters(self.word.clone());
        if w.min_cyclic_form() != w {
            return false;
        }
        canonical_cyclic_word(&w, self.p).as_ref() == Some(&w)
    }

    fn run(&mut self) {
        if !self.word.is_empty() && self.accept() {
            self.found.push(Word::from_letters(self.word.clone()));
        }
        if self.word.len() == self.max_len {
            return;
        }
        for l in Letter::ALL {
            if self.word.last() == Some(&l.inverse()) {
                continue;
            }
            self.word.push(l);
            if !self.ends_with_forbidden() {
                self.run();
            }
            self.word.pop();
        }
    }
}

/// One class per unoriented conjugacy class with a cyclically reduced
/// representative of length at most `max_len`, in shortlex order of the
/// canonical words.
pub fn enumerate_conjugacy_classes(p: &GroupPresentation, max_len: usize) -> Vec<ConjClass> {
    let forbidden = p
        .relator_pieces()
        .iter()
        .map(|w| std::array::from_fn(|j| w.letters()[j]))
        .collect();
    let mut search = ClassSearch { p, forbidden, max_len, word: Vec::new(), found: Vec::new() };
    search.run();
    let mut words = search.found;
    words.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    words
        .into_par_iter()
        .map(|w| ConjClass::from_canonical(w, p).expect("nontrivial elements of a surface group are hyperbolic"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_genus2;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn conjugates_and_inverses_share_a_key() {
        let p = standard_genus2().unwrap();
        let a = canonical_cyclic_word(&w("a"), &p).unwrap();
        assert_eq!(canonical_cyclic_word(&w("baB"), &p).unwrap(), a);
        assert_eq!(canonical_cyclic_word(&w("A"), &p).unwrap(), a);
        assert_eq!(canonical_cyclic_word(&w("cdaDC"), &p).unwrap(), a);
        assert!(canonical_cyclic_word(p.relator(), &p).is_none());
    }

    #[test]
    fn readings_on_both_sides_of_a_vertex_agree() {
        let p = standard_genus2().unwrap();
        let x = canonical_cyclic_word(&w("aaBACb"), &p).unwrap();
        assert_eq!(canonical_cyclic_word(&w("acdCCD"), &p).unwrap(), x);
        assert_eq!(canonical_cyclic_word(&w("abAB"), &p).unwrap(), canonical_cyclic_word(&w("dcDC"), &p).unwrap());
    }

    #[test]
    fn small_enumerations() {
        let p = standard_genus2().unwrap();
        let one = enumerate_conjugacy_classes(&p, 1);
        assert_eq!(one.iter().map(|c| c.to_string()).collect::<Vec<_>>(), ["[a]", "[b]", "[c]", "[d]"]);
        let three = enumerate_conjugacy_classes(&p, 3);
        let keys: std::collections::HashSet<_> = three.iter().map(|c| c.cyclic_word().clone()).collect();
        assert_eq!(keys.len(), three.len());
        for c in &three {
            assert!(c.length() > 0.0);
        }
    }
}
