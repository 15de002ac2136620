use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI, TAU};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::word::{Letter, Word};
use super::GroupError;
use crate::hyperbolic::{dist, DiskPoint, MobiusMap};

/// Generator matrices, relator and fundamental octagon of the surface group.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    generators: [MobiusMap; 4],
    letters: [MobiusMap; 8],
    relator: Word,
    pieces: Vec<Word>,
    inradius: f64,
    circumradius: f64,
    diameter: f64,
    vertices: [DiskPoint; 8],
    vertices_uhp: [Complex64; 8],
}

fn side_pairing(from: usize, to: usize, translation: f64) -> MobiusMap {
    let phi = |k: usize| k as f64 * FRAC_PI_4;
    MobiusMap::disk_rotation(phi(to))
        .compose(&MobiusMap::disk_translation(translation))
        .compose(&MobiusMap::disk_rotation(PI - phi(from)))
}

/// The regular octagon group: side `k` is centered in direction `kπ/4`, and
/// `a, b, c, d` pair sides `2→0`, `1→3`, `6→4`, `5→7`.
pub fn standard_genus2() -> Result<GroupPresentation, GroupError> {
    let cot = 1.0 / FRAC_PI_8.tan();
    let inradius = cot.acosh();
    let circumradius = (cot * cot).acosh();
    let t = 2.0 * inradius;
    let generators = [side_pairing(2, 0, t), side_pairing(1, 3, t), side_pairing(6, 4, t), side_pairing(5, 7, t)];
    let relator: Word = "abABcdCD".parse()?;
    let mut vertices = [DiskPoint::ORIGIN; 8];
    for (k, v) in vertices.iter_mut().enumerate() {
        *v = DiskPoint::polar(circumradius, k as f64 * FRAC_PI_4 + FRAC_PI_8)
            .map_err(|e| GroupError::ConstructionFailed(e.to_string()))?;
    }
    GroupPresentation::new(generators, relator, vertices, inradius)
}

impl GroupPresentation {
    fn new(generators: [MobiusMap; 4], relator: Word, vertices: [DiskPoint; 8], inradius: f64) -> Result<Self, GroupError> {
        let mut letters = [MobiusMap::IDENTITY; 8];
        for (i, g) in generators.iter().enumerate() {
            letters[i] = *g;
            letters[i + 4] = g.inverse();
        }
        let inv = relator.inverse();
        let pieces = (0..relator.len()).flat_map(|k| [relator.rotated(k), inv.rotated(k)]).collect();
        let mut diameter: f64 = 0.0;
        for p in &vertices {
            for q in &vertices {
                diameter = diameter.max(dist(*p, *q));
            }
        }
        let vertices_uhp = vertices.map(|v| v.to_uhp());
        let circumradius = vertices.iter().map(|v| dist(DiskPoint::ORIGIN, *v)).fold(0.0, f64::max);
        let pres = Self { generators, letters, relator, pieces, inradius, circumradius, diameter, vertices, vertices_uhp };
        pres.validate()?;
        Ok(pres)
    }

    fn validate(&self) -> Result<(), GroupError> {
        let r = self.word_to_matrix(&self.relator);
        let err = r.distance_to(&MobiusMap::IDENTITY);
        if err > 1e-6 {
            return Err(GroupError::ConstructionFailed(format!("relator is {err:.3e} away from the identity")));
        }
        let total = self.total_vertex_angle();
        if (total - TAU).abs() > 1e-6 {
            return Err(GroupError::ConstructionFailed(format!("vertex angles sum to {total}")));
        }
        for g in &self.generators {
            let shift = dist(DiskPoint::ORIGIN, g.apply(DiskPoint::ORIGIN));
            if !(shift <= 2.0 * self.diameter) {
                return Err(GroupError::ConstructionFailed(format!("generator displaces the origin by {shift}")));
            }
        }
        Ok(())
    }

    /// Sum of the interior angles of the octagon.
    pub fn total_vertex_angle(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let v = self.vertices[k];
                let to_origin = MobiusMap::disk_translation(-dist(DiskPoint::ORIGIN, v))
                    .compose(&MobiusMap::disk_rotation(-v.complex().arg()));
                let p = to_origin.apply(self.vertices[(k + n - 1) % n]).complex();
                let q = to_origin.apply(self.vertices[(k + 1) % n]).complex();
                (p / q).arg().abs()
            })
            .sum()
    }

    pub fn generators(&self) -> &[MobiusMap; 4] {
        &self.generators
    }

    pub fn letter_matrix(&self, l: Letter) -> &MobiusMap {
        &self.letters[l.index()]
    }

    pub(crate) fn letter_matrices(&self) -> &[MobiusMap; 8] {
        &self.letters
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// Cyclic rotations of the relator and of its inverse.
    pub(crate) fn relator_pieces(&self) -> &[Word] {
        &self.pieces
    }

    /// Hyperbolic diameter of the fundamental octagon.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Distance from the origin to a vertex of the octagon.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Distance from the origin to a side of the octagon.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn base_point(&self) -> DiskPoint {
        DiskPoint::ORIGIN
    }

    pub fn vertices(&self) -> &[DiskPoint; 8] {
        &self.vertices
    }

    pub(crate) fn vertices_uhp(&self) -> &[Complex64; 8] {
        &self.vertices_uhp
    }

    /// Ordered product of the generator matrices of `w`.
    pub fn word_to_matrix(&self, w: &Word) -> MobiusMap {
        w.letters().iter().fold(MobiusMap::IDENTITY, |acc, l| acc.compose(self.letter_matrix(*l)))
    }

    /// Digest of the generator entries and relator, used to key caches.
    pub fn fingerprint(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        for g in &self.generators {
            for x in g.entries() {
                h.update(format!("{x:.12e};").as_bytes());
            }
        }
        h.update(self.relator.to_string().as_bytes());
        h.finalize().into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relator_is_trivial() {
        let p = standard_genus2().unwrap();
        assert!(p.word_to_matrix(p.relator()).approx_eq(&MobiusMap::IDENTITY, 1e-9));
    }

    #[test]
    fn octagon_constants() {
        let p = standard_genus2().unwrap();
        assert!((p.inradius().cosh() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((p.circumradius().cosh() - (1.0 / FRAC_PI_8.tan()).powi(2)).abs() < 1e-9);
        assert!((p.diameter() - 2.0 * p.circumradius()).abs() < 1e-9);
        assert!((p.total_vertex_angle() - TAU).abs() < 1e-9);
    }

    #[test]
    fn generators_are_congruent_translations() {
        let p = standard_genus2().unwrap();
        let l0 = p.generators()[0].translation_length().unwrap();
        for g in p.generators() {
            assert!((g.translation_length().unwrap() - l0).abs() < 1e-12);
            assert!((g.trace() - (2.0 + 2f64.sqrt())).abs() < 1e-12);
            let shift = dist(DiskPoint::ORIGIN, g.apply(DiskPoint::ORIGIN));
            assert!((shift - 2.0 * p.inradius()).abs() < 1e-9);
        }
    }

    #[test]
    fn generators_pair_sides() {
        let p = standard_genus2().unwrap();
        let v = p.vertices();
        // Side k joins vertices k-1 and k.
        for (g, from, to) in [(0, 2, 0), (1, 1, 3), (2, 6, 4), (3, 5, 7)] {
            let m = &p.generators()[g];
            let ends = [m.apply(v[(from + 7) % 8]), m.apply(v[from])];
            let target = [v[(to + 7) % 8], v[to]];
            for e in ends {
                assert!(target.iter().any(|t| dist(*t, e) < 1e-9), "generator {g}");
            }
        }
    }

    #[test]
    fn fingerprint_is_stable() {
        assert_eq!(standard_genus2().unwrap().fingerprint(), standard_genus2().unwrap().fingerprint());
    }
}
