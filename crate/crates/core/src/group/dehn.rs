use super::presentation::GroupPresentation;
use super::word::{Letter, Word};

fn common_prefix(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Finds a subword of `w` that is more than half of a relator piece.
/// Returns `(start, length, piece index)`.
fn find_long_piece(w: &[Letter], pieces: &[Word]) -> Option<(usize, usize, usize)> {
    for i in 0..w.len() {
        for (pi, piece) in pieces.iter().enumerate() {
            let k = common_prefix(&w[i..], piece.letters());
            if 2 * k > piece.len() {
                return Some((i, k, pi));
            }
        }
    }
    None
}

/// Dehn's algorithm: free reduction plus replacement of any subword longer
/// than half a relator by the inverse of the complementary part.
///
/// The result is empty exactly when `w` represents the identity.
pub fn dehn_reduce(w: &Word, p: &GroupPresentation) -> Word {
    let pieces = p.relator_pieces();
    let mut cur = w.free_reduce();
    while let Some((i, k, pi)) = find_long_piece(cur.letters(), pieces) {
        let piece = pieces[pi].letters();
        let replacement = Word::from_letters(piece[k..].to_vec()).inverse();
        let mut v = cur.letters()[..i].to_vec();
        v.extend_from_slice(replacement.letters());
        v.extend_from_slice(&cur.letters()[i + k..]);
        cur = Word::from_letters(v).free_reduce();
    }
    cur
}

/// Dehn reduction of a cyclic word: long relator pieces are also sought
/// across the end of the word, and inverse letters at the two ends cancel.
pub fn cyclic_dehn_reduce(w: &Word, p: &GroupPresentation) -> Word {
    let pieces = p.relator_pieces();
    let mut cur = dehn_reduce(w, p).cyclic_free_reduce();
    loop {
        let n = cur.len();
        let mut found = None;
        'search: for i in 0..n {
            let rot = cur.rotated(i);
            for (pi, piece) in pieces.iter().enumerate() {
                let k = common_prefix(rot.letters(), piece.letters());
                if 2 * k > piece.len() {
                    found = Some((rot, k, pi));
                    break 'search;
                }
            }
        }
        let Some((rot, k, pi)) = found else { return cur };
        let piece = pieces[pi].letters();
        let mut v = Word::from_letters(piece[k..].to_vec()).inverse().letters().to_vec();
        v.extend_from_slice(&rot.letters()[k..]);
        cur = dehn_reduce(&Word::from_letters(v), p).cyclic_free_reduce();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_genus2;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn relator_reduces_to_empty() {
        let p = standard_genus2().unwrap();
        assert!(dehn_reduce(p.relator(), &p).is_empty());
        assert!(dehn_reduce(&w("aA"), &p).is_empty());
        assert!(dehn_reduce(&w("cdCDabAB"), &p).is_empty());
        assert!(dehn_reduce(&w("dcDCbaBA"), &p).is_empty());
    }

    #[test]
    fn long_piece_is_shortened() {
        let p = standard_genus2().unwrap();
        let r = dehn_reduce(&w("abABc"), &p);
        assert_eq!(r, w("dcD"));
        assert!(p.word_to_matrix(&r).approx_eq(&p.word_to_matrix(&w("abABc")), 1e-9));
    }

    #[test]
    fn half_pieces_are_kept() {
        let p = standard_genus2().unwrap();
        assert_eq!(dehn_reduce(&w("abAB"), &p), w("abAB"));
    }

    #[test]
    fn cyclic_reduction_wraps_around() {
        let p = standard_genus2().unwrap();
        // Read cyclically, the word contains cdCDab.
        let r = cyclic_dehn_reduce(&w("CDabcd"), &p);
        assert!(r.len() < 6, "{r}");
        assert_eq!(r, w("ba"));
        assert!(cyclic_dehn_reduce(&w("bABcdCDa"), &p).is_empty());
        assert_eq!(cyclic_dehn_reduce(&w("aBA"), &p), w("B"));
    }
}
