use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// One of the eight letters `a b c d A B C D`; uppercase is the inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub const ALL: [Letter; 8] = [Letter(0), Letter(1), Letter(2), Letter(3), Letter(4), Letter(5), Letter(6), Letter(7)];

    pub fn from_char(c: char) -> Option<Letter> {
        let idx = match c {
            'a' => 0,
            'b' => 1,
            'c' => 2,
            'd' => 3,
            'A' => 4,
            'B' => 5,
            'C' => 6,
            'D' => 7,
            _ => return None,
        };
        Some(Letter(idx))
    }

    pub fn to_char(self) -> char {
        b"abcdABCD"[self.0 as usize] as char
    }

    pub fn inverse(self) -> Letter {
        Letter((self.0 + 4) % 8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Letter {
        Letter((i % 8) as u8)
    }
}

/// A word in the generators and their inverses.
///
/// Ordering is lexicographic with `a < b < c < d < A < B < C < D`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * n).collect())
    }

    /// Cyclic rotation starting at position `k`.
    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Cancels adjacent inverse pairs.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Free reduction followed by cancelling inverse letters across the ends.
    pub fn cyclic_free_reduce(&self) -> Word {
        let w = self.free_reduce().0;
        let (mut i, mut j) = (0, w.len());
        while j - i >= 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(w[i..j].to_vec())
    }

    /// Lexicographically least rotation of the word or of its inverse.
    pub fn min_cyclic_form(&self) -> Word {
        let inv = self.inverse();
        let mut best = self.clone();
        for k in 0..self.len() {
            for cand in [self.rotated(k), inv.rotated(k)] {
                if cand < best {
                    best = cand;
                }
            }
        }
        best
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = GroupError;

    /// Parses `abAB`-style words; `1` or the empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| Letter::from_char(c).ok_or(GroupError::InvalidLetter(c)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
