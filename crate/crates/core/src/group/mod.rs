//! The genus-2 surface group `⟨a, b, c, d | [a,b][c,d]⟩` acting on the disk.
//!
//! Elements are words over `a b c d` with uppercase inverses. The group is
//! realized by side pairings of the regular octagon with vertex angle `π/4`
//! centered at the origin.

mod cache;
mod classes;
mod dehn;
mod enumerate;
mod presentation;
pub(crate) mod tiling;
mod word;

use thiserror::Error;

pub use cache::{load_or_enumerate, read_cache, write_cache};
pub use classes::{canonical_cyclic_word, enumerate_conjugacy_classes, same_closed_geodesic, ConjClass};
pub use dehn::{cyclic_dehn_reduce, dehn_reduce};
pub use enumerate::{enumerate_elements, GroupElement};
pub use presentation::{standard_genus2, GroupPresentation};
pub use word::{Letter, Word};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid letter {0:?}; expected one of a b c d A B C D")]
    InvalidLetter(char),
    #[error("presentation check failed: {0}")]
    ConstructionFailed(String),
    #[error("the identity has no conjugacy class")]
    IdentityClass,
    #[error("element cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

