//! Binary element cache.
//!
//! Layout (little endian): magic `GCEL`, format version `u32`, presentation
//! fingerprint (32 bytes), depth `u32`, element count `u64`, then for each
//! element its word length `u8`, the letter indices, and four `f64` matrix
//! entries.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::enumerate::{enumerate_elements, GroupElement};
use super::presentation::GroupPresentation;
use super::word::{Letter, Word};
use super::GroupError;
use crate::hyperbolic::MobiusMap;

const MAGIC: &[u8; 4] = b"GCEL";
const VERSION: u32 = 1;

pub fn write_cache(path: &Path, p: &GroupPresentation, depth: usize, elements: &[GroupElement]) -> Result<(), GroupError> {
    let tmp = path.with_extension("tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        out.write_all(MAGIC)?;
        out.write_all(&VERSION.to_le_bytes())?;
        out.write_all(&p.fingerprint())?;
        out.write_all(&(depth as u32).to_le_bytes())?;
        out.write_all(&(elements.len() as u64).to_le_bytes())?;
        for e in elements {
            out.write_all(&[e.word.len() as u8])?;
            let letters: Vec<u8> = e.word.letters().iter().map(|l| l.index() as u8).collect();
            out.write_all(&letters)?;
            for x in e.matrix.entries() {
                out.write_all(&x.to_le_bytes())?;
            }
        }
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_array<const N: usize>(r: &mut impl Read) -> Result<[u8; N], GroupError> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

/// Elements of word length at most `depth` from a cache file, or `None`
/// when the file was written for another presentation, another format
/// version, or a smaller depth.
pub fn read_cache(path: &Path, p: &GroupPresentation, depth: usize) -> Result<Option<Vec<GroupElement>>, GroupError> {
    let mut r = BufReader::new(fs::File::open(path)?);
    if &read_array::<4>(&mut r)? != MAGIC {
        return Err(GroupError::Cache("not an element cache".into()));
    }
    if u32::from_le_bytes(read_array(&mut r)?) != VERSION || read_array::<32>(&mut r)? != p.fingerprint() {
        return Ok(None);
    }
    let stored_depth = u32::from_le_bytes(read_array(&mut r)?) as usize;
    if stored_depth < depth {
        return Ok(None);
    }
    let count = u64::from_le_bytes(read_array(&mut r)?);
    let mut out = Vec::new();
    for _ in 0..count {
        let len = read_array::<1>(&mut r)?[0] as usize;
        let mut letters = vec![0u8; len];
        r.read_exact(&mut letters)?;
        if letters.iter().any(|&l| l >= 8) {
            return Err(GroupError::Cache("corrupt letter".into()));
        }
        let mut m = [0.0; 4];
        for x in &mut m {
            *x = f64::from_le_bytes(read_array(&mut r)?);
        }
        if len > depth {
            break;
        }
        let word = Word::from_letters(letters.into_iter().map(|l| Letter::from_index(l as usize)).collect());
        if !((m[0] * m[3] - m[1] * m[2]) - 1.0).abs().lt(&1e-6) {
            return Err(GroupError::Cache("corrupt matrix".into()));
        }
        let matrix = MobiusMap::from_normalized(m);
        out.push(GroupElement { word, matrix });
    }
    Ok(Some(out))
}

/// Reads elements from the cache at `path` when it is usable, and otherwise
/// enumerates them and rewrites the cache.
pub fn load_or_enumerate(path: &Path, p: &GroupPresentation, depth: usize) -> Result<Vec<GroupElement>, GroupError> {
    if path.exists() {
        if let Some(v) = read_cache(path, p, depth)? {
            return Ok(v);
        }
    }
    let elements = enumerate_elements(p, depth);
    write_cache(path, p, depth, &elements)?;
    Ok(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard_genus2;

    #[test]
    fn round_trip_and_truncation() {
        let p = standard_genus2().unwrap();
        let dir = std::env::temp_dir().join(format!("gcel-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("elements.bin");
        let full = load_or_enumerate(&path, &p, 3).unwrap();
        let again = read_cache(&path, &p, 3).unwrap().unwrap();
        assert_eq!(full, again);
        let short = read_cache(&path, &p, 2).unwrap().unwrap();
        assert_eq!(short, enumerate_elements(&p, 2));
        assert!(read_cache(&path, &p, 4).unwrap().is_none());
        fs::remove_dir_all(&dir).unwrap();
    }
}
