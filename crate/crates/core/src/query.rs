//! Count and locate over any SA representation with a pluggable narrowing
//! stage in front of the binary search.

use std::fmt;
use std::str::FromStr;

use crate::corpus::TextCorpus;
use crate::error::{Error, Result};
use crate::fbcsa::FbcsaIndex;
use crate::lut::{Lut2, Lut3};
use crate::sahash::{search_hash, HashBucketIndex};
use crate::suffix::{refine_interval, SaInterval, SuffixOrder};

/// What narrows the initial search range.
#[derive(Debug, Clone, Copy)]
pub enum Narrowing<'a> {
    None,
    Lut2(&'a Lut2),
    Lut3(&'a Lut3),
    Hash { ht: &'a HashBucketIndex, lut2: &'a Lut2 },
}

impl Narrowing<'_> {
    pub fn kind(&self) -> NarrowingKind {
        match self {
            Narrowing::None => NarrowingKind::None,
            Narrowing::Lut2(_) => NarrowingKind::Lut2,
            Narrowing::Lut3(_) => NarrowingKind::Lut3,
            Narrowing::Hash { .. } => NarrowingKind::Hash,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NarrowingKind {
    None,
    Lut2,
    Lut3,
    Hash,
}

impl NarrowingKind {
    pub const ALL: [NarrowingKind; 4] = [Self::None, Self::Lut2, Self::Lut3, Self::Hash];
}

impl fmt::Display for NarrowingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Lut2 => "lut2",
            Self::Lut3 => "lut3",
            Self::Hash => "hash",
        })
    }
}

impl FromStr for NarrowingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Self::None),
            "lut2" => Ok(Self::Lut2),
            "lut3" => Ok(Self::Lut3),
            "hash" => Ok(Self::Hash),
            _ => Err(Error::InvalidParameter(format!("unknown narrowing {s:?}"))),
        }
    }
}

/// Maximal SA interval of suffixes prefixed by `pattern`.
pub fn find_interval<S: SuffixOrder + ?Sized>(
    text: &[u8],
    sa: &S,
    narrowing: Narrowing<'_>,
    pattern: &[u8],
) -> SaInterval {
    let full = SaInterval::full(sa.len());
    let start = match narrowing {
        Narrowing::None => full,
        Narrowing::Lut2(lut) => lut.narrow(pattern).unwrap_or(full),
        Narrowing::Lut3(lut) => lut.narrow(pattern).unwrap_or(full),
        Narrowing::Hash { ht, lut2 } => return search_hash(text, sa, ht, lut2, pattern),
    };
    if start.is_empty() {
        return start;
    }
    refine_interval(text, sa, pattern, start)
}

pub fn count<S: SuffixOrder + ?Sized>(text: &[u8], sa: &S, narrowing: Narrowing<'_>, pattern: &[u8]) -> usize {
    find_interval(text, sa, narrowing, pattern).len()
}

/// Offsets of all occurrences, in SA order.
pub fn locate<S: SuffixOrder + ?Sized>(text: &[u8], sa: &S, narrowing: Narrowing<'_>, pattern: &[u8]) -> Vec<usize> {
    find_interval(text, sa, narrowing, pattern)
        .ranks()
        .map(|r| sa.offset(r))
        .collect()
}

/// Count through the compact suffix array: every SA access is a decode.
pub fn count_fbcsa(corpus: &TextCorpus, idx: &FbcsaIndex, pattern: &[u8], narrowing: Narrowing<'_>) -> usize {
    count(corpus.data(), idx, narrowing, pattern)
}

pub fn locate_fbcsa(corpus: &TextCorpus, idx: &FbcsaIndex, pattern: &[u8], narrowing: Narrowing<'_>) -> Vec<usize> {
    locate(corpus.data(), idx, narrowing, pattern)
}
