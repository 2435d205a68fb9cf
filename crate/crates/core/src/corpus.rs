//! Input texts, the sentinel convention, pattern sampling and q-gram counting.

use std::collections::HashSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Byte value appended as the unique smallest terminator.
pub const SENTINEL: u8 = 0;

/// An indexed byte sequence, optionally terminated by [`SENTINEL`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextCorpus {
    data: Vec<u8>,
    sigma: usize,
    sentinel_appended: bool,
}

impl TextCorpus {
    pub fn from_bytes(mut bytes: Vec<u8>, append_sentinel: bool) -> Result<Self> {
        if bytes.is_empty() {
            return Err(Error::EmptyText);
        }
        if append_sentinel {
            if let Some(offset) = bytes.iter().position(|&b| b == SENTINEL) {
                return Err(Error::SentinelInInput { offset });
            }
            bytes.push(SENTINEL);
        }
        let mut seen = [false; 256];
        for &b in &bytes {
            seen[b as usize] = true;
        }
        let sigma = seen.iter().filter(|&&s| s).count();
        Ok(Self {
            data: bytes,
            sigma,
            sentinel_appended: append_sentinel,
        })
    }

    /// Full indexed sequence, sentinel included.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// The text without the sentinel.
    pub fn text(&self) -> &[u8] {
        &self.data[..self.effective_len()]
    }

    pub fn n(&self) -> usize {
        self.data.len()
    }

    pub fn effective_len(&self) -> usize {
        self.data.len() - usize::from(self.sentinel_appended)
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn sentinel_appended(&self) -> bool {
        self.sentinel_appended
    }

    /// FNV-1a over the full indexed sequence.
    pub fn checksum(&self) -> u64 {
        fnv1a(&self.data)
    }
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn load_text(path: impl AsRef<Path>, append_sentinel: bool) -> Result<TextCorpus> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    TextCorpus::from_bytes(bytes, append_sentinel)
}

/// Patterns of one length drawn from a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    pub m: usize,
    pub patterns: Vec<Vec<u8>>,
    pub seed: u64,
}

impl PatternSet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.patterns.iter().map(Vec::as_slice)
    }
}

/// Draws `count` substrings of length `m` at uniform offsets (with replacement).
pub fn sample_patterns(corpus: &TextCorpus, m: usize, count: usize, seed: u64) -> Result<PatternSet> {
    let text = corpus.text();
    if m == 0 || m > text.len() {
        return Err(Error::LengthOutOfRange {
            requested: m,
            available: text.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = text.len() - m;
    let patterns = (0..count)
        .map(|_| {
            let start = rng.gen_range(0..=last);
            text[start..start + m].to_vec()
        })
        .collect();
    Ok(PatternSet { m, patterns, seed })
}

/// Number of distinct length-`q` substrings of the sentinel-free text.
pub fn distinct_qgrams(corpus: &TextCorpus, q: usize) -> Result<usize> {
    let text = corpus.text();
    if q == 0 || q > text.len() {
        return Err(Error::LengthOutOfRange {
            requested: q,
            available: text.len(),
        });
    }
    if q <= 8 {
        let mut grams: Vec<u64> = text
            .windows(q)
            .map(|w| w.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b)))
            .collect();
        grams.sort_unstable();
        grams.dedup();
        Ok(grams.len())
    } else {
        Ok(text.windows(q).collect::<HashSet<_>>().len())
    }
}
