//! Lookup tables over the first two or three bytes of a pattern.

use crate::suffix::{SaInterval, SuffixArraySet};

pub const LUT2_ENTRIES: usize = 1 << 16;
pub const LUT3_ENTRIES: usize = 1 << 24;

/// Stored form of an empty LUT2 cell.
const EMPTY_PAIR: (u32, u32) = (1, 0);

/// Returned by [`Lut2::narrow`] / [`Lut3::narrow`] when the pattern is
/// shorter than the key; the caller falls back to the full interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternTooShort {
    pub key_len: usize,
}

/// Explicit `(lo, hi)` pair per 2-byte prefix, first byte high.
#[derive(Clone, PartialEq, Eq)]
pub struct Lut2 {
    entries: Vec<(u32, u32)>,
}

impl std::fmt::Debug for Lut2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let used = self.entries.iter().filter(|e| e.0 <= e.1).count();
        f.debug_struct("Lut2").field("used_entries", &used).finish()
    }
}

impl Lut2 {
    pub fn build(data: &[u8], sas: &SuffixArraySet) -> Self {
        let n = data.len();
        let mut entries = vec![EMPTY_PAIR; LUT2_ENTRIES];
        for (rank, &off) in sas.sa.iter().enumerate() {
            let off = off as usize;
            if off + 2 > n {
                continue;
            }
            let key = key2(data[off], data[off + 1]);
            let e = &mut entries[key];
            if e.0 > e.1 {
                e.0 = rank as u32;
            }
            e.1 = rank as u32;
        }
        Self { entries }
    }

    pub(crate) fn from_entries(entries: Vec<(u32, u32)>) -> Self {
        assert_eq!(entries.len(), LUT2_ENTRIES);
        Self { entries }
    }

    pub(crate) fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    #[inline]
    pub fn interval(&self, b0: u8, b1: u8) -> SaInterval {
        let (lo, hi) = self.entries[key2(b0, b1)];
        if lo > hi {
            SaInterval::EMPTY
        } else {
            SaInterval::new(lo as usize, hi as usize)
        }
    }

    #[inline]
    pub fn narrow(&self, pattern: &[u8]) -> Result<SaInterval, PatternTooShort> {
        match pattern {
            [b0, b1, ..] => Ok(self.interval(*b0, *b1)),
            _ => Err(PatternTooShort { key_len: 2 }),
        }
    }

    pub fn size_bytes(&self) -> usize {
        self.entries.len() * 8
    }
}

/// Cumulative rank bounds per 3-byte prefix: the interval for key `x` is
/// `[bounds[x], bounds[x + 1] - 1]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Lut3 {
    bounds: Vec<u32>,
}

impl std::fmt::Debug for Lut3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lut3").field("n", &self.bounds.last()).finish()
    }
}

impl Lut3 {
    /// `bounds[x]` counts the suffixes that compare less than the 3-byte
    /// string `x`. A suffix of length >= 3 with prefix value `p` is below
    /// every `x > p`; a shorter suffix, zero padded to `p`, is below every
    /// `x >= p`.
    pub fn build(data: &[u8], sas: &SuffixArraySet) -> Self {
        let n = data.len();
        let mut bounds = vec![0u32; LUT3_ENTRIES + 1];
        for &off in &sas.sa {
            let off = off as usize;
            let threshold = match data.len() - off {
                0 => 0,
                1 => key3(data[off], 0, 0),
                2 => key3(data[off], data[off + 1], 0),
                _ => key3(data[off], data[off + 1], data[off + 2]) + 1,
            };
            bounds[threshold] += 1;
        }
        let mut acc = 0u32;
        for b in bounds.iter_mut() {
            acc += *b;
            *b = acc;
        }
        debug_assert_eq!(bounds[LUT3_ENTRIES] as usize, n);
        Self { bounds }
    }

    pub(crate) fn from_bounds(bounds: Vec<u32>) -> Self {
        assert_eq!(bounds.len(), LUT3_ENTRIES + 1);
        Self { bounds }
    }

    pub(crate) fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    #[inline]
    pub fn interval(&self, b0: u8, b1: u8, b2: u8) -> SaInterval {
        let x = key3(b0, b1, b2);
        let (lo, end) = (self.bounds[x], self.bounds[x + 1]);
        if lo >= end {
            SaInterval::EMPTY
        } else {
            SaInterval::new(lo as usize, end as usize - 1)
        }
    }

    #[inline]
    pub fn narrow(&self, pattern: &[u8]) -> Result<SaInterval, PatternTooShort> {
        match pattern {
            [b0, b1, b2, ..] => Ok(self.interval(*b0, *b1, *b2)),
            _ => Err(PatternTooShort { key_len: 3 }),
        }
    }

    pub fn size_bytes(&self) -> usize {
        self.bounds.len() * 4
    }
}

#[inline]
fn key2(b0: u8, b1: u8) -> usize {
    (usize::from(b0) << 8) | usize::from(b1)
}

#[inline]
fn key3(b0: u8, b1: u8, b2: u8) -> usize {
    (usize::from(b0) << 16) | (usize::from(b1) << 8) | usize::from(b2)
}

pub fn build_lut2(data: &[u8], sas: &SuffixArraySet) -> Lut2 {
    Lut2::build(data, sas)
}

pub fn build_lut3(data: &[u8], sas: &SuffixArraySet) -> Lut3 {
    Lut3::build(data, sas)
}
