//! Suffix array, inverse suffix array and BWT, plus the binary-search
//! refinement every index variant finishes with.

use std::cmp::Ordering;

use crate::corpus::TextCorpus;
use crate::sais;

/// Inclusive range of SA ranks. Empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SaInterval {
    pub lo: usize,
    pub hi: usize,
}

impl SaInterval {
    pub const EMPTY: SaInterval = SaInterval { lo: 1, hi: 0 };

    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    /// `[0, n-1]`, or empty when `n == 0`.
    pub fn full(n: usize) -> Self {
        if n == 0 {
            Self::EMPTY
        } else {
            Self { lo: 0, hi: n - 1 }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn ranks(&self) -> std::ops::Range<usize> {
        if self.is_empty() {
            0..0
        } else {
            self.lo..self.hi + 1
        }
    }
}

/// Random access to the text offset stored at an SA rank.
pub trait SuffixOrder {
    fn len(&self) -> usize;

    fn offset(&self, rank: usize) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl SuffixOrder for [u32] {
    #[inline]
    fn len(&self) -> usize {
        <[u32]>::len(self)
    }

    #[inline]
    fn offset(&self, rank: usize) -> usize {
        self[rank] as usize
    }
}

/// SA, SA⁻¹ and BWT of one corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixArraySet {
    pub sa: Vec<u32>,
    pub isa: Vec<u32>,
    pub bwt: Vec<u8>,
}

impl SuffixArraySet {
    pub fn build(corpus: &TextCorpus) -> Self {
        Self::from_sa(corpus.data(), sais::suffix_array(corpus.data()))
    }

    /// Derives the inverse and the BWT from an already sorted SA.
    pub fn from_sa(data: &[u8], sa: Vec<u32>) -> Self {
        let n = sa.len();
        let mut isa = vec![0u32; n];
        for (rank, &off) in sa.iter().enumerate() {
            isa[off as usize] = rank as u32;
        }
        let bwt = sa.iter().map(|&off| data[(off as usize + n - 1) % n]).collect();
        Self { sa, isa, bwt }
    }

    pub fn n(&self) -> usize {
        self.sa.len()
    }
}

impl SuffixOrder for SuffixArraySet {
    #[inline]
    fn len(&self) -> usize {
        self.sa.len()
    }

    #[inline]
    fn offset(&self, rank: usize) -> usize {
        self.sa[rank] as usize
    }
}

pub fn build_sa(corpus: &TextCorpus) -> SuffixArraySet {
    SuffixArraySet::build(corpus)
}

/// Compares the first `pattern.len()` bytes of the suffix at `offset` with
/// `pattern`. A suffix shorter than the pattern that is a prefix of it
/// compares less.
#[inline]
pub fn compare_prefix(text: &[u8], offset: usize, pattern: &[u8]) -> Ordering {
    let end = text.len().min(offset + pattern.len());
    text[offset..end].cmp(pattern)
}

/// Narrows `start` to the maximal rank range whose suffixes begin with
/// `pattern`. All matching ranks must already lie inside `start`.
pub fn refine_interval<S: SuffixOrder + ?Sized>(text: &[u8], sa: &S, pattern: &[u8], start: SaInterval) -> SaInterval {
    if pattern.is_empty() || start.is_empty() {
        return start;
    }
    // First rank in [lo, hi] whose prefix is >= pattern.
    let (mut lo, mut hi) = (start.lo, start.hi + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if compare_prefix(text, sa.offset(mid), pattern) == Ordering::Less {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let first = lo;
    if first > start.hi || compare_prefix(text, sa.offset(first), pattern) != Ordering::Equal {
        return SaInterval::EMPTY;
    }
    // First rank past the matches.
    let (mut lo, mut hi) = (first + 1, start.hi + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if compare_prefix(text, sa.offset(mid), pattern) == Ordering::Greater {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    SaInterval::new(first, lo - 1)
}

pub fn count_plain(corpus: &TextCorpus, sas: &SuffixArraySet, pattern: &[u8]) -> usize {
    refine_interval(corpus.data(), sas, pattern, SaInterval::full(sas.n())).len()
}

pub fn locate_plain(corpus: &TextCorpus, sas: &SuffixArraySet, pattern: &[u8]) -> Vec<usize> {
    let iv = refine_interval(corpus.data(), sas, pattern, SaInterval::full(sas.n()));
    iv.ranks().map(|r| sas.offset(r)).collect()
}

/// Naive scan: every `j` with `text[j..j + m] == pattern`. Searches the
/// sentinel-free text.
pub fn oracle_search(corpus: &TextCorpus, pattern: &[u8]) -> Vec<usize> {
    let text = corpus.text();
    let m = pattern.len();
    if m == 0 {
        return (0..=text.len()).collect();
    }
    if m > text.len() {
        return Vec::new();
    }
    (0..=text.len() - m).filter(|&j| &text[j..j + m] == pattern).collect()
}
