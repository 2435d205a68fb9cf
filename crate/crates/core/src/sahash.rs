//! Suffix array with hashed deep buckets.
//!
//! Every distinct `k`-byte prefix of a suffix is stored once in an open
//! addressing table together with the SA interval it spans. A query probes
//! from the sdbm hash of its first `k` bytes, accepts the first slot whose
//! interval lies in the pattern's LUT2 bucket and whose first suffix really
//! starts with those bytes, and finishes with a binary search inside it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lut::Lut2;
use crate::suffix::{refine_interval, SaInterval, SuffixArraySet, SuffixOrder};

const NIL: (u32, u32) = (u32::MAX, u32::MAX);

/// sdbm: `h = byte + 65599 * h` over a wrapping u64, reduced mod `z` once.
#[inline]
pub fn sdbm_hash(bytes: &[u8], z: u64) -> u64 {
    debug_assert!(z >= 1);
    let h = bytes
        .iter()
        .fold(0u64, |h, &b| u64::from(b).wrapping_add(h.wrapping_mul(65599)));
    h % z
}

/// Load factor kept as a ratio so slot counts are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LoadFactor {
    num: u16,
    den: u16,
}

impl LoadFactor {
    pub fn new(num: u16, den: u16) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "load factor {num}/{den} must lie in (0, 1]"
            )));
        }
        Ok(Self { num, den })
    }

    pub fn percent(p: u16) -> Result<Self> {
        Self::new(p, 100)
    }

    pub fn num(&self) -> u16 {
        self.num
    }

    pub fn den(&self) -> u16 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }

    /// `⌈keys / α⌉`.
    pub fn slots_for(&self, keys: u64) -> u64 {
        (keys * u64::from(self.den)).div_ceil(u64::from(self.num))
    }
}

impl fmt::Display for LoadFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 100 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `50`, `50%` (percent) or `0.5` (fraction, up to 4 decimals).
impl FromStr for LoadFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse load factor {s:?}"));
        let s = s.trim();
        let t = s.strip_suffix('%').unwrap_or(s);
        if let Some((int, frac)) = t.split_once('.') {
            if s.ends_with('%') || int.parse::<u16>().map_err(|_| bad())? > 1 || frac.len() > 4 {
                return Err(bad());
            }
            let den = 10u16.pow(frac.len() as u32);
            let f: u16 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad())?
            };
            let int: u16 = int.parse().map_err(|_| bad())?;
            Self::new(int * den + f, den)
        } else {
            Self::percent(t.parse().map_err(|_| bad())?)
        }
    }
}

/// Open-addressing table of SA intervals keyed by `k`-byte prefixes.
#[derive(Clone, PartialEq, Eq)]
pub struct HashBucketIndex {
    slots: Vec<(u32, u32)>,
    k: usize,
    alpha: LoadFactor,
    key_count: u64,
}

impl fmt::Debug for HashBucketIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HashBucketIndex")
            .field("z", &self.slots.len())
            .field("k", &self.k)
            .field("alpha", &self.alpha)
            .field("key_count", &self.key_count)
            .finish()
    }
}

/// Calls `f(lo, hi)` for each group of consecutive ranks sharing a k-byte
/// prefix. Suffixes shorter than `k` never sit inside a group.
fn for_each_group(data: &[u8], sa: &[u32], k: usize, mut f: impl FnMut(usize, usize)) {
    let n = data.len();
    let mut current: Option<(usize, usize)> = None;
    for (rank, &off) in sa.iter().enumerate() {
        let off = off as usize;
        if off + k > n {
            continue;
        }
        match current {
            Some((lo, _)) if data[sa[lo] as usize..][..k] == data[off..off + k] => {
                current = Some((lo, rank));
            }
            _ => {
                if let Some((lo, hi)) = current {
                    f(lo, hi);
                }
                current = Some((rank, rank));
            }
        }
    }
    if let Some((lo, hi)) = current {
        f(lo, hi);
    }
}

impl HashBucketIndex {
    pub fn build(data: &[u8], sas: &SuffixArraySet, k: usize, alpha: LoadFactor) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "hash prefix length k={k} must be >= 2"
            )));
        }
        let mut key_count = 0u64;
        for_each_group(data, &sas.sa, k, |_, _| key_count += 1);
        let z = alpha.slots_for(key_count);
        let mut slots = vec![NIL; z as usize];
        for_each_group(data, &sas.sa, k, |lo, hi| {
            let off = sas.sa[lo] as usize;
            let mut j = sdbm_hash(&data[off..off + k], z) as usize;
            while slots[j] != NIL {
                j = (j + 1) % slots.len();
            }
            slots[j] = (lo as u32, hi as u32);
        });
        Ok(Self {
            slots,
            k,
            alpha,
            key_count,
        })
    }

    pub(crate) fn from_parts(slots: Vec<(u32, u32)>, k: usize, alpha: LoadFactor, key_count: u64) -> Self {
        Self {
            slots,
            k,
            alpha,
            key_count,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> LoadFactor {
        self.alpha
    }

    pub fn key_count(&self) -> u64 {
        self.key_count
    }

    /// Physical slot count `z`.
    pub fn z(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, j: usize) -> Option<SaInterval> {
        let s = self.slots[j];
        (s != NIL).then(|| SaInterval::new(s.0 as usize, s.1 as usize))
    }

    pub(crate) fn raw_slots(&self) -> &[(u32, u32)] {
        &self.slots
    }

    /// Two 4-byte ranks per physical slot.
    pub fn size_bytes(&self) -> usize {
        self.slots.len() * 8
    }

    /// Probes for the bucket of `pattern[..k]`. `start` is the LUT2 bucket
    /// (or any interval known to contain the matches).
    pub fn probe<S: SuffixOrder + ?Sized>(&self, text: &[u8], sa: &S, pattern: &[u8], start: SaInterval) -> SaInterval {
        let k = self.k;
        let z = self.slots.len();
        if z == 0 || pattern.len() < k || start.is_empty() {
            return SaInterval::EMPTY;
        }
        let key = &pattern[..k];
        let mut j = sdbm_hash(key, z as u64) as usize;
        for _ in 0..z {
            let (left, right) = self.slots[j];
            if (left, right) == NIL {
                return SaInterval::EMPTY;
            }
            let left = left as usize;
            if start.lo <= left && left <= start.hi {
                let off = sa.offset(left);
                if text.get(off..off + k) == Some(key) {
                    return SaInterval::new(left, right as usize);
                }
            }
            j += 1;
            if j == z {
                j = 0;
            }
        }
        SaInterval::EMPTY
    }
}

pub fn build_ht(data: &[u8], sas: &SuffixArraySet, k: usize, alpha: LoadFactor) -> Result<HashBucketIndex> {
    HashBucketIndex::build(data, sas, k, alpha)
}

/// Full pattern search: LUT2 bucket, hash probe, then binary search in the
/// hashed interval. Patterns shorter than `k` go through [`search_short`].
pub fn search_hash<S: SuffixOrder + ?Sized>(
    text: &[u8],
    sa: &S,
    ht: &HashBucketIndex,
    lut2: &Lut2,
    pattern: &[u8],
) -> SaInterval {
    if pattern.len() < ht.k() {
        return search_short(text, sa, lut2, pattern);
    }
    let Ok(bucket) = lut2.narrow(pattern) else {
        unreachable!("k >= 2");
    };
    if bucket.is_empty() {
        return SaInterval::EMPTY;
    }
    let iv = ht.probe(text, sa, pattern, bucket);
    if iv.is_empty() {
        return iv;
    }
    refine_interval(text, sa, pattern, iv)
}

/// Fallback for patterns shorter than the hashed prefix.
pub fn search_short<S: SuffixOrder + ?Sized>(text: &[u8], sa: &S, lut2: &Lut2, pattern: &[u8]) -> SaInterval {
    let start = lut2.narrow(pattern).unwrap_or(SaInterval::full(sa.len()));
    if start.is_empty() {
        return start;
    }
    refine_interval(text, sa, pattern, start)
}

/// Default prefix length per Pizza & Chili corpus name.
pub fn default_k(corpus_name: &str) -> usize {
    let name = corpus_name.to_ascii_lowercase();
    if name.contains("dna") {
        12
    } else if name.contains("protein") {
        5
    } else {
        8
    }
}
