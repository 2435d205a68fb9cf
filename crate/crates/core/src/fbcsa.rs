//! Fixed-block compact suffix array.
//!
//! The SA is cut into blocks of `bs` ranks. Inside a block, each rank is
//! tagged with a 2-bit code naming its BWT symbol among the block's three
//! most frequent symbols (MFS), or `11` for anything else. For each MFS
//! symbol the block stores one link: the rank of the suffix one position to
//! the left of the symbol's first occurrence. All in-block ranks with the
//! same code map, via LF, onto consecutive ranks starting at that link, so
//!
//! ```text
//! SA[i] = SA[link[c] + (# earlier positions with code c)] + 1
//! ```
//!
//! Ranks with code `11`, and ranks whose offset is a multiple of `ss`, are
//! stored verbatim; the latter bounds decoding at `ss - 1` hops.
//!
//! Block layout, in bits, little-endian within 32-bit words:
//!
//! ```text
//! arr1: [ 2*bs code bits | bs explicit flags | 32-bit a2s ]   per block
//! arr2: [ link0 link1 link2 | explicit offsets... ]           per block
//! ```
//!
//! `a2s` is the byte length of `arr2` before the block.

use crate::corpus::TextCorpus;
use crate::error::{Error, Result};
use crate::suffix::{SuffixArraySet, SuffixOrder};

/// Missing MFS symbol / link.
pub const NIL: u32 = u32::MAX;

const OTHER: u8 = 0b11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FbcsaParams {
    pub bs: u32,
    pub ss: u32,
}

impl FbcsaParams {
    /// Production configuration.
    pub const DEFAULT: FbcsaParams = FbcsaParams { bs: 32, ss: 5 };

    /// Validates the parameters; `test_mode` admits block sizes that are
    /// multiples of 8 instead of 32.
    pub fn new(bs: u32, ss: u32, test_mode: bool) -> Result<Self> {
        let unit = if test_mode { 8 } else { 32 };
        if bs == 0 || !bs.is_multiple_of(unit) {
            return Err(Error::InvalidParameter(format!(
                "block size {bs} must be a positive multiple of {unit}"
            )));
        }
        if bs > 1024 {
            return Err(Error::InvalidParameter(format!("block size {bs} exceeds 1024")));
        }
        if ss == 0 {
            return Err(Error::InvalidParameter("sampling step must be >= 1".into()));
        }
        Ok(Self { bs, ss })
    }

    fn block_bits(&self) -> usize {
        3 * self.bs as usize + 32
    }
}

/// The stored content of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockView {
    pub mfs_codes: Vec<u8>,
    pub explicit_flags: Vec<bool>,
    pub links: [u32; 3],
    pub explicit_values: Vec<u32>,
}

/// A block's encoding plus the construction-side facts that are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEncoding {
    pub mfs: [Option<u8>; 3],
    pub first_pos: [Option<usize>; 3],
    pub view: BlockView,
    /// SA values of the first occurrences, kept for run reporting.
    first_values: [Option<u32>; 3],
}

impl BlockEncoding {
    /// Offsets of the suffixes preceding each MFS group, as inclusive value
    /// ranges `[SA[first] - 1, SA[first] - 1 + count - 1]`.
    pub fn predecessor_runs(&self) -> [Option<(u32, u32)>; 3] {
        std::array::from_fn(|c| {
            let first = self.first_values[c]?;
            let count = self.view.mfs_codes.iter().filter(|&&x| x == c as u8).count() as u32;
            Some((first - 1, first - 1 + count - 1))
        })
    }
}

/// Encodes one block. `sa_block` and `bwt_block` are the block's SA and BWT
/// slices; `isa` maps a text offset to its SA rank. A position whose SA value
/// is 0 (BWT symbol = sentinel) never takes part in the MFS.
pub fn encode_block(sa_block: &[u32], bwt_block: &[u8], ss: u32, isa: impl Fn(u32) -> u32) -> BlockEncoding {
    debug_assert_eq!(sa_block.len(), bwt_block.len());
    let mut freq = [0u32; 256];
    for (&off, &sym) in sa_block.iter().zip(bwt_block) {
        if off != 0 {
            freq[sym as usize] += 1;
        }
    }
    let mut order: Vec<u8> = (0..=255u8).filter(|&b| freq[b as usize] > 0).collect();
    order.sort_by(|&a, &b| freq[b as usize].cmp(&freq[a as usize]).then(a.cmp(&b)));
    let mfs: [Option<u8>; 3] = std::array::from_fn(|c| order.get(c).copied());

    let code_of = |off: u32, sym: u8| -> u8 {
        if off == 0 {
            return OTHER;
        }
        mfs.iter().position(|&m| m == Some(sym)).map_or(OTHER, |c| c as u8)
    };
    let mfs_codes: Vec<u8> = sa_block
        .iter()
        .zip(bwt_block)
        .map(|(&off, &sym)| code_of(off, sym))
        .collect();
    let first_pos: [Option<usize>; 3] = std::array::from_fn(|c| mfs_codes.iter().position(|&x| x == c as u8));
    let first_values: [Option<u32>; 3] = std::array::from_fn(|c| first_pos[c].map(|p| sa_block[p]));
    let links: [u32; 3] = std::array::from_fn(|c| first_values[c].map_or(NIL, |v| isa(v - 1)));

    let mut explicit_flags = Vec::with_capacity(sa_block.len());
    let mut explicit_values = Vec::new();
    for (&off, &code) in sa_block.iter().zip(&mfs_codes) {
        let explicit = code == OTHER || off % ss == 0;
        explicit_flags.push(explicit);
        if explicit {
            explicit_values.push(off);
        }
    }
    BlockEncoding {
        mfs,
        first_pos,
        first_values,
        view: BlockView {
            mfs_codes,
            explicit_flags,
            links,
            explicit_values,
        },
    }
}

/// Byte accounting for one built index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FbcsaSize {
    pub arr1_bytes: usize,
    pub arr2_bytes: usize,
    pub total: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FbcsaIndex {
    params: FbcsaParams,
    n: usize,
    arr1: Vec<u32>,
    arr2: Vec<u32>,
}

impl std::fmt::Debug for FbcsaIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FbcsaIndex")
            .field("params", &self.params)
            .field("n", &self.n)
            .field("arr1_words", &self.arr1.len())
            .field("arr2_words", &self.arr2.len())
            .finish()
    }
}

struct BitWriter {
    words: Vec<u32>,
    bits: usize,
}

impl BitWriter {
    fn push(&mut self, value: u32, width: usize) {
        debug_assert!(width <= 32);
        let mut value = u64::from(value) & ((1u64 << width) - 1);
        let mut width = width;
        while width > 0 {
            let shift = self.bits % 32;
            if shift == 0 {
                self.words.push(0);
            }
            let take = width.min(32 - shift);
            let last = self.words.last_mut().unwrap();
            *last |= ((value & ((1u64 << take) - 1)) as u32) << shift;
            value >>= take;
            width -= take;
            self.bits += take;
        }
    }
}

impl FbcsaIndex {
    pub fn build(corpus: &TextCorpus, sas: &SuffixArraySet, params: FbcsaParams) -> Result<Self> {
        if !corpus.sentinel_appended() {
            return Err(Error::SentinelRequired);
        }
        let n = sas.n();
        if n >= NIL as usize {
            return Err(Error::InvalidParameter("text too long for 32-bit offsets".into()));
        }
        let bs = params.bs as usize;
        let mut arr1 = BitWriter {
            words: Vec::with_capacity(n.div_ceil(bs) * params.block_bits() / 32 + 1),
            bits: 0,
        };
        let mut arr2: Vec<u32> = Vec::with_capacity(n / 2);
        for start in (0..n).step_by(bs) {
            let end = (start + bs).min(n);
            let enc = encode_block(&sas.sa[start..end], &sas.bwt[start..end], params.ss, |v| {
                sas.isa[v as usize]
            });
            let a2s = arr2.len() * 4;
            if a2s > u32::MAX as usize {
                return Err(Error::InvalidParameter("arr2 exceeds 4 GiB".into()));
            }
            // Padding positions of a final partial block: code 11, flagged.
            for p in 0..bs {
                arr1.push(u32::from(enc.view.mfs_codes.get(p).copied().unwrap_or(OTHER)), 2);
            }
            for p in 0..bs {
                arr1.push(u32::from(enc.view.explicit_flags.get(p).copied().unwrap_or(true)), 1);
            }
            arr1.push(a2s as u32, 32);
            arr2.extend_from_slice(&enc.view.links);
            arr2.extend_from_slice(&enc.view.explicit_values);
        }
        Ok(Self {
            params,
            n,
            arr1: arr1.words,
            arr2,
        })
    }

    /// Reassembles an index from its arrays and checks its structure.
    pub fn from_parts(params: FbcsaParams, n: usize, arr1: Vec<u32>, arr2: Vec<u32>) -> Result<Self> {
        let idx = Self { params, n, arr1, arr2 };
        idx.validate()?;
        Ok(idx)
    }

    pub fn params(&self) -> FbcsaParams {
        self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arr1(&self) -> &[u32] {
        &self.arr1
    }

    pub fn arr2(&self) -> &[u32] {
        &self.arr2
    }

    pub fn block_count(&self) -> usize {
        self.n.div_ceil(self.params.bs as usize)
    }

    /// Reads `width <= 32` bits starting at absolute bit `pos` of arr1.
    #[inline]
    fn bits(&self, pos: usize, width: usize) -> u32 {
        let w = pos / 32;
        let shift = pos % 32;
        let lo = u64::from(self.arr1[w]);
        let hi = self.arr1.get(w + 1).map_or(0, |&x| u64::from(x));
        let v = ((hi << 32) | lo) >> shift;
        (v & ((1u64 << width) - 1)) as u32
    }

    /// Popcount of `count` consecutive 1-bit flags, or code matches when
    /// `code` is given, from bit `pos`.
    #[inline]
    fn rank_bits(&self, pos: usize, count: usize, code: Option<u8>) -> usize {
        let per = if code.is_some() { 16 } else { 32 };
        let width = if code.is_some() { 2 } else { 1 };
        let mut total = 0;
        let mut done = 0;
        while done < count {
            let take = (count - done).min(per);
            let chunk = self.bits(pos + done * width, take * width);
            total += match code {
                None => chunk.count_ones() as usize,
                Some(c) => {
                    let pattern = u32::from(c) * 0x5555_5555;
                    let x = chunk ^ pattern;
                    // A 2-bit field matches iff both its bits are 0.
                    let m = !(x | (x >> 1)) & 0x5555_5555;
                    let mask = if take == 16 {
                        0x5555_5555
                    } else {
                        0x5555_5555 & ((1u32 << (2 * take)) - 1)
                    };
                    (m & mask).count_ones() as usize
                }
            };
            done += take;
        }
        total
    }

    /// `SA[i]` together with the number of link hops taken.
    pub fn decode_with_depth(&self, i: usize) -> Result<(usize, usize)> {
        if i >= self.n {
            return Err(Error::RangeOverflow {
                start: i,
                end: i + 1,
                n: self.n,
            });
        }
        let bs = self.params.bs as usize;
        let block_bits = self.params.block_bits();
        let mut rank = i;
        let mut depth = 0;
        loop {
            let b = rank / bs;
            let o = rank % bs;
            let base = b * block_bits;
            let a2w = self.bits(base + 3 * bs, 32) as usize / 4;
            if self.bits(base + 2 * bs + o, 1) == 1 {
                let r = self.rank_bits(base + 2 * bs, o, None);
                let v = *self
                    .arr2
                    .get(a2w + 3 + r)
                    .ok_or_else(|| Error::Corrupt(format!("explicit value of rank {rank} out of bounds")))?;
                return Ok((v as usize + depth, depth));
            }
            let c = self.bits(base + 2 * o, 2) as u8;
            if c == OTHER {
                return Err(Error::Corrupt(format!("rank {rank} has code 11 but no explicit flag")));
            }
            let link = self.arr2[a2w + c as usize];
            if link == NIL {
                return Err(Error::Corrupt(format!("rank {rank} reaches a NIL link")));
            }
            rank = link as usize + self.rank_bits(base, o, Some(c));
            depth += 1;
            if rank >= self.n || depth > self.n {
                return Err(Error::Corrupt(format!("link chain from rank {i} leaves the array")));
            }
        }
    }

    pub fn decode_cell(&self, i: usize) -> Result<usize> {
        self.decode_with_depth(i).map(|(v, _)| v)
    }

    /// `SA[i..i + c]`, each cell decoded independently.
    pub fn extract_run(&self, i: usize, c: usize) -> Result<Vec<usize>> {
        let end = i.checked_add(c).filter(|&e| e <= self.n).ok_or(Error::RangeOverflow {
            start: i,
            end: i.saturating_add(c),
            n: self.n,
        })?;
        (i..end).map(|r| self.decode_cell(r)).collect()
    }

    /// Parses block `b` back out of the arrays.
    pub fn block(&self, b: usize) -> BlockView {
        let bs = self.params.bs as usize;
        let base = b * self.params.block_bits();
        let real = bs.min(self.n - b * bs);
        let mfs_codes: Vec<u8> = (0..real).map(|p| self.bits(base + 2 * p, 2) as u8).collect();
        let explicit_flags: Vec<bool> = (0..real).map(|p| self.bits(base + 2 * bs + p, 1) == 1).collect();
        let a2w = self.bits(base + 3 * bs, 32) as usize / 4;
        let links = [self.arr2[a2w], self.arr2[a2w + 1], self.arr2[a2w + 2]];
        let k = explicit_flags.iter().filter(|&&f| f).count();
        BlockView {
            mfs_codes,
            explicit_flags,
            links,
            explicit_values: self.arr2[a2w + 3..a2w + 3 + k].to_vec(),
        }
    }

    /// `a2s` as recorded in arr1 for block `b`.
    pub fn a2s(&self, b: usize) -> u32 {
        self.bits(b * self.params.block_bits() + 3 * self.params.bs as usize, 32)
    }

    pub fn size_report(&self) -> FbcsaSize {
        let arr1_bytes = self.block_count() * self.params.block_bits() / 8;
        let arr2_bytes = self.arr2.len() * 4;
        FbcsaSize {
            arr1_bytes,
            arr2_bytes,
            total: arr1_bytes + arr2_bytes,
        }
    }

    /// Structural checks that make every decode terminate in bounds or
    /// report corruption: array lengths, a2s chaining, link ranges, and a
    /// usable link behind every non-explicit position.
    pub fn validate(&self) -> Result<()> {
        let bs = self.params.bs as usize;
        let blocks = self.block_count();
        let bits = blocks * self.params.block_bits();
        if self.arr1.len() != bits.div_ceil(32) {
            return Err(Error::Corrupt(format!(
                "arr1 has {} words, expected {}",
                self.arr1.len(),
                bits.div_ceil(32)
            )));
        }
        let mut expected = 0usize;
        for b in 0..blocks {
            if self.a2s(b) as usize != expected * 4 {
                return Err(Error::Corrupt(format!("block {b} a2s mismatch")));
            }
            let base = b * self.params.block_bits();
            let flags = self.rank_bits(base + 2 * bs, bs, None);
            let real = bs.min(self.n - b * bs);
            let pad = bs - real;
            let stored = flags - pad;
            if expected + 3 + stored > self.arr2.len() {
                return Err(Error::Corrupt(format!("block {b} overruns arr2")));
            }
            let links = &self.arr2[expected..expected + 3];
            for &l in links {
                if l != NIL && l as usize >= self.n {
                    return Err(Error::Corrupt(format!("block {b} link {l} out of range")));
                }
            }
            for p in 0..real {
                if self.bits(base + 2 * bs + p, 1) == 0 {
                    let c = self.bits(base + 2 * p, 2) as usize;
                    if c == OTHER as usize || links[c] == NIL {
                        return Err(Error::Corrupt(format!("block {b} position {p} has no link")));
                    }
                }
            }
            expected += 3 + stored;
        }
        if expected != self.arr2.len() {
            return Err(Error::Corrupt("trailing arr2 words".into()));
        }
        Ok(())
    }
}

impl SuffixOrder for FbcsaIndex {
    fn len(&self) -> usize {
        self.n
    }

    fn offset(&self, rank: usize) -> usize {
        // Built and loaded indexes are validated; a failure here is a bug.
        self.decode_cell(rank).expect("validated FBCSA index")
    }
}

pub fn build_fbcsa(corpus: &TextCorpus, sas: &SuffixArraySet, params: FbcsaParams) -> Result<FbcsaIndex> {
    FbcsaIndex::build(corpus, sas, params)
}
