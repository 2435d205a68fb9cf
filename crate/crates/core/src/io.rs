//! Binary index files.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "FTIX"
//!      4     2  version (1)
//!      6     1  kind: SA=1 LUT2=2 LUT3=3 HT=4 FBCSA=5
//!      7     1  reserved, 0
//!      8    16  params: HT    -> k u16, alpha num u16, alpha den u16, 0...
//!                       FBCSA -> bs u32, ss u32, 0...
//!                       other -> 0...
//!     24     8  n (suffix count, sentinel included)
//!     32     8  FNV-1a 64 checksum of the indexed corpus
//!     40     8  payload length in bytes
//!     48     -  payload
//! ```
//!
//! All integers are little-endian. Payloads:
//!
//! * SA: `sa[n]` u32, `isa[n]` u32, `bwt[n]` bytes
//! * LUT2: 65536 × (`lo` u32, `hi` u32), empty cells as (1, 0)
//! * LUT3: 2^24 + 1 cumulative bounds, u32
//! * HT: `key_count` u64, `z` u64, `z` × (`lo` u32, `hi` u32), NIL as (2^32-1, 2^32-1)
//! * FBCSA: arr1 word count u64, arr1 words u32, arr2 word count u64, arr2 words u32

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::corpus::TextCorpus;
use crate::error::Result;
use crate::fbcsa::{FbcsaIndex, FbcsaParams};
use crate::lut::{Lut2, Lut3, LUT2_ENTRIES, LUT3_ENTRIES};
use crate::sahash::{HashBucketIndex, LoadFactor};
use crate::suffix::SuffixArraySet;

pub const MAGIC: [u8; 4] = *b"FTIX";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 48;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported format version {0}")]
    Version(u16),
    #[error("unknown index kind tag {0}")]
    UnknownKind(u8),
    #[error("truncated file: {0}")]
    Truncated(&'static str),
    #[error("payload length {declared} does not match {actual} remaining bytes")]
    PayloadLength { declared: u64, actual: u64 },
    #[error("expected a {expected} index, found {found}")]
    KindMismatch { expected: IndexKind, found: IndexKind },
    #[error("inconsistent parameters: {0}")]
    Params(String),
    #[error("index was built for a different corpus (checksum {file:#018x}, corpus {corpus:#018x})")]
    ChecksumMismatch { file: u64, corpus: u64 },
    #[error("big-endian hosts are not supported")]
    BigEndianHost,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum IndexKind {
    Sa = 1,
    Lut2 = 2,
    Lut3 = 3,
    Hash = 4,
    Fbcsa = 5,
}

impl IndexKind {
    fn from_tag(tag: u8) -> Result<Self, FormatError> {
        Ok(match tag {
            1 => Self::Sa,
            2 => Self::Lut2,
            3 => Self::Lut3,
            4 => Self::Hash,
            5 => Self::Fbcsa,
            t => return Err(FormatError::UnknownKind(t)),
        })
    }
}

impl std::fmt::Display for IndexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Sa => "SA",
            Self::Lut2 => "LUT2",
            Self::Lut3 => "LUT3",
            Self::Hash => "HT",
            Self::Fbcsa => "FBCSA",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexParams {
    None,
    Hash { k: u16, alpha: LoadFactor },
    Fbcsa(FbcsaParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexFileHeader {
    pub kind: IndexKind,
    pub params: IndexParams,
    pub n: u64,
    pub checksum: u64,
    pub payload_length: u64,
}

/// Borrowed index, for saving.
#[derive(Debug, Clone, Copy)]
pub enum IndexRef<'a> {
    Sa(&'a SuffixArraySet),
    Lut2(&'a Lut2),
    Lut3(&'a Lut3),
    Hash(&'a HashBucketIndex),
    Fbcsa(&'a FbcsaIndex),
}

/// Owned index, as loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Index {
    Sa(SuffixArraySet),
    Lut2(Lut2),
    Lut3(Lut3),
    Hash(HashBucketIndex),
    Fbcsa(FbcsaIndex),
}

impl Index {
    pub fn kind(&self) -> IndexKind {
        self.as_ref().kind()
    }

    pub fn as_ref(&self) -> IndexRef<'_> {
        match self {
            Index::Sa(x) => IndexRef::Sa(x),
            Index::Lut2(x) => IndexRef::Lut2(x),
            Index::Lut3(x) => IndexRef::Lut3(x),
            Index::Hash(x) => IndexRef::Hash(x),
            Index::Fbcsa(x) => IndexRef::Fbcsa(x),
        }
    }
}

impl IndexRef<'_> {
    pub fn kind(&self) -> IndexKind {
        match self {
            IndexRef::Sa(_) => IndexKind::Sa,
            IndexRef::Lut2(_) => IndexKind::Lut2,
            IndexRef::Lut3(_) => IndexKind::Lut3,
            IndexRef::Hash(_) => IndexKind::Hash,
            IndexRef::Fbcsa(_) => IndexKind::Fbcsa,
        }
    }

    fn params(&self) -> IndexParams {
        match self {
            IndexRef::Hash(ht) => IndexParams::Hash {
                k: ht.k() as u16,
                alpha: ht.alpha(),
            },
            IndexRef::Fbcsa(f) => IndexParams::Fbcsa(f.params()),
            _ => IndexParams::None,
        }
    }

    fn payload_length(&self) -> u64 {
        (match self {
            IndexRef::Sa(s) => 9 * s.n(),
            IndexRef::Lut2(_) => 8 * LUT2_ENTRIES,
            IndexRef::Lut3(_) => 4 * (LUT3_ENTRIES + 1),
            IndexRef::Hash(ht) => 16 + 8 * ht.z(),
            IndexRef::Fbcsa(f) => 16 + 4 * (f.arr1().len() + f.arr2().len()),
        }) as u64
    }
}

macro_rules! impl_from_ref {
    ($($variant:ident => $ty:ty),*) => {$(
        impl<'a> From<&'a $ty> for IndexRef<'a> {
            fn from(x: &'a $ty) -> Self {
                IndexRef::$variant(x)
            }
        }
        impl From<$ty> for Index {
            fn from(x: $ty) -> Self {
                Index::$variant(x)
            }
        }
    )*};
}

impl_from_ref!(Sa => SuffixArraySet, Lut2 => Lut2, Lut3 => Lut3, Hash => HashBucketIndex, Fbcsa => FbcsaIndex);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFile {
    pub header: IndexFileHeader,
    pub index: Index,
}

impl IndexFile {
    pub fn expect_kind(&self, kind: IndexKind) -> Result<(), FormatError> {
        if self.header.kind != kind {
            return Err(FormatError::KindMismatch {
                expected: kind,
                found: self.header.kind,
            });
        }
        Ok(())
    }

    pub fn check_corpus(&self, corpus: &TextCorpus) -> Result<(), FormatError> {
        let sum = corpus.checksum();
        if sum != self.header.checksum || self.header.n != corpus.n() as u64 {
            return Err(FormatError::ChecksumMismatch {
                file: self.header.checksum,
                corpus: sum,
            });
        }
        Ok(())
    }
}

fn refuse_big_endian() -> Result<(), FormatError> {
    if cfg!(target_endian = "big") {
        return Err(FormatError::BigEndianHost);
    }
    Ok(())
}

fn write_u32s(w: &mut impl Write, xs: &[u32]) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(4 * 4096);
    for chunk in xs.chunks(4096) {
        buf.clear();
        for &x in chunk {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn write_pairs(w: &mut impl Write, xs: &[(u32, u32)]) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(8 * 4096);
    for chunk in xs.chunks(4096) {
        buf.clear();
        for &(a, b) in chunk {
            buf.extend_from_slice(&a.to_le_bytes());
            buf.extend_from_slice(&b.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

/// Serializes `index` for a corpus with `n` suffixes and the given checksum.
pub fn write_index(w: &mut impl Write, index: IndexRef<'_>, n: u64, checksum: u64) -> Result<u64, FormatError> {
    refuse_big_endian()?;
    let mut header = [0u8; HEADER_LEN];
    header[0..4].copy_from_slice(&MAGIC);
    header[4..6].copy_from_slice(&VERSION.to_le_bytes());
    header[6] = index.kind() as u8;
    match index.params() {
        IndexParams::None => {}
        IndexParams::Hash { k, alpha } => {
            header[8..10].copy_from_slice(&k.to_le_bytes());
            header[10..12].copy_from_slice(&alpha.num().to_le_bytes());
            header[12..14].copy_from_slice(&alpha.den().to_le_bytes());
        }
        IndexParams::Fbcsa(p) => {
            header[8..12].copy_from_slice(&p.bs.to_le_bytes());
            header[12..16].copy_from_slice(&p.ss.to_le_bytes());
        }
    }
    header[24..32].copy_from_slice(&n.to_le_bytes());
    header[32..40].copy_from_slice(&checksum.to_le_bytes());
    let payload = index.payload_length();
    header[40..48].copy_from_slice(&payload.to_le_bytes());
    w.write_all(&header)?;
    match index {
        IndexRef::Sa(s) => {
            write_u32s(w, &s.sa)?;
            write_u32s(w, &s.isa)?;
            w.write_all(&s.bwt)?;
        }
        IndexRef::Lut2(l) => write_pairs(w, l.entries())?,
        IndexRef::Lut3(l) => write_u32s(w, l.bounds())?,
        IndexRef::Hash(ht) => {
            w.write_all(&ht.key_count().to_le_bytes())?;
            w.write_all(&(ht.z() as u64).to_le_bytes())?;
            write_pairs(w, ht.raw_slots())?;
        }
        IndexRef::Fbcsa(f) => {
            w.write_all(&(f.arr1().len() as u64).to_le_bytes())?;
            write_u32s(w, f.arr1())?;
            w.write_all(&(f.arr2().len() as u64).to_le_bytes())?;
            write_u32s(w, f.arr2())?;
        }
    }
    Ok(HEADER_LEN as u64 + payload)
}

pub fn encode_index<'a>(index: impl Into<IndexRef<'a>>, corpus: &TextCorpus) -> Vec<u8> {
    let mut out = Vec::new();
    write_index(&mut out, index.into(), corpus.n() as u64, corpus.checksum())
        .expect("writing to memory cannot fail on a supported host");
    out
}

/// Writes `index` to `path`; returns the bytes written.
pub fn save_index<'a>(index: impl Into<IndexRef<'a>>, corpus: &TextCorpus, path: impl AsRef<Path>) -> Result<u64> {
    let file = File::create(path.as_ref()).map_err(FormatError::Io)?;
    let mut w = BufWriter::new(file);
    let bytes = write_index(&mut w, index.into(), corpus.n() as u64, corpus.checksum())?;
    w.flush().map_err(FormatError::Io)?;
    Ok(bytes)
}

pub fn load_index(path: impl AsRef<Path>) -> Result<IndexFile> {
    let bytes = std::fs::read(path.as_ref()).map_err(FormatError::Io)?;
    decode_index(&bytes)
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &'static str) -> Result<&'a [u8], FormatError> {
        if self.buf.len() < len {
            return Err(FormatError::Truncated(what));
        }
        let (head, tail) = self.buf.split_at(len);
        self.buf = tail;
        Ok(head)
    }

    fn u64(&mut self, what: &'static str) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn u32s(&mut self, count: usize, what: &'static str) -> Result<Vec<u32>, FormatError> {
        let len = count.checked_mul(4).ok_or(FormatError::Truncated(what))?;
        Ok(self
            .take(len, what)?
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn pairs(&mut self, count: usize, what: &'static str) -> Result<Vec<(u32, u32)>, FormatError> {
        let len = count.checked_mul(8).ok_or(FormatError::Truncated(what))?;
        Ok(self
            .take(len, what)?
            .chunks_exact(8)
            .map(|c| {
                (
                    u32::from_le_bytes(c[..4].try_into().unwrap()),
                    u32::from_le_bytes(c[4..].try_into().unwrap()),
                )
            })
            .collect())
    }
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes(b[at..at + 2].try_into().unwrap())
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn u64_at(b: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

pub fn decode_header(bytes: &[u8]) -> Result<IndexFileHeader, FormatError> {
    refuse_big_endian()?;
    if bytes.len() < 4 {
        return Err(FormatError::Truncated("magic"));
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if magic != MAGIC {
        return Err(FormatError::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated("header"));
    }
    let version = u16_at(bytes, 4);
    if version != VERSION {
        return Err(FormatError::Version(version));
    }
    let kind = IndexKind::from_tag(bytes[6])?;
    let params = match kind {
        IndexKind::Hash => {
            let alpha = LoadFactor::new(u16_at(bytes, 10), u16_at(bytes, 12))
                .map_err(|e| FormatError::Params(e.to_string()))?;
            IndexParams::Hash {
                k: u16_at(bytes, 8),
                alpha,
            }
        }
        IndexKind::Fbcsa => IndexParams::Fbcsa(FbcsaParams {
            bs: u32_at(bytes, 8),
            ss: u32_at(bytes, 12),
        }),
        _ => IndexParams::None,
    };
    Ok(IndexFileHeader {
        kind,
        params,
        n: u64_at(bytes, 24),
        checksum: u64_at(bytes, 32),
        payload_length: u64_at(bytes, 40),
    })
}

pub fn decode_index(bytes: &[u8]) -> Result<IndexFile> {
    let header = decode_header(bytes)?;
    let payload = &bytes[HEADER_LEN..];
    if header.payload_length != payload.len() as u64 {
        return Err(FormatError::PayloadLength {
            declared: header.payload_length,
            actual: payload.len() as u64,
        }
        .into());
    }
    let n = usize::try_from(header.n).map_err(|_| FormatError::Params("n exceeds address space".into()))?;
    let mut r = Reader { buf: payload };
    let index = match header.params {
        IndexParams::None => match header.kind {
            IndexKind::Sa => {
                let sa = r.u32s(n, "sa")?;
                let isa = r.u32s(n, "isa")?;
                let bwt = r.take(n, "bwt")?.to_vec();
                if sa.iter().chain(&isa).any(|&x| x as usize >= n) {
                    return Err(FormatError::Params("SA entry out of range".into()).into());
                }
                Index::Sa(SuffixArraySet { sa, isa, bwt })
            }
            IndexKind::Lut2 => Index::Lut2(Lut2::from_entries(r.pairs(LUT2_ENTRIES, "lut2")?)),
            IndexKind::Lut3 => {
                let bounds = r.u32s(LUT3_ENTRIES + 1, "lut3")?;
                if bounds.windows(2).any(|w| w[0] > w[1]) || bounds[LUT3_ENTRIES] as u64 != header.n {
                    return Err(FormatError::Params("LUT3 bounds inconsistent".into()).into());
                }
                Index::Lut3(Lut3::from_bounds(bounds))
            }
            _ => unreachable!("parameterized kinds"),
        },
        IndexParams::Hash { k, alpha } => {
            let key_count = r.u64("key count")?;
            let z = r.u64("slot count")?;
            if k < 2 || z != alpha.slots_for(key_count) {
                return Err(FormatError::Params(format!("k={k}, z={z}, keys={key_count}, alpha={alpha}")).into());
            }
            let z = usize::try_from(z).map_err(|_| FormatError::Truncated("slots"))?;
            let slots = r.pairs(z, "slots")?;
            if slots
                .iter()
                .any(|&(lo, hi)| (lo, hi) != (u32::MAX, u32::MAX) && (lo > hi || hi as usize >= n))
            {
                return Err(FormatError::Params("hash slot out of range".into()).into());
            }
            Index::Hash(HashBucketIndex::from_parts(slots, k as usize, alpha, key_count))
        }
        IndexParams::Fbcsa(p) => {
            let p = FbcsaParams::new(p.bs, p.ss, true).map_err(|e| FormatError::Params(e.to_string()))?;
            let w1 = r.u64("arr1 length")? as usize;
            let arr1 = r.u32s(w1, "arr1")?;
            let w2 = r.u64("arr2 length")? as usize;
            let arr2 = r.u32s(w2, "arr2")?;
            Index::Fbcsa(FbcsaIndex::from_parts(p, n, arr1, arr2)?)
        }
    };
    if !r.buf.is_empty() {
        return Err(FormatError::PayloadLength {
            declared: header.payload_length,
            actual: (payload.len() - r.buf.len()) as u64,
        }
        .into());
    }
    Ok(IndexFile { header, index })
}
