//! Full-text indexes built on the suffix array.
//!
//! * [`suffix`]: SA, SA⁻¹ and BWT construction, binary-search count/locate
//!   and a brute-force oracle.
//! * [`lut`]: two- and three-byte lookup tables that narrow the search.
//! * [`sahash`]: the SA with hashed deep buckets over `k`-byte prefixes.
//! * [`fbcsa`]: the fixed-block compact suffix array.
//! * [`query`]: count/locate over any SA representation with any narrowing.
//! * [`io`]: the binary index file format.
//! * [`bench`], [`space`]: the benchmark harness and space arithmetic.

pub mod bench;
pub mod corpus;
pub mod error;
pub mod fbcsa;
pub mod io;
pub mod lut;
pub mod query;
pub mod sahash;
mod sais;
pub mod space;
pub mod suffix;
pub mod synth;

pub use corpus::{distinct_qgrams, load_text, sample_patterns, PatternSet, TextCorpus, SENTINEL};
pub use error::{Error, Result};
pub use fbcsa::{build_fbcsa, BlockEncoding, BlockView, FbcsaIndex, FbcsaParams, FbcsaSize};
pub use io::{load_index, save_index, Index, IndexFile, IndexKind};
pub use lut::{build_lut2, build_lut3, Lut2, Lut3};
pub use query::{count_fbcsa, locate_fbcsa, Narrowing, NarrowingKind};
pub use sahash::{build_ht, sdbm_hash, search_hash, search_short, HashBucketIndex, LoadFactor};
pub use suffix::{
    build_sa, count_plain, locate_plain, oracle_search, refine_interval, SaInterval, SuffixArraySet, SuffixOrder,
};
