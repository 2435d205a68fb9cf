//! Space arithmetic for the hash-table variants, including the prediction
//! for one hash table per pattern length (never built).

use crate::corpus::{distinct_qgrams, TextCorpus};
use crate::error::Result;
use crate::lut::LUT2_ENTRIES;
use crate::sahash::LoadFactor;

/// Bytes of a hash table holding `keys` distinct prefixes: `⌈keys/α⌉ × 8`.
pub fn hash_table_bytes(keys: u64, alpha: LoadFactor) -> u64 {
    alpha.slots_for(keys) * 8
}

pub const LUT2_BYTES: u64 = (LUT2_ENTRIES * 8) as u64;

#[derive(Debug, Clone, PartialEq)]
pub struct AllHtPrediction {
    /// `(q, distinct q-grams)` for q = 3..=m_min.
    pub qgram_counts: Vec<(usize, u64)>,
    pub hash_bytes: u64,
    pub lut2_bytes: u64,
    pub sa_bytes: u64,
    pub text_bytes: u64,
    pub total_bytes: u64,
    /// Total as a multiple of the text length (text included).
    pub multiple_of_text: f64,
}

/// Sums one table per q in 3..=m_min on top of SA (4 bytes per symbol),
/// LUT2 and the text.
pub fn predict_allht_from_counts(text_len: u64, qgram_counts: &[(usize, u64)], alpha: LoadFactor) -> AllHtPrediction {
    let hash_bytes = qgram_counts.iter().map(|&(_, d)| hash_table_bytes(d, alpha)).sum();
    let sa_bytes = 4 * text_len;
    let total_bytes = hash_bytes + LUT2_BYTES + sa_bytes + text_len;
    AllHtPrediction {
        qgram_counts: qgram_counts.to_vec(),
        hash_bytes,
        lut2_bytes: LUT2_BYTES,
        sa_bytes,
        text_bytes: text_len,
        total_bytes,
        multiple_of_text: total_bytes as f64 / text_len as f64,
    }
}

pub fn predict_allht(corpus: &TextCorpus, m_min: usize, alpha: LoadFactor) -> Result<AllHtPrediction> {
    let n = corpus.effective_len();
    let counts = (3..=m_min)
        .map(|q| Ok((q, if q > n { 0 } else { distinct_qgrams(corpus, q)? as u64 })))
        .collect::<Result<Vec<_>>>()?;
    Ok(predict_allht_from_counts(n as u64, &counts, alpha))
}
