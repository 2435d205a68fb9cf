//! Benchmark harness: builds the requested indexes over one corpus, checks
//! that they agree on every query, then times each one.
//!
//! Timing covers only the query loop. A warm-up pass over 1% of the queries
//! runs first; the measured loop then runs `repetitions` times.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{sample_patterns, TextCorpus};
use crate::error::{Error, Result};
use crate::fbcsa::{FbcsaIndex, FbcsaParams};
use crate::lut::{Lut2, Lut3};
use crate::query::{self, Narrowing, NarrowingKind};
use crate::sahash::{HashBucketIndex, LoadFactor};
use crate::suffix::{SuffixArraySet, SuffixOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Count,
    Locate,
    /// Single random SA cell.
    Access,
    /// `c` consecutive SA cells from a random start.
    Extract(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchIndex {
    Sa,
    SaLut2,
    SaLut3,
    SaHash(LoadFactor),
    Fbcsa { ss: u32, narrowing: NarrowingKind },
}

impl fmt::Display for BenchIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchIndex::Sa => f.write_str("SA"),
            BenchIndex::SaLut2 => f.write_str("SA-LUT2"),
            BenchIndex::SaLut3 => f.write_str("SA-LUT3"),
            BenchIndex::SaHash(a) => write!(f, "SA-hash-{a}"),
            BenchIndex::Fbcsa { ss, narrowing } => match narrowing {
                NarrowingKind::None => write!(f, "FBCSA-ss{ss}"),
                NarrowingKind::Lut2 => write!(f, "FBCSA-LUT2-ss{ss}"),
                NarrowingKind::Lut3 => write!(f, "FBCSA-LUT3-ss{ss}"),
                NarrowingKind::Hash => write!(f, "FBCSA-hash-ss{ss}"),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub corpus_name: String,
    /// Plain SA is always measured first as the speedup baseline.
    pub indexes: Vec<BenchIndex>,
    pub k: usize,
    pub bs: u32,
    /// Load factor of the table behind FBCSA hash narrowing.
    pub fbcsa_hash_alpha: LoadFactor,
    /// Pattern lengths for count/locate; ignored for access/extract.
    pub pattern_lengths: Vec<usize>,
    /// Patterns per length, or cells/runs for access/extract.
    pub queries: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub operation: Operation,
}

impl BenchConfig {
    /// Desk-scale defaults: 100K queries, k = 8, bs = 32, ss = 5, α = 50%.
    pub fn desk(corpus_name: impl Into<String>) -> Self {
        let half = LoadFactor::percent(50).expect("valid");
        Self {
            corpus_name: corpus_name.into(),
            indexes: vec![
                BenchIndex::Sa,
                BenchIndex::SaLut2,
                BenchIndex::SaLut3,
                BenchIndex::SaHash(half),
                BenchIndex::Fbcsa {
                    ss: 5,
                    narrowing: NarrowingKind::None,
                },
            ],
            k: 8,
            bs: 32,
            fbcsa_hash_alpha: half,
            pattern_lengths: vec![8, 16, 32, 64],
            queries: 100_000,
            seed: 1,
            repetitions: 1,
            operation: Operation::Count,
        }
    }

    fn needs_hash(&self) -> bool {
        self.indexes.iter().any(|i| {
            matches!(
                i,
                BenchIndex::SaHash(_)
                    | BenchIndex::Fbcsa {
                        narrowing: NarrowingKind::Hash,
                        ..
                    }
            )
        })
    }

    fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
        }
        if matches!(self.operation, Operation::Count | Operation::Locate) {
            if self.pattern_lengths.is_empty() {
                return Err(Error::InvalidParameter("no pattern lengths given".into()));
            }
            if self.needs_hash() {
                if let Some(&m) = self.pattern_lengths.iter().find(|&&m| m < self.k) {
                    return Err(Error::InvalidParameter(format!(
                        "pattern length {m} is below the hash prefix length k={}",
                        self.k
                    )));
                }
            }
        }
        if let Operation::Extract(0) = self.operation {
            return Err(Error::InvalidParameter("extract count must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchRow {
    pub corpus: String,
    pub index: String,
    pub m_or_c: usize,
    pub alpha: String,
    pub mean_us: f64,
    pub speedup: f64,
    pub index_bytes: usize,
    pub text_bytes: usize,
    pub occ: u64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut csv = csv::Writer::from_writer(w);
        for row in &self.rows {
            csv.serialize(row)?;
        }
        csv.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn row(&self, index: &str, m_or_c: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.index == index && r.m_or_c == m_or_c)
    }
}

/// Everything built for one run.
struct Built {
    sas: SuffixArraySet,
    lut2: Option<Lut2>,
    lut3: Option<Lut3>,
    hashes: HashMap<LoadFactor, HashBucketIndex>,
    fbcsa: HashMap<u32, FbcsaIndex>,
}

impl Built {
    fn new(corpus: &TextCorpus, cfg: &BenchConfig) -> Result<Self> {
        let data = corpus.data();
        let sas = SuffixArraySet::build(corpus);
        let mut needs_lut2 = cfg.needs_hash();
        let mut needs_lut3 = false;
        let mut alphas = Vec::new();
        let mut ss_values = Vec::new();
        for idx in &cfg.indexes {
            match *idx {
                BenchIndex::Sa => {}
                BenchIndex::SaLut2 => needs_lut2 = true,
                BenchIndex::SaLut3 => needs_lut3 = true,
                BenchIndex::SaHash(a) => alphas.push(a),
                BenchIndex::Fbcsa { ss, narrowing } => {
                    ss_values.push(ss);
                    match narrowing {
                        NarrowingKind::Lut2 => needs_lut2 = true,
                        NarrowingKind::Lut3 => needs_lut3 = true,
                        NarrowingKind::Hash => alphas.push(cfg.fbcsa_hash_alpha),
                        NarrowingKind::None => {}
                    }
                }
            }
        }
        let lut2 = needs_lut2.then(|| Lut2::build(data, &sas));
        let lut3 = needs_lut3.then(|| Lut3::build(data, &sas));
        let mut hashes = HashMap::new();
        for a in alphas {
            if let Entry::Vacant(e) = hashes.entry(a) {
                e.insert(HashBucketIndex::build(data, &sas, cfg.k, a)?);
            }
        }
        let mut fbcsa = HashMap::new();
        for ss in ss_values {
            if let Entry::Vacant(e) = fbcsa.entry(ss) {
                let params = FbcsaParams::new(cfg.bs, ss, true)?;
                e.insert(FbcsaIndex::build(corpus, &sas, params)?);
            }
        }
        Ok(Self {
            sas,
            lut2,
            lut3,
            hashes,
            fbcsa,
        })
    }

    fn narrowing(&self, kind: NarrowingKind, alpha: LoadFactor) -> Narrowing<'_> {
        match kind {
            NarrowingKind::None => Narrowing::None,
            NarrowingKind::Lut2 => Narrowing::Lut2(self.lut2.as_ref().expect("built")),
            NarrowingKind::Lut3 => Narrowing::Lut3(self.lut3.as_ref().expect("built")),
            NarrowingKind::Hash => Narrowing::Hash {
                ht: &self.hashes[&alpha],
                lut2: self.lut2.as_ref().expect("built"),
            },
        }
    }

    fn narrowing_bytes(&self, kind: NarrowingKind, alpha: LoadFactor) -> usize {
        match kind {
            NarrowingKind::None => 0,
            NarrowingKind::Lut2 => self.lut2.as_ref().map_or(0, Lut2::size_bytes),
            NarrowingKind::Lut3 => self.lut3.as_ref().map_or(0, Lut3::size_bytes),
            NarrowingKind::Hash => self.lut2.as_ref().map_or(0, Lut2::size_bytes) + self.hashes[&alpha].size_bytes(),
        }
    }

    /// Index under test as (suffix order, narrowing, bytes).
    fn resolve(&self, idx: BenchIndex, cfg: &BenchConfig) -> (&dyn SuffixOrderSync, Narrowing<'_>, usize) {
        let sa_bytes = 4 * self.sas.n();
        match idx {
            BenchIndex::Sa => (&self.sas, Narrowing::None, sa_bytes),
            BenchIndex::SaLut2 => {
                let k = NarrowingKind::Lut2;
                (
                    &self.sas,
                    self.narrowing(k, cfg.fbcsa_hash_alpha),
                    sa_bytes + self.narrowing_bytes(k, cfg.fbcsa_hash_alpha),
                )
            }
            BenchIndex::SaLut3 => {
                let k = NarrowingKind::Lut3;
                (
                    &self.sas,
                    self.narrowing(k, cfg.fbcsa_hash_alpha),
                    sa_bytes + self.narrowing_bytes(k, cfg.fbcsa_hash_alpha),
                )
            }
            BenchIndex::SaHash(a) => {
                let k = NarrowingKind::Hash;
                (&self.sas, self.narrowing(k, a), sa_bytes + self.narrowing_bytes(k, a))
            }
            BenchIndex::Fbcsa { ss, narrowing } => {
                let f = &self.fbcsa[&ss];
                let bytes = f.size_report().total + self.narrowing_bytes(narrowing, cfg.fbcsa_hash_alpha);
                (f, self.narrowing(narrowing, cfg.fbcsa_hash_alpha), bytes)
            }
        }
    }
}

/// Object-safe, thread-shareable suffix order.
trait SuffixOrderSync: Sync {
    fn len(&self) -> usize;
    fn offset(&self, rank: usize) -> usize;
}

impl<T: SuffixOrder + Sync> SuffixOrderSync for T {
    fn len(&self) -> usize {
        SuffixOrder::len(self)
    }

    fn offset(&self, rank: usize) -> usize {
        SuffixOrder::offset(self, rank)
    }
}

impl SuffixOrder for dyn SuffixOrderSync + '_ {
    fn len(&self) -> usize {
        SuffixOrderSync::len(self)
    }

    fn offset(&self, rank: usize) -> usize {
        SuffixOrderSync::offset(self, rank)
    }
}

fn alpha_label(idx: BenchIndex, cfg: &BenchConfig) -> String {
    match idx {
        BenchIndex::SaHash(a) => a.to_string(),
        BenchIndex::Fbcsa {
            narrowing: NarrowingKind::Hash,
            ..
        } => cfg.fbcsa_hash_alpha.to_string(),
        _ => String::new(),
    }
}

fn time_loop<T>(queries: &[T], reps: usize, mut f: impl FnMut(&T) -> u64) -> (f64, u64) {
    let warm = (queries.len() / 100).max(1).min(queries.len());
    for q in &queries[..warm] {
        black_box(f(q));
    }
    let mut occ = 0u64;
    let start = Instant::now();
    for _ in 0..reps {
        occ = 0;
        for q in queries {
            occ += black_box(f(q));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let per = elapsed * 1e6 / (reps * queries.len().max(1)) as f64;
    (per, occ)
}

pub fn run_bench(corpus: &TextCorpus, cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let built = Built::new(corpus, cfg)?;
    let mut indexes = vec![BenchIndex::Sa];
    indexes.extend(cfg.indexes.iter().copied().filter(|&i| i != BenchIndex::Sa));
    let data = corpus.data();
    let text_bytes = corpus.effective_len();
    let mut report = BenchReport::default();

    match cfg.operation {
        Operation::Count | Operation::Locate => {
            let locate = cfg.operation == Operation::Locate;
            for (li, &m) in cfg.pattern_lengths.iter().enumerate() {
                let patterns = sample_patterns(corpus, m, cfg.queries, cfg.seed.wrapping_add(li as u64))?;
                let resolved: Vec<_> = indexes.iter().map(|&i| (i, built.resolve(i, cfg))).collect();

                // Verification pass: every index must agree with plain SA.
                let bad = patterns.patterns.par_iter().find_map_any(|p| {
                    let want = query::count(data, &built.sas, Narrowing::None, p);
                    resolved.iter().find_map(|(idx, (sa, nar, _))| {
                        let got = query::count(data, *sa, *nar, p);
                        (got != want).then(|| {
                            format!(
                                "{idx} counts {got} for {:?}, SA counts {want}",
                                String::from_utf8_lossy(p)
                            )
                        })
                    })
                });
                if let Some(msg) = bad {
                    return Err(Error::Verification(msg));
                }

                let mut baseline = None;
                for (idx, (sa, nar, bytes)) in resolved {
                    let (mean_us, occ) = time_loop(&patterns.patterns, cfg.repetitions, |p| {
                        if locate {
                            query::locate(data, sa, nar, p).len() as u64
                        } else {
                            query::count(data, sa, nar, p) as u64
                        }
                    });
                    let base = *baseline.get_or_insert(mean_us);
                    report.rows.push(BenchRow {
                        corpus: cfg.corpus_name.clone(),
                        index: idx.to_string(),
                        m_or_c: m,
                        alpha: alpha_label(idx, cfg),
                        mean_us,
                        speedup: base / mean_us,
                        index_bytes: bytes,
                        text_bytes,
                        occ,
                    });
                }
            }
        }
        Operation::Access | Operation::Extract(_) => {
            let c = match cfg.operation {
                Operation::Extract(c) => c,
                _ => 1,
            };
            let n = built.sas.n();
            if c > n {
                return Err(Error::RangeOverflow { start: 0, end: c, n });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let starts: Vec<usize> = (0..cfg.queries).map(|_| rng.gen_range(0..=n - c)).collect();
            let mut rows_for: Vec<BenchIndex> = vec![BenchIndex::Sa];
            let mut seen_ss = Vec::new();
            for idx in &indexes {
                if let BenchIndex::Fbcsa { ss, .. } = *idx {
                    if !seen_ss.contains(&ss) {
                        seen_ss.push(ss);
                        rows_for.push(BenchIndex::Fbcsa {
                            ss,
                            narrowing: NarrowingKind::None,
                        });
                    }
                }
            }
            for &ss in &seen_ss {
                let f = &built.fbcsa[&ss];
                let bad = starts.par_iter().find_map_any(|&i| {
                    let got = f.extract_run(i, c).ok()?;
                    let want: Vec<usize> = built.sas.sa[i..i + c].iter().map(|&x| x as usize).collect();
                    (got != want).then(|| format!("FBCSA ss={ss} extract at {i} differs from SA"))
                });
                if let Some(msg) = bad {
                    return Err(Error::Verification(msg));
                }
            }
            let mut baseline = None;
            for idx in rows_for {
                let (mean_us, bytes) = match idx {
                    BenchIndex::Fbcsa { ss, .. } => {
                        let f = &built.fbcsa[&ss];
                        let (t, _) = time_loop(&starts, cfg.repetitions, |&i| {
                            (i..i + c).map(|r| f.decode_cell(r).unwrap_or(0) as u64).sum()
                        });
                        (t, f.size_report().total)
                    }
                    _ => {
                        let sa = &built.sas.sa;
                        let (t, _) = time_loop(&starts, cfg.repetitions, |&i| {
                            sa[i..i + c].iter().map(|&x| u64::from(x)).sum()
                        });
                        (t, 4 * n)
                    }
                };
                let base = *baseline.get_or_insert(mean_us);
                report.rows.push(BenchRow {
                    corpus: cfg.corpus_name.clone(),
                    index: idx.to_string(),
                    m_or_c: c,
                    alpha: String::new(),
                    mean_us,
                    speedup: base / mean_us,
                    index_bytes: bytes,
                    text_bytes,
                    occ: 0,
                });
            }
        }
    }
    Ok(report)
}
