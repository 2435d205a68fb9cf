//! Acceptance suite. One test per criterion; each prints a PASS/FAIL/SKIP
//! line (visible with `--nocapture`).
//!
//! Dataset-dependent checks look for the Pizza & Chili 200MB files (`dna`,
//! `english`, `proteins`, `sources`, `xml`) in `$PIZZA_CHILI_DIR` and are
//! skipped when it is unset.

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sufidx::bench::{run_bench, BenchConfig, BenchIndex, Operation};
use sufidx::fbcsa::{encode_block, NIL};
use sufidx::io::{decode_index, encode_index, Index};
use sufidx::query::{self, Narrowing};
use sufidx::space::{hash_table_bytes, predict_allht_from_counts};
use sufidx::suffix::SaInterval;
use sufidx::synth::markov_text;
use sufidx::{
    distinct_qgrams, load_text, oracle_search, FbcsaIndex, FbcsaParams, HashBucketIndex, LoadFactor, Lut2, Lut3,
    SuffixArraySet, SuffixOrder, TextCorpus,
};

const SIGMAS: [u8; 5] = [1, 2, 4, 26, 255];
const HASH_KS: [usize; 4] = [2, 3, 5, 8];
const BLOCK_SIZES: [u32; 2] = [8, 32];
const SAMPLING_STEPS: [u32; 6] = [1, 3, 5, 8, 16, 32];
const CORPORA: usize = 200;
const PATTERNS_PER_CORPUS: usize = 100;

/// Writes straight to stderr so the verdict lines survive libtest's output
/// capture and show up in a plain `cargo test` log.
fn line(msg: String) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr().lock(), "{msg}");
}

fn report(id: &str, name: &str, outcome: Result<String, String>) {
    match &outcome {
        Ok(detail) => line(format!("[PASS] {id} {name}: {detail}")),
        Err(detail) => line(format!("[FAIL] {id} {name}: {detail}")),
    }
    if let Err(detail) = outcome {
        panic!("{id} failed: {detail}");
    }
}

fn skip(id: &str, name: &str, why: &str) {
    line(format!("[SKIP] {id} {name}: {why}"));
}

/// Bytes 1..=sigma; byte 0 is reserved for the sentinel.
fn random_text(rng: &mut ChaCha8Rng, sigma: u8, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(1..=sigma)).collect()
}

fn random_corpus(seed: u64) -> (u8, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = SIGMAS[rng.gen_range(0..SIGMAS.len())];
    // Mix tiny and large corpora across [1, 10_000].
    let n = if rng.gen_bool(0.2) {
        rng.gen_range(1..=64)
    } else {
        rng.gen_range(1..=10_000)
    };
    (sigma, random_text(&mut rng, sigma, n))
}

fn random_patterns(rng: &mut ChaCha8Rng, text: &[u8], sigma: u8, count: usize) -> Vec<Vec<u8>> {
    (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=32);
            if m <= text.len() && rng.gen_bool(0.6) {
                let s = rng.gen_range(0..=text.len() - m);
                let mut p = text[s..s + m].to_vec();
                if rng.gen_bool(0.2) {
                    let at = rng.gen_range(0..m);
                    p[at] = rng.gen_range(1..=sigma);
                }
                p
            } else {
                random_text(rng, sigma, m)
            }
        })
        .collect()
}

/// Everything criterion 1 checks for one corpus.
struct Suite {
    corpus: TextCorpus,
    sas: SuffixArraySet,
    lut2: Lut2,
    lut3: Lut3,
    hashes: Vec<HashBucketIndex>,
}

impl Suite {
    fn build(corpus: TextCorpus, alpha: LoadFactor) -> Self {
        let sas = SuffixArraySet::build(&corpus);
        let lut2 = Lut2::build(corpus.data(), &sas);
        let lut3 = Lut3::build(corpus.data(), &sas);
        let hashes = HASH_KS
            .iter()
            .map(|&k| HashBucketIndex::build(corpus.data(), &sas, k, alpha).unwrap())
            .collect();
        Self {
            corpus,
            sas,
            lut2,
            lut3,
            hashes,
        }
    }

    fn narrowings(&self) -> Vec<(String, Narrowing<'_>)> {
        let mut v = vec![
            ("none".to_string(), Narrowing::None),
            ("lut2".to_string(), Narrowing::Lut2(&self.lut2)),
            ("lut3".to_string(), Narrowing::Lut3(&self.lut3)),
        ];
        for ht in &self.hashes {
            v.push((format!("hash-k{}", ht.k()), Narrowing::Hash { ht, lut2: &self.lut2 }));
        }
        v
    }
}

/// Checks one SA representation under every narrowing against the oracle.
/// Locate is checked once per representation: every narrowing must produce
/// the identical interval, so the offsets it reports are the same.
fn check_against_oracle<S: SuffixOrder + ?Sized>(
    label: &str,
    suite: &Suite,
    sa: &S,
    pattern: &[u8],
    want: &[usize],
) -> Result<(), String> {
    let data = suite.corpus.data();
    let reference = query::find_interval(data, sa, Narrowing::None, pattern);
    let mut got: Vec<usize> = reference.ranks().map(|r| sa.offset(r)).collect();
    got.sort_unstable();
    if got != want {
        return Err(format!("{label}/none locate {:?} -> {got:?}, oracle {want:?}", pattern));
    }
    for (name, nar) in suite.narrowings() {
        let iv = query::find_interval(data, sa, nar, pattern);
        let same = iv == reference || (iv.is_empty() && reference.is_empty());
        if !same || iv.len() != want.len() {
            return Err(format!(
                "{label}/{name} on {:?}: interval {iv:?} vs {reference:?}, oracle occ {}",
                pattern,
                want.len()
            ));
        }
    }
    Ok(())
}

fn fbcsa_params() -> impl Iterator<Item = FbcsaParams> {
    BLOCK_SIZES.iter().flat_map(|&bs| {
        SAMPLING_STEPS
            .iter()
            .map(move |&ss| FbcsaParams::new(bs, ss, true).unwrap())
    })
}

fn c1_one_corpus(seed: u64) -> Result<usize, String> {
    let (sigma, text) = random_corpus(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let alpha = LoadFactor::percent([25, 50, 80, 100][rng.gen_range(0..4)]).unwrap();
    let patterns = random_patterns(&mut rng, &text, sigma, PATTERNS_PER_CORPUS);
    let mut checks = 0;

    // Sentinel-free text: plain SA and its narrowings.
    let bare = Suite::build(TextCorpus::from_bytes(text.clone(), false).unwrap(), alpha);
    // Terminated text: the same plus every FBCSA configuration.
    let term = Suite::build(TextCorpus::from_bytes(text, true).unwrap(), alpha);
    let fbcsas: Vec<FbcsaIndex> = fbcsa_params()
        .map(|p| FbcsaIndex::build(&term.corpus, &term.sas, p).unwrap())
        .collect();

    for p in &patterns {
        let want = oracle_search(&term.corpus, p);
        check_against_oracle("SA(bare)", &bare, &bare.sas, p, &want)?;
        check_against_oracle("SA", &term, &term.sas, p, &want)?;
        for f in &fbcsas {
            let label = format!("FBCSA(bs={},ss={})", f.params().bs, f.params().ss);
            check_against_oracle(&label, &term, f, p, &want)?;
        }
        checks += 2 + fbcsas.len();
    }
    Ok(checks)
}

#[test]
fn c1_oracle_equivalence() {
    let start = Instant::now();
    let mut checks = 0;
    let outcome = (0..CORPORA as u64)
        .try_for_each(|seed| {
            checks += c1_one_corpus(seed).map_err(|e| format!("corpus seed {seed}: {e}"))?;
            Ok(())
        })
        .map(|()| {
            format!(
                "{CORPORA} corpora x {PATTERNS_PER_CORPUS} patterns, {checks} representation checks x 7 narrowings, {:.1}s",
                start.elapsed().as_secs_f64()
            )
        });
    report("C1", "oracle equivalence", outcome);
}

#[test]
fn c2_fbcsa_full_decode_sweep() {
    let mut cells = 0usize;
    let mut max_ratio = 0.0f64;
    let outcome = (0..CORPORA as u64)
        .try_for_each(|seed| {
            let (_, text) = random_corpus(seed);
            let corpus = TextCorpus::from_bytes(text, true).unwrap();
            let sas = SuffixArraySet::build(&corpus);
            for p in fbcsa_params() {
                let f = FbcsaIndex::build(&corpus, &sas, p).unwrap();
                for i in 0..sas.n() {
                    let (v, depth) = f.decode_with_depth(i).map_err(|e| e.to_string())?;
                    if v != sas.sa[i] as usize {
                        return Err(format!("seed {seed} {p:?} rank {i}: decoded {v}, SA {}", sas.sa[i]));
                    }
                    if depth >= p.ss as usize {
                        return Err(format!("seed {seed} {p:?} rank {i}: depth {depth} >= ss"));
                    }
                    max_ratio = max_ratio.max(depth as f64 / p.ss as f64);
                    cells += 1;
                }
            }
            Ok(())
        })
        .map(|()| format!("{cells} cells decoded exactly, max depth/ss {max_ratio:.3}"));
    report("C2", "FBCSA full-decode sweep", outcome);
}

#[test]
fn c3_worked_block_example() {
    let block = [1000u32, 522, 801, 303, 906, 477, 52, 610];
    let bwt = b"abacddbb";
    // Synthetic SA context: the block sits at ranks 400..408 and every other
    // offset of 0..1100 fills the remaining ranks in increasing order.
    let n = 1100u32;
    let mut rest = (0..n).filter(|v| !block.contains(v));
    let sa: Vec<u32> = (0..n as usize)
        .map(|r| {
            if (400..408).contains(&r) {
                block[r - 400]
            } else {
                rest.next().unwrap()
            }
        })
        .collect();
    let mut isa = vec![0u32; n as usize];
    for (r, &v) in sa.iter().enumerate() {
        isa[v as usize] = r as u32;
    }
    let enc = encode_block(&sa[400..408], bwt, 5, |v| isa[v as usize]);

    let mut problems = Vec::new();
    if enc.mfs != [Some(b'b'), Some(b'a'), Some(b'd')] {
        problems.push(format!("MFS {:?}", enc.mfs));
    }
    if enc.first_pos != [Some(1), Some(0), Some(4)] {
        problems.push(format!("first occurrences {:?}", enc.first_pos));
    }
    let linked: Vec<u32> = enc
        .view
        .links
        .iter()
        .map(|&l| if l == NIL { NIL } else { sa[l as usize] })
        .collect();
    if linked != [521, 999, 905] {
        problems.push(format!("link targets {linked:?}"));
    }
    let runs = enc.predecessor_runs();
    if runs != [Some((521, 523)), Some((999, 1000)), Some((905, 906))] {
        problems.push(format!("predecessor runs {runs:?}"));
    }
    let outcome = if problems.is_empty() {
        Ok("MFS {b,a,d}, first occurrences {1,0,4}, runs [521,523] [999,1000] [905,906]".into())
    } else {
        Err(problems.join("; "))
    };
    report("C3", "worked block example", outcome);
}

fn pizza_chili(name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os("PIZZA_CHILI_DIR")?;
    let path = PathBuf::from(dir).join(name);
    path.exists().then_some(path)
}

#[test]
fn c4_hash_memory_formula() {
    let mut builds = 0;
    let outcome = (|| {
        for seed in 0..40u64 {
            let (_, text) = random_corpus(seed);
            let corpus = TextCorpus::from_bytes(text, true).unwrap();
            let sas = SuffixArraySet::build(&corpus);
            for &k in &HASH_KS {
                for pct in [25u16, 50, 60, 70, 80, 90, 100] {
                    let alpha = LoadFactor::percent(pct).unwrap();
                    let ht = HashBucketIndex::build(corpus.data(), &sas, k, alpha).unwrap();
                    let want = (ht.key_count() * 100).div_ceil(u64::from(pct)) * 8;
                    if ht.size_bytes() as u64 != want {
                        return Err(format!(
                            "seed {seed} k={k} α={pct}%: {} bytes, want {want}",
                            ht.size_bytes()
                        ));
                    }
                    builds += 1;
                }
            }
        }
        let english = hash_table_bytes(20_782_043, LoadFactor::percent(50).unwrap());
        if english != 332_512_688 {
            return Err(format!("20,782,043 keys at 50% -> {english} bytes"));
        }
        Ok(format!(
            "{builds} builds match ceil(keys/alpha)*8; 20,782,043 keys at 50% -> 332,512,688 bytes"
        ))
    })();
    report("C4", "hash memory formula", outcome);
    match pizza_chili("english") {
        Some(path) => {
            let corpus = load_text(path, false).unwrap();
            let d8 = distinct_qgrams(&corpus, 8).unwrap();
            let outcome = if d8 == 20_782_043 {
                Ok(format!("{d8} distinct 8-grams"))
            } else {
                Err(format!("{d8} distinct 8-grams"))
            };
            report("C4b", "english distinct 8-grams", outcome);
        }
        None => skip("C4b", "english distinct 8-grams", "PIZZA_CHILI_DIR not set"),
    }
}

#[test]
fn c5_space_accounting() {
    let outcome = (|| {
        let mut checked = 0;
        let mut inversions = 0;
        let mut corpora: Vec<(String, TextCorpus)> = (0..CORPORA as u64)
            .map(|seed| {
                (
                    format!("random seed {seed}"),
                    TextCorpus::from_bytes(random_corpus(seed).1, true).unwrap(),
                )
            })
            .collect();
        corpora.push((
            "markov 1MiB".into(),
            TextCorpus::from_bytes(markov_text(1 << 20, 11), true).unwrap(),
        ));
        for (name, corpus) in &corpora {
            let sas = SuffixArraySet::build(corpus);
            for &bs in &BLOCK_SIZES {
                let mut totals = Vec::new();
                for &ss in &SAMPLING_STEPS {
                    let f = FbcsaIndex::build(corpus, &sas, FbcsaParams::new(bs, ss, true).unwrap()).unwrap();
                    let r = f.size_report();
                    let want = f.block_count() * (3 * bs as usize + 32) / 8;
                    if r.arr1_bytes != want || r.total != r.arr1_bytes + r.arr2_bytes {
                        return Err(format!(
                            "{name} bs={bs} ss={ss}: arr1 {} bytes, want {want}",
                            r.arr1_bytes
                        ));
                    }
                    let mut expect_a2s = 0usize;
                    for b in 0..f.block_count() {
                        if f.a2s(b) as usize != expect_a2s {
                            return Err(format!("{name} bs={bs} ss={ss}: a2s of block {b}"));
                        }
                        expect_a2s += 4 * (3 + f.block(b).explicit_values.len());
                    }
                    if expect_a2s != r.arr2_bytes {
                        return Err(format!(
                            "{name} bs={bs} ss={ss}: arr2 {} bytes, blocks sum to {expect_a2s}",
                            r.arr2_bytes
                        ));
                    }
                    totals.push((ss, r.total));
                    checked += 1;
                }
                // Along a divisor chain the explicit set shrinks by inclusion,
                // so monotonicity is exact. Between non-nested steps it holds
                // only statistically and is enforced on the realistic corpus.
                let chain: Vec<_> = totals.iter().filter(|(ss, _)| [1, 8, 16, 32].contains(ss)).collect();
                let full_list = name.starts_with("markov");
                let bad = if full_list {
                    totals.windows(2).find(|w| w[1].1 > w[0].1).map(|w| (w[0], w[1]))
                } else {
                    chain.windows(2).find(|w| w[1].1 > w[0].1).map(|w| (*w[0], *w[1]))
                };
                if let Some((a, b)) = bad {
                    return Err(format!(
                        "{name} bs={bs}: size grows from ss={} ({} B) to ss={} ({} B)",
                        a.0, a.1, b.0, b.1
                    ));
                }
                inversions += totals.windows(2).filter(|w| w[1].1 > w[0].1).count();
            }
        }
        let lut3 = ((1usize << 24) + 1) * 4;
        let sas = SuffixArraySet::build(&corpora[0].1);
        let built = Lut3::build(corpora[0].1.data(), &sas).size_bytes();
        if built != lut3 {
            return Err(format!("LUT3 holds {built} bytes, want {lut3}"));
        }
        let fraction = lut3 as f64 / (200u64 << 20) as f64;
        if (fraction / 0.321 - 1.0).abs() > 0.01 {
            return Err(format!("LUT3 overhead {fraction:.4}n for 200MB, reference 0.321n"));
        }
        Ok(format!(
            "{checked} FBCSA builds exact; monotone along ss 1|8|16|32 everywhere and over all ss on 1MiB text \
             ({inversions} non-nested inversions on small random corpora); LUT3 = {lut3} bytes = {fraction:.4}n at 200MB"
        ))
    })();
    report("C5", "space accounting", outcome);
}

/// Published distinct q-gram counts of the 200MB files, q = 1..10.
const REFERENCE_QGRAMS: [(&str, [u64; 10]); 5] = [
    (
        "dna",
        [16, 152, 683, 2_222, 5_892, 12_804, 28_473, 80_397, 279_680, 1_065_613],
    ),
    (
        "english",
        [
            225, 10_829, 102_666, 589_230, 2_150_525, 5_566_993, 11_599_445, 20_782_043, 33_143_032, 48_061_001,
        ],
    ),
    (
        "proteins",
        [
            25,
            607,
            11_607,
            224_132,
            3_623_281,
            36_525_895,
            94_488_651,
            112_880_347,
            117_199_335,
            119_518_691,
        ],
    ),
    (
        "sources",
        [
            230, 9_525, 253_831, 1_719_387, 5_252_826, 10_669_627, 17_826_241, 26_325_724, 35_666_486, 45_354_280,
        ],
    ),
    (
        "xml",
        [
            96, 7_054, 141_783, 908_131, 2_716_438, 5_555_190, 8_957_209, 12_534_152, 16_212_609, 20_018_262,
        ],
    ),
];

#[test]
fn c6_qgram_counts() {
    let outcome = (|| {
        let mut cases = 0;
        for seed in 0..60u64 {
            let (_, text) = random_corpus(seed);
            let text = if seed % 6 == 0 { markov_text(20_000, seed) } else { text };
            let corpus = TextCorpus::from_bytes(text.clone(), true).unwrap();
            for q in 1..=12usize.min(text.len()) {
                let oracle: HashSet<Vec<u8>> = text.windows(q).map(<[u8]>::to_vec).collect();
                let got = distinct_qgrams(&corpus, q).unwrap();
                if got != oracle.len() {
                    return Err(format!("seed {seed} q={q}: {got} vs oracle {}", oracle.len()));
                }
                cases += 1;
            }
        }
        Ok(format!("{cases} (corpus, q) pairs match the set oracle"))
    })();
    report("C6", "q-gram counts (synthetic)", outcome);

    for (name, row) in REFERENCE_QGRAMS {
        let Some(path) = pizza_chili(name) else {
            skip("C6", &format!("reference q-grams {name}"), "PIZZA_CHILI_DIR not set");
            continue;
        };
        let corpus = load_text(path, false).unwrap();
        let got: Vec<u64> = (1..=10).map(|q| distinct_qgrams(&corpus, q).unwrap() as u64).collect();
        let outcome = if got == row {
            Ok("q=1..10 exact".into())
        } else {
            Err(format!("{got:?} vs {row:?}"))
        };
        report("C6", &format!("reference q-grams {name}"), outcome);
    }
}

#[test]
fn c6b_allht_prediction_from_reference_counts() {
    // English: 200 MiB, m_min = 8, q = 3..8 at α = 50% → 8.114 × text.
    let counts: Vec<(usize, u64)> = (3..=8).map(|q| (q, REFERENCE_QGRAMS[1].1[q - 1])).collect();
    let p = predict_allht_from_counts(200 << 20, &counts, LoadFactor::percent(50).unwrap());
    let outcome = if (p.multiple_of_text / 8.114 - 1.0).abs() <= 0.01 {
        Ok(format!("{:.4} x text (reference: 8.114)", p.multiple_of_text))
    } else {
        Err(format!("{:.4} x text", p.multiple_of_text))
    };
    report("C6b", "all-HT size arithmetic", outcome);
}

#[test]
fn c7_performance_trend() {
    let mb: usize = std::env::var("SUFIDX_PERF_MB")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let queries: usize = std::env::var("SUFIDX_PERF_QUERIES")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);
    let corpus = TextCorpus::from_bytes(markov_text(mb << 20, 2024), true).unwrap();
    let pct = |p| LoadFactor::percent(p).unwrap();
    let mut cfg = BenchConfig::desk(format!("markov-{mb}MiB"));
    cfg.indexes = vec![
        BenchIndex::Sa,
        BenchIndex::SaLut3,
        BenchIndex::SaHash(pct(25)),
        BenchIndex::SaHash(pct(50)),
        BenchIndex::SaHash(pct(90)),
    ];
    cfg.pattern_lengths = vec![16];
    cfg.queries = queries;
    cfg.operation = Operation::Count;
    let r = run_bench(&corpus, &cfg).expect("benchmark runs and all indexes agree");
    let t = |name: &str| r.row(name, 16).unwrap().mean_us;
    let (sa, lut3, h25, h50, h90) = (t("SA"), t("SA-LUT3"), t("SA-hash-25"), t("SA-hash-50"), t("SA-hash-90"));
    line(format!("C7 timings (us/query, m=16, {queries} patterns, {mb} MiB): SA {sa:.3}, SA-LUT3 {lut3:.3}, SA-hash-25 {h25:.3}, SA-hash-50 {h50:.3}, SA-hash-90 {h90:.3}"));
    let checks = [
        ("SA-hash-50 speedup >= 1.5", sa / h50 >= 1.5, format!("{:.2}", sa / h50)),
        ("SA-LUT3 speedup > 1.0", sa / lut3 > 1.0, format!("{:.2}", sa / lut3)),
        (
            "SA-hash time(90%) <= 2 x time(25%)",
            h90 <= 2.0 * h25,
            format!("{:.2}", h90 / h25),
        ),
    ];
    // Machine-dependent: failures are warnings, not errors.
    for (what, ok, value) in checks {
        if ok {
            line(format!("[PASS] C7 {what}: {value}"));
        } else {
            line(format!("[WARN] C7 {what}: {value}"));
        }
    }
}

#[test]
fn c8_serialization_round_trip() {
    let outcome = (|| {
        let mut loaded_checks = 0;
        for seed in [3u64, 17, 101, 150] {
            let (sigma, text) = random_corpus(seed);
            let alpha = LoadFactor::new(2, 3).unwrap();
            let suite = Suite::build(TextCorpus::from_bytes(text.clone(), true).unwrap(), alpha);
            let c = &suite.corpus;

            let round = |idx: Index| -> Result<Index, String> {
                let bytes = encode_index(idx.as_ref(), c);
                let back = decode_index(&bytes).map_err(|e| e.to_string())?.index;
                if back != idx {
                    return Err(format!("{} differs after reload", idx.kind()));
                }
                if encode_index(back.as_ref(), c) != bytes {
                    return Err(format!("{} re-encodes differently", idx.kind()));
                }
                Ok(back)
            };
            let Index::Sa(sas) = round(Index::Sa(SuffixArraySet::build(c)))? else {
                unreachable!()
            };
            let Index::Lut2(lut2) = round(Index::Lut2(Lut2::build(c.data(), &sas)))? else {
                unreachable!()
            };
            let Index::Lut3(lut3) = round(Index::Lut3(Lut3::build(c.data(), &sas)))? else {
                unreachable!()
            };
            let mut hashes = Vec::new();
            for &k in &HASH_KS {
                let Index::Hash(h) = round(Index::Hash(HashBucketIndex::build(c.data(), &sas, k, alpha).unwrap()))?
                else {
                    unreachable!()
                };
                hashes.push(h);
            }
            let mut fbcsas = Vec::new();
            for p in fbcsa_params() {
                let Index::Fbcsa(f) = round(Index::Fbcsa(FbcsaIndex::build(c, &sas, p).unwrap()))? else {
                    unreachable!()
                };
                fbcsas.push(f);
            }
            // Independent builds serialize byte-identically.
            let again = FbcsaIndex::build(c, &SuffixArraySet::build(c), FbcsaParams::DEFAULT).unwrap();
            let first = FbcsaIndex::build(c, &sas, FbcsaParams::DEFAULT).unwrap();
            if encode_index(&again, c) != encode_index(&first, c) {
                return Err("FBCSA builds are not byte-identical".into());
            }

            // Criterion 1 again, on reloaded structures only.
            let loaded = Suite {
                corpus: c.clone(),
                sas,
                lut2,
                lut3,
                hashes,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for p in random_patterns(&mut rng, &text, sigma, PATTERNS_PER_CORPUS) {
                let want = oracle_search(c, &p);
                check_against_oracle("SA(loaded)", &loaded, &loaded.sas, &p, &want)?;
                for f in &fbcsas {
                    check_against_oracle("FBCSA(loaded)", &loaded, f, &p, &want)?;
                }
                loaded_checks += 1 + fbcsas.len();
            }
        }
        Ok(format!(
            "all five kinds round-trip byte-exactly; {loaded_checks} post-load oracle checks"
        ))
    })();
    report("C8", "serialization round-trip", outcome);
}

#[test]
fn empty_lut2_cell_skips_decoding() {
    use std::cell::Cell;
    struct Counting<'a>(&'a FbcsaIndex, Cell<usize>);
    impl SuffixOrder for Counting<'_> {
        fn len(&self) -> usize {
            self.0.n()
        }
        fn offset(&self, rank: usize) -> usize {
            self.1.set(self.1.get() + 1);
            self.0.decode_cell(rank).unwrap()
        }
    }
    let corpus = TextCorpus::from_bytes(b"banana".to_vec(), true).unwrap();
    let sas = SuffixArraySet::build(&corpus);
    let f = FbcsaIndex::build(&corpus, &sas, FbcsaParams::new(8, 3, true).unwrap()).unwrap();
    let lut2 = Lut2::build(corpus.data(), &sas);
    let counting = Counting(&f, Cell::new(0));
    let iv = query::find_interval(corpus.data(), &counting, Narrowing::Lut2(&lut2), b"nb");
    assert_eq!(iv, SaInterval::EMPTY);
    assert_eq!(counting.1.get(), 0);
}
