use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sufidx::bench::{run_bench, BenchConfig, BenchIndex, Operation};
use sufidx::query::{self, Narrowing, NarrowingKind};
use sufidx::sahash::default_k;
use sufidx::space::predict_allht;
use sufidx::{
    distinct_qgrams, load_index, load_text, save_index, synth, FbcsaIndex, FbcsaParams, HashBucketIndex, Index,
    LoadFactor, Lut2, Lut3, SuffixArraySet, SuffixOrder, TextCorpus,
};

#[derive(Parser)]
#[command(name = "sufidx", version, about = "Suffix-array full-text indexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one index and write it to a file.
    Build(BuildArgs),
    /// Count or locate patterns with previously built indexes.
    Query(QueryArgs),
    /// Time queries over a corpus and write CSV.
    Bench(BenchArgs),
    /// Count distinct q-grams.
    Qgrams(QgramArgs),
    /// Predict the size of one hash table per pattern length 3..=m_min.
    PredictAllht(PredictArgs),
    /// Write a synthetic order-2 Markov text.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Sa,
    Lut2,
    Lut3,
    Sahash,
    Fbcsa,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// Index the file as is, without appending the 0 sentinel.
    #[arg(long)]
    no_sentinel: bool,
}

impl CorpusArgs {
    fn load(&self) -> Result<TextCorpus> {
        load_text(&self.corpus, !self.no_sentinel).with_context(|| format!("loading {}", self.corpus.display()))
    }

    fn name(&self) -> String {
        corpus_name(&self.corpus)
    }
}

fn corpus_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".into())
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Output file.
    #[arg(long)]
    index: PathBuf,
    /// Hashed prefix length (default: 12 for dna, 5 for proteins, else 8).
    #[arg(long)]
    k: Option<usize>,
    /// Hash load factor: percent (50) or fraction (0.5).
    #[arg(long, default_value = "50")]
    alpha: LoadFactor,
    #[arg(long, default_value_t = 32)]
    bs: u32,
    #[arg(long, default_value_t = 5)]
    ss: u32,
    /// Allow block sizes that are multiples of 8.
    #[arg(long)]
    test_mode: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Count,
    Locate,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Index files: one SA or FBCSA, optionally LUT2 / LUT3 / HT.
    #[arg(long, required = true)]
    index: Vec<PathBuf>,
    #[arg(long)]
    pattern: Vec<String>,
    /// File with one pattern per line.
    #[arg(long)]
    patterns: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "count")]
    mode: Mode,
    /// Force a narrowing stage instead of the strongest one supplied.
    #[arg(long)]
    narrowing: Option<NarrowingKind>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Count,
    Locate,
    Access,
    Extract,
}

#[derive(Args)]
struct BenchArgs {
    /// Corpus file; omit to generate a synthetic text.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Size of the synthetic text in MiB.
    #[arg(long, default_value_t = 50)]
    synthetic_mb: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["sa", "lut2", "lut3", "sahash", "fbcsa"])]
    kind: Vec<Kind>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "50")]
    alpha: Vec<LoadFactor>,
    #[arg(long, default_value_t = 32)]
    bs: u32,
    #[arg(long, value_delimiter = ',', default_value = "5")]
    ss: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "none")]
    narrowing: Vec<NarrowingKind>,
    /// Pattern lengths (default: m_min,16,32,64).
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// Queries per pattern length (default 100000; 500000 with --full-scale).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, value_enum, default_value = "count")]
    op: Op,
    /// Run length for --op extract.
    #[arg(long, default_value_t = 10)]
    c: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Use the full-scale protocol: 500K patterns, 10M cell accesses, 1M extractions.
    #[arg(long)]
    full_scale: bool,
}

#[derive(Args)]
struct QgramArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
    q: Vec<usize>,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    m_min: Option<usize>,
    #[arg(long, default_value = "50")]
    alpha: LoadFactor,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 50)]
    mb: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Exit status for a cross-index verification failure.
const EXIT_MISMATCH: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Query(a) => cmd_query(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Qgrams(a) => cmd_qgrams(a),
        Command::PredictAllht(a) => cmd_predict(a),
        Command::Synth(a) => cmd_synth(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<sufidx::Error>() {
                Some(sufidx::Error::Verification(_)) => ExitCode::from(EXIT_MISMATCH),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn ratio(bytes: usize, text: usize) -> f64 {
    bytes as f64 / text as f64
}

fn cmd_build(a: BuildArgs) -> Result<()> {
    let corpus = a.corpus.load()?;
    let sas = SuffixArraySet::build(&corpus);
    let data = corpus.data();
    let text = corpus.effective_len();
    let (index, bytes): (Index, usize) = match a.kind {
        Kind::Sa => (Index::Sa(sas.clone()), 4 * sas.n()),
        Kind::Lut2 => {
            let l = Lut2::build(data, &sas);
            let b = l.size_bytes();
            (l.into(), b)
        }
        Kind::Lut3 => {
            let l = Lut3::build(data, &sas);
            let b = l.size_bytes();
            (l.into(), b)
        }
        Kind::Sahash => {
            let k = a.k.unwrap_or_else(|| default_k(&a.corpus.name()));
            let ht = HashBucketIndex::build(data, &sas, k, a.alpha)?;
            println!("k={k} alpha={} keys={} slots={}", a.alpha, ht.key_count(), ht.z());
            let b = ht.size_bytes();
            (ht.into(), b)
        }
        Kind::Fbcsa => {
            let params = FbcsaParams::new(a.bs, a.ss, a.test_mode)?;
            let f = FbcsaIndex::build(&corpus, &sas, params)?;
            let r = f.size_report();
            println!(
                "bs={} ss={} arr1_bytes={} arr2_bytes={}",
                params.bs, params.ss, r.arr1_bytes, r.arr2_bytes
            );
            (f.into(), r.total)
        }
    };
    let written = save_index(index.as_ref(), &corpus, &a.index)?;
    println!(
        "kind={} n={} index_bytes={} x_text={:.3} x_text_with_text={:.3} file_bytes={}",
        index.kind(),
        corpus.n(),
        bytes,
        ratio(bytes, text),
        ratio(bytes + text, text),
        written
    );
    Ok(())
}

fn read_patterns(a: &QueryArgs) -> Result<Vec<Vec<u8>>> {
    let mut out: Vec<Vec<u8>> = a.pattern.iter().map(|p| p.as_bytes().to_vec()).collect();
    if let Some(path) = &a.patterns {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        out.extend(
            bytes
                .split(|&b| b == b'\n')
                .map(|l| l.strip_suffix(b"\r").unwrap_or(l).to_vec())
                .filter(|l| !l.is_empty()),
        );
    }
    if out.is_empty() {
        bail!("no patterns given (use --pattern or --patterns)");
    }
    Ok(out)
}

fn cmd_query(a: QueryArgs) -> Result<()> {
    let corpus = a.corpus.load()?;
    let patterns = read_patterns(&a)?;
    let (mut sa, mut fbcsa, mut lut2, mut lut3, mut ht) = (None, None, None, None, None);
    for path in &a.index {
        let file = load_index(path).with_context(|| format!("loading {}", path.display()))?;
        file.check_corpus(&corpus)
            .with_context(|| format!("{} does not belong to this corpus", path.display()))?;
        match file.index {
            Index::Sa(x) => sa = Some(x),
            Index::Fbcsa(x) => fbcsa = Some(x),
            Index::Lut2(x) => lut2 = Some(x),
            Index::Lut3(x) => lut3 = Some(x),
            Index::Hash(x) => ht = Some(x),
        }
    }
    let base: &dyn QueryBase = match (&sa, &fbcsa) {
        (Some(_), Some(_)) => bail!("supply either an SA or an FBCSA index, not both"),
        (Some(s), None) => s,
        (None, Some(f)) => f,
        (None, None) => bail!("an SA or FBCSA index is required"),
    };
    let supplied_lut2 = lut2.is_some();
    let kind = a.narrowing.unwrap_or(if ht.is_some() {
        NarrowingKind::Hash
    } else if lut3.is_some() {
        NarrowingKind::Lut3
    } else if lut2.is_some() {
        NarrowingKind::Lut2
    } else {
        NarrowingKind::None
    });
    if kind == NarrowingKind::Hash && lut2.is_none() {
        match &sa {
            Some(s) => lut2 = Some(Lut2::build(corpus.data(), s)),
            None => bail!("hash narrowing over FBCSA needs a LUT2 index"),
        }
    }
    let narrowing = match kind {
        NarrowingKind::None => Narrowing::None,
        NarrowingKind::Lut2 => Narrowing::Lut2(lut2.as_ref().ok_or_else(|| anyhow!("no LUT2 index supplied"))?),
        NarrowingKind::Lut3 => Narrowing::Lut3(lut3.as_ref().ok_or_else(|| anyhow!("no LUT3 index supplied"))?),
        NarrowingKind::Hash => Narrowing::Hash {
            ht: ht.as_ref().ok_or_else(|| anyhow!("no HT index supplied"))?,
            lut2: lut2.as_ref().expect("set above"),
        },
    };
    if let Narrowing::Hash { ht, .. } = narrowing {
        if !supplied_lut2 {
            if let Some(p) = patterns.iter().find(|p| p.len() < ht.k()) {
                bail!(
                    "pattern {:?} is shorter than k={}; supply a LUT2 index as fallback",
                    String::from_utf8_lossy(p),
                    ht.k()
                );
            }
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for p in &patterns {
        match a.mode {
            Mode::Count => writeln!(out, "{}", base.count(corpus.data(), narrowing, p))?,
            Mode::Locate => {
                let mut offs = base.locate(corpus.data(), narrowing, p);
                offs.sort_unstable();
                let line: Vec<String> = offs.iter().map(usize::to_string).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

trait QueryBase {
    fn count(&self, text: &[u8], narrowing: Narrowing<'_>, p: &[u8]) -> usize;
    fn locate(&self, text: &[u8], narrowing: Narrowing<'_>, p: &[u8]) -> Vec<usize>;
}

impl<T: SuffixOrder> QueryBase for T {
    fn count(&self, text: &[u8], narrowing: Narrowing<'_>, p: &[u8]) -> usize {
        query::count(text, self, narrowing, p)
    }

    fn locate(&self, text: &[u8], narrowing: Narrowing<'_>, p: &[u8]) -> Vec<usize> {
        query::locate(text, self, narrowing, p)
    }
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let (corpus, name) = match &a.corpus {
        Some(p) => (
            load_text(p, true).with_context(|| format!("loading {}", p.display()))?,
            corpus_name(p),
        ),
        None => {
            eprintln!("generating {} MiB synthetic text (seed {})", a.synthetic_mb, a.seed);
            let text = synth::markov_text(a.synthetic_mb << 20, a.seed);
            (
                TextCorpus::from_bytes(text, true)?,
                format!("synthetic-{}MB", a.synthetic_mb),
            )
        }
    };
    let k = a.k.unwrap_or_else(|| default_k(&name));
    let mut indexes = Vec::new();
    for kind in &a.kind {
        match kind {
            Kind::Sa => indexes.push(BenchIndex::Sa),
            Kind::Lut2 => indexes.push(BenchIndex::SaLut2),
            Kind::Lut3 => indexes.push(BenchIndex::SaLut3),
            Kind::Sahash => indexes.extend(a.alpha.iter().map(|&al| BenchIndex::SaHash(al))),
            Kind::Fbcsa => {
                for &ss in &a.ss {
                    for &narrowing in &a.narrowing {
                        indexes.push(BenchIndex::Fbcsa { ss, narrowing });
                    }
                }
            }
        }
    }
    let operation = match a.op {
        Op::Count => Operation::Count,
        Op::Locate => Operation::Locate,
        Op::Access => Operation::Access,
        Op::Extract => Operation::Extract(a.c),
    };
    let queries = a.count.unwrap_or(match (a.full_scale, operation) {
        (false, _) => 100_000,
        (true, Operation::Access) => 10_000_000,
        (true, Operation::Extract(_)) => 1_000_000,
        (true, _) => 500_000,
    });
    let mut cfg = BenchConfig::desk(name);
    cfg.indexes = indexes;
    cfg.k = k;
    cfg.bs = a.bs;
    cfg.fbcsa_hash_alpha = a.alpha[0];
    cfg.pattern_lengths = if a.m.is_empty() {
        vec![k, 16, 32, 64]
    } else {
        a.m.clone()
    };
    cfg.queries = queries;
    cfg.seed = a.seed;
    cfg.repetitions = a.reps;
    cfg.operation = operation;
    eprintln!("building indexes over {} bytes", corpus.effective_len());
    let report = run_bench(&corpus, &cfg)?;
    match &a.csv {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            report.write_csv(BufWriter::new(f))?;
            eprintln!("wrote {} rows to {}", report.rows.len(), path.display());
        }
        None => report.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_qgrams(a: QgramArgs) -> Result<()> {
    let corpus = a.corpus.load()?;
    println!("q,distinct");
    for q in a.q {
        println!("{q},{}", distinct_qgrams(&corpus, q)?);
    }
    Ok(())
}

fn cmd_predict(a: PredictArgs) -> Result<()> {
    let corpus = a.corpus.load()?;
    let m_min = a.m_min.unwrap_or_else(|| default_k(&a.corpus.name()));
    let p = predict_allht(&corpus, m_min, a.alpha)?;
    for (q, d) in &p.qgram_counts {
        println!("q={q} distinct={d}");
    }
    println!(
        "hash_bytes={} lut2_bytes={} sa_bytes={} text_bytes={} total_bytes={}",
        p.hash_bytes, p.lut2_bytes, p.sa_bytes, p.text_bytes, p.total_bytes
    );
    println!("x_text={:.3}", p.multiple_of_text);
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    let text = synth::markov_text(a.mb << 20, a.seed);
    std::fs::write(&a.out, text).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(())
}
