//! Weighted-average meaning scores of texts over time.
//!
//! Each bucket of a [`TemporalCorpus`] is passed through a [`LexicalLens`],
//! normalized to frequencies `p`, and scored as `Σ p·score` for every
//! dimension. Buckets the lens leaves empty produce absent values.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use chrono::{DateTime, NaiveDateTime, Utc};
use rayon::prelude::*;

use crate::corpus::{apply_lens, parse_zipf, Lens, ZipfDistribution};
use crate::error::{Error, Result};
use crate::frameworks::{DerivedLexicon, Dimension, FrameworkTag};
use crate::lexicon::Term;

pub const CSV_HEADER: &str =
    "timestamp,valence,arousal,dominance,goodness,energy,structure,power,danger,structure_pds,coverage_tokens";

const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";
const FILE_STAMP_FORMAT: &str = "%Y-%m-%dT%H-%M-%SZ";

/// The lexicon's 1-grams, optionally also reachable as `#term`.
#[derive(Debug, Clone)]
pub struct LexicalLens {
    admitted: HashMap<String, usize>,
    pub hashtag_augmented: bool,
}

impl Lens for LexicalLens {
    fn resolve(&self, term: &str) -> Option<usize> {
        self.admitted.get(term).copied()
    }
}

impl LexicalLens {
    pub fn len(&self) -> usize {
        self.admitted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.admitted.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.admitted.contains_key(term)
    }

    /// Admitted terms in sorted order.
    pub fn admitted(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.admitted.keys().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

/// Admits every 1-gram of the lexicon. With `augment_hashtags`, `#t` is also
/// admitted for each plain 1-gram `t`, reading the scores of `t`, unless the
/// lexicon already has its own entry for `#t`.
pub fn build_lens(lexicon: &DerivedLexicon, augment_hashtags: bool) -> LexicalLens {
    let mut admitted: HashMap<String, usize> = lexicon
        .terms()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.arity() == 1)
        .map(|(i, t)| (t.as_str().to_owned(), i))
        .collect();
    if augment_hashtags {
        for (i, t) in lexicon.terms().iter().enumerate() {
            if t.arity() == 1 && !t.as_str().starts_with('#') {
                admitted.entry(format!("#{t}")).or_insert(i);
            }
        }
    }
    LexicalLens {
        admitted,
        hashtag_augmented: augment_hashtags,
    }
}

/// Buckets of term counts on a regular UTC time grid.
#[derive(Debug, Clone)]
pub struct TemporalCorpus {
    resolution_secs: i64,
    buckets: Vec<(DateTime<Utc>, ZipfDistribution)>,
}

impl TemporalCorpus {
    /// Checks that timestamps are strictly increasing and sit on multiples of
    /// the resolution since the Unix epoch.
    pub fn new(resolution_secs: i64, buckets: Vec<(DateTime<Utc>, ZipfDistribution)>) -> Result<Self> {
        if resolution_secs <= 0 {
            return Err(Error::InvalidArgument("resolution must be positive".into()));
        }
        for (k, (t, _)) in buckets.iter().enumerate() {
            if t.timestamp_subsec_nanos() != 0 || t.timestamp().rem_euclid(resolution_secs) != 0 {
                return Err(Error::MisalignedBucket(format_timestamp(t)));
            }
            if k > 0 && buckets[k - 1].0 >= *t {
                return Err(Error::UnorderedBuckets(format_timestamp(t)));
            }
        }
        Ok(TemporalCorpus {
            resolution_secs,
            buckets,
        })
    }

    pub fn resolution_secs(&self) -> i64 {
        self.resolution_secs
    }

    pub fn buckets(&self) -> &[(DateTime<Utc>, ZipfDistribution)] {
        &self.buckets
    }

    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// Reads a directory of `YYYY-MM-DDTHH-MM-SSZ.tsv` Zipf files. Other files
    /// are ignored.
    pub fn read_dir(dir: impl AsRef<Path>, resolution_secs: i64) -> Result<Self> {
        let dir = dir.as_ref();
        let mut files = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("tsv") {
                continue;
            }
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            let stamp = NaiveDateTime::parse_from_str(stem, FILE_STAMP_FORMAT)
                .map_err(|_| Error::InvalidArgument(format!("bucket file name {stem:?} is not a timestamp")))?
                .and_utc();
            files.push((stamp, path));
        }
        files.sort();
        let buckets = files
            .par_iter()
            .map(|(stamp, path)| {
                let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
                let dist = parse_zipf(std::io::BufReader::new(file), format_timestamp(stamp))?;
                Ok((*stamp, dist))
            })
            .collect::<Result<Vec<_>>>()?;
        TemporalCorpus::new(resolution_secs, buckets)
    }

    /// Reads `timestamp TAB term TAB count` lines, grouping by timestamp.
    pub fn read_tsv<R: BufRead>(source: R, resolution_secs: i64) -> Result<Self> {
        let mut groups: BTreeMap<DateTime<Utc>, ZipfDistribution> = BTreeMap::new();
        for (idx, line) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::malformed(lineno, e.to_string()))?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [stamp, term, count] = fields[..] else {
                return Err(Error::malformed(lineno, "expected `timestamp<TAB>term<TAB>count`"));
            };
            let stamp = parse_timestamp(stamp)
                .ok_or_else(|| Error::malformed(lineno, format!("invalid timestamp {stamp:?}")))?;
            let term = Term::new(term).map_err(|_| Error::malformed(lineno, format!("invalid term {term:?}")))?;
            let count: f64 = count
                .trim()
                .parse()
                .ok()
                .filter(|c: &f64| c.is_finite() && *c >= 0.0)
                .ok_or_else(|| Error::malformed(lineno, format!("invalid count {count:?}")))?;
            groups
                .entry(stamp)
                .or_insert_with(|| ZipfDistribution::new(format_timestamp(&stamp)))
                .add(term, count)?;
        }
        TemporalCorpus::new(resolution_secs, groups.into_iter().collect())
    }
}

pub fn format_timestamp(t: &DateTime<Utc>) -> String {
    t.format(TIMESTAMP_FORMAT).to_string()
}

pub fn parse_timestamp(text: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(text.trim())
        .ok()
        .map(|t| t.with_timezone(&Utc))
}

/// Scores of one bucket in one framework.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucketScore {
    pub values: Option<[f64; 3]>,
    pub coverage_tokens: f64,
}

pub fn score_bucket<L: Lens + ?Sized>(
    dist: &ZipfDistribution,
    lens: &L,
    scores: &DerivedLexicon,
    framework: FrameworkTag,
) -> BucketScore {
    let all = score_all(dist, lens, scores);
    let k = match framework {
        FrameworkTag::Vad => 0,
        FrameworkTag::Ges => 1,
        FrameworkTag::Pds => 2,
    };
    BucketScore {
        values: all.values.map(|v| v[k]),
        coverage_tokens: all.coverage_tokens,
    }
}

struct AllScores {
    values: Option<[[f64; 3]; 3]>,
    coverage_tokens: f64,
}

fn score_all<L: Lens + ?Sized>(dist: &ZipfDistribution, lens: &L, scores: &DerivedLexicon) -> AllScores {
    let Ok(lensed) = apply_lens(dist, lens) else {
        return AllScores {
            values: None,
            coverage_tokens: 0.0,
        };
    };
    let mut acc = [[0.0; 3]; 3];
    for (slot, fw) in acc.iter_mut().zip(FrameworkTag::ALL) {
        let coords = scores.coords(fw);
        for e in lensed.entries() {
            for c in 0..3 {
                slot[c] += e.p * coords[e.row][c];
            }
        }
    }
    AllScores {
        values: Some(acc),
        coverage_tokens: lensed.coverage_tokens,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub timestamp: DateTime<Utc>,
    pub value: Option<f64>,
    pub coverage_tokens: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OusioSeries {
    pub framework: FrameworkTag,
    pub dimension: Dimension,
    pub resolution_secs: i64,
    pub samples: Vec<Sample>,
}

impl OusioSeries {
    pub fn values(&self) -> Vec<Option<f64>> {
        self.samples.iter().map(|s| s.value).collect()
    }
}

/// One series per dimension of each requested framework, in the fixed
/// dimension order. Buckets are scored in parallel.
pub fn series<L: Lens + Sync + ?Sized>(
    corpus: &TemporalCorpus,
    lens: &L,
    scores: &DerivedLexicon,
    frameworks: &[FrameworkTag],
) -> Vec<OusioSeries> {
    let scored: Vec<AllScores> = corpus
        .buckets
        .par_iter()
        .map(|(_, dist)| score_all(dist, lens, scores))
        .collect();
    let mut out = Vec::new();
    for (k, fw) in FrameworkTag::ALL.into_iter().enumerate() {
        if !frameworks.contains(&fw) {
            continue;
        }
        for dim in fw.dimensions() {
            let c = dim.component();
            let samples = corpus
                .buckets
                .iter()
                .zip(&scored)
                .map(|((t, _), s)| Sample {
                    timestamp: *t,
                    value: s.values.map(|v| v[k][c]),
                    coverage_tokens: s.coverage_tokens,
                })
                .collect();
            out.push(OusioSeries {
                framework: fw,
                dimension: dim,
                resolution_secs: corpus.resolution_secs,
                samples,
            });
        }
    }
    out
}

/// Centred moving average over samples within `window_secs / 2` on either
/// side, bounds included. Absent samples are skipped; a window with nothing
/// present stays absent.
pub fn smooth(series: &OusioSeries, window_secs: i64) -> Result<OusioSeries> {
    if window_secs < series.resolution_secs {
        return Err(Error::WindowTooSmall {
            window_secs,
            resolution_secs: series.resolution_secs,
        });
    }
    if window_secs % series.resolution_secs != 0 {
        return Err(Error::InvalidArgument(format!(
            "window {window_secs}s is not a multiple of the resolution {}s",
            series.resolution_secs
        )));
    }
    let half = window_secs / 2;
    let s = &series.samples;
    let mut lo = 0;
    let mut hi = 0;
    let mut samples = Vec::with_capacity(s.len());
    for cur in s {
        let t = cur.timestamp.timestamp();
        while s[lo].timestamp.timestamp() < t - half {
            lo += 1;
        }
        while hi < s.len() && s[hi].timestamp.timestamp() <= t + half {
            hi += 1;
        }
        let (mut sum, mut n) = (0.0, 0usize);
        for v in s[lo..hi].iter().filter_map(|x| x.value) {
            sum += v;
            n += 1;
        }
        samples.push(Sample {
            timestamp: cur.timestamp,
            value: (n > 0).then(|| sum / n as f64),
            coverage_tokens: cur.coverage_tokens,
        });
    }
    Ok(OusioSeries {
        samples,
        ..series.clone()
    })
}

fn check_aligned(series: &[&OusioSeries]) -> Result<()> {
    if let Some(first) = series.first() {
        for s in series {
            let same = s.samples.len() == first.samples.len()
                && s.samples
                    .iter()
                    .zip(&first.samples)
                    .all(|(a, b)| a.timestamp == b.timestamp);
            if !same {
                return Err(Error::MisalignedSeries);
            }
        }
    }
    Ok(())
}

fn column_table(series: &[OusioSeries]) -> [Option<&OusioSeries>; 9] {
    let mut cols = [None; 9];
    for s in series {
        let i = Dimension::ALL
            .iter()
            .position(|d| *d == s.dimension)
            .expect("known dimension");
        cols[i] = Some(s);
    }
    cols
}

fn push_value(out: &mut String, v: Option<f64>) {
    out.push(',');
    if let Some(v) = v {
        let _ = write!(out, "{v:.6}");
    }
}

/// CSV with one row per timestamp and one column per dimension. Dimensions
/// without a series, and absent values, are left empty.
pub fn export_csv(series: &[OusioSeries]) -> Result<String> {
    export_csv_smoothed(series, &[])
}

/// Like [`export_csv`], with extra `<dimension>_<label>` columns for each
/// labelled set of smoothed series.
pub fn export_csv_smoothed(raw: &[OusioSeries], smoothed: &[(String, Vec<OusioSeries>)]) -> Result<String> {
    let all: Vec<&OusioSeries> = raw.iter().chain(smoothed.iter().flat_map(|(_, v)| v.iter())).collect();
    check_aligned(&all)?;
    let mut out = String::from(CSV_HEADER);
    let extra: Vec<(String, Vec<&OusioSeries>)> = smoothed
        .iter()
        .map(|(label, set)| {
            let mut set: Vec<&OusioSeries> = set.iter().collect();
            set.sort_by_key(|s| s.dimension);
            (label.clone(), set)
        })
        .collect();
    for (label, set) in &extra {
        for s in set {
            let _ = write!(out, ",{}_{label}", s.dimension.name());
        }
    }
    out.push('\n');
    let Some(first) = all.first() else {
        return Ok(out);
    };
    let cols = column_table(raw);
    for (i, sample) in first.samples.iter().enumerate() {
        out.push_str(&format_timestamp(&sample.timestamp));
        for col in &cols {
            push_value(&mut out, col.and_then(|s| s.samples[i].value));
        }
        let coverage = raw.first().unwrap_or(first).samples[i].coverage_tokens;
        let _ = write!(out, ",{coverage:.6}");
        for (_, set) in &extra {
            for s in set {
                push_value(&mut out, s.samples[i].value);
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// One parsed CSV row: the nine dimension columns in fixed order, coverage,
/// and any extra columns by header name.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub timestamp: DateTime<Utc>,
    pub values: [Option<f64>; 9],
    pub coverage_tokens: f64,
    pub extra: Vec<(String, Option<f64>)>,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    let header: Vec<&str> = match lines.next() {
        Some((_, h)) if h.starts_with(CSV_HEADER) => h.split(',').collect(),
        _ => return Err(Error::malformed(1, "missing series header")),
    };
    let parse_opt = |lineno: usize, f: &str| -> Result<Option<f64>> {
        if f.is_empty() {
            Ok(None)
        } else {
            f.parse()
                .map(Some)
                .map_err(|_| Error::malformed(lineno, format!("invalid number {f:?}")))
        }
    };
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::malformed(lineno, "wrong number of fields"));
        }
        let timestamp = parse_timestamp(fields[0])
            .ok_or_else(|| Error::malformed(lineno, format!("invalid timestamp {:?}", fields[0])))?;
        let mut values = [None; 9];
        for (k, v) in values.iter_mut().enumerate() {
            *v = parse_opt(lineno, fields[k + 1])?;
        }
        let coverage_tokens =
            parse_opt(lineno, fields[10])?.ok_or_else(|| Error::malformed(lineno, "missing coverage"))?;
        let extra = header[11..]
            .iter()
            .zip(&fields[11..])
            .map(|(h, f)| Ok((h.to_string(), parse_opt(lineno, f)?)))
            .collect::<Result<_>>()?;
        rows.push(CsvRow {
            timestamp,
            values,
            coverage_tokens,
            extra,
        });
    }
    Ok(rows)
}
