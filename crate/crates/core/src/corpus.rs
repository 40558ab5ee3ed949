//! Zipf distributions, the lexical lens, and token-weighted bias statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frameworks::{DerivedLexicon, Dimension, FrameworkTag};
use crate::lexicon::Term;
use crate::stats::weighted_summary;

/// Anything that maps a corpus term to a row of a [`DerivedLexicon`].
pub trait Lens {
    fn resolve(&self, term: &str) -> Option<usize>;
}

impl Lens for DerivedLexicon {
    fn resolve(&self, term: &str) -> Option<usize> {
        self.lookup(term)
    }
}

/// Term counts for one text or corpus slice. Counts may be fractional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ZipfDistribution {
    pub label: String,
    counts: BTreeMap<Term, f64>,
}

impl ZipfDistribution {
    pub fn new(label: impl Into<String>) -> Self {
        ZipfDistribution {
            label: label.into(),
            counts: BTreeMap::new(),
        }
    }

    pub fn from_counts<I, S>(label: impl Into<String>, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut d = ZipfDistribution::new(label);
        for (t, c) in counts {
            d.add(Term::new(t.as_ref())?, c)?;
        }
        Ok(d)
    }

    /// Adds `count` to `term`, merging with any existing entry.
    pub fn add(&mut self, term: Term, count: f64) -> Result<()> {
        if !(count.is_finite() && count >= 0.0) {
            return Err(Error::InvalidArgument(format!("invalid count {count} for {term}")));
        }
        *self.counts.entry(term).or_insert(0.0) += count;
        Ok(())
    }

    pub fn counts(&self) -> &BTreeMap<Term, f64> {
        &self.counts
    }

    pub fn get(&self, term: &str) -> Option<f64> {
        Term::new(term).ok().and_then(|t| self.counts.get(&t).copied())
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.counts.values().sum()
    }

    /// Same label, counts divided by the total. Empty stays empty.
    pub fn normalized(&self) -> Self {
        let total = self.total();
        let mut out = ZipfDistribution::new(self.label.clone());
        if total > 0.0 {
            for (t, &c) in &self.counts {
                out.counts.insert(t.clone(), c / total);
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ZipfDistribution {
            label: self.label.clone(),
            counts: self.counts.iter().map(|(t, &c)| (t.clone(), c * factor)).collect(),
        }
    }

    /// `term TAB count` lines in term order, counts to 12 significant digits.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (t, &c) in &self.counts {
            let _ = writeln!(out, "{t}\t{}", format_significant(c, 12));
        }
        out
    }
}

/// Shortest decimal form of `x` rounded to `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("scientific notation parses");
    format!("{rounded}")
}

/// Reads `term TAB count` lines. Repeated terms add up; terms are lower-cased.
pub fn parse_zipf<R: BufRead>(source: R, label: impl Into<String>) -> Result<ZipfDistribution> {
    let mut dist = ZipfDistribution::new(label);
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::malformed(lineno, e.to_string()))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(term), Some(count), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::malformed(lineno, "expected `term<TAB>count`"));
        };
        let term = Term::new(term).map_err(|_| Error::malformed(lineno, format!("invalid term {term:?}")))?;
        let count: f64 = count
            .trim()
            .parse()
            .map_err(|_| Error::malformed(lineno, format!("invalid count {count:?}")))?;
        if !(count.is_finite() && count >= 0.0) {
            return Err(Error::malformed(
                lineno,
                format!("count must be non-negative, got {count}"),
            ));
        }
        dist.add(term, count)?;
    }
    Ok(dist)
}

/// Lower-cases, splits on whitespace, and trims non-alphanumeric characters
/// from both ends of each token. A leading `#` survives.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let lower = raw.to_lowercase();
            let hashtag = lower.starts_with('#');
            let core = lower.trim_matches(|c: char| !c.is_alphanumeric());
            if core.is_empty() {
                None
            } else if hashtag {
                Some(format!("#{core}"))
            } else {
                Some(core.to_owned())
            }
        })
        .collect()
}

/// Counts the tokens of a raw text.
pub fn zipf_from_text(text: &str, label: impl Into<String>) -> ZipfDistribution {
    let mut counts: BTreeMap<Term, f64> = BTreeMap::new();
    for tok in tokenize(text) {
        if let Ok(t) = Term::new(&tok) {
            *counts.entry(t).or_insert(0.0) += 1.0;
        }
    }
    ZipfDistribution {
        label: label.into(),
        counts,
    }
}

/// Normalizes every non-empty slice and averages them with equal weight.
/// Slices with zero total mass are left out of the average.
pub fn merge_equal_weight(slices: &[ZipfDistribution]) -> Result<ZipfDistribution> {
    let live: Vec<&ZipfDistribution> = slices.iter().filter(|s| s.total() > 0.0).collect();
    if live.is_empty() {
        return Err(Error::AllEmpty);
    }
    let share = 1.0 / live.len() as f64;
    let mut out = ZipfDistribution::new("merged");
    for s in live {
        let total = s.total();
        for (t, &c) in &s.counts {
            *out.counts.entry(t.clone()).or_insert(0.0) += share * (c / total);
        }
    }
    Ok(out)
}

/// Adds raw counts across slices.
pub fn merge_raw_sum(slices: &[ZipfDistribution]) -> Result<ZipfDistribution> {
    if slices.iter().all(|s| s.total() <= 0.0) {
        return Err(Error::AllEmpty);
    }
    let mut out = ZipfDistribution::new("merged");
    for s in slices {
        for (t, &c) in &s.counts {
            *out.counts.entry(t.clone()).or_insert(0.0) += c;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensedEntry {
    pub term: Term,
    /// Row of the scored lexicon this term reads its scores from.
    pub row: usize,
    pub p: f64,
}

/// The part of a distribution the lens admits, renormalized to `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensedDistribution {
    entries: Vec<LensedEntry>,
    pub coverage_tokens: f64,
    pub coverage_types: f64,
}

impl LensedDistribution {
    pub fn entries(&self) -> &[LensedEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn p(&self, term: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.term.as_str() == term).map(|e| e.p)
    }

    /// The matched part as a distribution of probabilities.
    pub fn to_zipf(&self, label: impl Into<String>) -> ZipfDistribution {
        ZipfDistribution {
            label: label.into(),
            counts: self.entries.iter().map(|e| (e.term.clone(), e.p)).collect(),
        }
    }
}

pub fn apply_lens<L: Lens + ?Sized>(dist: &ZipfDistribution, lens: &L) -> Result<LensedDistribution> {
    let mut types = 0usize;
    let mut tokens = 0.0;
    let mut matched = Vec::new();
    let mut matched_tokens = 0.0;
    for (t, &c) in &dist.counts {
        if c <= 0.0 {
            continue;
        }
        types += 1;
        tokens += c;
        if let Some(row) = lens.resolve(t.as_str()) {
            matched.push(LensedEntry {
                term: t.clone(),
                row,
                p: c,
            });
            matched_tokens += c;
        }
    }
    if matched.is_empty() {
        return Err(Error::NoOverlap);
    }
    let n_matched = matched.len();
    for e in &mut matched {
        e.p /= matched_tokens;
    }
    Ok(LensedDistribution {
        entries: matched,
        coverage_tokens: matched_tokens / tokens,
        coverage_types: n_matched as f64 / types as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionBias {
    pub dimension: Dimension,
    pub mean: f64,
    pub median: f64,
    pub mass_below_zero: f64,
    pub mass_above_zero: f64,
    pub mass_at_zero: f64,
}

/// Token-weighted location and sign balance of each dimension of a framework.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SafetyBiasReport {
    pub framework: FrameworkTag,
    pub coverage_tokens: f64,
    pub coverage_types: f64,
    pub dimensions: Vec<DimensionBias>,
}

impl SafetyBiasReport {
    pub fn get(&self, dim: Dimension) -> Option<&DimensionBias> {
        self.dimensions.iter().find(|d| d.dimension == dim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "framework {}  coverage_tokens {:.6}  coverage_types {:.6}",
            self.framework, self.coverage_tokens, self.coverage_types
        );
        let _ = writeln!(
            out,
            "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10}",
            "dimension", "mean", "median", "below", "above", "zero"
        );
        for d in &self.dimensions {
            let _ = writeln!(
                out,
                "{:<14} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                d.dimension.name(),
                d.mean,
                d.median,
                d.mass_below_zero,
                d.mass_above_zero,
                d.mass_at_zero
            );
        }
        out
    }
}

pub fn bias_report(
    lensed: &LensedDistribution,
    scores: &DerivedLexicon,
    framework: FrameworkTag,
) -> Result<SafetyBiasReport> {
    let coords = scores.coords(framework);
    let mut dimensions = Vec::with_capacity(3);
    for dim in framework.dimensions() {
        let k = dim.component();
        let pairs: Vec<(f64, f64)> = lensed.entries.iter().map(|e| (coords[e.row][k], e.p)).collect();
        let summary = weighted_summary(pairs.iter().copied())?;
        let (mut below, mut above, mut zero) = (0.0, 0.0, 0.0);
        for &(v, w) in &pairs {
            if v < 0.0 {
                below += w;
            } else if v > 0.0 {
                above += w;
            } else {
                zero += w;
            }
        }
        let total = below + above + zero;
        dimensions.push(DimensionBias {
            dimension: dim,
            mean: summary.mean,
            median: summary.median,
            mass_below_zero: below / total,
            mass_above_zero: above / total,
            mass_at_zero: zero / total,
        });
    }
    Ok(SafetyBiasReport {
        framework,
        coverage_tokens: lensed.coverage_tokens,
        coverage_types: lensed.coverage_types,
        dimensions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zipf(text: &str) -> ZipfDistribution {
        parse_zipf(text.as_bytes(), "t").unwrap()
    }

    #[test]
    fn parse_basic_and_duplicates() {
        let d = zipf("be\t100\nthe\t90\n");
        assert_eq!(d.len(), 2);
        assert_eq!(d.total(), 190.0);
        let d = zipf("be\t60\nBe\t40\n");
        assert_eq!(d.len(), 1);
        assert_eq!(d.get("be"), Some(100.0));
        assert!(zipf("").is_empty());
    }

    #[test]
    fn parse_rejects_bad_rows() {
        for bad in ["be\n", "be\t1\t2\n", "be\t-1\n", "be\tmany\n", "be\tinf\n"] {
            assert!(
                matches!(
                    parse_zipf(bad.as_bytes(), "t"),
                    Err(Error::MalformedRow { line: 1, .. })
                ),
                "{bad:?}"
            );
        }
        assert!(matches!(
            parse_zipf("a\t1\n\nb\n".as_bytes(), "t"),
            Err(Error::MalformedRow { line: 3, .. })
        ));
    }

    #[test]
    fn equal_weight_merge() {
        let a = ZipfDistribution::from_counts("1", [("a", 1.0)]).unwrap();
        let b = ZipfDistribution::from_counts("2", [("b", 1.0)]).unwrap();
        let m = merge_equal_weight(&[a.clone(), b]).unwrap();
        assert_eq!(m.get("a"), Some(0.5));
        assert_eq!(m.get("b"), Some(0.5));

        let x = ZipfDistribution::from_counts("1", [("a", 3.0), ("b", 1.0)]).unwrap();
        let y = ZipfDistribution::from_counts("2", [("a", 1.0), ("b", 3.0)]).unwrap();
        let m = merge_equal_weight(&[x.clone(), y]).unwrap();
        assert_eq!(m.get("a"), Some(0.5));
        assert_eq!(m.get("b"), Some(0.5));

        let single = merge_equal_weight(std::slice::from_ref(&x)).unwrap();
        assert_eq!(single.counts(), x.normalized().counts());

        assert!(matches!(merge_equal_weight(&[]), Err(Error::AllEmpty)));
        assert!(matches!(
            merge_equal_weight(&[ZipfDistribution::new("e")]),
            Err(Error::AllEmpty)
        ));
    }

    #[test]
    fn raw_sum_merge() {
        let a = ZipfDistribution::from_counts("1", [("a", 1.0), ("b", 2.0)]).unwrap();
        let b = ZipfDistribution::from_counts("2", [("b", 3.0)]).unwrap();
        let m = merge_raw_sum(&[a, b]).unwrap();
        assert_eq!(m.get("b"), Some(5.0));
        assert_eq!(m.total(), 6.0);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(0.5, 12), "0.5");
        assert_eq!(format_significant(190.0, 12), "190");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(2.0 / 3.0 * 1e-5, 12), "0.00000666666666667");
    }

    #[test]
    fn merged_tsv_reparses() {
        let x = ZipfDistribution::from_counts("1", [("a", 1.0), ("b", 2.0)]).unwrap();
        let y = ZipfDistribution::from_counts("2", [("c", 7.0)]).unwrap();
        let m = merge_equal_weight(&[x, y]).unwrap();
        let back = parse_zipf(m.to_tsv().as_bytes(), "merged").unwrap();
        for (t, &c) in m.counts() {
            let r = back.get(t.as_str()).unwrap();
            // twelve significant digits: at most half a unit in the last place
            assert!((r - c).abs() <= 5e-12 * c);
        }
    }

    #[test]
    fn tokenizer_rules() {
        assert_eq!(
            tokenize("Hello, World! #Blessed (quoted) -- it's #"),
            vec!["hello", "world", "#blessed", "quoted", "it's"]
        );
        let d = zipf_from_text("the cat; The dog.", "x");
        assert_eq!(d.get("the"), Some(2.0));
    }

    fn lexicon() -> DerivedLexicon {
        let row = |p: f64, d: f64| {
            let mut r = [0.0; 9];
            r[6] = p;
            r[7] = d;
            r
        };
        DerivedLexicon::from_rows(vec![
            (Term::new("success").unwrap(), row(0.758, -0.050)),
            (Term::new("empty").unwrap(), row(-0.610, -0.200)),
        ])
        .unwrap()
    }

    #[test]
    fn lens_coverage() {
        let lex = lexicon();
        let d = ZipfDistribution::from_counts("x", [("success", 2.0), ("zzz-absent", 2.0)]).unwrap();
        let l = apply_lens(&d, &lex).unwrap();
        assert_eq!(l.p("success"), Some(1.0));
        assert_eq!(l.coverage_tokens, 0.5);
        assert_eq!(l.coverage_types, 0.5);

        let none = ZipfDistribution::from_counts("x", [("zzz", 1.0)]).unwrap();
        assert!(matches!(apply_lens(&none, &lex), Err(Error::NoOverlap)));
    }

    #[test]
    fn single_term_bias() {
        let lex = lexicon();
        let d = ZipfDistribution::from_counts("x", [("success", 1.0)]).unwrap();
        let r = bias_report(&apply_lens(&d, &lex).unwrap(), &lex, FrameworkTag::Pds).unwrap();
        assert_eq!(r.get(Dimension::Danger).unwrap().median, -0.050);
        assert_eq!(r.get(Dimension::Power).unwrap().median, 0.758);
        let s = r.get(Dimension::StructurePds).unwrap();
        assert_eq!(s.mass_at_zero, 1.0);
        let table = r.to_table();
        assert_eq!(table.lines().count(), 5);
        assert!(table.contains("danger"));
    }
}
