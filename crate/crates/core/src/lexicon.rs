//! VAD lexicon ingestion.
//!
//! A lexicon file carries one term per line with valence, arousal and
//! dominance scores in `[0, 1]`. Parsing lower-cases terms, rejects duplicates
//! and out-of-range scores, and skips a single header line when the first
//! line's score fields are not numbers. [`center`] then shifts every score by
//! the fixed design midpoint of 1/2.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Midpoint of the best-worst scaling interval `[0, 1]`.
pub const DESIGN_MEAN: f64 = 0.5;

/// A lower-cased n-gram; tokens are separated by single spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Term(String);

impl TryFrom<String> for Term {
    type Error = Error;

    fn try_from(text: String) -> Result<Self> {
        Term::new(&text)
    }
}

impl From<Term> for String {
    fn from(t: Term) -> String {
        t.0
    }
}

impl Term {
    pub fn new(text: &str) -> Result<Self> {
        let text = text.to_lowercase();
        let bad = text.is_empty()
            || text.contains(['\t', '\n', '\r'])
            || text.starts_with(' ')
            || text.ends_with(' ')
            || text.contains("  ");
        if bad {
            return Err(Error::InvalidTerm(text));
        }
        Ok(Term(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of tokens in the n-gram.
    pub fn arity(&self) -> usize {
        1 + self.0.matches(' ').count()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Term {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Column layout of a lexicon file (zero-based field positions).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconFormat {
    pub term: usize,
    pub valence: usize,
    pub arousal: usize,
    pub dominance: usize,
    /// Total number of tab-separated fields per row.
    pub fields: usize,
}

impl Default for LexiconFormat {
    fn default() -> Self {
        LexiconFormat {
            term: 0,
            valence: 1,
            arousal: 2,
            dominance: 3,
            fields: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawEntry {
    pub term: Term,
    /// Valence, arousal, dominance in `[0, 1]`.
    pub scores: [f64; 3],
}

/// Validated lexicon with scores on the original `[0, 1]` scale.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawLexicon {
    entries: Vec<RawEntry>,
}

impl RawLexicon {
    pub fn new(entries: Vec<RawEntry>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if !e.scores.iter().all(|s| (0.0..=1.0).contains(s)) {
                return Err(Error::ScoreOutOfRange(e.term.to_string()));
            }
            if seen.insert(e.term.as_str(), i).is_some() {
                return Err(Error::DuplicateTerm(e.term.to_string()));
            }
        }
        Ok(RawLexicon { entries })
    }

    pub fn entries(&self) -> &[RawEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical TSV: header line, then scores with 6 decimals.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("term\tvalence\tarousal\tdominance\n");
        for e in &self.entries {
            let [v, a, d] = e.scores;
            let _ = writeln!(out, "{}\t{v:.6}\t{a:.6}\t{d:.6}", e.term);
        }
        out
    }
}

pub fn parse_lexicon<R: BufRead>(source: R, format: LexiconFormat) -> Result<RawLexicon> {
    let mut entries = Vec::new();
    let mut seen: HashMap<String, ()> = HashMap::new();
    let mut first_content = true;
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::malformed(lineno, e.to_string()))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let is_first = std::mem::take(&mut first_content);
        if fields.len() != format.fields {
            return Err(Error::malformed(
                lineno,
                format!("expected {} fields, found {}", format.fields, fields.len()),
            ));
        }
        let cols = [format.valence, format.arousal, format.dominance];
        let parsed: Vec<Option<f64>> = cols.iter().map(|&c| parse_score(fields[c])).collect();
        if parsed.iter().any(Option::is_none) {
            if is_first && parsed.iter().all(Option::is_none) {
                continue; // header
            }
            return Err(Error::malformed(lineno, "non-numeric score"));
        }
        let term = Term::new(fields[format.term])
            .map_err(|_| Error::malformed(lineno, format!("invalid term {:?}", fields[format.term])))?;
        let scores = [parsed[0].unwrap(), parsed[1].unwrap(), parsed[2].unwrap()];
        if !scores.iter().all(|s| (0.0..=1.0).contains(s)) {
            return Err(Error::ScoreOutOfRange(term.to_string()));
        }
        if seen.insert(term.as_str().to_owned(), ()).is_some() {
            return Err(Error::DuplicateTerm(term.to_string()));
        }
        entries.push(RawEntry { term, scores });
    }
    Ok(RawLexicon { entries })
}

fn parse_score(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Lexicon shifted to `[-1/2, +1/2]`, one row per term (valence, arousal,
/// dominance).
#[derive(Debug, Clone)]
pub struct CenteredLexicon {
    terms: Vec<Term>,
    scores: Vec<[f64; 3]>,
    index: HashMap<String, usize>,
}

/// Subtracts the design mean 1/2 from every score. The empirical column means
/// are deliberately not used.
pub fn center(raw: &RawLexicon) -> CenteredLexicon {
    let terms: Vec<Term> = raw.entries.iter().map(|e| e.term.clone()).collect();
    let scores = raw.entries.iter().map(|e| e.scores.map(|s| s - DESIGN_MEAN)).collect();
    CenteredLexicon::from_parts(terms, scores)
}

impl CenteredLexicon {
    pub(crate) fn from_parts(terms: Vec<Term>, scores: Vec<[f64; 3]>) -> Self {
        debug_assert_eq!(terms.len(), scores.len());
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str().to_owned(), i))
            .collect();
        CenteredLexicon { terms, scores, index }
    }

    /// Builds a centered lexicon directly from already centered rows.
    pub fn from_centered(rows: Vec<(Term, [f64; 3])>) -> Result<Self> {
        let mut terms = Vec::with_capacity(rows.len());
        let mut scores = Vec::with_capacity(rows.len());
        let mut seen = HashMap::new();
        for (t, s) in rows {
            if !s.iter().all(|x| (-0.5..=0.5).contains(x)) {
                return Err(Error::ScoreOutOfRange(t.to_string()));
            }
            if seen.insert(t.as_str().to_owned(), ()).is_some() {
                return Err(Error::DuplicateTerm(t.to_string()));
            }
            terms.push(t);
            scores.push(s);
        }
        Ok(CenteredLexicon::from_parts(terms, scores))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn scores(&self) -> &[[f64; 3]] {
        &self.scores
    }

    pub fn row(&self, i: usize) -> [f64; 3] {
        self.scores[i]
    }

    /// Exact lookup after lower-casing.
    pub fn lookup(&self, term: &str) -> Option<usize> {
        lookup_in(&self.index, term)
    }

    /// Reverses [`center`].
    pub fn uncenter(&self) -> RawLexicon {
        let entries = self
            .terms
            .iter()
            .zip(&self.scores)
            .map(|(t, s)| RawEntry {
                term: t.clone(),
                scores: s.map(|x| x + DESIGN_MEAN),
            })
            .collect();
        RawLexicon { entries }
    }
}

pub(crate) fn lookup_in(index: &HashMap<String, usize>, term: &str) -> Option<usize> {
    match index.get(term) {
        Some(&i) => Some(i),
        None => index.get(&term.to_lowercase()).copied(),
    }
}
