//! On-disk cache of a derivation.
//!
//! `lexicon.tsv` holds the raw scores, `ges.json` and `pds.json` the bases,
//! and `scores.tsv` the nine-column export for outside use. Loading rebuilds
//! the scores from the first three files only.

use std::path::Path;

use ousia::{
    center, parse_lexicon, score_lexicon, Derivation, DerivedLexicon, Error, FrameworkBasis, LexiconFormat, Result,
};

const LEXICON: &str = "lexicon.tsv";
const GES: &str = "ges.json";
const PDS: &str = "pds.json";
const SCORES: &str = "scores.tsv";
const REPORT: &str = "report.txt";

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Error::io(path, e))
}

fn read(dir: &Path, name: &str) -> Result<String> {
    let path = dir.join(name);
    std::fs::read_to_string(&path).map_err(|e| Error::io(path, e))
}

pub fn exists(dir: &Path) -> bool {
    dir.join(LEXICON).is_file() && dir.join(GES).is_file() && dir.join(PDS).is_file()
}

pub fn store(dir: &Path, d: &Derivation, report: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(dir, LEXICON, &d.centered.uncenter().to_tsv())?;
    write(dir, GES, &d.ges.to_json())?;
    write(dir, PDS, &d.pds.to_json())?;
    write(dir, SCORES, &d.scores.to_tsv())?;
    write(dir, REPORT, report)
}

pub fn load(dir: &Path) -> Result<DerivedLexicon> {
    let raw = parse_lexicon(read(dir, LEXICON)?.as_bytes(), LexiconFormat::default())?;
    let ges = FrameworkBasis::from_json(&read(dir, GES)?)?;
    let pds = FrameworkBasis::from_json(&read(dir, PDS)?)?;
    score_lexicon(&center(&raw), &ges, &pds)
}
