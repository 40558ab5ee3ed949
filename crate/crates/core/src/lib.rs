//! Essential-meaning analytics over VAD-scored lexicons.
//!
//! The crate turns a lexicon of valence, arousal and dominance ratings into
//! two orthogonal frameworks (goodness-energy-structure and
//! power-danger-structure), answers nearest-meaning queries, builds annotated
//! 2D histograms, measures token-weighted bias in corpora and tracks
//! weighted-average scores over time.

pub mod corpus;
pub mod error;
pub mod frameworks;
pub mod lexicon;
pub mod linalg;
pub mod ousiogram;
pub mod ousiometer;
pub mod ousionyms;
pub mod stats;

pub use error::{Error, ErrorClass, Result};
pub use frameworks::{
    correlations, derive_ges, rotate_to_pds, score_lexicon, transform, vad_variance_shares, CorrelationReport,
    DerivedLexicon, Dimension, FrameworkBasis, FrameworkTag, ScoreTriple,
};
pub use lexicon::{center, parse_lexicon, CenteredLexicon, LexiconFormat, RawEntry, RawLexicon, Term};
pub use ousionyms::{antousionyms, nearest_to_point, synousionyms, NeighborList};

use std::path::Path;

/// Reads, centres and derives everything from a lexicon file in one go.
pub fn derive_from_path(path: impl AsRef<Path>) -> Result<Derivation> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let raw = parse_lexicon(std::io::BufReader::new(file), LexiconFormat::default())?;
    Derivation::from_raw(&raw)
}

/// The products of the derivation pipeline.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub centered: CenteredLexicon,
    pub correlations: CorrelationReport,
    pub vad_variance_shares: [f64; 3],
    pub ges: FrameworkBasis,
    pub pds: FrameworkBasis,
    pub scores: DerivedLexicon,
}

impl Derivation {
    pub fn from_raw(raw: &RawLexicon) -> Result<Self> {
        let centered = center(raw);
        let correlations = correlations(&centered)?;
        let ges = derive_ges(&centered)?;
        let pds = rotate_to_pds(&ges)?;
        let scores = score_lexicon(&centered, &ges, &pds)?;
        Ok(Derivation {
            vad_variance_shares: vad_variance_shares(&centered),
            centered,
            correlations,
            ges,
            pds,
            scores,
        })
    }
}
