//! The three ousiometric frameworks and the transforms between them.
//!
//! * VAD: valence, arousal, dominance (the lexicon's own scoring).
//! * GES: goodness, energy, structure. The orthonormal basis of the score
//!   matrix's left singular vectors, obtained here from the 3×3 second-moment
//!   matrix about the origin.
//! * PDS: power, danger, structure. GES with the goodness-energy plane rotated
//!   clockwise by π/4.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{lookup_in, CenteredLexicon, Term};
use crate::linalg::{self, Mat3};

/// Relative threshold on σ3/σ1 below which the score matrix counts as rank
/// deficient.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FrameworkTag {
    #[serde(rename = "VAD")]
    Vad,
    #[serde(rename = "GES")]
    Ges,
    #[serde(rename = "PDS")]
    Pds,
}

impl FrameworkTag {
    pub const ALL: [FrameworkTag; 3] = [FrameworkTag::Vad, FrameworkTag::Ges, FrameworkTag::Pds];

    pub fn dimensions(self) -> [Dimension; 3] {
        use Dimension::*;
        match self {
            FrameworkTag::Vad => [Valence, Arousal, Dominance],
            FrameworkTag::Ges => [Goodness, Energy, Structure],
            FrameworkTag::Pds => [Power, Danger, StructurePds],
        }
    }
}

impl fmt::Display for FrameworkTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameworkTag::Vad => "VAD",
            FrameworkTag::Ges => "GES",
            FrameworkTag::Pds => "PDS",
        })
    }
}

impl FromStr for FrameworkTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vad" => Ok(FrameworkTag::Vad),
            "ges" => Ok(FrameworkTag::Ges),
            "pds" => Ok(FrameworkTag::Pds),
            _ => Err(Error::InvalidArgument(format!("unknown framework {s:?}"))),
        }
    }
}

/// One of the nine named score columns.
///
/// Dominance and danger share the letter D in the literature, as do potency
/// and power; the column names here are unambiguous, and the PDS copy of
/// structure is `structure_pds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Valence,
    Arousal,
    Dominance,
    Goodness,
    Energy,
    Structure,
    Power,
    Danger,
    StructurePds,
}

impl Dimension {
    pub const ALL: [Dimension; 9] = [
        Dimension::Valence,
        Dimension::Arousal,
        Dimension::Dominance,
        Dimension::Goodness,
        Dimension::Energy,
        Dimension::Structure,
        Dimension::Power,
        Dimension::Danger,
        Dimension::StructurePds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Valence => "valence",
            Dimension::Arousal => "arousal",
            Dimension::Dominance => "dominance",
            Dimension::Goodness => "goodness",
            Dimension::Energy => "energy",
            Dimension::Structure => "structure",
            Dimension::Power => "power",
            Dimension::Danger => "danger",
            Dimension::StructurePds => "structure_pds",
        }
    }

    pub fn framework(self) -> FrameworkTag {
        match self {
            Dimension::Valence | Dimension::Arousal | Dimension::Dominance => FrameworkTag::Vad,
            Dimension::Goodness | Dimension::Energy | Dimension::Structure => FrameworkTag::Ges,
            _ => FrameworkTag::Pds,
        }
    }

    /// Position within its framework's triple.
    pub fn component(self) -> usize {
        (self as usize) % 3
    }

    /// Adjectives for the low and high ends of the axis.
    pub fn endpoints(self) -> (&'static str, &'static str) {
        match self {
            Dimension::Valence => ("negative", "positive"),
            Dimension::Arousal => ("calm", "excited"),
            Dimension::Dominance => ("submissive", "dominant"),
            Dimension::Goodness => ("bad", "good"),
            Dimension::Energy => ("low-energy", "high-energy"),
            Dimension::Structure | Dimension::StructurePds => ("structured", "unstructured"),
            Dimension::Power => ("weak", "powerful"),
            Dimension::Danger => ("safe", "dangerous"),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Dimension::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown dimension {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub framework: FrameworkTag,
    pub values: [f64; 3],
}

impl ScoreTriple {
    pub fn new(framework: FrameworkTag, values: [f64; 3]) -> Self {
        ScoreTriple { framework, values }
    }

    pub fn vad(values: [f64; 3]) -> Self {
        ScoreTriple::new(FrameworkTag::Vad, values)
    }

    pub fn negated(&self) -> Self {
        ScoreTriple::new(self.framework, self.values.map(|x| -x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub r_va: f64,
    pub r_ad: f64,
    pub r_vd: f64,
    pub n: usize,
}

/// Pearson correlations between the VAD columns, about the empirical means.
pub fn correlations(lexicon: &CenteredLexicon) -> Result<CorrelationReport> {
    let rows = lexicon.scores();
    let n = rows.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let mut mean = [0.0; 3];
    for r in rows {
        for k in 0..3 {
            mean[k] += r[k];
        }
    }
    mean = mean.map(|m| m / nf);
    let mut cov = [[0.0; 3]; 3];
    for r in rows {
        let d = [r[0] - mean[0], r[1] - mean[1], r[2] - mean[2]];
        for i in 0..3 {
            for j in i..3 {
                cov[i][j] += d[i] * d[j];
            }
        }
    }
    for (k, name) in ["valence", "arousal", "dominance"].into_iter().enumerate() {
        if cov[k][k] <= 0.0 {
            return Err(Error::DegenerateColumn(name));
        }
    }
    let r = |i: usize, j: usize| (cov[i][j] / (cov[i][i] * cov[j][j]).sqrt()).clamp(-1.0, 1.0);
    Ok(CorrelationReport {
        r_va: r(0, 1),
        r_ad: r(1, 2),
        r_vd: r(0, 2),
        n,
    })
}

/// Share of total squared magnitude (about the origin) carried by each VAD
/// column.
pub fn vad_variance_shares(lexicon: &CenteredLexicon) -> [f64; 3] {
    let m = linalg::second_moment(lexicon.scores());
    let total = m[0][0] + m[1][1] + m[2][2];
    [m[0][0] / total, m[1][1] / total, m[2][2] / total]
}

/// Orthogonal map from VAD coordinates into a target framework.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameworkBasis {
    pub target: FrameworkTag,
    /// Row-major; row `i` gives the VAD weights of target component `i`.
    pub matrix: Mat3,
    pub singular_values: [f64; 3],
    pub explained_variance: [f64; 3],
}

impl FrameworkBasis {
    pub fn apply(&self, vad: [f64; 3]) -> [f64; 3] {
        linalg::mat_vec(&self.matrix, vad)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("basis serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let basis: FrameworkBasis = serde_json::from_str(text)?;
        if basis.target == FrameworkTag::Vad {
            return Err(Error::InvalidArgument("basis target must be GES or PDS".into()));
        }
        Ok(basis)
    }

    /// Largest absolute deviation of `M·Mᵀ` from the identity.
    pub fn orthogonality_error(&self) -> f64 {
        let p = linalg::mat_mul(&self.matrix, &linalg::transpose(&self.matrix));
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((p[i][j] - linalg::IDENTITY[i][j]).abs());
            }
        }
        worst
    }
}

/// Derives the goodness-energy-structure basis from a centered lexicon.
///
/// Rows are the eigenvectors of `AᵀA` (equivalently the left singular
/// vectors of the 3×N score matrix) by descending singular value. Signs are
/// fixed so that goodness has a positive valence weight, energy a positive
/// arousal weight and structure a negative dominance weight.
pub fn derive_ges(lexicon: &CenteredLexicon) -> Result<FrameworkBasis> {
    let n = lexicon.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let moment = linalg::second_moment(lexicon.scores());
    let (_, mut rows) = linalg::symmetric_eigen(&moment);
    // ‖A·v‖ from the data: taking √λ would square the conditioning and hide
    // rank deficiency below ~1e-8
    let singular_values = rows.map(|v| {
        lexicon
            .scores()
            .iter()
            .map(|x| (v[0] * x[0] + v[1] * x[1] + v[2] * x[2]).powi(2))
            .sum::<f64>()
            .sqrt()
    });
    if singular_values[0] == 0.0 || singular_values[2] < RANK_TOLERANCE * singular_values[0] {
        let ratio = if singular_values[0] == 0.0 {
            0.0
        } else {
            singular_values[2] / singular_values[0]
        };
        return Err(Error::RankDeficient { ratio });
    }
    let wanted_sign = [1.0, 1.0, -1.0];
    for (k, row) in rows.iter_mut().enumerate() {
        let pivot = if row[k] != 0.0 {
            row[k]
        } else {
            // entry on the convention axis vanishes; orient by the largest weight
            *row.iter().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap()
        };
        if pivot.signum() != wanted_sign[k] {
            *row = row.map(|x| -x);
        }
    }
    let total: f64 = singular_values.iter().map(|s| s * s).sum();
    let explained_variance = singular_values.map(|s| s * s / total);
    Ok(FrameworkBasis {
        target: FrameworkTag::Ges,
        matrix: rows,
        singular_values,
        explained_variance,
    })
}

/// Clockwise π/4 rotation of the goodness-energy plane:
/// power = (G + E)/√2, danger = (E − G)/√2, structure unchanged.
pub const GE_TO_PD: Mat3 = [
    [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0],
    [-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0],
    [0.0, 0.0, 1.0],
];

pub fn rotate_to_pds(ges: &FrameworkBasis) -> Result<FrameworkBasis> {
    if ges.target != FrameworkTag::Ges {
        return Err(Error::WrongFramework {
            expected: FrameworkTag::Ges,
            found: ges.target,
        });
    }
    let matrix = linalg::mat_mul(&GE_TO_PD, &ges.matrix);
    let [s1, s2, s3] = ges.singular_values;
    let in_plane = ((s1 * s1 + s2 * s2) / 2.0).sqrt();
    let [e1, e2, e3] = ges.explained_variance;
    let shared = (e1 + e2) / 2.0;
    Ok(FrameworkBasis {
        target: FrameworkTag::Pds,
        matrix,
        singular_values: [in_plane, in_plane, s3],
        explained_variance: [shared, shared, e3],
    })
}

pub fn transform(triple: ScoreTriple, basis: &FrameworkBasis) -> Result<ScoreTriple> {
    if triple.framework != FrameworkTag::Vad {
        return Err(Error::WrongFramework {
            expected: FrameworkTag::Vad,
            found: triple.framework,
        });
    }
    Ok(ScoreTriple::new(basis.target, basis.apply(triple.values)))
}

/// Every term's coordinates in all three frameworks.
#[derive(Debug, Clone)]
pub struct DerivedLexicon {
    terms: Vec<Term>,
    vad: Vec<[f64; 3]>,
    ges: Vec<[f64; 3]>,
    pds: Vec<[f64; 3]>,
    index: HashMap<String, usize>,
}

pub const DERIVED_HEADER: &str =
    "term\tvalence\tarousal\tdominance\tgoodness\tenergy\tstructure\tpower\tdanger\tstructure_pds";

pub fn score_lexicon(lexicon: &CenteredLexicon, ges: &FrameworkBasis, pds: &FrameworkBasis) -> Result<DerivedLexicon> {
    for (basis, want) in [(ges, FrameworkTag::Ges), (pds, FrameworkTag::Pds)] {
        if basis.target != want {
            return Err(Error::WrongFramework {
                expected: want,
                found: basis.target,
            });
        }
    }
    let vad = lexicon.scores().to_vec();
    let ges_rows = vad.iter().map(|r| ges.apply(*r)).collect();
    let pds_rows = vad.iter().map(|r| pds.apply(*r)).collect();
    Ok(DerivedLexicon::from_columns(
        lexicon.terms().to_vec(),
        vad,
        ges_rows,
        pds_rows,
    ))
}

impl DerivedLexicon {
    fn from_columns(terms: Vec<Term>, vad: Vec<[f64; 3]>, ges: Vec<[f64; 3]>, pds: Vec<[f64; 3]>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str().to_owned(), i))
            .collect();
        DerivedLexicon {
            terms,
            vad,
            ges,
            pds,
            index,
        }
    }

    /// Builds a table from explicit nine-column rows (VAD, GES, PDS).
    pub fn from_rows(rows: Vec<(Term, [f64; 9])>) -> Result<Self> {
        let mut seen = HashMap::new();
        let (mut terms, mut vad, mut ges, mut pds) = (vec![], vec![], vec![], vec![]);
        for (t, r) in rows {
            if !r.iter().all(|x| x.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite score for {t}")));
            }
            if seen.insert(t.as_str().to_owned(), ()).is_some() {
                return Err(Error::DuplicateTerm(t.to_string()));
            }
            terms.push(t);
            vad.push([r[0], r[1], r[2]]);
            ges.push([r[3], r[4], r[5]]);
            pds.push([r[6], r[7], r[8]]);
        }
        Ok(DerivedLexicon::from_columns(terms, vad, ges, pds))
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

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn lookup(&self, term: &str) -> Option<usize> {
        lookup_in(&self.index, term)
    }

    pub fn coords(&self, framework: FrameworkTag) -> &[[f64; 3]] {
        match framework {
            FrameworkTag::Vad => &self.vad,
            FrameworkTag::Ges => &self.ges,
            FrameworkTag::Pds => &self.pds,
        }
    }

    pub fn triple(&self, i: usize, framework: FrameworkTag) -> ScoreTriple {
        ScoreTriple::new(framework, self.coords(framework)[i])
    }

    pub fn value(&self, i: usize, dim: Dimension) -> f64 {
        self.coords(dim.framework())[i][dim.component()]
    }

    /// All nine scores of row `i` in column order.
    pub fn row(&self, i: usize) -> [f64; 9] {
        let (v, g, p) = (self.vad[i], self.ges[i], self.pds[i]);
        [v[0], v[1], v[2], g[0], g[1], g[2], p[0], p[1], p[2]]
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 96);
        out.push_str(DERIVED_HEADER);
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(self.terms[i].as_str());
            for x in self.row(i) {
                let _ = write!(out, "\t{x:.6}");
            }
            out.push('\n');
        }
        out
    }

    /// Reads the ten-column export written by [`DerivedLexicon::to_tsv`].
    pub fn parse_tsv<R: BufRead>(source: R) -> Result<Self> {
        let mut rows = Vec::new();
        let mut first = true;
        for (idx, line) in source.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::malformed(lineno, e.to_string()))?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                continue;
            }
            if std::mem::take(&mut first) && line.starts_with("term\t") {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 10 {
                return Err(Error::malformed(
                    lineno,
                    format!("expected 10 fields, found {}", fields.len()),
                ));
            }
            let term =
                Term::new(fields[0]).map_err(|_| Error::malformed(lineno, format!("invalid term {:?}", fields[0])))?;
            let mut r = [0.0; 9];
            for (k, f) in fields[1..].iter().enumerate() {
                r[k] = f
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::malformed(lineno, "non-numeric score"))?;
            }
            rows.push((term, r));
        }
        DerivedLexicon::from_rows(rows)
    }
}
