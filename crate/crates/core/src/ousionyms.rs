//! Nearest neighbours in essential-meaning space.
//!
//! Synousionyms of a term are the terms closest to it; antousionyms are the
//! terms closest to its negated point. Distances are Euclidean over all three
//! components. Since the GES and PDS maps are isometries of VAD space, the
//! framework only matters for point queries. Search is an exhaustive scan;
//! ties are broken by term text.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frameworks::{DerivedLexicon, FrameworkTag, ScoreTriple};
use crate::lexicon::Term;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Neighbor {
    pub term: Term,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Query {
    Term(Term),
    Point(ScoreTriple),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborList {
    pub query: Query,
    pub neighbors: Vec<Neighbor>,
}

impl NeighborList {
    pub fn terms(&self) -> Vec<&str> {
        self.neighbors.iter().map(|n| n.term.as_str()).collect()
    }

    /// Tab-separated listing: a `#` comment with the query's scores, a header,
    /// then `rank, term, distance` rows.
    pub fn to_tsv(&self, lexicon: &DerivedLexicon) -> String {
        let mut out = String::from("#");
        match &self.query {
            Query::Term(t) => {
                out.push_str(t.as_str());
                if let Some(i) = lexicon.lookup(t.as_str()) {
                    for x in lexicon.row(i) {
                        let _ = write!(out, "\t{x:.6}");
                    }
                }
            }
            Query::Point(p) => {
                let _ = write!(out, "{}", p.framework);
                for x in p.values {
                    let _ = write!(out, "\t{x:.6}");
                }
            }
        }
        out.push_str("\nrank\tterm\tdistance\n");
        for (rank, n) in self.neighbors.iter().enumerate() {
            let _ = writeln!(out, "{}\t{}\t{:.6}", rank + 1, n.term, n.distance);
        }
        out
    }
}

pub fn synousionyms(lexicon: &DerivedLexicon, term: &str, k: usize) -> Result<NeighborList> {
    synousionyms_in(lexicon, term, k, FrameworkTag::Pds)
}

pub fn antousionyms(lexicon: &DerivedLexicon, term: &str, k: usize) -> Result<NeighborList> {
    antousionyms_in(lexicon, term, k, FrameworkTag::Pds)
}

/// [`synousionyms`] computed in the coordinates of a chosen framework.
pub fn synousionyms_in(
    lexicon: &DerivedLexicon,
    term: &str,
    k: usize,
    framework: FrameworkTag,
) -> Result<NeighborList> {
    let (i, target) = anchor(lexicon, term, k, framework)?;
    Ok(NeighborList {
        query: Query::Term(lexicon.term(i).clone()),
        neighbors: scan(lexicon, framework, target, k, Some(i)),
    })
}

pub fn antousionyms_in(
    lexicon: &DerivedLexicon,
    term: &str,
    k: usize,
    framework: FrameworkTag,
) -> Result<NeighborList> {
    let (i, target) = anchor(lexicon, term, k, framework)?;
    Ok(NeighborList {
        query: Query::Term(lexicon.term(i).clone()),
        neighbors: scan(lexicon, framework, target.map(|x| -x), k, Some(i)),
    })
}

/// The `k` terms nearest to an arbitrary point. The point's own term, if it
/// has one, is not excluded.
pub fn nearest_to_point(lexicon: &DerivedLexicon, point: ScoreTriple, k: usize) -> NeighborList {
    NeighborList {
        query: Query::Point(point),
        neighbors: scan(lexicon, point.framework, point.values, k, None),
    }
}

fn anchor(lexicon: &DerivedLexicon, term: &str, k: usize, framework: FrameworkTag) -> Result<(usize, [f64; 3])> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let i = lexicon
        .lookup(term)
        .ok_or_else(|| Error::UnknownTerm(term.to_owned()))?;
    Ok((i, lexicon.coords(framework)[i]))
}

fn scan(
    lexicon: &DerivedLexicon,
    framework: FrameworkTag,
    target: [f64; 3],
    k: usize,
    exclude: Option<usize>,
) -> Vec<Neighbor> {
    let coords = lexicon.coords(framework);
    let mut cands: Vec<(f64, usize)> = coords
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != exclude)
        .map(|(i, c)| {
            let d2 = (c[0] - target[0]).powi(2) + (c[1] - target[1]).powi(2) + (c[2] - target[2]).powi(2);
            (d2, i)
        })
        .collect();
    let order = |a: &(f64, usize), b: &(f64, usize)| -> Ordering {
        a.0.total_cmp(&b.0)
            .then_with(|| lexicon.term(a.1).cmp(lexicon.term(b.1)))
    };
    if k < cands.len() {
        cands.select_nth_unstable_by(k, order);
        cands.truncate(k);
    }
    cands.sort_by(order);
    cands
        .into_iter()
        .map(|(d2, i)| Neighbor {
            term: lexicon.term(i).clone(),
            distance: d2.sqrt(),
        })
        .collect()
}
