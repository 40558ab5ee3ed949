#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use ousia::{derive_from_path, Derivation, DerivedLexicon, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `NRC_VAD_LEXICON`, else `data/NRC-VAD-Lexicon.txt` at the workspace root.
pub fn nrc_path() -> Option<PathBuf> {
    if let Ok(p) = std::env::var("NRC_VAD_LEXICON") {
        let p = PathBuf::from(p);
        return p.is_file().then_some(p);
    }
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/NRC-VAD-Lexicon.txt");
    p.is_file().then_some(p)
}

/// The derived NRC lexicon, or `None` (with a notice) when the file is absent.
pub fn nrc() -> Option<&'static Derivation> {
    static CELL: OnceLock<Option<Derivation>> = OnceLock::new();
    let d = CELL
        .get_or_init(|| nrc_path().map(|p| derive_from_path(p).expect("NRC lexicon derives")))
        .as_ref();
    if d.is_none() {
        eprintln!("SKIP: NRC VAD lexicon not found (set NRC_VAD_LEXICON or run scripts/fetch_nrc_vad.py)");
    }
    d
}

pub fn term(t: &str) -> Term {
    Term::new(t).unwrap()
}

/// Raw VAD triples in `[0, 1]`, drawn uniformly with a mild correlation so the
/// basis is well conditioned.
pub fn random_raw(rng: &mut ChaCha8Rng, n: usize) -> Vec<(String, [f64; 3])> {
    (0..n)
        .map(|i| {
            let v: f64 = rng.gen();
            let a: f64 = rng.gen();
            let d: f64 = (0.6 * rng.gen::<f64>() + 0.4 * v).clamp(0.0, 1.0);
            (format!("w{i:05}"), [v, a, d])
        })
        .collect()
}

/// Nine-column lexicon with coordinates drawn uniformly in `[-0.5, 0.5]`.
pub fn random_derived(rng: &mut ChaCha8Rng, n: usize) -> DerivedLexicon {
    let rows = (0..n)
        .map(|i| {
            let mut r = [0.0; 9];
            for x in r.iter_mut() {
                *x = rng.gen_range(-0.5..0.5);
            }
            (term(&format!("t{i:05}")), r)
        })
        .collect();
    DerivedLexicon::from_rows(rows).unwrap()
}
