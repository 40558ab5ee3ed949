//! Invariants over randomly generated inputs.

mod common;

use chrono::{DateTime, Duration, TimeZone, Utc};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::term;
use ousia::corpus::{apply_lens, bias_report, merge_equal_weight, ZipfDistribution};
use ousia::linalg::{mat_mul, transpose, IDENTITY};
use ousia::ousiogram::{
    build, build_histogram, convex_hull, hull_annotations, marginal, render_json, Axis, LabeledPoint, OusiogramOptions,
    OusiogramSpec, WeightedPoint,
};
use ousia::ousiometer::{build_lens, export_csv, parse_csv, score_bucket, series, smooth, TemporalCorpus};
use ousia::ousionyms::{antousionyms_in, synousionyms_in};
use ousia::{
    center, parse_lexicon, score_lexicon, CenteredLexicon, Derivation, Dimension, FrameworkBasis, FrameworkTag,
    LexiconFormat, RawEntry, RawLexicon,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn raw_from(rows: &[[f64; 3]]) -> RawLexicon {
    RawLexicon::new(
        rows.iter()
            .enumerate()
            .map(|(i, s)| RawEntry {
                term: term(&format!("w{i:04}")),
                scores: *s,
            })
            .collect(),
    )
    .unwrap()
}

fn scores_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec(
        (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(v, a, d)| [v, a, d]),
        min..max,
    )
}

fn derivation(rows: &[[f64; 3]]) -> Option<Derivation> {
    Derivation::from_raw(&raw_from(rows)).ok()
}

fn max_abs_diff(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> f64 {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| (a[i][j] - b[i][j]).abs())
        .fold(0.0, f64::max)
}

fn det(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn bases_are_orthogonal(rows in scores_strategy(4, 120)) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        for b in [&d.ges, &d.pds] {
            prop_assert!(max_abs_diff(&mat_mul(&b.matrix, &transpose(&b.matrix)), &IDENTITY) <= 1e-10);
            prop_assert!(max_abs_diff(&mat_mul(&transpose(&b.matrix), &b.matrix), &IDENTITY) <= 1e-10);
            prop_assert!((det(&b.matrix).abs() - 1.0).abs() <= 1e-10);
            prop_assert!(b.explained_variance.iter().all(|&e| e >= 0.0));
            prop_assert!((b.explained_variance.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn ges_coordinates_are_decorrelated_about_the_origin(rows in scores_strategy(4, 120)) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        let g = d.scores.coords(FrameworkTag::Ges);
        let mut m = [[0.0; 3]; 3];
        for r in g {
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += r[i] * r[j];
                }
            }
        }
        let big = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert!(m[i][j].abs() <= 1e-8 * big, "m[{}][{}] = {}", i, j, m[i][j]);
                }
            }
        }
    }

    #[test]
    fn distances_agree_across_frameworks(rows in scores_strategy(2, 60)) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        let n = d.scores.len();
        let (v, g, p) = (
            d.scores.coords(FrameworkTag::Vad),
            d.scores.coords(FrameworkTag::Ges),
            d.scores.coords(FrameworkTag::Pds),
        );
        for i in 0..n {
            for j in i + 1..n {
                let dv = dist(v[i], v[j]);
                prop_assert!((dv - dist(g[i], g[j])).abs() <= 1e-12);
                prop_assert!((dv - dist(p[i], p[j])).abs() <= 1e-12);
            }
            let ge = g[i][0].powi(2) + g[i][1].powi(2);
            let pd = p[i][0].powi(2) + p[i][1].powi(2);
            prop_assert!((ge - pd).abs() <= 1e-12);
            prop_assert_eq!(g[i][2], p[i][2]);
        }
    }

    #[test]
    fn neighbours_do_not_depend_on_framework(rows in scores_strategy(10, 80), q in 0usize..10, k in 1usize..8) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        let t = d.scores.term(q).as_str();
        for f in [synousionyms_in, antousionyms_in] {
            let ges = f(&d.scores, t, k, FrameworkTag::Ges).unwrap();
            let pds = f(&d.scores, t, k, FrameworkTag::Pds).unwrap();
            let vad = f(&d.scores, t, k, FrameworkTag::Vad).unwrap();
            prop_assert_eq!(ges.terms(), pds.terms());
            prop_assert_eq!(vad.terms(), pds.terms());
            prop_assert!(pds.neighbors.windows(2).all(|w| w[0].distance <= w[1].distance));
            prop_assert!(pds.terms().iter().all(|n| *n != t));
        }
    }

    #[test]
    fn histogram_conserves_mass(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.001f64..10.0), 1..300),
        width in 0.005f64..0.7,
    ) {
        let pts: Vec<WeightedPoint> = pts.into_iter().map(|(x, y, w)| WeightedPoint::new(x, y, w)).collect();
        let total: f64 = pts.iter().map(|p| p.weight).sum();
        let h = build_histogram(&pts, width).unwrap();
        prop_assert!((h.total_mass() - total).abs() <= 1e-9);
        for axis in [Axis::X, Axis::Y] {
            let m = marginal(&pts, axis, width).unwrap();
            let mass: f64 = m.bins.iter().map(|b| b.1).sum();
            prop_assert!((mass - total).abs() <= 1e-9);
        }
    }

    #[test]
    fn median_ignores_weight_scale(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 1u32..20), 1..100),
        scale in 1e-3f64..1e3,
    ) {
        let a: Vec<WeightedPoint> = pts.iter().map(|&(x, y, w)| WeightedPoint::new(x, y, w as f64)).collect();
        let b: Vec<WeightedPoint> = pts.iter().map(|&(x, y, w)| WeightedPoint::new(x, y, w as f64 * scale)).collect();
        for axis in [Axis::X, Axis::Y] {
            let ma = marginal(&a, axis, 0.1).unwrap();
            let mb = marginal(&b, axis, 0.1).unwrap();
            prop_assert_eq!(ma.median, mb.median);
            let (lo, hi) = a.iter().map(|p| if axis == Axis::X { p.x } else { p.y })
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
            prop_assert!(lo <= ma.median && ma.median <= hi);
        }
    }

    #[test]
    fn merge_ignores_slice_scale(
        slices in prop::collection::vec(prop::collection::vec((0usize..30, 0.1f64..100.0), 1..20), 1..5),
        which in 0usize..5,
        scale in 1e-4f64..1e4,
    ) {
        let make = |s: &[(usize, f64)], c: f64| {
            ZipfDistribution::from_counts("s", s.iter().map(|&(i, n)| (format!("t{i}"), n * c))).unwrap()
        };
        let which = which % slices.len();
        let plain: Vec<_> = slices.iter().map(|s| make(s, 1.0)).collect();
        let scaled: Vec<_> = slices.iter().enumerate()
            .map(|(i, s)| make(s, if i == which { scale } else { 1.0 }))
            .collect();
        let a = merge_equal_weight(&plain).unwrap();
        let b = merge_equal_weight(&scaled).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (t, &x) in a.counts() {
            let y = b.get(t.as_str()).unwrap();
            prop_assert!((x - y).abs() <= 1e-12 * x.max(1e-300), "{}: {} vs {}", t, x, y);
        }
        prop_assert!((a.total() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn lens_is_idempotent(rows in scores_strategy(5, 40), counts in prop::collection::vec((0usize..60, 1u32..1000), 1..40)) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        let lens = build_lens(&d.scores, true);
        let dist = ZipfDistribution::from_counts("c", counts.iter().map(|&(i, c)| (format!("w{i:04}"), c as f64))).unwrap();
        let Ok(once) = apply_lens(&dist, &lens) else { return Ok(()) };
        let twice = apply_lens(&once.to_zipf("again"), &lens).unwrap();
        prop_assert_eq!(twice.len(), once.len());
        prop_assert_eq!(twice.coverage_tokens, 1.0);
        prop_assert_eq!(twice.coverage_types, 1.0);
        for (a, b) in once.entries().iter().zip(twice.entries()) {
            prop_assert_eq!(&a.term, &b.term);
            prop_assert_eq!(a.row, b.row);
            prop_assert!((a.p - b.p).abs() <= 1e-14 * a.p);
        }
        let psum: f64 = once.entries().iter().map(|e| e.p).sum();
        prop_assert!((psum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bias_report_agrees_with_ousiometer_and_ousiogram(
        rows in scores_strategy(5, 40),
        counts in prop::collection::vec((0usize..40, 1u32..1000), 1..40),
    ) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        let lens = build_lens(&d.scores, false);
        let dist = ZipfDistribution::from_counts("c", counts.iter().map(|&(i, c)| (format!("w{i:04}"), c as f64))).unwrap();
        let Ok(lensed) = apply_lens(&dist, &lens) else { return Ok(()) };
        for fw in FrameworkTag::ALL {
            let report = bias_report(&lensed, &d.scores, fw).unwrap();
            let avg = score_bucket(&dist, &lens, &d.scores, fw).values.unwrap();
            for (k, db) in report.dimensions.iter().enumerate() {
                prop_assert!((db.mean - avg[k]).abs() <= 1e-12);
                prop_assert!((db.mass_below_zero + db.mass_above_zero + db.mass_at_zero - 1.0).abs() <= 1e-12);
            }
            let [x, y, _] = fw.dimensions();
            let opts = OusiogramOptions { annotate: false, ..OusiogramOptions::default() };
            // the ellipse needs two distinct points; the medians do not depend on it
            let Ok(spec) = build(&d.scores, x, y, Some(&lensed), &opts) else { continue };
            prop_assert_eq!(spec.marginal_x.median, report.get(x).unwrap().median);
            prop_assert_eq!(spec.marginal_y.median, report.get(y).unwrap().median);
        }
    }

    #[test]
    fn bucket_scores_ignore_count_scale(
        rows in scores_strategy(5, 40),
        counts in prop::collection::vec((0usize..40, 1u32..1000), 1..40),
        scale in 1e-3f64..1e6,
    ) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        let lens = build_lens(&d.scores, true);
        let dist = ZipfDistribution::from_counts("c", counts.iter().map(|&(i, c)| (format!("w{i:04}"), c as f64))).unwrap();
        for fw in FrameworkTag::ALL {
            let a = score_bucket(&dist, &lens, &d.scores, fw);
            let b = score_bucket(&dist.scaled(scale), &lens, &d.scores, fw);
            match (a.values, b.values) {
                (Some(x), Some(y)) => {
                    for k in 0..3 {
                        prop_assert!((x[k] - y[k]).abs() <= 1e-12);
                    }
                }
                (x, y) => prop_assert_eq!(x, y),
            }
            prop_assert!((a.coverage_tokens - b.coverage_tokens).abs() <= 1e-12);
        }
    }

    #[test]
    fn basis_json_round_trips(rows in scores_strategy(4, 50)) {
        let Some(d) = derivation(&rows) else { return Ok(()) };
        for b in [&d.ges, &d.pds] {
            prop_assert_eq!(&FrameworkBasis::from_json(&b.to_json()).unwrap(), b);
        }
    }

    #[test]
    fn raw_lexicon_tsv_round_trips(rows in prop::collection::vec((0u32..=1000, 0u32..=1000, 0u32..=1000), 1..50)) {
        let rows: Vec<[f64; 3]> = rows.iter().map(|&(v, a, d)| [v as f64 / 1000.0, a as f64 / 1000.0, d as f64 / 1000.0]).collect();
        let raw = raw_from(&rows);
        let back = parse_lexicon(raw.to_tsv().as_bytes(), LexiconFormat::default()).unwrap();
        prop_assert_eq!(back, raw);
    }
}

fn at(minutes: i64) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2022, 2, 24, 0, 0, 0).unwrap() + Duration::minutes(minutes)
}

fn random_corpus(rng: &mut ChaCha8Rng, n_terms: usize, buckets: usize) -> TemporalCorpus {
    let b = (0..buckets)
        .map(|i| {
            let mut z = ZipfDistribution::new(format!("b{i}"));
            if rng.gen::<f64>() > 0.1 {
                for _ in 0..rng.gen_range(1..15) {
                    let t = format!("w{:04}", rng.gen_range(0..n_terms + 5));
                    z.add(term(&t), rng.gen_range(1..50) as f64).unwrap();
                }
            }
            (at(15 * i as i64), z)
        })
        .collect();
    TemporalCorpus::new(900, b).unwrap()
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 3]> {
    (0..n).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect()
}

#[test]
fn series_are_linear_in_vad() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = derivation(&random_rows(&mut rng, 60)).unwrap();
        let corpus = random_corpus(&mut rng, 60, 96);
        let lens = build_lens(&d.scores, true);
        let out = series(&corpus, &lens, &d.scores, &FrameworkTag::ALL);
        let get = |dim: Dimension| out.iter().find(|s| s.dimension == dim).unwrap();
        for i in 0..corpus.len() {
            let pick = |dims: [Dimension; 3]| -> Option<[f64; 3]> {
                Some([
                    get(dims[0]).samples[i].value?,
                    get(dims[1]).samples[i].value?,
                    get(dims[2]).samples[i].value?,
                ])
            };
            let vad = pick(FrameworkTag::Vad.dimensions());
            let ges = pick(FrameworkTag::Ges.dimensions());
            let pds = pick(FrameworkTag::Pds.dimensions());
            let (Some(vad), Some(ges), Some(pds)) = (vad, ges, pds) else {
                assert!(vad.is_none() && ges.is_none() && pds.is_none());
                continue;
            };
            let g = d.ges.apply(vad);
            let p = d.pds.apply(vad);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let rot = [h * (ges[0] + ges[1]), h * (ges[1] - ges[0])];
            for k in 0..3 {
                assert!((ges[k] - g[k]).abs() <= 1e-12, "seed {seed}");
                assert!((pds[k] - p[k]).abs() <= 1e-12, "seed {seed}");
            }
            assert!((pds[0] - rot[0]).abs() <= 1e-12 && (pds[1] - rot[1]).abs() <= 1e-12);
        }
    }
}

/// Terms scored with an existing basis but sharing one dominance value, so
/// every bucket's dominance average is that value.
fn flat_dominance_lexicon(rng: &mut ChaCha8Rng, basis: &Derivation, c: f64) -> ousia::DerivedLexicon {
    let rows = (0..80)
        .map(|i| {
            (
                term(&format!("f{i:03}")),
                [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), c],
            )
        })
        .collect();
    let centered = CenteredLexicon::from_centered(rows).unwrap();
    score_lexicon(&centered, &basis.ges, &basis.pds).unwrap()
}

#[test]
fn flat_dominance_goodness_tracks_valence_and_arousal() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let d = derivation(&random_rows(&mut rng, 200)).unwrap();
    let c = 0.123;
    let lex = flat_dominance_lexicon(&mut rng, &d, c);
    let buckets = (0..200)
        .map(|i| {
            let mut z = ZipfDistribution::new("b");
            for _ in 0..10 {
                z.add(
                    term(&format!("f{:03}", rng.gen_range(0..80))),
                    rng.gen_range(1..30) as f64,
                )
                .unwrap();
            }
            (at(15 * i), z)
        })
        .collect();
    let corpus = TemporalCorpus::new(900, buckets).unwrap();
    let out = series(
        &corpus,
        &build_lens(&lex, false),
        &lex,
        &[FrameworkTag::Vad, FrameworkTag::Ges],
    );
    let vals = |dim: Dimension| -> Vec<f64> {
        out.iter()
            .find(|s| s.dimension == dim)
            .unwrap()
            .values()
            .into_iter()
            .map(Option::unwrap)
            .collect()
    };
    let (v, a, dom, g) = (
        vals(Dimension::Valence),
        vals(Dimension::Arousal),
        vals(Dimension::Dominance),
        vals(Dimension::Goodness),
    );
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let (mv, ma, mg) = (mean(&v), mean(&a), mean(&g));
    let m = d.ges.matrix;
    for i in 0..v.len() {
        assert!((dom[i] - c).abs() <= 1e-12);
        let want = m[0][0] * (v[i] - mv) + m[0][1] * (a[i] - ma);
        assert!(((g[i] - mg) - want).abs() <= 1e-9);
    }
}

#[test]
fn full_span_smoothing_is_the_mean_of_present_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = derivation(&random_rows(&mut rng, 60)).unwrap();
    let corpus = random_corpus(&mut rng, 60, 97);
    let out = series(&corpus, &build_lens(&d.scores, true), &d.scores, &[FrameworkTag::Pds]);
    // 97 buckets of 15 minutes: a 48-hour window reaches every sample from the middle one
    let span = 2 * 96 * 900;
    for s in &out {
        let present: Vec<f64> = s.values().into_iter().flatten().collect();
        let want = present.iter().sum::<f64>() / present.len() as f64;
        let sm = smooth(s, span).unwrap();
        assert!((sm.samples[48].value.unwrap() - want).abs() <= 1e-12);
    }
}

#[test]
fn csv_round_trips_to_six_decimals() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = derivation(&random_rows(&mut rng, 40)).unwrap();
        let corpus = random_corpus(&mut rng, 40, 50);
        let out = series(&corpus, &build_lens(&d.scores, true), &d.scores, &FrameworkTag::ALL);
        let rows = parse_csv(&export_csv(&out).unwrap()).unwrap();
        assert_eq!(rows.len(), corpus.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.timestamp, corpus.buckets()[i].0);
            for s in &out {
                let k = Dimension::ALL.iter().position(|&x| x == s.dimension).unwrap();
                match (row.values[k], s.samples[i].value) {
                    (Some(a), Some(b)) => assert!((a - b).abs() <= 5e-7 + 1e-15),
                    (a, b) => assert_eq!(a, b),
                }
            }
            assert!((row.coverage_tokens - out[0].samples[i].coverage_tokens).abs() <= 5e-7 + 1e-15);
        }
    }
}

#[test]
fn ousiogram_json_round_trips() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = derivation(&random_rows(&mut rng, 300)).unwrap();
        for (x, y) in [
            (Dimension::Power, Dimension::Danger),
            (Dimension::Valence, Dimension::Dominance),
        ] {
            let spec = build(&d.scores, x, y, None, &OusiogramOptions::default()).unwrap();
            let back = OusiogramSpec::from_json(&render_json(&spec)).unwrap();
            assert_eq!(back, spec);
        }
    }
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

#[test]
fn hull_labels_hug_the_boundary() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<LabeledPoint> = (0..1000)
            .map(|i| {
                let r = 0.5 * rng.gen::<f64>().sqrt();
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                LabeledPoint {
                    term: term(&format!("p{i}")),
                    x: r * t.cos(),
                    y: r * t.sin(),
                }
            })
            .collect();
        let hull = convex_hull(&pts.iter().map(|p| (p.x, p.y)).collect::<Vec<_>>());
        let ann = hull_annotations(&pts, 0.1).unwrap();
        assert!(ann.len() >= 30);
        for a in &ann {
            let d = (0..hull.len())
                .map(|i| segment_distance(a.position, hull[i], hull[(i + 1) % hull.len()]))
                .fold(f64::INFINITY, f64::min);
            assert!(d <= 1.0 / 30.0, "seed {seed}: {} is {d} from the hull", a.term);
        }
    }
}

/// Binary subtraction of 0.5 can drop the lowest bits of scores below 0.25,
/// so the numeric inverse is exact to one unit in the last place of 0.5 and
/// the six-decimal text form is reproduced exactly.
#[test]
fn three_decimal_scores_survive_centering() {
    let rows: Vec<[f64; 3]> = (0..=1000)
        .map(|k| {
            let dec = |k: u32| -> f64 { format!("{}.{:03}", k / 1000, k % 1000).parse().unwrap() };
            [dec(k), dec(1000 - k), dec((k * 7) % 1001)]
        })
        .collect();
    let raw = raw_from(&rows);
    let back = center(&raw).uncenter();
    for (a, b) in raw.entries().iter().zip(back.entries()) {
        assert_eq!(a.term, b.term);
        for k in 0..3 {
            assert!((a.scores[k] - b.scores[k]).abs() <= f64::EPSILON / 2.0);
        }
    }
    assert_eq!(back.to_tsv(), raw.to_tsv());
    let reparsed = parse_lexicon(back.to_tsv().as_bytes(), LexiconFormat::default()).unwrap();
    assert_eq!(reparsed, raw);
}
