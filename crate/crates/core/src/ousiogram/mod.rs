//! Annotated 2D histograms ("ousiograms") over two score dimensions.
//!
//! Bins are half-open squares on a lattice anchored at the origin, so the
//! axes always fall on bin edges. A point `(x, y)` lands in bin
//! `(floor(x / w), floor(y / w))`.

mod annotate;
mod render;

use serde::{Deserialize, Serialize};

pub use annotate::{axis_annotations, convex_hull, hull_annotations, DIRECTIONS};
pub use render::{render, render_json, render_svg, RenderFormat};

use crate::corpus::LensedDistribution;
use crate::error::{Error, Result};
use crate::frameworks::{DerivedLexicon, Dimension, FrameworkTag};
use crate::lexicon::Term;
use crate::linalg::symmetric_eigen2;
use crate::stats::weighted_summary;

pub const DEFAULT_BIN_WIDTH: f64 = 1.0 / 30.0;

/// A point in the plane with a non-negative weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedPoint {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

impl WeightedPoint {
    pub fn new(x: f64, y: f64, weight: f64) -> Self {
        WeightedPoint { x, y, weight }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub term: Term,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2D {
    pub dim_x: String,
    pub dim_y: String,
    pub bin_width: f64,
    /// Lower-left corner of bin `(0, 0)`.
    pub origin: (f64, f64),
    /// Row-major masses, `counts[row][col]` with rows running along y.
    pub counts: Vec<Vec<f64>>,
}

impl Histogram2D {
    pub fn nx(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    pub fn ny(&self) -> usize {
        self.counts.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.counts.iter().flatten().sum()
    }

    pub fn max_mass(&self) -> f64 {
        self.counts.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Grid cell `(col, row)` holding `(x, y)`, if it lies inside the grid.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let col = lattice_index(x, self.bin_width) - (self.origin.0 / self.bin_width).round() as i64;
        let row = lattice_index(y, self.bin_width) - (self.origin.1 / self.bin_width).round() as i64;
        (col >= 0 && row >= 0 && (col as usize) < self.nx() && (row as usize) < self.ny())
            .then_some((col as usize, row as usize))
    }

    /// Lower-left corner of the heaviest bin (first in row-major order on ties).
    pub fn max_bin(&self) -> Option<(f64, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (row, line) in self.counts.iter().enumerate() {
            for (col, &m) in line.iter().enumerate() {
                if best.is_none_or(|b| m > b.2) {
                    best = Some((col, row, m));
                }
            }
        }
        best.map(|(c, r, _)| {
            (
                self.origin.0 + c as f64 * self.bin_width,
                self.origin.1 + r as f64 * self.bin_width,
            )
        })
    }

    pub fn with_dims(mut self, x: &str, y: &str) -> Self {
        self.dim_x = x.to_owned();
        self.dim_y = y.to_owned();
        self
    }
}

fn lattice_index(v: f64, width: f64) -> i64 {
    (v / width).floor() as i64
}

fn check_points(points: &[WeightedPoint]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    for p in points {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        if !(p.weight.is_finite() && p.weight >= 0.0) {
            return Err(Error::InvalidArgument(format!("invalid weight {}", p.weight)));
        }
    }
    Ok(())
}

fn check_width(bin_width: f64) -> Result<()> {
    if bin_width.is_finite() && bin_width > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "bin width must be positive, got {bin_width}"
        )))
    }
}

pub fn build_histogram(points: &[WeightedPoint], bin_width: f64) -> Result<Histogram2D> {
    check_width(bin_width)?;
    check_points(points)?;
    let (mut cx0, mut cx1, mut cy0, mut cy1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for p in points {
        let (cx, cy) = (lattice_index(p.x, bin_width), lattice_index(p.y, bin_width));
        cx0 = cx0.min(cx);
        cx1 = cx1.max(cx);
        cy0 = cy0.min(cy);
        cy1 = cy1.max(cy);
    }
    let nx = (cx1 - cx0 + 1) as usize;
    let ny = (cy1 - cy0 + 1) as usize;
    let mut counts = vec![vec![0.0; nx]; ny];
    for p in points {
        let col = (lattice_index(p.x, bin_width) - cx0) as usize;
        let row = (lattice_index(p.y, bin_width) - cy0) as usize;
        counts[row][col] += p.weight;
    }
    Ok(Histogram2D {
        dim_x: "x".into(),
        dim_y: "y".into(),
        bin_width,
        origin: (cx0 as f64 * bin_width, cy0 as f64 * bin_width),
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginal {
    pub axis: String,
    /// `(bin centre, mass)` over the same lattice as the histogram.
    pub bins: Vec<(f64, f64)>,
    pub median: f64,
    pub weighted_mean: f64,
    pub weighted_std: f64,
}

pub fn marginal(points: &[WeightedPoint], axis: Axis, bin_width: f64) -> Result<Marginal> {
    check_width(bin_width)?;
    check_points(points)?;
    let coord = |p: &WeightedPoint| match axis {
        Axis::X => p.x,
        Axis::Y => p.y,
    };
    let summary = weighted_summary(points.iter().map(|p| (coord(p), p.weight)))?;
    let lo = points
        .iter()
        .map(|p| lattice_index(coord(p), bin_width))
        .min()
        .unwrap_or(0);
    let hi = points
        .iter()
        .map(|p| lattice_index(coord(p), bin_width))
        .max()
        .unwrap_or(0);
    let mut bins: Vec<(f64, f64)> = (lo..=hi).map(|k| ((k as f64 + 0.5) * bin_width, 0.0)).collect();
    for p in points {
        bins[(lattice_index(coord(p), bin_width) - lo) as usize].1 += p.weight;
    }
    Ok(Marginal {
        axis: match axis {
            Axis::X => "x".into(),
            Axis::Y => "y".into(),
        },
        bins,
        median: summary.median,
        weighted_mean: summary.mean,
        weighted_std: summary.std,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSpec {
    pub center: (f64, f64),
    /// `(major, minor)` root-mean-square extents along the principal axes.
    pub semi_axes: (f64, f64),
    /// Direction of the major axis from +x, in `[0, π)`.
    pub angle: f64,
}

/// Principal axes of the weighted in-plane second moment about the origin.
///
/// Rank-one data (all points on a line through the origin) is accepted and
/// gives a minor axis of zero.
pub fn svd_ellipse(points: &[WeightedPoint]) -> Result<EllipseSpec> {
    check_points(points)?;
    let live: Vec<&WeightedPoint> = points.iter().filter(|p| p.weight > 0.0).collect();
    let distinct = live.iter().any(|p| p.x != live[0].x || p.y != live[0].y);
    if live.len() < 2 || !distinct {
        return Err(Error::Degenerate("need at least two distinct weighted points".into()));
    }
    let total: f64 = live.iter().map(|p| p.weight).sum();
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in &live {
        sxx += p.weight * p.x * p.x;
        sxy += p.weight * p.x * p.y;
        syy += p.weight * p.y * p.y;
    }
    let (sxx, sxy, syy) = (sxx / total, sxy / total, syy / total);
    if sxx + syy <= 0.0 {
        return Err(Error::Degenerate("second moment vanishes".into()));
    }
    let (major, minor, angle) = symmetric_eigen2(sxx, sxy, syy);
    Ok(EllipseSpec {
        center: (0.0, 0.0),
        semi_axes: (major.max(0.0).sqrt(), minor.max(0.0).sqrt()),
        angle,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAnnotation {
    pub term: Term,
    /// Midpoint of the hull arc this label belongs to.
    pub anchor: (f64, f64),
    pub position: (f64, f64),
    pub normal: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InternalAnnotation {
    pub term: Term,
    /// Point on the ray the term was matched to.
    pub anchor: (f64, f64),
    pub position: (f64, f64),
    /// 0 = +x, counting anticlockwise in steps of 45°.
    pub direction: u8,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnnotationSet {
    pub boundary: Vec<BoundaryAnnotation>,
    pub internal: Vec<InternalAnnotation>,
}

/// Endpoint adjectives for each axis, negative end first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisLabels {
    pub x: (String, String),
    pub y: (String, String),
}

impl AxisLabels {
    pub fn for_dims(x: Dimension, y: Dimension) -> Self {
        let own = |(a, b): (&str, &str)| (a.to_owned(), b.to_owned());
        AxisLabels {
            x: own(x.endpoints()),
            y: own(y.endpoints()),
        }
    }

    /// Compass label for direction `k` (0 = +x, anticlockwise by 45°).
    pub fn direction_label(&self, k: u8) -> String {
        let (dx, dy) = DIRECTIONS[(k % 8) as usize];
        let pick = |pair: &(String, String), s: f64| {
            if s > 0.0 {
                Some(pair.1.clone())
            } else if s < 0.0 {
                Some(pair.0.clone())
            } else {
                None
            }
        };
        match (pick(&self.y, dy), pick(&self.x, dx)) {
            (Some(a), Some(b)) => format!("{a}-{b}"),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OusiogramSpec {
    pub histogram: Histogram2D,
    pub marginal_x: Marginal,
    pub marginal_y: Marginal,
    pub ellipse: EllipseSpec,
    pub annotations: AnnotationSet,
    pub reference_circle: Option<f64>,
    pub axis_labels: AxisLabels,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OusiogramOptions {
    pub bin_width: f64,
    /// Arc length between boundary labels.
    pub hull_spacing: f64,
    pub n_per_ray: usize,
    pub annotate: bool,
}

impl Default for OusiogramOptions {
    fn default() -> Self {
        OusiogramOptions {
            bin_width: DEFAULT_BIN_WIDTH,
            hull_spacing: 0.1,
            n_per_ray: 3,
            annotate: true,
        }
    }
}

/// Builds the full ousiogram for the plane `(x, y)`.
///
/// With `weights` each lensed term contributes its normalized frequency;
/// otherwise every lexicon term counts once.
pub fn build(
    lexicon: &DerivedLexicon,
    x: Dimension,
    y: Dimension,
    weights: Option<&LensedDistribution>,
    options: &OusiogramOptions,
) -> Result<OusiogramSpec> {
    let rows: Vec<(usize, f64)> = match weights {
        Some(lensed) => lensed.entries().iter().map(|e| (e.row, e.p)).collect(),
        None => (0..lexicon.len()).map(|i| (i, 1.0)).collect(),
    };
    let points: Vec<WeightedPoint> = rows
        .iter()
        .map(|&(i, w)| WeightedPoint::new(lexicon.value(i, x), lexicon.value(i, y), w))
        .collect();
    let histogram = build_histogram(&points, options.bin_width)?.with_dims(x.name(), y.name());
    let mut marginal_x = marginal(&points, Axis::X, options.bin_width)?;
    marginal_x.axis = x.name().to_owned();
    let mut marginal_y = marginal(&points, Axis::Y, options.bin_width)?;
    marginal_y.axis = y.name().to_owned();
    let ellipse = svd_ellipse(&points)?;

    let mut annotations = AnnotationSet::default();
    if options.annotate {
        let labeled: Vec<LabeledPoint> = rows
            .iter()
            .filter(|&&(_, w)| w > 0.0)
            .map(|&(i, _)| LabeledPoint {
                term: lexicon.term(i).clone(),
                x: lexicon.value(i, x),
                y: lexicon.value(i, y),
            })
            .collect();
        let mut used = std::collections::HashSet::new();
        annotations.boundary = annotate::hull_with(&labeled, options.hull_spacing, &mut used)?;
        annotations.internal = annotate::axis_with(&labeled, options.n_per_ray, &mut used);
    }

    let pds_plane = x.framework() == FrameworkTag::Pds && y.framework() == FrameworkTag::Pds;
    let reference_circle = pds_plane.then(|| {
        let (a, b) = ellipse.semi_axes;
        ((a * a + b * b) / 2.0).sqrt()
    });
    Ok(OusiogramSpec {
        histogram,
        marginal_x,
        marginal_y,
        ellipse,
        annotations,
        reference_circle,
        axis_labels: AxisLabels::for_dims(x, y),
    })
}
