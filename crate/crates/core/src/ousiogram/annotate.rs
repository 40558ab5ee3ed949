//! Word annotations: extreme words around the convex hull and words along
//! the eight compass rays from the origin.

use std::collections::HashSet;

use super::{BoundaryAnnotation, InternalAnnotation, LabeledPoint};
use crate::error::{Error, Result};

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Unit vectors for the eight rays, anticlockwise from +x.
pub const DIRECTIONS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (H, H),
    (0.0, 1.0),
    (-H, H),
    (-1.0, 0.0),
    (-H, -H),
    (0.0, -1.0),
    (H, -H),
];

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull vertices in anticlockwise order, starting from the lowest-x
/// (then lowest-y) point. Collinear boundary points are dropped.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

pub fn hull_annotations(points: &[LabeledPoint], spacing: f64) -> Result<Vec<BoundaryAnnotation>> {
    hull_with(points, spacing, &mut HashSet::new())
}

/// Splits the hull perimeter into arcs of roughly `spacing` length. Each arc
/// takes the outward normal of the edge under its midpoint and is labelled
/// with the unused term lying furthest along that normal.
pub(super) fn hull_with(
    points: &[LabeledPoint],
    spacing: f64,
    used: &mut HashSet<usize>,
) -> Result<Vec<BoundaryAnnotation>> {
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.y)).collect();
    let hull = convex_hull(&xy);
    if hull.len() < 3 {
        return Err(Error::Degenerate("points are collinear".into()));
    }
    let m = hull.len();
    let edges: Vec<((f64, f64), (f64, f64), f64)> = (0..m)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % m]);
            (a, b, (b.0 - a.0).hypot(b.1 - a.1))
        })
        .collect();
    let perimeter: f64 = edges.iter().map(|e| e.2).sum();
    let n = ((perimeter / spacing).round() as usize).max(1);
    let arc = perimeter / n as f64;

    let mut out = Vec::with_capacity(n);
    let mut edge = 0;
    let mut walked = 0.0;
    for k in 0..n {
        if used.len() >= points.len() {
            break;
        }
        let s = (k as f64 + 0.5) * arc;
        while edge + 1 < m && walked + edges[edge].2 < s {
            walked += edges[edge].2;
            edge += 1;
        }
        let (a, b, len) = edges[edge];
        let t = ((s - walked) / len).clamp(0.0, 1.0);
        let mid = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
        // anticlockwise hull: outward normal is the edge direction turned clockwise
        let normal = ((b.1 - a.1) / len, -(b.0 - a.0) / len);

        let best = (0..points.len()).filter(|i| !used.contains(i)).max_by(|&i, &j| {
            let (p, q) = (&points[i], &points[j]);
            let dp = p.x * normal.0 + p.y * normal.1;
            let dq = q.x * normal.0 + q.y * normal.1;
            let mp = (p.x - mid.0).hypot(p.y - mid.1);
            let mq = (q.x - mid.0).hypot(q.y - mid.1);
            dp.total_cmp(&dq)
                .then_with(|| mq.total_cmp(&mp))
                .then_with(|| q.term.cmp(&p.term))
        });
        if let Some(i) = best {
            used.insert(i);
            out.push(BoundaryAnnotation {
                term: points[i].term.clone(),
                anchor: mid,
                position: (points[i].x, points[i].y),
                normal,
            });
        }
    }
    Ok(out)
}

pub fn axis_annotations(points: &[LabeledPoint], n_per_ray: usize) -> Vec<InternalAnnotation> {
    axis_with(points, n_per_ray, &mut HashSet::new())
}

/// Walks each compass ray out to 90% of the data's reach in that direction,
/// labelling `n_per_ray` evenly spaced anchors with their nearest unused term.
pub(super) fn axis_with(
    points: &[LabeledPoint],
    n_per_ray: usize,
    used: &mut HashSet<usize>,
) -> Vec<InternalAnnotation> {
    let mut out = Vec::new();
    if points.is_empty() {
        return out;
    }
    for (dir, &(ux, uy)) in DIRECTIONS.iter().enumerate() {
        let extent = points.iter().map(|p| p.x * ux + p.y * uy).fold(0.0, f64::max);
        for j in 1..=n_per_ray {
            let r = 0.9 * extent * j as f64 / n_per_ray as f64;
            let anchor = (r * ux, r * uy);
            let best = (0..points.len()).filter(|i| !used.contains(i)).min_by(|&i, &j| {
                let (p, q) = (&points[i], &points[j]);
                let dp = (p.x - anchor.0).powi(2) + (p.y - anchor.1).powi(2);
                let dq = (q.x - anchor.0).powi(2) + (q.y - anchor.1).powi(2);
                dp.total_cmp(&dq).then_with(|| p.term.cmp(&q.term))
            });
            let Some(i) = best else { return out };
            used.insert(i);
            out.push(InternalAnnotation {
                term: points[i].term.clone(),
                anchor,
                position: (points[i].x, points[i].y),
                direction: dir as u8,
            });
        }
    }
    out
}
