//! Weighted summary statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSummary {
    pub median: f64,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub total_weight: f64,
}

/// Median, mean and population standard deviation of `(value, weight)` pairs.
///
/// The median is the smallest value at which the cumulative weight reaches
/// half of the total. Zero-weight pairs are ignored.
pub fn weighted_summary<I>(pairs: I) -> Result<WeightedSummary>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut data: Vec<(f64, f64)> = pairs.into_iter().filter(|&(_, w)| w > 0.0).collect();
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    data.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = data.iter().map(|p| p.1).sum();
    let mean = data.iter().map(|(x, w)| x * w).sum::<f64>() / total;
    let var = data.iter().map(|(x, w)| w * (x - mean) * (x - mean)).sum::<f64>() / total;
    // relative slack keeps exact ties stable under rescaling of the weights
    let half = total / 2.0 * (1.0 - 1e-12);
    let mut acc = 0.0;
    let mut median = data[data.len() - 1].0;
    for &(x, w) in &data {
        acc += w;
        if acc >= half {
            median = x;
            break;
        }
    }
    Ok(WeightedSummary {
        median,
        mean,
        std: var.sqrt(),
        min: data[0].0,
        max: data[data.len() - 1].0,
        total_weight: total,
    })
}

pub fn weighted_median<I>(pairs: I) -> Result<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    weighted_summary(pairs).map(|s| s.median)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_three_points() {
        let s = weighted_summary([(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        assert_eq!(s.median, 1.0);
        assert!((s.mean - 1.0).abs() < 1e-15);
        assert!((s.std - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn median_follows_weight() {
        assert_eq!(weighted_median([(0.0, 1.0), (5.0, 3.0)]).unwrap(), 5.0);
        // exactly half reached at the first value
        assert_eq!(weighted_median([(0.0, 1.0), (5.0, 1.0)]).unwrap(), 0.0);
    }

    #[test]
    fn empty_and_zero_weight() {
        assert!(matches!(weighted_summary([]), Err(Error::EmptyInput)));
        assert!(matches!(weighted_summary([(1.0, 0.0)]), Err(Error::EmptyInput)));
    }
}
