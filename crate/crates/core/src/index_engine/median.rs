use crate::error::{Error, Result};

/// Dollar-volume-weighted median of `(value, weight)` pairs.
///
/// Lower weighted median: the smallest value whose cumulative weight reaches
/// half the total. When the cumulative weight lands exactly on half, the result
/// is the midpoint between that value and the next distinct value carrying
/// positive weight. Zero-weight items carry no mass and are ignored.
pub fn weighted_median(values: &[(f64, f64)]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::NoData("weighted median of an empty list".into()));
    }
    let mut total = 0.0;
    for &(v, w) in values {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite value {v}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidParameter(format!("weight {w} must be finite and >= 0")));
        }
        total += w;
    }
    if total <= 0.0 {
        return Err(Error::NoData("weighted median with zero total weight".into()));
    }

    let mut sorted: Vec<(f64, f64)> = values.iter().copied().filter(|&(_, w)| w > 0.0).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

    let half = total / 2.0;
    let mut cumulative = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let value = sorted[i].0;
        while i < sorted.len() && sorted[i].0 == value {
            cumulative += sorted[i].1;
            i += 1;
        }
        if cumulative > half {
            return Ok(value);
        }
        if cumulative == half {
            return Ok(match sorted.get(i) {
                Some(&(next, _)) => (value + next) / 2.0,
                None => value,
            });
        }
    }
    // Only reachable when rounding leaves the scan a hair below half.
    Ok(sorted[sorted.len() - 1].0)
}
