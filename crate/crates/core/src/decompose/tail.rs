use serde::Serialize;

use crate::error::{Error, Result};

/// Default decay rate a tail must beat to pass.
pub const DEFAULT_RATE_MIN: f64 = 0.05;
/// Smallest sample accepted by [`tail_statistics`].
pub const MIN_TAIL_VALUES: usize = 20;

/// Log-linear fit of an empirical complementary CDF.
#[derive(Debug, Clone, Serialize)]
pub struct TailFit {
    /// `(j, fraction of values >= j)` for `j = 0..=max`.
    pub ccdf: Vec<(usize, f64)>,
    /// Number of `j` with fraction at least `5 / |S|`, the points used in the fit.
    pub eligible: usize,
    /// Least-squares slope of `ln ccdf(j)` against `j`; `None` with fewer than
    /// two eligible points.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub rate_min: f64,
    /// `slope <= -rate_min`, or trivially true when there is nothing to fit.
    pub pass: bool,
}

/// Fits `ln P(X >= j) ≈ a + slope·j` over the `j` whose ccdf is at least
/// `5/|S|` and passes when `slope <= -rate_min`.
pub fn tail_statistics(values: &[usize], rate_min: f64) -> Result<TailFit> {
    if values.len() < MIN_TAIL_VALUES {
        return Err(Error::InvalidParameter(format!(
            "tail fit needs at least {MIN_TAIL_VALUES} values, got {}",
            values.len()
        )));
    }
    let total = values.len() as f64;
    let max = *values.iter().max().expect("nonempty");
    let mut counts = vec![0usize; max + 1];
    for &v in values {
        counts[v] += 1;
    }
    let mut ccdf = Vec::with_capacity(max + 1);
    let mut at_least = values.len();
    for (j, &c) in counts.iter().enumerate() {
        ccdf.push((j, at_least as f64 / total));
        at_least -= c;
    }
    let floor = 5.0 / total;
    let pts: Vec<(f64, f64)> = ccdf
        .iter()
        .filter(|&&(_, f)| f >= floor)
        .map(|&(j, f)| (j as f64, f.ln()))
        .collect();
    let eligible = pts.len();
    let (slope, intercept) = if eligible >= 2 {
        let k = eligible as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let b = sxy / sxx;
        (Some(b), Some(my - b * mx))
    } else {
        (None, None)
    };
    let pass = slope.is_none_or(|b| b <= -rate_min);
    Ok(TailFit {
        ccdf,
        eligible,
        slope,
        intercept,
        rate_min,
        pass,
    })
}
