//! Least squares on log-log scale and a few robust summaries.

use serde::Serialize;

use crate::error::{Error, Result};

/// Result of regressing `ln stat` on `ln n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub stderr: f64,
    pub r2: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Ordinary least squares of `ln y` against `ln x`.
pub fn exponent_fit(points: &[(f64, f64)]) -> Result<Fit> {
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::InvalidParameter(format!("log-log fit needs positive values, got ({x}, {y})")));
    }
    let k = points.len();
    if k < 3 {
        return Err(Error::Degenerate { need: 3, got: k });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate { need: 2, got: 1 });
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (ssr / (k - 2) as f64 / sxx).sqrt();
    let r2 = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(Fit { slope, stderr, r2, intercept, points: k })
}

/// Drops the two smallest `n` when at least three points remain.
pub fn without_transient(mut points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    if points.len() >= 5 {
        points.drain(..2);
    }
    points
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    Some(if k % 2 == 1 { v[k / 2] } else { 0.5 * (v[k / 2 - 1] + v[k / 2]) })
}

/// Median of integer data read as a histogram with unit-width bins: the
/// median class `m` is interpolated linearly inside `[m - 1/2, m + 1/2]`.
/// Unlike the plain median this moves continuously with the law, which keeps
/// log-log fits of small distances from stepping.
pub fn grouped_median(values: &[u32]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let half = v.len() as f64 / 2.0;
    let m = v[(v.len() - 1) / 2];
    let below = v.partition_point(|&x| x < m) as f64;
    let at = v.partition_point(|&x| x <= m) as f64 - below;
    Some(m as f64 - 0.5 + (half - below) / at)
}

/// Mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> Option<(f64, f64)> {
    let k = values.len();
    if k == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return Some((mean, f64::NAN));
    }
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1) as f64;
    Some((mean, (var / k as f64).sqrt()))
}

/// Log-log slope of the empirical survival function over the largest
/// `fraction` of the positive values.
pub fn tail_slope(values: &[f64], fraction: f64) -> Result<Fit> {
    let mut v: Vec<f64> = values.iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    let start = ((1.0 - fraction.clamp(0.0, 1.0)) * k as f64).floor() as usize;
    // survival just below each order statistic; ties keep the first rank
    let mut points = Vec::new();
    let mut i = start;
    while i < k {
        let x = v[i];
        points.push((x, (k - i) as f64 / k as f64));
        while i < k && v[i] == x {
            i += 1;
        }
    }
    exponent_fit(&points)
}
