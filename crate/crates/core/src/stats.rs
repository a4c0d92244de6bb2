//! Summary statistics for Monte Carlo runs.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Discrete, DiscreteCDF, Poisson};

/// Empirical pmf on `0..=max(values)`; empty for no values.
pub fn empirical_pmf(values: &[usize]) -> Vec<f64> {
    let Some(&max) = values.iter().max() else {
        return Vec::new();
    };
    let mut counts = vec![0usize; max + 1];
    for &v in values {
        counts[v] += 1;
    }
    counts.iter().map(|&c| c as f64 / values.len() as f64).collect()
}

/// Poisson(λ) probabilities of `0..len`.
pub fn poisson_pmf(lambda: f64, len: usize) -> Vec<f64> {
    match Poisson::new(lambda) {
        Ok(d) => (0..len as u64).map(|x| d.pmf(x)).collect(),
        // λ = 0: all mass at zero
        Err(_) => (0..len).map(|x| if x == 0 { 1.0 } else { 0.0 }).collect(),
    }
}

/// `P(X >= len)` under Poisson(λ).
fn poisson_tail(lambda: f64, len: usize) -> f64 {
    match Poisson::new(lambda) {
        Ok(d) if len > 0 => d.sf(len as u64 - 1),
        Ok(_) => 1.0,
        Err(_) => (len == 0) as u8 as f64,
    }
}

/// Total-variation distance between an empirical pmf and Poisson(λ),
/// including the Poisson mass beyond the observed support.
pub fn tv_distance_poisson(pmf: &[f64], lambda: f64) -> f64 {
    if pmf.is_empty() {
        return 0.0;
    }
    let q = poisson_pmf(lambda, pmf.len());
    let body: f64 = pmf.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum();
    0.5 * (body + poisson_tail(lambda, pmf.len()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    /// Number of bins after pooling minus one.
    pub dof: usize,
}

/// Pearson statistic against Poisson(λ). Bins from the right are merged
/// until each expected count reaches `min_expected`; the last bin is the
/// tail `X >= m`.
pub fn chi_square_poisson(values: &[usize], lambda: f64, min_expected: f64) -> ChiSquare {
    let total = values.len() as f64;
    if values.is_empty() {
        return ChiSquare {
            statistic: 0.0,
            dof: 0,
        };
    }
    let max = *values.iter().max().expect("nonempty");
    let q = poisson_pmf(lambda, max + 1);
    let mut observed = vec![0usize; max + 1];
    for &v in values {
        observed[v] += 1;
    }
    // bins [0], [1], ..., [m-1], [m, ∞)
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut tail_obs = 0.0;
    let mut tail_exp = poisson_tail(lambda, max + 1) * total;
    for x in (0..=max).rev() {
        tail_obs += observed[x] as f64;
        tail_exp += q[x] * total;
        if tail_exp >= min_expected || x == 0 {
            bins.push((tail_obs, tail_exp));
            tail_obs = 0.0;
            tail_exp = 0.0;
        }
    }
    let statistic = bins
        .iter()
        .filter(|(_, e)| *e > 0.0)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    ChiSquare {
        statistic,
        dof: bins.len().saturating_sub(1),
    }
}

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

/// Standard error of the mean (sample standard deviation over `sqrt(n)`).
pub fn std_error(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return f64::NAN;
    }
    let m = mean(x);
    let var = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64;
    (var / x.len() as f64).sqrt()
}

/// Linear-interpolated quantile, `q` in `[0, 1]`.
pub fn quantile(x: &[f64], q: f64) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (s.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    s[lo] + (s[hi] - s[lo]) * (pos - lo as f64)
}

pub fn median(x: &[f64]) -> f64 {
    quantile(x, 0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(x, y)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 && sxx > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        // a constant y is fit exactly by a flat line
        if syy == 0.0 { 1.0 } else { f64::NAN }
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}
