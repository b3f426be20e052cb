//! Small descriptive and rank statistics used when comparing runs.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `(a - b) / b`, as a fraction.
pub fn percent_difference(a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok((a - b) / b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std_dev: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::InvalidInput("no values to summarize".into()));
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
    let var = if n > 1 { values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
    Ok(Summary { n, min: sorted[0], max: sorted[n - 1], mean, median, std_dev: libm::sqrt(var) })
}

/// Kruskal-Wallis rank-sum statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalWallis {
    /// Tie-corrected H.
    pub h: f64,
    pub df: usize,
    pub n: usize,
}

/// H with average ranks for ties and the usual tie correction. When every
/// observation is equal the correction vanishes and H is reported as 0.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<KruskalWallis> {
    if groups.len() < 2 || groups.iter().any(|g| g.is_empty()) {
        return Err(Error::InvalidInput("need at least two non-empty groups".into()));
    }
    let mut all: Vec<(f64, usize)> =
        groups.iter().enumerate().flat_map(|(g, vals)| vals.iter().map(move |&v| (v, g))).collect();
    if all.iter().any(|(v, _)| v.is_nan()) {
        return Err(Error::InvalidInput("NaN observation".into()));
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = all.len();
    let mut rank_sums = alloc::vec![0.0; groups.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &(_, g) in &all[i..=j] {
            rank_sums[g] += avg;
        }
        let t = (j - i + 1) as f64;
        ties += t * t * t - t;
        i = j + 1;
    }
    let nf = n as f64;
    let raw = 12.0 / (nf * (nf + 1.0))
        * groups.iter().zip(&rank_sums).map(|(g, r)| r * r / g.len() as f64).sum::<f64>()
        - 3.0 * (nf + 1.0);
    let correction = 1.0 - ties / (nf * nf * nf - nf);
    let h = if correction <= 0.0 { 0.0 } else { (raw / correction).max(0.0) };
    Ok(KruskalWallis { h, df: groups.len() - 1, n })
}
