//! Mann-Whitney U and descriptive summaries for ordinal (Likert) responses.
//!
//! Conventions: midranks for ties, tie-corrected normal approximation with a
//! 0.5 continuity correction, two-sided p-values. `u_x` counts the pairs in
//! which a `y` value precedes (is smaller than) an `x` value, ties worth one
//! half.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Responses of one group to one question.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrdinalSample {
    values: Vec<f64>,
    category_count: Option<u32>,
}

impl OrdinalSample {
    /// Arbitrary ordered real values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::input("sample must not be empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("sample values must be finite"));
        }
        Ok(OrdinalSample {
            values,
            category_count: None,
        })
    }

    /// Category codes `1..=k`.
    pub fn likert(codes: &[u32], k: u32) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::input("sample must not be empty"));
        }
        if let Some(bad) = codes.iter().find(|c| **c == 0 || **c > k) {
            return Err(Error::input(format!("category code {bad} outside 1..={k}")));
        }
        Ok(OrdinalSample {
            values: codes.iter().map(|c| f64::from(*c)).collect(),
            category_count: Some(k),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn category_count(&self) -> Option<u32> {
        self.category_count
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MwuResult {
    pub u_x: f64,
    pub u_y: f64,
    /// Signed like `u_x - n*m/2`, magnitude after continuity correction.
    pub z: f64,
    pub p_two_sided: f64,
    pub tie_corrected: bool,
    /// All pooled values identical: no variance, p reported as 1.
    pub degenerate: bool,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub significant: bool,
}

/// Midranks (1-based) of the pooled values and the tie term `sum(t^3 - t)`.
fn midranks(pooled: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&a, &b| pooled[a].total_cmp(&pooled[b]));
    let mut ranks = vec![0.0; pooled.len()];
    let mut tie_term = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && pooled[order[end]] == pooled[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        let t = (end - start) as f64;
        tie_term += t * t * t - t;
        start = end;
    }
    (ranks, tie_term)
}

pub fn mann_whitney_u(x: &OrdinalSample, y: &OrdinalSample, alpha: f64) -> Result<MwuResult> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::input("both samples must be non-empty"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::input(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let (n, m) = (x.len(), y.len());
    let pooled: Vec<f64> = x.values.iter().chain(&y.values).copied().collect();
    let (ranks, tie_term) = midranks(&pooled);
    let rank_sum_x: f64 = ranks[..n].iter().sum();
    let (nf, mf) = (n as f64, m as f64);
    let u_x = rank_sum_x - nf * (nf + 1.0) / 2.0;
    let u_y = nf * mf - u_x;

    let total = nf + mf;
    let variance = nf * mf / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    let tie_corrected = tie_term > 0.0;
    let (z, p, degenerate) = if variance > 0.0 {
        let diff = u_x - nf * mf / 2.0;
        let corrected = (diff.abs() - 0.5).max(0.0);
        let z = corrected.copysign(diff) / variance.sqrt();
        let tail = Normal::standard().sf(corrected / variance.sqrt());
        (z, (2.0 * tail).min(1.0), false)
    } else {
        (0.0, 1.0, true)
    };
    Ok(MwuResult {
        u_x,
        u_y,
        z,
        p_two_sided: p,
        tie_corrected,
        degenerate,
        n,
        m,
        alpha,
        significant: p < alpha,
    })
}

/// Direct pair count: `+1` when `y_j < x_i`, `+1/2` on ties. Returns
/// `(u_x, u_y)`.
pub fn brute_force_u(x: &OrdinalSample, y: &OrdinalSample) -> (f64, f64) {
    let mut u_x = 0.0;
    let mut u_y = 0.0;
    for &a in &x.values {
        for &b in &y.values {
            if b < a {
                u_x += 1.0;
            } else if a < b {
                u_y += 1.0;
            } else {
                u_x += 0.5;
                u_y += 0.5;
            }
        }
    }
    (u_x, u_y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Lower-middle value for even sample sizes.
    pub median: f64,
    /// Every most frequent value, ascending.
    pub modes: Vec<f64>,
    /// `(value, count)` ascending; covers all of `1..=k` for Likert samples.
    pub counts: Vec<(f64, usize)>,
}

pub fn descriptive_summary(sample: &OrdinalSample) -> Summary {
    let mut sorted = sample.values.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[(sorted.len() - 1) / 2];
    let mut counts: Vec<(f64, usize)> = match sample.category_count {
        Some(k) => (1..=k).map(|c| (f64::from(c), 0)).collect(),
        None => Vec::new(),
    };
    for v in sorted {
        match counts.iter_mut().find(|(value, _)| *value == v) {
            Some((_, c)) => *c += 1,
            None => counts.push((v, 1)),
        }
    }
    let top = counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
    let modes = counts
        .iter()
        .filter(|(_, c)| *c == top)
        .map(|(v, _)| *v)
        .collect();
    Summary {
        median,
        modes,
        counts,
    }
}

/// Mann-Whitney comparison of two respondent groups on one question.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub question: String,
    pub group_a: String,
    pub group_b: String,
    pub result: MwuResult,
    pub significant: bool,
}
