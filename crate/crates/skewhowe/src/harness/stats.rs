use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::sampling::SampleBatch;
use crate::kernel::KernelEvaluator;

/// Box-and-whiskers summary: type-7 quartiles, Tukey whiskers at 1.5 IQR
/// pulled in to the most extreme datum inside the fences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSummary {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_lo: f64,
    pub whisker_hi: f64,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl BoxSummary {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() || values.iter().any(|v| v.is_nan()) {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let (q1, median, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
        let iqr = q3 - q1;
        let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let whisker_lo = v.iter().copied().find(|&x| x >= lo_fence).unwrap_or(q1);
        let whisker_hi = v.iter().rev().copied().find(|&x| x <= hi_fence).unwrap_or(q3);
        Some(Self { q1, median, q3, whisker_lo, whisker_hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.whisker_lo <= x && x <= self.whisker_hi
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, (var / r).sqrt())
}

/// Estimates at one `j` for a fixed anchor `i`.
#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalRow {
    pub j: i64,
    pub delta: i64,
    /// Pooled `ρ̂(i)ρ̂(j) − ρ̂₂(i,j)`, not clamped.
    pub k2_hat: f64,
    /// Standard error of `𝒦̂²` from the spread across replicates.
    pub k2_se: f64,
    /// Sign applied to `√𝒦̂²`, taken from the exact kernel.
    pub sign: f64,
    /// Signed ratio from the pooled estimate.
    pub ratio_pooled: f64,
    /// Mean and standard error of the per-replicate ratios.
    pub ratio_mean: f64,
    pub ratio_se: f64,
    pub ratio_box: BoxSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct EmpiricalStats {
    pub anchor: i64,
    pub replicates: usize,
    pub samples_per_replicate: u64,
    /// Pooled `ρ̂(a)` and its binomial standard error, `a = 1..=n+k`.
    pub rho_hat: Vec<f64>,
    pub rho_se: Vec<f64>,
    pub rows: Vec<EmpiricalRow>,
    /// Per-replicate `𝒦̂²` estimates that came out negative and were set to 0.
    pub clamped: usize,
    /// Of those, the ones below −3 binomial standard errors of `ρ̂₂`.
    pub flagged: usize,
}

/// Per replicate, `𝒦̂(i,j)² = ρ̂(i)ρ̂(j) − ρ̂₂(i,j)` and the ratio
/// `𝒦̂(i,j)/𝒦̂(i,i) = sign · √𝒦̂(i,j)² / ρ̂(i)`, where the sign is that of the exact
/// kernel; then quartiles across replicates.
pub fn empirical_kernel_ratio(batch: &SampleBatch, anchor: i64, j_range: RangeInclusive<i64>) -> Result<EmpiricalStats> {
    let params = batch.params();
    let sites = (params.n() + params.k()) as i64;
    let in_lattice = |a: i64| (1..=sites).contains(&a);
    if !in_lattice(anchor) || !in_lattice(*j_range.start()) || !in_lattice(*j_range.end()) {
        return Err(Error::Domain(format!("anchor {anchor} and range {j_range:?} must lie in [1, {sites}]")));
    }
    let kernel = KernelEvaluator::new(params)?;
    let i = anchor as usize;
    let mut clamped = 0;
    let mut flagged = 0;
    let mut rows = Vec::new();
    for j in j_range {
        let sign = if kernel.eval(anchor, j)? < 0.0 { -1.0 } else { 1.0 };
        let mut k2s = Vec::with_capacity(batch.replicates().len());
        let mut ratios = Vec::with_capacity(batch.replicates().len());
        for rep in batch.replicates() {
            let n = rep.samples as f64;
            let (ri, rj) = (rep.one[i - 1] as f64 / n, rep.one[j as usize - 1] as f64 / n);
            if ri == 0.0 {
                return Err(Error::Degenerate(format!("anchor {anchor} never occupied in a replicate")));
            }
            let r2 = rep.pair(i, j as usize) as f64 / n;
            let k2 = if j as usize == i { ri * ri } else { ri * rj - r2 };
            if k2 < 0.0 {
                clamped += 1;
                if k2 < -3.0 * (r2.max(1.0 / n) / n).sqrt() {
                    flagged += 1;
                }
            }
            k2s.push(k2);
            ratios.push(sign * k2.max(0.0).sqrt() / ri);
        }
        let (ri, rj) = (batch.density(i), batch.density(j as usize));
        let k2_hat = if j as usize == i { ri * ri } else { ri * rj - batch.pair_density(i, j as usize) };
        let (_, k2_se) = mean_and_se(&k2s);
        let (ratio_mean, ratio_se) = mean_and_se(&ratios);
        rows.push(EmpiricalRow {
            j,
            delta: j - anchor,
            k2_hat,
            k2_se,
            sign,
            ratio_pooled: sign * k2_hat.max(0.0).sqrt() / ri,
            ratio_mean,
            ratio_se,
            ratio_box: BoxSummary::from_values(&ratios).expect("ratios are finite"),
        });
    }
    let total = batch.total_samples() as f64;
    let rho_hat: Vec<f64> = (1..=sites as usize).map(|a| batch.density(a)).collect();
    let rho_se = rho_hat.iter().map(|r| (r * (1.0 - r) / total).sqrt()).collect();
    Ok(EmpiricalStats {
        anchor,
        replicates: batch.replicates().len(),
        samples_per_replicate: batch.samples_per_replicate(),
        rho_hat,
        rho_se,
        rows,
        clamped,
        flagged,
    })
}
