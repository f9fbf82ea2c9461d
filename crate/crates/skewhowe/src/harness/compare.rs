use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{density_region, limit_density, sine_kernel, DensityRegion};
use crate::error::{Error, Result};
use crate::harness::stats::EmpiricalStats;
use crate::kernel::KernelEvaluator;
use crate::params::EnsembleParams;

/// Macroscopic position `x = a/K` of lattice coordinate `a`, the argument of the limit density.
pub fn anchor_coordinate(anchor: i64, params: &EnsembleParams) -> f64 {
    anchor as f64 / params.big_k() as f64
}

/// One output row; the empirical columns are empty without a sample batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub j: i64,
    pub delta: i64,
    pub q1: Option<f64>,
    pub median: Option<f64>,
    pub q3: Option<f64>,
    pub whisker_lo: Option<f64>,
    pub whisker_hi: Option<f64>,
    pub cd_ratio: f64,
    pub sine_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub anchor: i64,
    pub x: f64,
    pub rho: f64,
    pub rows: Vec<ComparisonRow>,
    /// `max_j |cd_ratio − sine_ratio|`.
    pub sup_cd_sine: f64,
    /// Fraction of rows whose exact ratio lies between the whiskers.
    pub band_coverage: Option<f64>,
}

/// `𝒦(i,j)/𝒦(i,i)` from the exact kernel next to `sin(πρΔ)/(πρΔ)` with `ρ` the
/// limit density at the anchor, and optionally the empirical box summaries.
pub fn compare_curves(
    params: &EnsembleParams,
    anchor: i64,
    j_range: RangeInclusive<i64>,
    empirical: Option<&EmpiricalStats>,
) -> Result<Comparison> {
    let sites = (params.n() + params.k()) as i64;
    let j_range = (*j_range.start()).max(1)..=(*j_range.end()).min(sites);
    if !(1..=sites).contains(&anchor) {
        return Err(Error::Domain(format!("anchor {anchor} outside [1, {sites}]")));
    }
    let (x, h) = (anchor_coordinate(anchor, params), params.h_f64());
    if density_region(x, h) != DensityRegion::Bulk {
        return Err(Error::Region(format!("anchor {anchor} (x = {x}) is outside the bulk for H = {h}")));
    }
    if let Some(e) = empirical {
        if e.anchor != anchor {
            return Err(Error::Domain(format!("empirical anchor {} differs from {anchor}", e.anchor)));
        }
    }
    let rho = limit_density(x, h);
    let kernel = KernelEvaluator::new(params)?;
    let diag = kernel.eval(anchor, anchor)?;
    let mut rows = Vec::new();
    let (mut sup, mut inside, mut boxed) = (0.0f64, 0usize, 0usize);
    for j in j_range {
        let cd_ratio = kernel.eval(anchor, j)? / diag;
        let sine_ratio = sine_kernel(j - anchor, rho);
        sup = sup.max((cd_ratio - sine_ratio).abs());
        let b = empirical.and_then(|e| e.rows.iter().find(|r| r.j == j)).map(|r| r.ratio_box);
        if let Some(b) = b {
            boxed += 1;
            inside += usize::from(b.contains(cd_ratio));
        }
        rows.push(ComparisonRow {
            j,
            delta: j - anchor,
            q1: b.map(|b| b.q1),
            median: b.map(|b| b.median),
            q3: b.map(|b| b.q3),
            whisker_lo: b.map(|b| b.whisker_lo),
            whisker_hi: b.map(|b| b.whisker_hi),
            cd_ratio,
            sine_ratio,
        });
    }
    let band_coverage = (boxed > 0).then(|| inside as f64 / boxed as f64);
    Ok(Comparison { anchor, x, rho, rows, sup_cd_sine: sup, band_coverage })
}
