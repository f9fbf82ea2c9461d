use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Where `x` sits relative to the arccos domain of the limit density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityRegion {
    Bulk,
    /// Argument above 1, or `|x| ≥ ½`: no particles.
    Empty,
    /// Argument below −1 (only for `H > ¼`): every site occupied.
    Saturated,
}

/// `(1 − 4H)/√(1 − 4x²)`, or `None` for `|x| ≥ ½`.
fn argument(x: f64, h: f64) -> Option<f64> {
    (x.abs() < 0.5).then(|| (1.0 - 4.0 * h) / (1.0 - 4.0 * x * x).sqrt())
}

pub fn density_region(x: f64, h: f64) -> DensityRegion {
    match argument(x, h) {
        None => DensityRegion::Empty,
        Some(a) if a >= 1.0 => DensityRegion::Empty,
        Some(a) if a <= -1.0 => DensityRegion::Saturated,
        Some(_) => DensityRegion::Bulk,
    }
}

/// `ρ(x) = arccos((1 − 4H)/√(1 − 4x²))/π` on the bulk; 0 or 1 off it, see [`density_region`].
pub fn limit_density(x: f64, h: f64) -> f64 {
    match (density_region(x, h), argument(x, h)) {
        (DensityRegion::Bulk, Some(a)) => a.acos() / PI,
        (DensityRegion::Saturated, _) => 1.0,
        _ => 0.0,
    }
}

/// `sin(πρ·d)/(πρ·d)`, with value 1 at `d = 0` (and at `ρ = 0`).
pub fn sine_kernel(di: i64, rho: f64) -> f64 {
    let z = PI * rho * di as f64;
    if z == 0.0 {
        1.0
    } else {
        z.sin() / z
    }
}

/// Phase shift `β = 2 arccot(x/√(2H − 4H² − x²))` of the kernel between degrees `2n` and `2n + 2`.
///
/// Also checks that `π + arctan(2√(2H − 4H² − x²)/(1 − 4H))` agrees with `πρ(x)` modulo `π`.
pub fn phase_increment_beta(x: f64, h: f64) -> Result<f64> {
    let s2 = 2.0 * h - 4.0 * h * h - x * x;
    if s2 <= 0.0 || !(0.0..0.5).contains(&h) {
        return Err(Error::Region(format!("x² = {} ≥ 2H − 4H² = {} at H = {h}", x * x, 2.0 * h - 4.0 * h * h)));
    }
    let s = s2.sqrt();
    let beta = 2.0 * (PI / 2.0 - (x / s).atan());
    // atan2 stays finite on the line H = ¼ and agrees with π + arctan(·) modulo π
    let rate = (2.0 * s).atan2(1.0 - 4.0 * h);
    let rho = limit_density(x, h);
    let gap = (rate - PI * rho).rem_euclid(PI);
    if gap.min(PI - gap) > 1e-9 {
        return Err(Error::Consistency(format!("phase rate {rate} and πρ = {} differ mod π at x = {x}", PI * rho)));
    }
    Ok(beta)
}
