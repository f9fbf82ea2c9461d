//! Saddle-point asymptotics in the double-scaling limit `n = HK`, `m = gK + s√K + l`,
//! `j = (K/2)(1 − 2μ)`, for `p = ½`.
//!
//! The polynomials are integrals over `t` with action
//! `f(t) = (1 − μ) ln(t − ½) + (g − 1) ln t − g ln(1 − t)`. In the oscillatory region
//! `(μ − ½)² < g(1 − g)` the two saddles are complex conjugate and the steepest-descent
//! contributions combine into a single sine.

mod density;
mod formulas;
mod saddle;

pub use density::{density_region, limit_density, phase_increment_beta, sine_kernel, DensityRegion};
pub use formulas::{
    krawtchouk_asymptotic, krawtchouk_asymptotic_parts, krawtchouk_exact_log, scaling_variables,
    symplectic_asymptotic, symplectic_asymptotic_parts, symplectic_exact_log, symplectic_weight, Asymptotic,
    LogReal,
};
pub use saddle::{
    action, action_d1, action_d2, phase_data, saddle_points, SaddleData, SaddleRoots, REGION_MARGIN,
};

use serde::Serialize;

use crate::error::{Error, Result};

/// A point of the double-scaling regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRegime {
    pub h: f64,
    pub g: f64,
    pub s: f64,
    pub l: f64,
    pub mu: f64,
}

impl AsymptoticRegime {
    pub fn new(h: f64, g: f64, s: f64, l: f64, mu: f64) -> Result<Self> {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if !(h > 0.0 && h < 0.5) || !unit(g) || !unit(mu) || !s.is_finite() || !l.is_finite() {
            return Err(Error::Domain(format!("regime H={h}, g={g}, μ={mu}, s={s}, l={l}")));
        }
        Ok(Self { h, g, s, l, mu })
    }

    /// Two complex-conjugate saddles.
    pub fn is_oscillatory(&self) -> bool {
        (self.mu - 0.5).powi(2) < self.g * (1.0 - self.g)
    }

    /// `gK + s√K + l`, rounded to the nearest degree.
    pub fn degree(&self, big_k: usize) -> usize {
        let k = big_k as f64;
        (self.g * k + self.s * k.sqrt() + self.l).round().max(0.0) as usize
    }

    /// `(K/2)(1 − 2μ)`, rounded to the nearest lattice index.
    pub fn lattice_index(&self, big_k: usize) -> i64 {
        (big_k as f64 / 2.0 * (1.0 - 2.0 * self.mu)).round() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_dictionary() {
        let r = AsymptoticRegime::new(0.25, 0.5, 0.0, 1.0, 0.45).unwrap();
        assert!(r.is_oscillatory());
        assert_eq!(r.degree(200), 101);
        assert_eq!(r.lattice_index(200), 10);
        assert!(AsymptoticRegime::new(0.6, 0.5, 0.0, 0.0, 0.5).is_err());
        assert!(!AsymptoticRegime::new(0.25, 0.1, 0.0, 0.0, 0.05).unwrap().is_oscillatory());
    }
}
