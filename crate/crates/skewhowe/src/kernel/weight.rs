use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::orthopoly::{lattice_point, lattice_weight, ln_weight};
use crate::params::EnsembleParams;

/// The binomial weight `W(i/n)` on the lattice `i = −K/2..=K/2` and
/// `W̃(u²) = u² W(u)`, the weight of the particles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    params: EnsembleParams,
}

impl WeightFunction {
    pub fn new(params: &EnsembleParams) -> Self {
        Self { params: params.clone() }
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    /// `K/2 = n + k`, the largest lattice index.
    pub fn half_width(&self) -> i64 {
        (self.params.big_k() / 2) as i64
    }

    pub fn check_index(&self, i: i64) -> Result<()> {
        if i.abs() > self.half_width() {
            return Err(Error::Domain(format!("lattice index {i} outside ±{}", self.half_width())));
        }
        Ok(())
    }

    /// Lattice index of `u`, which must be a multiple of `1/n`.
    pub fn index_of(&self, u: f64) -> Result<i64> {
        let x = u * self.params.n() as f64;
        let i = x.round();
        if !x.is_finite() || (x - i).abs() > 1e-9 * x.abs().max(1.0) {
            return Err(Error::Domain(format!("u = {u} is not on the lattice (1/{})ℤ", self.params.n())));
        }
        let i = i as i64;
        self.check_index(i)?;
        Ok(i)
    }

    pub fn exact(&self, i: i64) -> Result<BigRational> {
        lattice_weight(i, &self.params)
    }

    pub fn exact_tilde(&self, i: i64) -> Result<BigRational> {
        let u = lattice_point(i, &self.params);
        Ok(&u * &u * self.exact(i)?)
    }

    pub fn ln(&self, i: i64) -> f64 {
        ln_weight(i as f64 / self.params.n() as f64, &self.params)
    }

    /// `ln W̃`; `−∞` at `u = 0`.
    pub fn ln_tilde(&self, i: i64) -> f64 {
        let u = i as f64 / self.params.n() as f64;
        2.0 * u.abs().ln() + self.ln(i)
    }

    pub fn value(&self, i: i64) -> f64 {
        self.ln(i).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, ToPrimitive};

    #[test]
    fn normalised_and_even() {
        let w = WeightFunction::new(&EnsembleParams::new(2, 3).unwrap());
        let total: BigRational = (-5..=5).map(|i| w.exact(i).unwrap()).sum();
        assert!(total.is_one());
        for i in 0..=5 {
            assert_eq!(w.exact_tilde(i).unwrap(), w.exact_tilde(-i).unwrap());
            let f = w.exact(i).unwrap().to_f64().unwrap();
            assert!((w.value(i) - f).abs() < 1e-13 * f);
        }
        assert!(w.check_index(6).is_err());
    }

    #[test]
    fn lattice_lookup() {
        let w = WeightFunction::new(&EnsembleParams::new(3, 3).unwrap());
        assert_eq!(w.index_of(2.0 / 3.0).unwrap(), 2);
        assert_eq!(w.index_of(-1.0).unwrap(), -3);
        assert!(w.index_of(0.5).is_err());
        assert!(w.index_of(3.0).is_err());
    }
}
