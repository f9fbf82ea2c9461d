use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::orthopoly::krawtchouk::{lattice, lattice_point, lattice_weight};
use crate::orthopoly::polynomial::MonicPolynomial;

/// `g_m = G_m / √Λ_m`. The norm is kept exact so squared identities stay rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthonormalPolynomial {
    monic: MonicPolynomial,
    lambda: BigRational,
}

pub fn orthonormalize(g: MonicPolynomial, lambda: BigRational) -> Result<OrthonormalPolynomial> {
    if !lambda.is_positive() {
        return Err(Error::Degenerate(format!("norm {lambda} of G_{} is not positive", g.degree())));
    }
    Ok(OrthonormalPolynomial { monic: g, lambda })
}

impl OrthonormalPolynomial {
    pub fn degree(&self) -> usize {
        self.monic.degree()
    }

    pub fn monic(&self) -> &MonicPolynomial {
        &self.monic
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    /// Leading coefficient `1/√Λ_m`.
    pub fn leading(&self) -> f64 {
        self.lambda.to_f64().unwrap_or(f64::NAN).sqrt().recip()
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.monic.eval_f64(u) * self.leading()
    }

    /// `g_m(u)²`, exact.
    pub fn eval_squared(&self, u: &BigRational) -> BigRational {
        let v = self.monic.eval(u);
        &v * &v / &self.lambda
    }

    /// `Σ_i g_m g_l (i/n)² W(i/n)`, exact up to the square root of the two
    /// norms; returned squared, so it is `1` on the diagonal.
    pub fn inner_product_squared(&self, other: &OrthonormalPolynomial) -> Result<BigRational> {
        let params = self.monic.params();
        let mut sum = BigRational::zero();
        for i in lattice(params) {
            let u = lattice_point(i, params);
            sum += self.monic.eval(&u) * other.monic.eval(&u) * &u * &u * lattice_weight(i, params)?;
        }
        Ok(&sum * &sum / (&self.lambda * &other.lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::christoffel::symplectic_table;
    use crate::orthopoly::norms::norm_sequence;
    use crate::params::EnsembleParams;

    fn family(params: &EnsembleParams, top: usize) -> Vec<OrthonormalPolynomial> {
        let seq = norm_sequence(params, top).unwrap();
        symplectic_table(top, params)
            .unwrap()
            .into_iter()
            .zip(seq.lambda)
            .map(|(g, l)| orthonormalize(g, l).unwrap())
            .collect()
    }

    #[test]
    fn g0_constant() {
        let params = EnsembleParams::new(3, 5).unwrap();
        let g = family(&params, 0);
        let expected = 2.0 * 3.0 / 16f64.sqrt();
        assert!((g[0].eval(0.7) - expected).abs() < 1e-14);
    }

    #[test]
    fn orthonormal_at_k16() {
        let params = EnsembleParams::new(3, 5).unwrap();
        let g = family(&params, 6);
        for m in 0..=6 {
            assert_eq!(g[m].inner_product_squared(&g[m]).unwrap(), BigRational::from_integer(1.into()));
        }
        assert!(g[0].inner_product_squared(&g[2]).unwrap().is_zero());
    }

    #[test]
    fn rejects_zero_norm() {
        let params = EnsembleParams::new(1, 1).unwrap();
        let g = MonicPolynomial::one(&params);
        assert!(matches!(orthonormalize(g, BigRational::zero()), Err(Error::Degenerate(_))));
    }
}
