use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// A monic polynomial with exact rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicPolynomial {
    coeffs: Vec<BigRational>,
    params: EnsembleParams,
}

impl MonicPolynomial {
    pub fn new(coeffs: Vec<BigRational>, params: &EnsembleParams) -> Result<Self> {
        match coeffs.last() {
            Some(c) if c.is_one() => Ok(Self { coeffs, params: params.clone() }),
            Some(c) => Err(Error::Structural(format!("leading coefficient {c}, expected 1"))),
            None => Err(Error::Structural("empty coefficient list".into())),
        }
    }

    pub(crate) fn from_raw(coeffs: Vec<BigRational>, params: &EnsembleParams) -> Self {
        debug_assert!(coeffs.last().is_some_and(One::is_one));
        Self { coeffs, params: params.clone() }
    }

    pub fn one(params: &EnsembleParams) -> Self {
        Self::from_raw(vec![BigRational::one()], params)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero above the degree.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Horner in `f64`; fine for the degrees of the exact tables (`K ≤ 64`).
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn value_at_zero(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn derivative_at_zero(&self) -> BigRational {
        self.coeff(1)
    }

    /// True when every coefficient of parity opposite to the degree vanishes.
    pub fn has_degree_parity(&self) -> bool {
        let d = self.degree() % 2;
        self.coeffs.iter().enumerate().all(|(i, c)| i % 2 == d || c.is_zero())
    }
}

impl fmt::Display for MonicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match (i, show_coeff) {
                (0, _) => {}
                (1, true) => write!(f, "·x")?,
                (1, false) => write!(f, "x")?,
                (_, true) => write!(f, "·x^{i}")?,
                (_, false) => write!(f, "x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Coefficient-list helpers shared by the recurrences.
pub(crate) mod ops {
    use super::*;

    /// `(x − shift) p − scale q`.
    pub fn ttr_step(p: &[BigRational], q: &[BigRational], shift: &BigRational, scale: &BigRational) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= shift * c;
        }
        for (i, c) in q.iter().enumerate() {
            out[i] -= scale * c;
        }
        out
    }

    /// `acc += s · p`.
    pub fn add_scaled(acc: &mut Vec<BigRational>, p: &[BigRational], s: &BigRational) {
        if acc.len() < p.len() {
            acc.resize(p.len(), BigRational::zero());
        }
        for (a, c) in acc.iter_mut().zip(p) {
            *a += s * c;
        }
    }

    /// Exact division by `x²`; `None` when the remainder is nonzero.
    pub fn div_x2(p: &[BigRational]) -> Option<Vec<BigRational>> {
        if p.len() < 2 || !p[0].is_zero() || !p[1].is_zero() {
            return None;
        }
        Some(p[2..].to_vec())
    }

    /// `x · p`.
    pub fn shift_up(p: &[BigRational]) -> Vec<BigRational> {
        std::iter::once(BigRational::zero()).chain(p.iter().cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn monic_check() {
        let p = EnsembleParams::new(1, 1).unwrap();
        assert!(MonicPolynomial::new(vec![q(1, 1), q(2, 1)], &p).is_err());
        assert!(MonicPolynomial::new(vec![], &p).is_err());
        let m = MonicPolynomial::new(vec![q(-1, 4), q(0, 1), q(1, 1)], &p).unwrap();
        assert_eq!(m.degree(), 2);
        assert!(m.has_degree_parity());
        assert_eq!(m.eval(&q(1, 2)), q(0, 1));
        assert_eq!(m.to_string(), "x^2 - 1/4");
    }

    #[test]
    fn division_by_x2() {
        assert_eq!(ops::div_x2(&[q(0, 1), q(0, 1), q(3, 1), q(1, 1)]), Some(vec![q(3, 1), q(1, 1)]));
        assert_eq!(ops::div_x2(&[q(0, 1), q(1, 1), q(1, 1)]), None);
    }
}
