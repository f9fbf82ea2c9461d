use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters shared by every stage: the box `n × k`, `K = 2n + 2k`,
/// `H = n / K` and the Krawtchouk parameter `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleParams {
    n: usize,
    k: usize,
    p: BigRational,
}

impl EnsembleParams {
    /// Parameters with `p = 1/2`, the only value with a probabilistic meaning.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        Self::with_p(n, k, BigRational::new(1.into(), 2.into()))
    }

    pub fn with_p(n: usize, k: usize, p: BigRational) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Domain(format!("n and k must be positive, got n={n}, k={k}")));
        }
        if p <= BigRational::zero() || p >= BigRational::one() {
            return Err(Error::Domain(format!("p must lie in (0,1), got {p}")));
        }
        Ok(Self { n, k, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `K = 2n + 2k`.
    pub fn big_k(&self) -> usize {
        2 * self.n + 2 * self.k
    }

    /// `H = n / K` as an exact rational.
    pub fn h(&self) -> BigRational {
        BigRational::new(BigInt::from(self.n), BigInt::from(self.big_k()))
    }

    pub fn h_f64(&self) -> f64 {
        self.n as f64 / self.big_k() as f64
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64().expect("p is a small rational")
    }

    pub fn is_symmetric(&self) -> bool {
        self.p == BigRational::new(1.into(), 2.into())
    }

    /// Fails unless `p = 1/2`; measure, sampler and kernel are only defined there.
    pub fn require_symmetric(&self, what: &str) -> Result<()> {
        if self.is_symmetric() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} requires p = 1/2, got p = {}", self.p)))
        }
    }

    pub fn summary(&self) -> ParamsSummary {
        ParamsSummary {
            n: self.n,
            k: self.k,
            big_k: self.big_k(),
            h: self.h_f64(),
            p: self.p.to_string(),
        }
    }
}

/// Flat view of [`EnsembleParams`] for output metadata.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsSummary {
    pub n: usize,
    pub k: usize,
    #[serde(rename = "K")]
    pub big_k: usize,
    #[serde(rename = "H")]
    pub h: f64,
    pub p: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = EnsembleParams::new(50, 100).unwrap();
        assert_eq!(p.big_k(), 300);
        assert_eq!(p.h(), BigRational::new(1.into(), 6.into()));
        assert!(p.is_symmetric());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(EnsembleParams::new(0, 3).is_err());
        assert!(EnsembleParams::with_p(2, 2, BigRational::one()).is_err());
        let q = EnsembleParams::with_p(2, 2, BigRational::new(1.into(), 3.into())).unwrap();
        assert!(q.require_symmetric("sampling").is_err());
    }
}
