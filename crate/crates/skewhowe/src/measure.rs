//! Exact probabilities of diagrams under the skew Howe measure.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::YoungDiagram;
use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// Largest box enumerated exhaustively, counted in diagrams.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// Particle positions `a_i = λ_i + n − i + 1`, strictly decreasing in `[1, n + k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ParticleConfig {
    coords: Vec<usize>,
}

impl ParticleConfig {
    pub fn new(coords: Vec<usize>, params: &EnsembleParams) -> Result<Self> {
        let top = params.n() + params.k();
        if coords.len() != params.n() {
            return Err(Error::Structural(format!("expected {} particles, got {}", params.n(), coords.len())));
        }
        if coords.iter().any(|&a| a == 0 || a > top) || coords.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Structural(format!(
                "coordinates {coords:?} must strictly decrease inside [1, {top}]"
            )));
        }
        Ok(Self { coords })
    }

    pub fn from_diagram(lambda: &YoungDiagram) -> Self {
        let n = lambda.n();
        let coords = lambda.rows().iter().enumerate().map(|(i, &l)| l + n - i).collect();
        Self { coords }
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    /// Inverse of [`ParticleConfig::from_diagram`].
    pub fn to_diagram(&self, params: &EnsembleParams) -> Result<YoungDiagram> {
        let n = params.n();
        let rows = self.coords.iter().enumerate().map(|(i, &a)| a - (n - i)).collect();
        YoungDiagram::new(rows, n, params.k())
    }

    /// Squared scaled coordinates `y_i = a_i² / n²`.
    pub fn y(&self, n: usize) -> Vec<BigRational> {
        let n2 = BigInt::from(n * n);
        self.coords
            .iter()
            .map(|&a| BigRational::new(BigInt::from(a * a), n2.clone()))
            .collect()
    }
}

/// An exact probability in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProbability(BigRational);

impl ExactProbability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(Error::Consistency(format!("probability {value} outside [0,1]")));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Weyl dimension of the irreducible `Sp_{2·rank}` module with highest weight `λ`.
///
/// With `l_i = λ_i + rank − i + 1` and `m_i = rank − i + 1`:
/// `∏ l_i/m_i · ∏_{i<j} (l_i² − l_j²)/(m_i² − m_j²)`.
pub fn sp_dimension(lambda: &[usize], rank: usize) -> Result<BigUint> {
    let nonzero = lambda.iter().take_while(|&&x| x > 0).count();
    if nonzero > rank || lambda[nonzero..].iter().any(|&x| x > 0) {
        return Err(Error::Domain(format!("{lambda:?} has more than {rank} rows or is not a partition")));
    }
    let part = |i: usize| lambda.get(i).copied().unwrap_or(0);
    let l: Vec<BigInt> = (0..rank).map(|i| BigInt::from(part(i) + rank - i)).collect();
    let m: Vec<BigInt> = (0..rank).map(|i| BigInt::from(rank - i)).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..rank {
        num *= &l[i];
        den *= &m[i];
        for j in i + 1..rank {
            num *= &l[i] * &l[i] - &l[j] * &l[j];
            den *= &m[i] * &m[i] - &m[j] * &m[j];
        }
    }
    let q = BigRational::new(num, den);
    if !q.is_integer() {
        return Err(Error::Consistency(format!("non-integral dimension {q} for {lambda:?}")));
    }
    Ok(q.to_integer().to_biguint().expect("dimension is positive"))
}

fn check_box(lambda: &YoungDiagram, params: &EnsembleParams) -> Result<()> {
    let fits = lambda.length() <= params.n() && lambda.rows().first().is_none_or(|&r| r <= params.k());
    if lambda.n() != params.n() || lambda.k() != params.k() || !fits {
        return Err(Error::Domain(format!(
            "diagram {lambda} in a {}×{} box does not match n={}, k={}",
            lambda.n(),
            lambda.k(),
            params.n(),
            params.k()
        )));
    }
    Ok(())
}

/// `μ(λ) = 2^{−2nk} · dim V_{Sp_{2n}}(λ) · dim V_{Sp_{2k}}(λ̄′)`.
pub fn measure_exact(lambda: &YoungDiagram, params: &EnsembleParams) -> Result<ExactProbability> {
    params.require_symmetric("the measure")?;
    check_box(lambda, params)?;
    let d1 = sp_dimension(lambda.rows(), params.n())?;
    let d2 = sp_dimension(lambda.complement_transpose().rows(), params.k())?;
    let num = BigInt::from(d1 * d2);
    let den = BigInt::one() << (2 * params.n() * params.k());
    ExactProbability::new(BigRational::new(num, den))
}

fn factorial(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// Product formula in the particle coordinates:
///
/// `2^{2n(1−k)} / ∏_{i≤j}(j−i)′(2n+2−i−j) · ∏_{i<j}(a_i²−a_j²)² · ∏_ℓ a_ℓ² (2k−1+2ℓ)! / ((k+n+a_ℓ)!(k+n−a_ℓ)!)`,
///
/// where `(j−i)′` is `j − i` for `i < j` and `1` on the diagonal.
pub fn measure_explicit(config: &ParticleConfig, params: &EnsembleParams) -> Result<ExactProbability> {
    params.require_symmetric("the measure")?;
    let (n, k) = (params.n() as i64, params.k() as i64);
    let a: Vec<i64> = config.coords().iter().map(|&x| x as i64).collect();
    if a.len() != params.n() {
        return Err(Error::Structural(format!("expected {n} particles, got {}", a.len())));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=n {
        for j in i..=n {
            if j > i {
                den *= j - i;
            }
            den *= 2 * n + 2 - i - j;
        }
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let d = BigInt::from(a[i] * a[i] - a[j] * a[j]);
            num *= &d * &d;
        }
    }
    for (l, &al) in (1..=n).zip(&a) {
        num *= BigInt::from(al * al) * factorial((2 * k - 1 + 2 * l) as usize);
        den *= factorial((k + n + al) as usize) * factorial((k + n - al) as usize);
    }
    let shift = 2 * n * (1 - k);
    if shift >= 0 {
        num <<= shift as usize;
    } else {
        den <<= (-shift) as usize;
    }
    ExactProbability::new(BigRational::new(num, den))
}

/// Every diagram in the box with its exact probability.
pub fn enumerate_measure(params: &EnsembleParams) -> Result<Vec<(YoungDiagram, ExactProbability)>> {
    let count = binomial(BigUint::from(params.n() + params.k()), BigUint::from(params.n()));
    if count > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::Resource(format!("{count} diagrams exceed the enumeration limit")));
    }
    YoungDiagram::all_in_box(params.n(), params.k())
        .into_iter()
        .map(|d| measure_exact(&d, params).map(|p| (d, p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::tableau::count_king_tableaux;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(sp_dimension(&[], 3).unwrap(), BigUint::one());
        assert_eq!(sp_dimension(&[1], 1).unwrap(), BigUint::from(2u32));
        assert_eq!(sp_dimension(&[1, 1], 2).unwrap(), BigUint::from(5u32));
        assert_eq!(sp_dimension(&[1], 2).unwrap(), BigUint::from(4u32));
        assert!(sp_dimension(&[1, 1], 1).is_err());
    }

    #[test]
    fn dimension_counts_king_tableaux() {
        for rank in 1..=3 {
            for size in 0..=6 {
                for d in YoungDiagram::all_in_box(rank, size) {
                    if d.size() != size {
                        continue;
                    }
                    let dim = sp_dimension(d.rows(), rank).unwrap();
                    assert_eq!(dim, BigUint::from(count_king_tableaux(d.rows(), rank)), "{d} rank {rank}");
                }
            }
        }
    }

    #[test]
    fn spec_examples() {
        let p11 = EnsembleParams::new(1, 1).unwrap();
        let empty = YoungDiagram::empty(1, 1);
        let one = YoungDiagram::new(vec![1], 1, 1).unwrap();
        assert_eq!(measure_exact(&empty, &p11).unwrap().value(), &q(1, 2));
        assert_eq!(measure_exact(&one, &p11).unwrap().value(), &q(1, 2));
        let p12 = EnsembleParams::new(1, 2).unwrap();
        let one = YoungDiagram::new(vec![1], 1, 2).unwrap();
        assert_eq!(measure_exact(&one, &p12).unwrap().value(), &q(1, 2));
        let cfg = ParticleConfig::from_diagram(&YoungDiagram::new(vec![1], 1, 1).unwrap());
        assert_eq!(cfg.coords(), &[2]);
        assert_eq!(measure_explicit(&cfg, &p11).unwrap().value(), &q(1, 2));
    }

    #[test]
    fn enumeration_sums_to_one() {
        let params = EnsembleParams::new(3, 3).unwrap();
        let all = enumerate_measure(&params).unwrap();
        assert_eq!(all.len(), 20);
        let total: BigRational = all.iter().map(|(_, p)| p.value().clone()).sum();
        assert_eq!(total, BigRational::one());
    }

    /// With the denominator product over `i < j` only, the formula would be off
    /// by the diagonal factor `∏_i (2n + 2 − 2i) = 2^n n!`.
    #[test]
    fn explicit_formula_needs_diagonal_terms() {
        for n in 1..=4usize {
            let params = EnsembleParams::new(n, 2).unwrap();
            let diag: i64 = (1..=n as i64).map(|i| 2 * n as i64 + 2 - 2 * i).product();
            assert_eq!(diag, (1i64 << n) * (1..=n as i64).product::<i64>());
            for d in YoungDiagram::all_in_box(n, 2) {
                let exact = measure_exact(&d, &params).unwrap();
                let explicit = measure_explicit(&ParticleConfig::from_diagram(&d), &params).unwrap();
                assert_eq!(exact, explicit);
            }
        }
    }

    #[test]
    fn particle_round_trip() {
        let params = EnsembleParams::new(3, 4).unwrap();
        for d in YoungDiagram::all_in_box(3, 4) {
            let c = ParticleConfig::from_diagram(&d);
            let c2 = ParticleConfig::new(c.coords().to_vec(), &params).unwrap();
            assert_eq!(c2.to_diagram(&params).unwrap(), d);
        }
        assert!(ParticleConfig::new(vec![2, 2, 1], &params).is_err());
    }
}
