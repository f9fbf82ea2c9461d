use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::orthopoly::krawtchouk::{alpha_tilde_f64, beta_tilde_f64, krawtchouk_table};
use crate::orthopoly::polynomial::{ops, MonicPolynomial};
use crate::params::EnsembleParams;

/// `G_m = (K̃_{m+2} + c1·K̃_{m+1} + c0·K̃_m) / u²`.
///
/// The coefficients kill the value and the derivative at `u = 0`. For
/// `p = 1/2` one of them vanishes by parity, `c1 = 0`, and `c0` is the ratio
/// `S_m` (values at zero for even `m`, derivatives for odd `m`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChristoffelCoefficients {
    pub c1: BigRational,
    pub c0: BigRational,
}

/// Solves for `c1`, `c0` from `A_j = K̃_j(0)` and `B_j = K̃′_j(0)`, `j = m, m+1, m+2`.
fn solve<T>(a: [T; 3], b: [T; 3]) -> Option<(T, T)>
where
    T: Clone + Zero + std::ops::Sub<Output = T> + std::ops::Mul<Output = T> + std::ops::Div<Output = T> + std::ops::Neg<Output = T>,
{
    let [a0, a1, a2] = a;
    let [b0, b1, b2] = b;
    let d = a0.clone() * b1.clone() - a1.clone() * b0.clone();
    if d.is_zero() {
        return None;
    }
    let c1 = -(a0 * b2.clone() - a2.clone() * b0) / d.clone();
    let c0 = (a1 * b2 - a2 * b1) / d;
    Some((c1, c0))
}

fn check_degree(m: usize, params: &EnsembleParams) -> Result<()> {
    if m + 2 > params.big_k() {
        return Err(Error::Domain(format!("G_{m} needs K̃_{} but K = {}", m + 2, params.big_k())));
    }
    Ok(())
}

pub(crate) fn coefficients_from_table(table: &[MonicPolynomial], m: usize) -> Result<ChristoffelCoefficients> {
    let a = [0, 1, 2].map(|d| table[m + d].value_at_zero());
    let b = [0, 1, 2].map(|d| table[m + d].derivative_at_zero());
    let (c1, c0) = solve(a, b).ok_or_else(|| {
        Error::Degenerate(format!("K̃_{m}(0)K̃′_{}(0) − K̃_{}(0)K̃′_{m}(0) = 0", m + 1, m + 1))
    })?;
    Ok(ChristoffelCoefficients { c1, c0 })
}

fn transform_from_table(table: &[MonicPolynomial], m: usize) -> Result<MonicPolynomial> {
    let cc = coefficients_from_table(table, m)?;
    let mut bracket = table[m + 2].coeffs().to_vec();
    ops::add_scaled(&mut bracket, table[m + 1].coeffs(), &cc.c1);
    ops::add_scaled(&mut bracket, table[m].coeffs(), &cc.c0);
    let quotient = ops::div_x2(&bracket).ok_or_else(|| {
        Error::Consistency(format!("bracket for G_{m} is not divisible by u²: {:?}", &bracket[..2]))
    })?;
    MonicPolynomial::new(quotient, table[0].params())
}

/// The monic polynomial `G_m` orthogonal for `u² W(u)`, by exact division.
pub fn christoffel_transform(m: usize, params: &EnsembleParams) -> Result<MonicPolynomial> {
    check_degree(m, params)?;
    transform_from_table(&krawtchouk_table(m + 2, params)?, m)
}

/// `G_0, …, G_{max_m}` sharing one Krawtchouk table.
pub fn symplectic_table(max_m: usize, params: &EnsembleParams) -> Result<Vec<MonicPolynomial>> {
    check_degree(max_m, params)?;
    let table = krawtchouk_table(max_m + 2, params)?;
    (0..=max_m).map(|m| transform_from_table(&table, m)).collect()
}

/// `c1_m, c0_m` for `m = 0..=max_m`, exact.
pub fn christoffel_coefficients(max_m: usize, params: &EnsembleParams) -> Result<Vec<ChristoffelCoefficients>> {
    check_degree(max_m, params)?;
    let table = krawtchouk_table(max_m + 2, params)?;
    (0..=max_m).map(|m| coefficients_from_table(&table, m)).collect()
}

/// `(c1_m, c0_m)` in floating point for large `K`.
///
/// `K̃_j(0)` and `K̃′_j(0)` obey the recurrence differentiated once at zero;
/// they are carried with a running power-of-two scale so that `K` in the
/// thousands neither overflows nor underflows.
pub fn christoffel_coefficients_f64(max_m: usize, params: &EnsembleParams) -> Result<Vec<(f64, f64)>> {
    check_degree(max_m, params)?;
    let top = max_m + 2;
    // (A_j, B_j) scaled by 2^{−e_j}.
    let mut a = vec![0.0; top + 1];
    let mut b = vec![0.0; top + 1];
    let mut e = vec![0i32; top + 1];
    let (mut a_prev, mut b_prev) = (0.0, 0.0);
    let (mut a_cur, mut b_cur) = (1.0, 0.0);
    let mut scale = 0i32;
    a[0] = 1.0;
    for j in 0..top {
        let (al, be) = (alpha_tilde_f64(j, params), beta_tilde_f64(j, params));
        let a_next = -al * a_cur - be * a_prev;
        let b_next = a_cur - al * b_cur - be * b_prev;
        a_prev = a_cur;
        b_prev = b_cur;
        a_cur = a_next;
        b_cur = b_next;
        a[j + 1] = a_cur;
        b[j + 1] = b_cur;
        e[j + 1] = scale;
        let mag = a_cur.abs().max(b_cur.abs());
        if mag > 1e100 || (mag < 1e-100 && mag > 0.0) {
            let shift = mag.log2().round() as i32;
            let f = (-shift as f64).exp2();
            a_prev *= f;
            b_prev *= f;
            a_cur *= f;
            b_cur *= f;
            scale += shift;
        }
    }
    (0..=max_m)
        .map(|m| {
            let (c1, c0) = solve([a[m], a[m + 1], a[m + 2]], [b[m], b[m + 1], b[m + 2]])
                .ok_or_else(|| Error::Degenerate(format!("vanishing determinant at m = {m}")))?;
            let c1 = c1 * f64::from(e[m + 2] - e[m + 1]).exp2();
            let c0 = c0 * f64::from(e[m + 2] - e[m]).exp2();
            if !c1.is_finite() || !c0.is_finite() {
                return Err(Error::Degenerate(format!("non-finite Christoffel coefficient at m = {m}")));
            }
            Ok((c1, c0))
        })
        .collect()
}

/// `K̃_{m+2}(0) / K̃_m(0)`, checked against `−(K−m)(m+1)/(4n²)`.
pub fn appendix_ratio(m: usize, params: &EnsembleParams) -> Result<BigRational> {
    params.require_symmetric("the appendix identity")?;
    if m % 2 != 0 {
        return Err(Error::Domain(format!("the identity concerns even degrees, got {m}")));
    }
    check_degree(m, params)?;
    checked_ratio(&krawtchouk_table(m + 2, params)?, m, params)
}

/// [`appendix_ratio`] for every even `m ≤ K − 2`, from a single table.
pub fn appendix_ratios(params: &EnsembleParams) -> Result<Vec<BigRational>> {
    params.require_symmetric("the appendix identity")?;
    let table = krawtchouk_table(params.big_k(), params)?;
    (0..=params.big_k() - 2).step_by(2).map(|m| checked_ratio(&table, m, params)).collect()
}

fn checked_ratio(table: &[MonicPolynomial], m: usize, params: &EnsembleParams) -> Result<BigRational> {
    let (num, den) = (table[m + 2].value_at_zero(), table[m].value_at_zero());
    if den.is_zero() {
        return Err(Error::Degenerate(format!("K̃_{m}(0) = 0")));
    }
    let ratio = num / den;
    let k = params.big_k() as i64;
    let n = params.n() as i64;
    let expected = BigRational::new(BigInt::from(-(k - m as i64) * (m as i64 + 1)), BigInt::from(4 * n * n));
    if ratio != expected {
        return Err(Error::Consistency(format!("K̃_{}(0)/K̃_{m}(0) = {ratio}, expected {expected}", m + 2)));
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn first_transforms_k8_n2() {
        let params = EnsembleParams::new(2, 2).unwrap();
        assert_eq!(christoffel_transform(0, &params).unwrap().coeffs(), &[q(1, 1)]);
        // x² − (3K−2)/(4n²) = x² − 22/16.
        assert_eq!(christoffel_transform(2, &params).unwrap().coeffs(), &[q(-11, 8), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn symmetric_case_has_no_middle_term() {
        let params = EnsembleParams::new(2, 3).unwrap();
        for cc in christoffel_coefficients(8, &params).unwrap() {
            assert!(cc.c1.is_zero());
        }
    }

    #[test]
    fn appendix_examples() {
        let p = EnsembleParams::new(3, 3).unwrap();
        assert_eq!(appendix_ratio(2, &p).unwrap(), q(-5, 6));
        let p = EnsembleParams::new(4, 4).unwrap();
        assert_eq!(appendix_ratio(4, &p).unwrap(), q(-15, 16));
        assert_eq!(appendix_ratio(0, &p).unwrap(), q(-16, 64));
        assert!(matches!(appendix_ratio(1, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn float_coefficients_match_exact() {
        for p in [q(1, 2), q(1, 3), q(3, 4)] {
            let params = EnsembleParams::with_p(3, 5, p).unwrap();
            let exact = christoffel_coefficients(12, &params).unwrap();
            let float = christoffel_coefficients_f64(12, &params).unwrap();
            for (m, (e, f)) in exact.iter().zip(&float).enumerate() {
                let (c1, c0) = (e.c1.to_f64().unwrap(), e.c0.to_f64().unwrap());
                assert!((c1 - f.0).abs() <= 1e-10 * c1.abs().max(1.0), "m={m} c1 {c1} vs {}", f.0);
                assert!((c0 - f.1).abs() <= 1e-10 * c0.abs(), "m={m} c0 {c0} vs {}", f.1);
            }
        }
    }

    #[test]
    fn float_coefficients_survive_large_k() {
        let params = EnsembleParams::new(500, 1000).unwrap();
        let k = params.big_k() as f64;
        let n = 500.0;
        let c = christoffel_coefficients_f64(2 * 500, &params).unwrap();
        for (m, &(c1, c0)) in c.iter().enumerate().step_by(2) {
            assert_eq!(c1, 0.0);
            let closed = (k - m as f64) * (m as f64 + 1.0) / (4.0 * n * n);
            assert!((c0 - closed).abs() < 1e-12 * closed);
        }
    }
}
