use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orthopoly::christoffel::symplectic_table;
use crate::orthopoly::krawtchouk::{alpha_tilde_f64, beta_tilde, beta_tilde_f64};
use crate::orthopoly::polynomial::ops;
use crate::params::EnsembleParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JacobiFlavor {
    /// Orthonormal Krawtchouk polynomials for `W`.
    KrawtchoukOrthonormal,
    /// Orthonormal polynomials for `u² W`.
    SymplecticTransformed,
}

/// A symmetric tridiagonal matrix: diagonal `b[0..N]`, off-diagonal
/// `a[1..N]`; `a[0]` is unused and kept so that indices match the text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiCoefficients {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub flavor: JacobiFlavor,
}

impl JacobiCoefficients {
    pub fn new(a: Vec<f64>, b: Vec<f64>, flavor: JacobiFlavor) -> Result<Self> {
        if a.len() != b.len() || b.is_empty() {
            return Err(Error::Structural(format!("{} off-diagonal and {} diagonal entries", a.len(), b.len())));
        }
        if let Some(m) = (1..a.len()).find(|&m| a[m] == 0.0) {
            return Err(Error::Structural(format!("a_{m} = 0: the matrix is reducible")));
        }
        Ok(Self { a, b, flavor })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

/// Givens data of `J = QR`: diagonal `r_k` and superdiagonal `s_k` of `R`,
/// and the trailing entries `a*_k`, `b*_k` fed into each rotation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QRState {
    pub rdiag: Vec<f64>,
    pub sdiag: Vec<f64>,
    pub astar: Vec<f64>,
    pub bstar: Vec<f64>,
}

/// `a_m = −√β̃_m`, `b_m = α̃_m` for `m = 0..=K`.
pub fn krawtchouk_jacobi(params: &EnsembleParams) -> JacobiCoefficients {
    let top = params.big_k();
    let a = (0..=top).map(|m| if m == 0 { 0.0 } else { -beta_tilde_f64(m, params).sqrt() }).collect();
    let b = (0..=top).map(|m| alpha_tilde_f64(m, params)).collect();
    JacobiCoefficients { a, b, flavor: JacobiFlavor::KrawtchoukOrthonormal }
}

/// Runs the Givens rotations over an `N × N` Jacobi matrix.
///
/// `r_k` is produced for `k ≤ N−2` and `s_k` for `k ≤ N−1`: together these fix
/// the leading `(N−1) × (N−1)` block of `RQ`, which does not see the truncation.
pub fn qr_factor(j: &JacobiCoefficients) -> Result<QRState> {
    let n = j.len();
    if n < 2 {
        return Err(Error::Domain(format!("QR step needs at least a 2 × 2 matrix, got {n}")));
    }
    let (a, b) = (&j.a, &j.b);
    let mut st = QRState { rdiag: vec![0.0; n - 1], sdiag: vec![0.0; n], astar: vec![0.0; n], bstar: vec![0.0; n] };
    st.bstar[0] = b[0];
    st.astar[1] = a[1];
    for k in 0..n {
        if k >= 2 {
            st.astar[k] = a[k] * st.bstar[k - 2] / st.rdiag[k - 2];
        }
        if k >= 1 {
            st.bstar[k] = (st.bstar[k - 1] * b[k] - st.astar[k] * a[k]) / st.rdiag[k - 1];
            st.sdiag[k] = (st.astar[k] * st.bstar[k - 1] + a[k] * b[k]) / st.rdiag[k - 1];
        }
        if k + 1 < n {
            let r = a[k + 1].hypot(st.bstar[k]);
            if r == 0.0 || !r.is_finite() {
                return Err(Error::Breakdown(format!("r_{k} = {r}")));
            }
            st.rdiag[k] = r;
        }
    }
    Ok(st)
}

/// One QR step `J = QR ↦ RQ`, returning the leading `N−1` rows:
/// `â_k = a_k r_k / r_{k−1}`, `b̂_k = b*_{k−1} b*_k / r_{k−1} + a_{k+1} s_{k+1} / r_k`
/// with `b̂_0 = b_0 + a_1 s_1 / r_0`.
pub fn qr_step(j: &JacobiCoefficients) -> Result<JacobiCoefficients> {
    let st = qr_factor(j)?;
    let size = j.len() - 1;
    let (a, r, s, bs) = (&j.a, &st.rdiag, &st.sdiag, &st.bstar);
    let mut a_hat = vec![0.0; size];
    let mut b_hat = vec![0.0; size];
    for k in 0..size {
        let head = if k == 0 { j.b[0] } else { bs[k - 1] * bs[k] / r[k - 1] };
        b_hat[k] = head + a[k + 1] * s[k + 1] / r[k];
        if k >= 1 {
            a_hat[k] = a[k] * r[k] / r[k - 1];
        }
    }
    let flavor = match j.flavor {
        JacobiFlavor::KrawtchoukOrthonormal => JacobiFlavor::SymplecticTransformed,
        f => f,
    };
    Ok(JacobiCoefficients { a: a_hat, b: b_hat, flavor })
}

/// The QR step at `p = 1/2` in exact arithmetic on squares.
///
/// All `b` vanish, so the recursions close on `a_k²`, `a*_k²`, `b*_k²` and
/// `r_k²`, which are rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquaredQR {
    /// `a_k²` for `k = 0..=K` (`a_0² = 0`).
    pub a2: Vec<BigRational>,
    /// `r_k²` for `k = 0..K`.
    pub r2: Vec<BigRational>,
    /// `â_k²` for `k = 1..K`, with a zero at index 0.
    pub a_hat2: Vec<BigRational>,
}

pub fn qr_step_squared_exact(params: &EnsembleParams) -> Result<SquaredQR> {
    params.require_symmetric("the exact QR step")?;
    let top = params.big_k();
    let a2: Vec<BigRational> = (0..=top).map(|m| beta_tilde(m, params)).collect();
    let n = top + 1;
    let mut r2 = vec![BigRational::zero(); n - 1];
    let mut astar2 = vec![BigRational::zero(); n];
    let mut bstar2 = vec![BigRational::zero(); n];
    astar2[1] = a2[1].clone();
    for k in 0..n - 1 {
        if k >= 2 {
            astar2[k] = &a2[k] * &bstar2[k - 2] / &r2[k - 2];
        }
        if k >= 1 {
            bstar2[k] = &astar2[k] * &a2[k] / &r2[k - 1];
        }
        r2[k] = &a2[k + 1] + &bstar2[k];
        if r2[k].is_zero() {
            return Err(Error::Breakdown(format!("r_{k} = 0")));
        }
    }
    let mut a_hat2 = vec![BigRational::zero(); n - 1];
    for k in 1..n - 1 {
        a_hat2[k] = &a2[k] * &r2[k] / &r2[k - 1];
    }
    Ok(SquaredQR { a2, r2, a_hat2 })
}

/// `α_m`, `β_m` of `x G_m = G_{m+1} + α_m G_m + β_m G_{m−1}` by exact
/// coefficient matching, for `m = 0..=max_m`; `β_0 = 0`.
pub fn monic_ttr(max_m: usize, params: &EnsembleParams) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    if max_m + 3 > params.big_k() {
        return Err(Error::Domain(format!("need G_{} but K = {}", max_m + 1, params.big_k())));
    }
    let g = symplectic_table(max_m + 1, params)?;
    let mut alpha = Vec::with_capacity(max_m + 1);
    let mut beta = Vec::with_capacity(max_m + 1);
    for m in 0..=max_m {
        let mut rest = ops::shift_up(g[m].coeffs());
        ops::add_scaled(&mut rest, g[m + 1].coeffs(), &-BigRational::one());
        let a = rest.get(m).cloned().unwrap_or_else(BigRational::zero);
        ops::add_scaled(&mut rest, g[m].coeffs(), &-a.clone());
        let b = match m {
            0 => BigRational::zero(),
            _ => rest.get(m - 1).cloned().unwrap_or_else(BigRational::zero),
        };
        if m > 0 {
            ops::add_scaled(&mut rest, g[m - 1].coeffs(), &-b.clone());
        }
        if let Some(c) = rest.iter().find(|c| !c.is_zero()) {
            return Err(Error::Consistency(format!("x G_{m} leaves residual coefficient {c}")));
        }
        alpha.push(a);
        beta.push(b);
    }
    Ok((alpha, beta))
}

/// `(√β_m, α_m)` read off the monic `G_m`, for comparison with [`qr_step`].
pub fn ttr_from_polynomials(max_m: usize, params: &EnsembleParams) -> Result<JacobiCoefficients> {
    let (alpha, beta) = monic_ttr(max_m, params)?;
    let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
    Ok(JacobiCoefficients {
        a: beta.iter().map(|b| f(b).sqrt()).collect(),
        b: alpha.iter().map(f).collect(),
        flavor: JacobiFlavor::SymplecticTransformed,
    })
}

fn require_index(m: usize, params: &EnsembleParams) -> Result<()> {
    params.require_symmetric("the closed forms for r")?;
    if 2 * m + 2 > params.big_k() {
        return Err(Error::Domain(format!("r_{} needs a_{} but K = {}", 2 * m + 1, 2 * m + 2, params.big_k())));
    }
    Ok(())
}

/// `r²_{2m+1} / a²_{2m+2}` as the convergent `R_m / S_m` of the three-term
/// recurrences with `A_k = −a²_{2m+3−2k}/a²_{2m+4−2k}`, `B_k = 1 + a²_{2m+1−2k}/a²_{2m+2−2k}`.
pub fn continued_fraction_r_exact(m: usize, params: &EnsembleParams) -> Result<BigRational> {
    require_index(m, params)?;
    let a2 = |i: usize| beta_tilde(i, params);
    let b_k = |k: usize| BigRational::one() + a2(2 * m + 1 - 2 * k) / a2(2 * m + 2 - 2 * k);
    let a_k = |k: usize| -a2(2 * m + 3 - 2 * k) / a2(2 * m + 4 - 2 * k);
    let (mut r_prev, mut s_prev) = (BigRational::one(), BigRational::zero());
    let (mut r, mut s) = (b_k(0), BigRational::one());
    for k in 1..=m {
        let (a, b) = (a_k(k), b_k(k));
        let r_next = &b * &r + &a * &r_prev;
        let s_next = &b * &s + &a * &s_prev;
        r_prev = std::mem::replace(&mut r, r_next);
        s_prev = std::mem::replace(&mut s, s_next);
    }
    if s.is_zero() {
        return Err(Error::Breakdown(format!("S_{m} = 0 in the continued fraction")));
    }
    Ok(r / s)
}

/// Floating version of [`continued_fraction_r_exact`] for large `K`; the
/// pair `(R_k, S_k)` is renormalised each step.
pub fn continued_fraction_r(m: usize, params: &EnsembleParams) -> Result<f64> {
    require_index(m, params)?;
    let a2 = |i: usize| beta_tilde_f64(i, params);
    let b_k = |k: usize| 1.0 + a2(2 * m + 1 - 2 * k) / a2(2 * m + 2 - 2 * k);
    let a_k = |k: usize| -a2(2 * m + 3 - 2 * k) / a2(2 * m + 4 - 2 * k);
    let (mut r_prev, mut s_prev) = (1.0, 0.0);
    let (mut r, mut s) = (b_k(0), 1.0);
    for k in 1..=m {
        let (a, b) = (a_k(k), b_k(k));
        let r_next = b * r + a * r_prev;
        let s_next = b * s + a * s_prev;
        let scale = r_next.abs().max(s_next.abs());
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::Breakdown(format!("continued fraction degenerates at step {k}")));
        }
        r_prev = r / scale;
        s_prev = s / scale;
        r = r_next / scale;
        s = s_next / scale;
    }
    if s == 0.0 {
        return Err(Error::Breakdown(format!("S_{m} = 0 in the continued fraction")));
    }
    Ok(r / s)
}

/// `r²_{2m+1} = a²_{2m+2} + ∏_{j≤m+1} a²_{2j−1} / Σ_{ℓ=−1}^{m−1} ∏_{k=0}^{ℓ} a²_{2m−2k} ∏_{j=1}^{m−ℓ−1} a²_{2j−1}`.
pub fn r_dir2(m: usize, params: &EnsembleParams) -> Result<BigRational> {
    require_index(m, params)?;
    let a2 = |i: usize| beta_tilde(i, params);
    let odd = |top: usize| (1..=top).fold(BigRational::one(), |acc, j| acc * a2(2 * j - 1));
    let mut sum = BigRational::zero();
    for l in -1..m as i64 {
        let even = (0..=l).fold(BigRational::one(), |acc, k| acc * a2(2 * m - 2 * k as usize));
        sum += even * odd(m - (l + 1) as usize);
    }
    Ok(a2(2 * m + 2) + odd(m + 1) / sum)
}

/// `â_k²` for `k = 1..K` from `r²_{2m} = a²_{2m+1}`, `â²_{2m} = a²_{2m} a²_{2m+1} / r²_{2m−1}`
/// and `â²_{2m+1} = r²_{2m+1}`; index 0 holds zero.
pub fn closed_form_a_hat2(params: &EnsembleParams) -> Result<Vec<BigRational>> {
    params.require_symmetric("the closed forms for â")?;
    let top = params.big_k();
    let odd_r2: Vec<BigRational> = (0..top / 2).map(|m| r_dir2(m, params)).collect::<Result<_>>()?;
    let mut out = vec![BigRational::zero(); top];
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = if k % 2 == 1 {
            odd_r2[k / 2].clone()
        } else {
            beta_tilde(k, params) * beta_tilde(k + 1, params) / &odd_r2[k / 2 - 1]
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::norms::norm_sequence;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn f(x: &BigRational) -> f64 {
        x.to_f64().unwrap()
    }

    #[test]
    fn symmetric_start() {
        let params = EnsembleParams::new(10, 10).unwrap();
        let j = krawtchouk_jacobi(&params);
        let h = params.h_f64();
        let k = params.big_k() as f64;
        assert!((j.a[1] + 1.0 / (2.0 * h * k.sqrt())).abs() < 1e-15);
        let st = qr_factor(&j).unwrap();
        assert!((st.rdiag[0].powi(2) - j.a[1].powi(2)).abs() < 1e-14);
        assert!((st.rdiag[1].powi(2) - j.a[1].powi(2) - j.a[2].powi(2)).abs() < 1e-13);
        let hat = qr_step(&j).unwrap();
        assert_eq!(hat.flavor, JacobiFlavor::SymplecticTransformed);
        assert_eq!(hat.len(), params.big_k());
        assert!(hat.b.iter().all(|b| b.abs() < 1e-12));
    }

    #[test]
    fn qr_matches_polynomial_ttr() {
        for p in [q(1, 2), q(1, 3), q(5, 7)] {
            let params = EnsembleParams::with_p(3, 4, p).unwrap();
            let big_k = params.big_k();
            let hat = qr_step(&krawtchouk_jacobi(&params)).unwrap();
            let (alpha, beta) = monic_ttr(big_k - 3, &params).unwrap();
            for m in 0..=big_k - 3 {
                assert!((hat.b[m] - f(&alpha[m])).abs() < 1e-11, "α_{m}: {} vs {}", hat.b[m], alpha[m]);
                assert!((hat.a[m].powi(2) - f(&beta[m])).abs() < 1e-11 * f(&beta[m]).max(1.0), "β_{m}");
            }
            let seq = norm_sequence(&params, big_k - 2).unwrap();
            let m = big_k - 2;
            assert!((hat.b[m] - f(&seq.alpha[m])).abs() < 1e-10);
            assert!((hat.a[m].powi(2) - f(&seq.beta[m])).abs() < 1e-10 * f(&seq.beta[m]));
        }
    }

    #[test]
    fn beta2_at_k8() {
        let params = EnsembleParams::new(2, 2).unwrap();
        let (_, beta) = monic_ttr(2, &params).unwrap();
        let sq = qr_step_squared_exact(&params).unwrap();
        assert_eq!(beta[2], sq.a_hat2[2]);
        let hat = qr_step(&krawtchouk_jacobi(&params)).unwrap();
        assert!((hat.a[2].powi(2) - f(&beta[2])).abs() < 1e-12);
        let from_poly = ttr_from_polynomials(2, &params).unwrap();
        assert!((from_poly.a[2] - hat.a[2].abs()).abs() < 1e-12);
        assert!(from_poly.b.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn exact_squares_match_closed_forms() {
        let params = EnsembleParams::new(4, 6).unwrap();
        let sq = qr_step_squared_exact(&params).unwrap();
        for m in 0..params.big_k() / 2 {
            assert_eq!(sq.r2[2 * m], sq.a2[2 * m + 1]);
            assert_eq!(sq.r2[2 * m + 1], r_dir2(m, &params).unwrap());
        }
        assert_eq!(sq.r2[1], &sq.a2[1] + &sq.a2[2]);
        assert_eq!(closed_form_a_hat2(&params).unwrap(), sq.a_hat2);
        let seq = norm_sequence(&params, params.big_k() - 2).unwrap();
        assert_eq!(seq.beta[1..], sq.a_hat2[1..params.big_k() - 1]);
    }

    #[test]
    fn continued_fraction_first_terms() {
        let params = EnsembleParams::new(3, 5).unwrap();
        let a2 = |i| beta_tilde(i, &params);
        assert_eq!(continued_fraction_r_exact(0, &params).unwrap(), q(1, 1) + a2(1) / a2(2));
        for m in 0..params.big_k() / 2 {
            let cf = continued_fraction_r_exact(m, &params).unwrap();
            assert_eq!(cf * a2(2 * m + 2), r_dir2(m, &params).unwrap(), "m={m}");
        }
    }

    #[test]
    fn triple_check_k40() {
        let params = EnsembleParams::new(10, 10).unwrap();
        assert_eq!(params.h(), q(1, 4));
        let m = 3;
        let a2 = beta_tilde_f64(2 * m + 2, &params);
        let cf = continued_fraction_r(m, &params).unwrap() * a2;
        let dir = f(&r_dir2(m, &params).unwrap());
        let qr = qr_factor(&krawtchouk_jacobi(&params)).unwrap().rdiag[2 * m + 1].powi(2);
        assert!((cf - dir).abs() < 1e-12 * dir && (qr - dir).abs() < 1e-12 * dir, "{cf} {dir} {qr}");
    }

    #[test]
    fn domain_and_structure_errors() {
        let skew = EnsembleParams::with_p(2, 2, q(1, 3)).unwrap();
        assert!(qr_step_squared_exact(&skew).is_err());
        assert!(continued_fraction_r(0, &skew).is_err());
        let params = EnsembleParams::new(2, 2).unwrap();
        assert!(matches!(monic_ttr(6, &params), Err(Error::Domain(_))));
        assert!(r_dir2(4, &params).is_err());
        assert!(JacobiCoefficients::new(vec![0.0, 0.0], vec![1.0, 1.0], JacobiFlavor::KrawtchoukOrthonormal).is_err());
    }

    /// `r_k ≥ |a_{k+1}|`, so only a reducible matrix can break down.
    #[test]
    fn reducible_matrix_breaks_down() {
        let reducible = JacobiCoefficients {
            a: vec![0.0, 0.0, 1.0],
            b: vec![0.0; 3],
            flavor: JacobiFlavor::KrawtchoukOrthonormal,
        };
        assert!(matches!(qr_step(&reducible), Err(Error::Breakdown(_))));
    }
}
