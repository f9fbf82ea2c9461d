use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::orthopoly::christoffel::{christoffel_coefficients, christoffel_coefficients_f64, symplectic_table};
use crate::orthopoly::krawtchouk::{
    alpha_tilde, alpha_tilde_f64, beta_tilde, beta_tilde_f64, krawtchouk_norm, lattice, lattice_point, lattice_weight, ln_krawtchouk_norm,
};
use crate::params::EnsembleParams;

/// Norms `Λ_m = Σ G_m² u² W` and monic recurrence coefficients of `G_m`,
/// with the Krawtchouk norms `L_m` and Christoffel coefficients they come from.
///
/// `s[m]` is `S_m`, the coefficient of `K̃_m` in `u² G_m`; `c1[m]` the
/// coefficient of `K̃_{m+1}` (zero at `p = 1/2`). `beta[0]` is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormSequence {
    pub lambda: Vec<BigRational>,
    /// `L_0, …, L_{max_m+2}`.
    pub l: Vec<BigRational>,
    pub s: Vec<BigRational>,
    pub c1: Vec<BigRational>,
    pub alpha: Vec<BigRational>,
    pub beta: Vec<BigRational>,
    alpha_tilde0: BigRational,
}

fn mismatch(name: &str, m: usize, lhs: &BigRational, rhs: &BigRational) -> Result<()> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::Consistency(format!("{name} fails at m = {m}: {lhs} ≠ {rhs}")))
    }
}

impl NormSequence {
    pub fn max_m(&self) -> usize {
        self.lambda.len() - 1
    }

    /// `Λ_{m−1}`, `β_{m}`, `α_{m−1}` and `c1_{m−1}` with zero below the range.
    fn below(&self, m: usize) -> (BigRational, BigRational, BigRational) {
        match m.checked_sub(1) {
            Some(j) => (self.lambda[j].clone(), self.alpha[j].clone(), self.c1[j].clone()),
            None => (BigRational::zero(), BigRational::zero(), BigRational::zero()),
        }
    }

    /// `S_m L_m = β_m Λ_{m−1}`.
    pub fn check_rec1(&self, m: usize) -> Result<()> {
        let (lam_prev, _, _) = self.below(m);
        let rhs = if m == 0 { BigRational::zero() } else { &self.beta[m] * lam_prev };
        let lhs = if m == 0 { BigRational::zero() } else { &self.s[m] * &self.l[m] };
        mismatch("rec1", m, &lhs, &rhs)
    }

    /// `L_{m+2} + c1_m² L_{m+1} + S_m² L_m = Λ_{m+1} + α_m² Λ_m + β_m² Λ_{m−1}`.
    pub fn check_rec2(&self, m: usize) -> Result<()> {
        if m + 1 > self.max_m() {
            return Err(Error::Domain(format!("rec2 at m = {m} needs Λ_{}", m + 1)));
        }
        let (lam_prev, _, _) = self.below(m);
        let (s, c1, a, b) = (&self.s[m], &self.c1[m], &self.alpha[m], &self.beta[m]);
        let lhs = &self.l[m + 2] + c1 * c1 * &self.l[m + 1] + s * s * &self.l[m];
        let rhs = &self.lambda[m + 1] + a * a * &self.lambda[m] + b * b * lam_prev;
        mismatch("rec2", m, &lhs, &rhs)
    }

    /// `c1_m L_{m+1} + S_m c1_{m−1} L_m = α_m Λ_m + β_m α_{m−1} Λ_{m−1}`; at
    /// `m = 0` the second term on the left is `S_0 α̃_0 L_0` instead.
    pub fn check_rec3(&self, m: usize) -> Result<()> {
        let (lam_prev, alpha_prev, c1_prev) = self.below(m);
        let low = if m == 0 { self.alpha_tilde0.clone() } else { c1_prev };
        let lhs = &self.c1[m] * &self.l[m + 1] + &self.s[m] * low * &self.l[m];
        let rhs = &self.alpha[m] * &self.lambda[m] + &self.beta[m] * alpha_prev * lam_prev;
        mismatch("rec3", m, &lhs, &rhs)
    }

    /// `L_{m+2} + S_m² L_m = S_{m+2} L_{m+2} / β_{m+2} + β_m S_m L_m`, for `p = 1/2`.
    pub fn check_rec4(&self, m: usize) -> Result<()> {
        if m + 2 > self.max_m() {
            return Err(Error::Domain(format!("rec4 at m = {m} needs β_{}", m + 2)));
        }
        if !self.c1.iter().all(Zero::is_zero) {
            return Err(Error::Domain("rec4 holds only for a symmetric weight".into()));
        }
        let (s, l) = (&self.s, &self.l);
        let lhs = &l[m + 2] + &s[m] * &s[m] * &l[m];
        let rhs = &s[m + 2] * &l[m + 2] / &self.beta[m + 2] + &self.beta[m] * &s[m] * &l[m];
        mismatch("rec4", m, &lhs, &rhs)
    }

    /// Every recurrence that applies inside the computed range.
    pub fn verify(&self) -> Result<()> {
        let top = self.max_m();
        for m in 0..=top {
            self.check_rec1(m)?;
            self.check_rec3(m)?;
            if m < top {
                self.check_rec2(m)?;
            }
            if m + 2 <= top && self.c1.iter().all(Zero::is_zero) {
                self.check_rec4(m)?;
            }
        }
        Ok(())
    }
}

/// Computes `Λ_m, α_m, β_m` for `m ≤ max_m` from the recurrences and checks them.
///
/// rec1 gives `Λ_m = S_m L_m` and `β_m = Λ_m / Λ_{m−1}`; rec3 then gives
/// `α_m = c1_m β̃_{m+1} / S_m + c1_{m−1} − α_{m−1}`, started from
/// `α_0 = c1_0 β̃_1 / S_0 + α̃_0`.
pub fn norm_sequence(params: &EnsembleParams, max_m: usize) -> Result<NormSequence> {
    let cc = christoffel_coefficients(max_m, params)?;
    let l: Vec<BigRational> = (0..=max_m + 2).map(|m| krawtchouk_norm(m, params)).collect();
    let s: Vec<BigRational> = cc.iter().map(|c| c.c0.clone()).collect();
    let c1: Vec<BigRational> = cc.iter().map(|c| c.c1.clone()).collect();
    let mut lambda = Vec::with_capacity(max_m + 1);
    let mut alpha: Vec<BigRational> = Vec::with_capacity(max_m + 1);
    let mut beta = Vec::with_capacity(max_m + 1);
    for m in 0..=max_m {
        if s[m].is_zero() {
            return Err(Error::Degenerate(format!("S_{m} = 0")));
        }
        let lam = &s[m] * &l[m];
        if !lam.is_positive() {
            return Err(Error::Consistency(format!("Λ_{m} = {lam} is not positive")));
        }
        beta.push(if m == 0 { BigRational::zero() } else { &lam / &lambda[m - 1] });
        let mut a = &c1[m] * beta_tilde(m + 1, params) / &s[m];
        a += match m {
            0 => alpha_tilde(0, params),
            _ => &c1[m - 1] - &alpha[m - 1],
        };
        alpha.push(a);
        lambda.push(lam);
    }
    let seq = NormSequence { lambda, l, s, c1, alpha, beta, alpha_tilde0: alpha_tilde(0, params) };
    seq.verify()?;
    Ok(seq)
}

/// `β_0, …, β_{max_m}` from rec4 alone, starting from `β_0 = 0` and
/// `β_1 = S_1 L_1 / Λ_0`; requires `p = 1/2`.
pub fn beta_from_rec4(params: &EnsembleParams, max_m: usize) -> Result<Vec<BigRational>> {
    params.require_symmetric("rec4")?;
    let cc = christoffel_coefficients(max_m, params)?;
    let s: Vec<BigRational> = cc.into_iter().map(|c| c.c0).collect();
    let l: Vec<BigRational> = (0..=max_m + 2).map(|m| krawtchouk_norm(m, params)).collect();
    let mut beta = vec![BigRational::zero(); max_m + 1];
    if max_m >= 1 {
        beta[1] = &s[1] * &l[1] / (&s[0] * &l[0]);
    }
    for m in 0..max_m.saturating_sub(1) {
        let den = &l[m + 2] + &s[m] * &s[m] * &l[m] - &beta[m] * &s[m] * &l[m];
        if den.is_zero() {
            return Err(Error::Degenerate(format!("rec4 denominator vanishes at m = {m}")));
        }
        beta[m + 2] = &s[m + 2] * &l[m + 2] / den;
    }
    Ok(beta)
}

/// `Σ_i G_m(i/n)² (i/n)² W(i/n)` by direct summation over the lattice.
pub fn direct_norm(m: usize, params: &EnsembleParams) -> Result<BigRational> {
    let g = symplectic_table(m, params)?.pop().expect("table is nonempty");
    let mut sum = BigRational::zero();
    for i in lattice(params) {
        let u = lattice_point(i, params);
        let v = g.eval(&u);
        sum += &v * &v * &u * &u * lattice_weight(i, params)?;
    }
    Ok(sum)
}

/// Floating counterpart of [`NormSequence`] for large `K`; `Λ_m` is kept as a logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatNorms {
    pub ln_lambda: Vec<f64>,
    pub s: Vec<f64>,
    pub c1: Vec<f64>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

pub fn norm_sequence_f64(params: &EnsembleParams, max_m: usize) -> Result<FloatNorms> {
    let cc = christoffel_coefficients_f64(max_m, params)?;
    let (c1, s): (Vec<f64>, Vec<f64>) = cc.into_iter().unzip();
    let mut out = FloatNorms {
        ln_lambda: Vec::with_capacity(max_m + 1),
        s,
        c1,
        alpha: Vec::with_capacity(max_m + 1),
        beta: Vec::with_capacity(max_m + 1),
    };
    for m in 0..=max_m {
        let s = out.s[m];
        if s <= 0.0 {
            return Err(Error::Degenerate(format!("S_{m} = {s} is not positive")));
        }
        out.ln_lambda.push(s.ln() + ln_krawtchouk_norm(m, params));
        out.beta.push(if m == 0 { 0.0 } else { s * beta_tilde_f64(m, params) / out.s[m - 1] });
        let mut a = out.c1[m] * beta_tilde_f64(m + 1, params) / s;
        a += match m {
            0 => alpha_tilde_f64(0, params),
            _ => out.c1[m - 1] - out.alpha[m - 1],
        };
        out.alpha.push(a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::krawtchouk::second_moment;
    use num_traits::ToPrimitive;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn lambda0_is_second_moment() {
        for (n, k) in [(2, 2), (3, 5), (1, 7)] {
            let params = EnsembleParams::new(n, k).unwrap();
            let seq = norm_sequence(&params, 0).unwrap();
            assert_eq!(seq.lambda[0], second_moment(&params));
            assert_eq!(seq.lambda[0], q(2 * (n + k) as i64, 4 * (n * n) as i64));
        }
    }

    #[test]
    fn symmetric_weight_has_zero_alpha() {
        let params = EnsembleParams::new(2, 2).unwrap();
        let seq = norm_sequence(&params, 6).unwrap();
        assert!(seq.alpha.iter().all(Zero::is_zero));
        assert!(seq.c1.iter().all(Zero::is_zero));
    }

    #[test]
    fn rec1_at_m2_k8_n2_by_direct_sums() {
        let params = EnsembleParams::new(2, 2).unwrap();
        let seq = norm_sequence(&params, 2).unwrap();
        let lam1 = direct_norm(1, &params).unwrap();
        let lam2 = direct_norm(2, &params).unwrap();
        assert_eq!(seq.lambda[1], lam1);
        assert_eq!(seq.lambda[2], lam2);
        let beta2 = &lam2 / &lam1;
        assert_eq!(&seq.s[2] * &seq.l[2], beta2 * lam1);
    }

    #[test]
    fn recurrence_norms_match_direct_sums() {
        for p in [q(1, 2), q(1, 3), q(3, 4)] {
            let params = EnsembleParams::with_p(3, 3, p).unwrap();
            let seq = norm_sequence(&params, 8).unwrap();
            for m in 0..=8 {
                assert_eq!(seq.lambda[m], direct_norm(m, &params).unwrap(), "m={m}");
            }
        }
    }

    #[test]
    fn alpha_matches_subleading_coefficients() {
        let params = EnsembleParams::with_p(3, 3, q(1, 3)).unwrap();
        let seq = norm_sequence(&params, 6).unwrap();
        let g = symplectic_table(7, &params).unwrap();
        for m in 0..=6usize {
            let sub = m.checked_sub(1).map_or_else(|| q(0, 1), |j| g[m].coeff(j));
            assert_eq!(seq.alpha[m], sub - g[m + 1].coeff(m));
        }
        assert_eq!(seq.alpha[0], q(-52, 45));
    }

    #[test]
    fn rec4_route_agrees() {
        let params = EnsembleParams::new(3, 5).unwrap();
        let seq = norm_sequence(&params, 12).unwrap();
        assert_eq!(beta_from_rec4(&params, 12).unwrap(), seq.beta);
        let skew = EnsembleParams::with_p(3, 5, q(1, 3)).unwrap();
        assert!(beta_from_rec4(&skew, 4).is_err());
    }

    #[test]
    fn broken_sequence_is_reported() {
        let params = EnsembleParams::new(2, 3).unwrap();
        let mut seq = norm_sequence(&params, 4).unwrap();
        seq.beta[3] += q(1, 1000);
        assert!(matches!(seq.check_rec1(3), Err(Error::Consistency(_))));
        assert!(matches!(seq.verify(), Err(Error::Consistency(_))));
    }

    #[test]
    fn float_path_matches_exact() {
        for p in [q(1, 2), q(2, 5)] {
            let params = EnsembleParams::with_p(5, 7, p).unwrap();
            let exact = norm_sequence(&params, 20).unwrap();
            let float = norm_sequence_f64(&params, 20).unwrap();
            for m in 0..=20 {
                let lam = exact.lambda[m].to_f64().unwrap().ln();
                assert!((float.ln_lambda[m] - lam).abs() < 1e-10, "m={m}");
                let b = exact.beta[m].to_f64().unwrap();
                assert!((float.beta[m] - b).abs() <= 1e-10 * b.abs().max(1.0), "m={m}");
                let a = exact.alpha[m].to_f64().unwrap();
                assert!((float.alpha[m] - a).abs() <= 1e-9, "m={m}: {} vs {a}", float.alpha[m]);
            }
        }
    }
}
