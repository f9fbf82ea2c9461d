use std::f64::consts::{LN_2, PI};

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::asymptotics::saddle::{phase_data, SaddleData};
use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// A real number stored as `sign · exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogReal {
    pub ln_abs: f64,
    pub sign: f64,
}

impl LogReal {
    pub fn to_f64(self) -> f64 {
        self.sign * self.ln_abs.exp()
    }

    /// `self / other` without leaving log space until the end.
    pub fn ratio(self, other: LogReal) -> f64 {
        self.sign * other.sign * (self.ln_abs - other.ln_abs).exp()
    }
}

/// Asymptotic value `exp(ln_envelope) · oscillation`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Asymptotic {
    pub ln_envelope: f64,
    pub oscillation: f64,
    /// Size of the oscillating factor relative to its maximum; small values sit near a zero.
    pub sine: f64,
    pub g: f64,
    pub mu: f64,
}

impl Asymptotic {
    pub fn value(&self) -> LogReal {
        LogReal { ln_abs: self.ln_envelope + self.oscillation.abs().ln(), sign: self.oscillation.signum() }
    }

    pub fn to_f64(&self) -> f64 {
        self.ln_envelope.exp() * self.oscillation
    }

    /// `|approx − exact| / |exact|`.
    pub fn relative_error(&self, exact: LogReal) -> f64 {
        let r = self.ln_envelope - exact.ln_abs;
        (r.exp() * self.oscillation * exact.sign - 1.0).abs()
    }

    /// `|approx − exact|` in units of the envelope; meaningful at zeros of the exact value.
    pub fn envelope_error(&self, exact: LogReal) -> f64 {
        let e = exact.sign * (exact.ln_abs - self.ln_envelope).exp();
        (self.oscillation - e).abs()
    }
}

/// `g = m/K` and `μ = ½ − j/K` for lattice index `j` and degree `m`.
pub fn scaling_variables(j: f64, m: usize, params: &EnsembleParams) -> (f64, f64) {
    let k = params.big_k() as f64;
    (m as f64 / k, 0.5 - j / k)
}

/// `ln` of the common factor
/// `√(2/(πK)) √(1−g)^{m′−K−½} √(1−μ)^{K/2+j+½} / (√g^{m′+½} √μ^{j−K/2−½} D^{¼}) · 2^{K/2−m′}`
/// at degree `m′` and fixed `(g, μ)`.
fn ln_power_factor(j: f64, m_deg: f64, s: &SaddleData, big_k: f64) -> f64 {
    let (g, mu) = (s.g, s.mu);
    let d = s.sqrt_d() * s.sqrt_d();
    0.5 * (2.0 / (PI * big_k)).ln() + 0.5 * (m_deg - big_k - 0.5) * (1.0 - g).ln()
        + 0.5 * (big_k / 2.0 + j + 0.5) * (1.0 - mu).ln()
        - 0.5 * (m_deg + 0.5) * g.ln()
        - 0.5 * (j - big_k / 2.0 - 0.5) * mu.ln()
        - (m_deg - big_k / 2.0) * LN_2
        - 0.25 * d.ln()
}

/// Saddle-point approximation of the monic Krawtchouk polynomial `K̃_m(j/n)` in the
/// oscillatory region:
/// `(−1)^m m!/n^m · (power factor) · sin(θ_SDP − δ̂(j; m))`.
pub fn krawtchouk_asymptotic_parts(j: i64, m: usize, params: &EnsembleParams) -> Result<Asymptotic> {
    let (g, mu) = scaling_variables(j as f64, m, params);
    let s = phase_data(mu, g, params)?;
    let big_k = params.big_k() as f64;
    let mf = m as f64;
    let ln_envelope =
        ln_gamma(mf + 1.0) - mf * (params.n() as f64).ln() + ln_power_factor(j as f64, mf, &s, big_k);
    let sine = (s.theta_sdp - s.delta_hat(mf, big_k)).sin();
    let parity = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Asymptotic { ln_envelope, oscillation: parity * sine, sine: sine.abs(), g, mu })
}

pub fn krawtchouk_asymptotic(j: i64, m: usize, params: &EnsembleParams) -> Result<f64> {
    krawtchouk_asymptotic_parts(j, m, params).map(|a| a.to_f64())
}

/// Relative weight `(K − m)/(m + 2) · g/(1 − g)` of the second sine in the `G_m` asymptotic.
pub fn symplectic_weight(m: usize, big_k: usize) -> f64 {
    let g = m as f64 / big_k as f64;
    (big_k - m) as f64 / (m + 2) as f64 * g / (1.0 - g)
}

/// Saddle-point approximation of the symplectic polynomial `G_m(i/n)`, `m` even:
/// `(m+2)!/(i² n^m) · (power factor at m+2) ·
/// [sin(θ_SDP − δ̂(i; m+2)) + (K−m)/(m+2) · g/(1−g) · sin(θ_SDP − δ̂(i; m))]`,
/// with `θ_SDP` and all angles at `g = m/K`.
pub fn symplectic_asymptotic_parts(i: i64, m: usize, params: &EnsembleParams) -> Result<Asymptotic> {
    if i == 0 {
        return Err(Error::Domain("the G_m asymptotic carries 1/i² and needs i ≠ 0".into()));
    }
    if m % 2 != 0 {
        return Err(Error::Domain(format!("the G_m asymptotic is for even m, got {m}")));
    }
    let (g, mu) = scaling_variables(i as f64, m, params);
    let s = phase_data(mu, g, params)?;
    let big_k = params.big_k() as f64;
    let mf = m as f64;
    let ln_envelope = ln_gamma(mf + 3.0) - 2.0 * (i.unsigned_abs() as f64).ln() - mf * (params.n() as f64).ln()
        + ln_power_factor(i as f64, mf + 2.0, &s, big_k);
    let w = symplectic_weight(m, params.big_k());
    let oscillation =
        (s.theta_sdp - s.delta_hat(mf + 2.0, big_k)).sin() + w * (s.theta_sdp - s.delta_hat(mf, big_k)).sin();
    Ok(Asymptotic { ln_envelope, oscillation, sine: oscillation.abs() / (1.0 + w), g, mu })
}

pub fn symplectic_asymptotic(i: i64, m: usize, params: &EnsembleParams) -> Result<f64> {
    symplectic_asymptotic_parts(i, m, params).map(|a| a.to_f64())
}

const RESCALE: f64 = 1e100;

/// `n^j K̃_j(u)` for `j = 0..=m` by the three-term recurrence in the scaled variable
/// `x = n·u`, kept as mantissas with a shared log scale.
fn scaled_recurrence(x: f64, m: usize, params: &EnsembleParams) -> Vec<LogReal> {
    let (p, big_k) = (params.p_f64(), params.big_k() as f64);
    let q = 1.0 - p;
    let mut out = Vec::with_capacity(m + 1);
    let (mut prev, mut cur, mut ln_scale) = (0.0f64, 1.0f64, 0.0f64);
    let push = |out: &mut Vec<LogReal>, v: f64, ln_scale: f64| {
        out.push(LogReal { ln_abs: v.abs().ln() + ln_scale, sign: if v < 0.0 { -1.0 } else { 1.0 } })
    };
    push(&mut out, cur, ln_scale);
    for j in 0..m {
        let jf = j as f64;
        let alpha = p * (big_k - jf) + jf * q - big_k / 2.0;
        let beta = jf * (big_k - jf + 1.0) * p * q;
        let next = (x - alpha) * cur - beta * prev;
        prev = cur;
        cur = next;
        let size = cur.abs().max(prev.abs());
        if size > RESCALE {
            prev /= size;
            cur /= size;
            ln_scale += size.ln();
        }
        push(&mut out, cur, ln_scale);
    }
    out
}

/// Exact (floating) `K̃_m(j/n)` in log form, from the recurrence.
pub fn krawtchouk_exact_log(j: f64, m: usize, params: &EnsembleParams) -> LogReal {
    let v = scaled_recurrence(j, m, params)[m];
    LogReal { ln_abs: v.ln_abs - m as f64 * (params.n() as f64).ln(), sign: v.sign }
}

/// Exact (floating) `G_m(i/n) = (K̃_{m+2} + S_m K̃_m)/u²` in log form for `p = ½`,
/// where `S_m = (K − m)(m + 1)/(4n²)` for even `m`.
pub fn symplectic_exact_log(i: f64, m: usize, params: &EnsembleParams) -> Result<LogReal> {
    params.require_symmetric("the floating G_m oracle")?;
    if i == 0.0 || m % 2 != 0 {
        return Err(Error::Domain(format!("need i ≠ 0 and even m, got i = {i}, m = {m}")));
    }
    if m + 2 > params.big_k() {
        return Err(Error::Domain(format!("G_m needs m + 2 ≤ K, got m = {m}")));
    }
    let v = scaled_recurrence(i, m + 2, params);
    let (top, low) = (v[m + 2], v[m]);
    let r = ((params.big_k() - m) * (m + 1)) as f64 / 4.0;
    // top + r·low, in the scale of `top` or `low`, whichever is larger
    let base = top.ln_abs.max(low.ln_abs);
    let sum = top.sign * (top.ln_abs - base).exp() + r * low.sign * (low.ln_abs - base).exp();
    Ok(LogReal {
        ln_abs: base + sum.abs().ln() - 2.0 * i.abs().ln() - m as f64 * (params.n() as f64).ln(),
        sign: sum.signum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{monic_krawtchouk, symplectic_table};
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    #[test]
    fn oracle_matches_exact_polynomials() {
        for params in [
            EnsembleParams::new(3, 5).unwrap(),
            EnsembleParams::with_p(2, 3, BigRational::new(1.into(), 3.into())).unwrap(),
        ] {
            let n = params.n() as i64;
            for m in 0..=8 {
                let poly = monic_krawtchouk(m, &params).unwrap();
                for j in [-5i64, 1, 4, 7] {
                    let u = BigRational::new(j.into(), n.into());
                    let exact = poly.eval(&u).to_f64().unwrap();
                    let v = krawtchouk_exact_log(j as f64, m, &params).to_f64();
                    assert!((v - exact).abs() <= 1e-12 * exact.abs().max(1e-300), "m={m} j={j}");
                }
            }
        }
        let params = EnsembleParams::new(3, 5).unwrap();
        let table = symplectic_table(8, &params).unwrap();
        for m in (0..=8).step_by(2) {
            for i in [-4i64, 1, 3, 8] {
                let u = BigRational::new(i.into(), 3.into());
                let exact = table[m].eval(&u).to_f64().unwrap();
                let v = symplectic_exact_log(i as f64, m, &params).unwrap().to_f64();
                assert!((v - exact).abs() <= 1e-11 * exact.abs(), "m={m} i={i}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn krawtchouk_at_quarter() {
        // K = 200, H = 1/4, m = K/2, j = 10
        let params = EnsembleParams::new(50, 50).unwrap();
        let a = krawtchouk_asymptotic_parts(10, 100, &params).unwrap();
        let e = krawtchouk_exact_log(10.0, 100, &params);
        assert!(a.relative_error(e) < 0.1, "{}", a.relative_error(e));
        let params = EnsembleParams::new(100, 100).unwrap();
        let a2 = krawtchouk_asymptotic_parts(20, 200, &params).unwrap();
        let e2 = krawtchouk_exact_log(20.0, 200, &params);
        assert!(a2.relative_error(e2) < a.relative_error(e));
    }

    #[test]
    fn odd_degrees_keep_the_sign() {
        let params = EnsembleParams::new(200, 200).unwrap();
        for m in [481usize, 482, 641, 642] {
            for j in [-160i64, 40, 200] {
                let a = krawtchouk_asymptotic_parts(j, m, &params).unwrap();
                if a.sine < 0.1 {
                    continue;
                }
                let e = krawtchouk_exact_log(j as f64, m, &params);
                assert!(a.relative_error(e) < 0.05, "m={m} j={j}: {}", a.relative_error(e));
            }
        }
    }

    #[test]
    fn sign_changes_track_the_polynomial() {
        // consecutive lattice points away from the zeros of the sine
        let params = EnsembleParams::new(100, 100).unwrap();
        for m in [120usize, 200, 250] {
            let mut last: Option<(f64, f64)> = None;
            let (mut agree, mut total) = (0, 0);
            for j in -150i64..150 {
                let Ok(a) = krawtchouk_asymptotic_parts(j, m, &params) else { continue };
                if a.sine < 0.1 {
                    continue;
                }
                let e = krawtchouk_exact_log(j as f64, m, &params).sign;
                if let Some((a0, e0)) = last {
                    total += 1;
                    agree += usize::from((a0 != a.oscillation.signum()) == (e0 != e));
                }
                last = Some((a.oscillation.signum(), e));
            }
            assert!(total > 100);
            assert_eq!(agree, total, "m = {m}");
        }
    }

    #[test]
    fn symplectic_at_quarter() {
        // K = 200, H = 1/4, m = 2n, i = K/8
        let params = EnsembleParams::new(50, 50).unwrap();
        let a = symplectic_asymptotic_parts(25, 100, &params).unwrap();
        let e = symplectic_exact_log(25.0, 100, &params).unwrap();
        assert!(a.relative_error(e) < 0.15, "{}", a.relative_error(e));
        let b = symplectic_asymptotic_parts(-25, 100, &params).unwrap();
        assert!((a.to_f64().abs() / b.to_f64().abs() - 1.0).abs() < 0.2);
        assert!(matches!(symplectic_asymptotic(0, 100, &params), Err(Error::Domain(_))));
        assert!(matches!(symplectic_asymptotic(5, 101, &params), Err(Error::Domain(_))));
    }

    #[test]
    fn weight_at_twice_n() {
        for (n, k) in [(50, 50), (50, 100), (30, 70), (10, 3)] {
            let params = EnsembleParams::new(n, k).unwrap();
            // (K − 2n)/(2n + 2) · 2H/(1 − 2H) = n/(n + 1): equal weights only to O(1/n)
            let w = symplectic_weight(2 * n, params.big_k());
            assert!((w - n as f64 / (n + 1) as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn region_error_at_the_edge() {
        let params = EnsembleParams::new(50, 50).unwrap();
        assert!(matches!(krawtchouk_asymptotic(99, 10, &params), Err(Error::Region(_))));
    }
}
