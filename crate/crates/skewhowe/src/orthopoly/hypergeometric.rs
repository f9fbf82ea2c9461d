use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// Value and first two `u`-derivatives of a function of `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet([f64; 3]);

impl Jet {
    fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0])
    }

    fn mul(self, o: Jet) -> Jet {
        let ([f, f1, f2], [g, g1, g2]) = (self.0, o.0);
        Jet([f * g, f1 * g + f * g1, f2 * g + 2.0 * f1 * g1 + f * g2])
    }

    fn scale(self, s: f64) -> Jet {
        Jet(self.0.map(|x| x * s))
    }

    fn add(self, o: Jet) -> Jet {
        Jet([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

/// `₂F₁(−m, −K/2−nu; −K; z)` as a jet in `u`; the sum terminates at `s = m`.
fn hyp_jet(m: usize, u: f64, params: &EnsembleParams, z: f64) -> Jet {
    let k = params.big_k() as f64;
    let n = params.n() as f64;
    let a = k / 2.0 + n * u;
    let mut total = Jet::constant(1.0);
    let mut coeff = 1.0;
    // (−a)_s as a jet: ∏ (t − a − n·δu).
    let mut poch = Jet::constant(1.0);
    for s in 0..m {
        let t = s as f64;
        coeff *= (t - m as f64) / ((t - k) * (t + 1.0)) * z;
        poch = poch.mul(Jet([t - a, -n, 0.0]));
        total = total.add(poch.scale(coeff));
    }
    total
}

/// `K̃_m(u) = (−1)^m p^m m! binom(K,m) n^{−m} ₂F₁(−m, −K/2−nu; −K; 1/p)`.
fn krawtchouk_jet(m: usize, u: f64, params: &EnsembleParams) -> Jet {
    let (k, p, n) = (params.big_k() as f64, params.p_f64(), params.n() as f64);
    let mf = m as f64;
    let ln_pref = mf * p.ln() + ln_gamma(mf + 1.0) + ln_gamma(k + 1.0) - ln_gamma(mf + 1.0) - ln_gamma(k - mf + 1.0)
        - mf * n.ln();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    hyp_jet(m, u, params, 1.0 / p).scale(sign * ln_pref.exp())
}

/// `K̃_m(u)` through its terminating hypergeometric sum.
pub fn krawtchouk_hypergeometric(m: usize, u: f64, params: &EnsembleParams) -> Result<f64> {
    if m > params.big_k() {
        return Err(Error::Domain(format!("degree {m} exceeds K = {}", params.big_k())));
    }
    Ok(krawtchouk_jet(m, u, params).0[0])
}

/// `G_m(u)` from hypergeometric sums alone: the Christoffel coefficients come
/// from the values and slopes of the sums at `u = 0`, and at `u = 0` itself
/// the double zero of the bracket is divided out through its second derivative.
pub fn hypergeometric_eval(m: usize, u: f64, params: &EnsembleParams) -> Result<f64> {
    if m + 2 > params.big_k() {
        return Err(Error::Domain(format!("G_{m} needs degree {} ≤ K = {}", m + 2, params.big_k())));
    }
    let at0 = [0, 1, 2].map(|d| krawtchouk_jet(m + d, 0.0, params));
    let (a, b) = (at0.map(|j| j.0[0]), at0.map(|j| j.0[1]));
    let d = a[0] * b[1] - a[1] * b[0];
    if d == 0.0 {
        return Err(Error::Degenerate(format!("vanishing Christoffel determinant at m = {m}")));
    }
    let c1 = -(a[0] * b[2] - a[2] * b[0]) / d;
    let c0 = (a[1] * b[2] - a[2] * b[1]) / d;
    let jets = [0, 1, 2].map(|d| krawtchouk_jet(m + d, u, params));
    let bracket = jets[2].add(jets[1].scale(c1)).add(jets[0].scale(c0));
    if u != 0.0 {
        return Ok(bracket.0[0] / (u * u));
    }
    let size = jets[2].0[0].abs() + (c1 * jets[1].0[0]).abs() + (c0 * jets[0].0[0]).abs();
    let slope = jets[2].0[1].abs() + (c1 * jets[1].0[1]).abs() + (c0 * jets[0].0[1]).abs();
    if bracket.0[0].abs() > 1e-9 * size || bracket.0[1].abs() > 1e-9 * slope.max(size) {
        return Err(Error::Consistency(format!(
            "bracket of G_{m} does not vanish to second order at 0: value {}, slope {}",
            bracket.0[0], bracket.0[1]
        )));
    }
    Ok(bracket.0[2] / 2.0)
}
