use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// Margin kept from the turning points `(μ − ½)² = g(1 − g)`.
pub const REGION_MARGIN: f64 = 1e-3;

fn theta(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `atan(y / x)` with the value `π/2` on `x = 0`; only used with `y > 0`.
fn at(y: f64, x: f64) -> f64 {
    if x == 0.0 {
        PI / 2.0
    } else {
        (y / x).atan()
    }
}

/// `f(t) = (1 − μ) ln(t − p) + (g − 1) ln t − g ln(1 − t)` on principal branches.
pub fn action(t: Complex64, mu: f64, g: f64, p: f64) -> Complex64 {
    (1.0 - mu) * (t - p).ln() + (g - 1.0) * t.ln() - g * (1.0 - t).ln()
}

pub fn action_d1(t: Complex64, mu: f64, g: f64, p: f64) -> Complex64 {
    (1.0 - mu) / (t - p) + (g - 1.0) / t + g / (1.0 - t)
}

pub fn action_d2(t: Complex64, mu: f64, g: f64, p: f64) -> Complex64 {
    -(1.0 - mu) / ((t - p) * (t - p)) - (g - 1.0) / (t * t) - g / ((1.0 - t) * (1.0 - t))
}

/// The two critical points of the action.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddleRoots {
    pub t_plus: Complex64,
    pub t_minus: Complex64,
    /// Discriminant of `μt² + (g − μ − p)t + (1 − g)p`; at `p = ½` it equals `(μ − ½)² − g(1 − g)`.
    pub discriminant: f64,
    /// Complex-conjugate pair (negative discriminant).
    pub oscillatory: bool,
}

/// Roots of `f′(t) = 0`, i.e. of `μt² + (g − μ − p)t + (1 − g)p = 0`.
pub fn saddle_points(mu: f64, g: f64, p: f64) -> Result<SaddleRoots> {
    if mu == 0.0 || mu == 1.0 {
        return Err(Error::Degenerate(format!("μ = {mu} is singular for the action")));
    }
    if !(mu > 0.0 && mu < 1.0 && g > 0.0 && g < 1.0 && p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("need μ, g, p in (0,1), got μ={mu}, g={g}, p={p}")));
    }
    let b = g - mu - p;
    let disc = b * b - 4.0 * mu * (1.0 - g) * p;
    let (t_plus, t_minus) = if disc < 0.0 {
        let im = (-disc).sqrt() / (2.0 * mu);
        let re = -b / (2.0 * mu);
        (Complex64::new(re, im), Complex64::new(re, -im))
    } else {
        let s = disc.sqrt();
        (Complex64::from((-b + s) / (2.0 * mu)), Complex64::from((-b - s) / (2.0 * mu)))
    };
    Ok(SaddleRoots { t_plus, t_minus, discriminant: disc, oscillatory: disc < 0.0 })
}

/// Saddle points and all phase angles at `(μ, g)`, for `p = ½`.
///
/// On `t₀⁺`: `χ = arg t`, `γ = arg(t − ½)`, `τ = arg(1 − t)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddleData {
    pub mu: f64,
    pub g: f64,
    pub t0plus: Complex64,
    pub t0minus: Complex64,
    pub chi: f64,
    pub tau: f64,
    pub gamma: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub zeta1hat: f64,
    pub tauhat: f64,
    /// Piecewise `±2π` correction of the closed-form `arg f″`; reported, not applied.
    pub sigma: f64,
    /// Closed-form `arg f″(t₀⁻)` (without `σ`).
    pub argfpp: f64,
    /// `arg f″(t₀⁻)` evaluated directly.
    pub argfpp_direct: f64,
    pub theta_sdp: f64,
    /// `Re f(t₀±)` in closed form.
    pub re_action: f64,
    /// `Im f(t₀⁺) = (1 − μ)γ + (g − 1)χ − gτ`.
    pub im_action: f64,
}

impl SaddleData {
    /// `√(g(1 − g) − (μ − ½)²)`.
    pub fn sqrt_d(&self) -> f64 {
        region_d(self.mu, self.g).sqrt()
    }

    /// `δ̂(j; m) = (m − 1)ζ₂ + Kζ̂₁ − Kμγ + 2τ̂`, with `m` free so that `g` can stay fixed.
    pub fn delta_hat(&self, m: f64, big_k: f64) -> f64 {
        (m - 1.0) * self.zeta2 + big_k * self.zeta1hat - big_k * self.mu * self.gamma + 2.0 * self.tauhat
    }
}

pub(crate) fn region_d(mu: f64, g: f64) -> f64 {
    g * (1.0 - g) - (mu - 0.5) * (mu - 0.5)
}

pub(crate) fn require_region(mu: f64, g: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0 && g > 0.0 && g < 1.0) {
        return Err(Error::Region(format!("μ = {mu}, g = {g} outside (0,1)²")));
    }
    let d = region_d(mu, g);
    if d <= REGION_MARGIN {
        return Err(Error::Region(format!(
            "g(1−g) − (μ−½)² = {d:.3e} at μ = {mu}, g = {g} (margin {REGION_MARGIN})"
        )));
    }
    Ok(d)
}

/// Closed-form angle data; fails with [`Error::Region`] off the oscillatory region
/// and with [`Error::Consistency`] if the closed forms of `f(t₀)` or `f′(t₀) = 0`
/// disagree with direct evaluation.
pub fn phase_data(mu: f64, g: f64, params: &EnsembleParams) -> Result<SaddleData> {
    params.require_symmetric("the saddle-point asymptotics")?;
    let d = require_region(mu, g)?;
    let sd = d.sqrt();
    // atan(y/x) + πΘ(−x) for y > 0; a single argument avoids a spurious π
    // when the two sides of the step round differently
    let chi = sd.atan2(mu + 0.5 - g);
    let tau = -sd.atan2(g + mu - 0.5);
    let gamma = sd.atan2(0.5 - g);
    let zeta2 = sd.atan2(mu - 0.5);
    let zeta1hat = at(sd, 1.5 - g - mu);
    let tauhat = at(sd, g + mu - 0.5);

    let radius = (2.0 * mu * (1.0 - g)).sqrt() / (2.0 * mu);
    let t0plus = Complex64::from_polar(radius, chi);
    let t0minus = t0plus.conj();

    let gh = g - 0.5;
    let num = gh * (gh * gh - 0.75 * mu + mu * mu / 2.0);
    let den = sd * (mu / 4.0 - gh * gh);
    let atn = if den == 0.0 { PI / 2.0 * num.signum() } else { (num / den).atan() };
    let bracket = atn + PI * theta(0.5 - mu.sqrt() / 2.0 - g) - PI * theta(gh - mu.sqrt() / 2.0);
    let w = ((3.0 - 2.0 * mu) * mu).sqrt() / 2.0;
    let sigma = -2.0 * PI * theta(gh + w) + 2.0 * PI * theta(gh - w);
    let argfpp = -bracket;
    let theta_sdp = -argfpp / 2.0 + PI / 2.0;

    let re_action = 0.5
        * ((1.0 - mu) * ((1.0 - mu) / (4.0 * mu)).ln() + (g - 1.0) * ((1.0 - g) / (2.0 * mu)).ln()
            - g * (g / (2.0 * mu)).ln());
    let im_action = (1.0 - mu) * gamma + (g - 1.0) * chi - g * tau;

    let data = SaddleData {
        mu,
        g,
        t0plus,
        t0minus,
        chi,
        tau,
        gamma,
        zeta1: gamma - chi,
        zeta2,
        zeta1hat,
        tauhat,
        sigma,
        argfpp,
        argfpp_direct: action_d2(t0minus, mu, g, 0.5).arg(),
        theta_sdp,
        re_action,
        im_action,
    };
    verify(&data)?;
    Ok(data)
}

const CHECK_TOL: f64 = 1e-12;

fn verify(s: &SaddleData) -> Result<()> {
    let roots = saddle_points(s.mu, s.g, 0.5)?;
    let fail = |what: &str, err: f64| {
        Error::Consistency(format!("{what} off by {err:.3e} at μ = {}, g = {}", s.mu, s.g))
    };
    let e = (roots.t_plus - s.t0plus).norm();
    if e > CHECK_TOL * (1.0 + s.t0plus.norm()) {
        return Err(fail("t₀⁺ from the angle χ", e));
    }
    for t in [s.t0plus, s.t0minus] {
        let scale = (1.0 - s.mu) / (t - 0.5).norm() + (1.0 - s.g) / t.norm() + s.g / (1.0 - t).norm();
        let e = action_d1(t, s.mu, s.g, 0.5).norm();
        if e > CHECK_TOL * scale {
            return Err(fail("f′(t₀)", e));
        }
    }
    let direct = action(s.t0plus, s.mu, s.g, 0.5);
    let e = (direct.re - s.re_action).abs().max((direct.im - s.im_action).abs());
    if e > CHECK_TOL * (1.0 + direct.norm()) {
        return Err(fail("closed-form f(t₀⁺)", e));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> EnsembleParams {
        EnsembleParams::new(4, 4).unwrap()
    }

    #[test]
    fn symmetric_point() {
        let r = saddle_points(0.5, 0.5, 0.5).unwrap();
        assert!(r.oscillatory);
        assert!((r.t_plus - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!((r.t_minus - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        let s = phase_data(0.5, 0.5, &half()).unwrap();
        assert!((s.chi - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn step_points_keep_the_root() {
        // μ + ½ − g rounds to 0 while g − ½ − μ rounds to 5.6e-17
        for (mu, g) in [(0.3, 0.8), (0.2, 0.7), (0.7, 0.2)] {
            phase_data(mu, g, &half()).unwrap();
        }
    }

    #[test]
    fn circle_law_and_modulus() {
        for &mu in &[0.2, 0.45, 0.7] {
            for &g in &[0.3, 0.5, 0.8] {
                let r = saddle_points(mu, g, 0.5).unwrap();
                if !r.oscillatory {
                    continue;
                }
                let t = r.t_plus;
                let circle = (t.re - 0.5).powi(2) + t.im * t.im;
                assert!((circle - (1.0 - mu) / (4.0 * mu)).abs() < 1e-13);
                assert!((t.norm() - (2.0 * mu * (1.0 - g)).sqrt() / (2.0 * mu)).abs() < 1e-13);
                assert_eq!(r.t_minus, t.conj());
            }
        }
    }

    #[test]
    fn classification_and_double_root() {
        let r = saddle_points(0.1, 0.1, 0.5).unwrap();
        assert!(!r.oscillatory);
        assert!(r.t_plus.im == 0.0 && r.t_minus.im == 0.0);
        // (μ − ½)² = g(1 − g) at μ = 0.1, g = 0.2
        let r = saddle_points(0.1, 0.2, 0.5).unwrap();
        assert!(r.discriminant.abs() < 1e-15);
        assert!((r.t_plus - r.t_minus).norm() < 1e-6);
        for t in [r.t_plus, r.t_minus] {
            assert!(action_d1(t, 0.1, 0.2, 0.5).norm() < 1e-6);
        }
    }

    #[test]
    fn singular_and_domain_errors() {
        assert!(matches!(saddle_points(0.0, 0.5, 0.5), Err(Error::Degenerate(_))));
        assert!(matches!(saddle_points(1.0, 0.5, 0.5), Err(Error::Degenerate(_))));
        assert!(matches!(saddle_points(0.5, 1.5, 0.5), Err(Error::Domain(_))));
        assert!(matches!(phase_data(0.05, 0.05, &half()), Err(Error::Region(_))));
        let skew = EnsembleParams::with_p(4, 4, num_rational::BigRational::new(1.into(), 3.into())).unwrap();
        assert!(matches!(phase_data(0.5, 0.5, &skew), Err(Error::Domain(_))));
    }

    #[test]
    fn general_p_roots() {
        for &p in &[0.3, 0.6] {
            let r = saddle_points(0.4, 0.5, p).unwrap();
            for t in [r.t_plus, r.t_minus] {
                assert!(action_d1(t, 0.4, 0.5, p).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zeta2_branch() {
        let above = phase_data(0.6, 0.5, &half()).unwrap();
        let below = phase_data(0.4, 0.5, &half()).unwrap();
        assert!(above.zeta2 < PI / 2.0);
        assert!(below.zeta2 > PI / 2.0);
        assert!((above.zeta2 + below.zeta2 - PI).abs() < 1e-14);
    }

    #[test]
    fn angles_are_arguments_on_a_grid() {
        let params = half();
        let mut count = 0;
        for gi in 1..60 {
            for mi in 1..60 {
                let (g, mu) = (gi as f64 / 60.0, mi as f64 / 60.0);
                let Ok(s) = phase_data(mu, g, &params) else { continue };
                count += 1;
                let t = s.t0plus;
                assert!((t.arg() - s.chi).abs() < 1e-12);
                assert!(((t - 0.5).arg() - s.gamma).abs() < 1e-12);
                assert!(((1.0 - t).arg() - s.tau).abs() < 1e-12);
                assert!((s.zeta2 - (s.chi - s.tau)).abs() < 1e-12);
                let minus = action(s.t0minus, mu, g, 0.5);
                assert!((minus.im + s.im_action).abs() < 1e-12);
                assert!((minus.re - s.re_action).abs() < 1e-12);
            }
        }
        assert!(count > 1500);
    }
}
