//! The Christoffel–Darboux kernel of the particle process.
//!
//! With `ψ_m(u) = g_m(u) √(u² W(u))` the kernel on particle positions
//! `a = 1..=n+k` (`u = a/n`) is
//!
//! `𝒦(u,v) = 2 Σ_{ℓ<n} ψ_{2ℓ}(u) ψ_{2ℓ}(v)
//!         = 2 (ϰ_{2n−2}/ϰ_{2n}) (ψ_{2n}(u)ψ_{2n−2}(v) − ψ_{2n−2}(u)ψ_{2n}(v)) / (u² − v²)`,
//!
//! the orthogonal projection of rank `n` on the positive half of the lattice.
//! Both forms need the parity of `p = 1/2`.

mod matrix;
mod weight;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::orthopoly::{krawtchouk_jacobi, qr_step};
use crate::params::EnsembleParams;

pub use matrix::{kernel_matrix, KernelMatrix, MATRIX_LIMIT};
pub use weight::WeightFunction;

/// Normalised eigenvector of the symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (`e[i]` couples `i` and `i+1`, all
/// positive) for the eigenvalue `lambda`, signed so that the first entry is
/// positive.
///
/// Uses the twisted factorisation: the stationary `LDLᵀ` and progressive
/// `UDUᵀ` pivots meet at the index where the vector is largest, and each half
/// is filled outward by ratios, which is stable whichever way the entries
/// grow. Magnitudes are carried as logarithms so that entries as small as the
/// weight at the edge of the lattice (`2^{−K}`) do not underflow on the way.
fn tridiagonal_eigenvector(d: &[f64], e: &[f64], lambda: f64) -> Vec<f64> {
    let m = d.len();
    let scale = d.iter().chain(e).fold(0.0f64, |acc, x| acc.max(x.abs())).max(lambda.abs()).max(f64::MIN_POSITIVE);
    let guard = |x: f64| if x == 0.0 { f64::EPSILON * scale } else { x };
    let mut plus = vec![0.0; m];
    let mut minus = vec![0.0; m];
    plus[0] = guard(d[0] - lambda);
    for i in 1..m {
        plus[i] = guard(d[i] - lambda - e[i - 1] * e[i - 1] / plus[i - 1]);
    }
    minus[m - 1] = guard(d[m - 1] - lambda);
    for i in (0..m - 1).rev() {
        minus[i] = guard(d[i] - lambda - e[i] * e[i] / minus[i + 1]);
    }
    let twist = (0..m)
        .min_by(|&x, &y| {
            let g = |r: usize| (plus[r] + minus[r] - (d[r] - lambda)).abs();
            g(x).total_cmp(&g(y))
        })
        .expect("nonempty matrix");
    let mut ln_mag = vec![0.0; m];
    let mut sign = vec![1.0; m];
    for i in (0..twist).rev() {
        let ratio = -e[i] / plus[i];
        ln_mag[i] = ln_mag[i + 1] + ratio.abs().ln();
        sign[i] = sign[i + 1] * ratio.signum();
    }
    for i in twist + 1..m {
        let ratio = -e[i - 1] / minus[i];
        ln_mag[i] = ln_mag[i - 1] + ratio.abs().ln();
        sign[i] = sign[i - 1] * ratio.signum();
    }
    let top = ln_mag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_norm = top + 0.5 * ln_mag.iter().map(|l| (2.0 * (l - top)).exp()).sum::<f64>().ln();
    let flip = sign[0];
    ln_mag.iter().zip(&sign).map(|(l, s)| s * flip * (l - ln_norm).exp()).collect()
}

/// Precomputed `ψ_{2ℓ}(a/n)`, `ℓ = 0..=n`, `a = 1..=n+k`, for repeated kernel evaluation.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    params: EnsembleParams,
    /// `even[a−1][ℓ] = ψ_{2ℓ}(a/n)`.
    even: Vec<Vec<f64>>,
    /// `2 ϰ_{2n−2}/ϰ_{2n} = 2√(β_{2n} β_{2n−1})`.
    prefactor: f64,
}

impl KernelEvaluator {
    /// The Jacobi matrix of `u² W` comes from one QR step on the Krawtchouk
    /// matrix; `(ψ_0(u), …, ψ_{K−1}(u))` at a lattice point `u` is its
    /// eigenvector for the eigenvalue `u`.
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        params.require_symmetric("the correlation kernel")?;
        let n = params.n();
        let jac = qr_step(&krawtchouk_jacobi(params))?;
        let off: Vec<f64> = jac.a[1..].iter().map(|a| a.abs()).collect();
        let even = (1..=params.big_k() / 2)
            .into_par_iter()
            .map(|a| {
                let v = tridiagonal_eigenvector(&jac.b, &off, a as f64 / n as f64);
                v.into_iter().step_by(2).take(n + 1).collect()
            })
            .collect();
        let prefactor = 2.0 * (jac.a[2 * n] * jac.a[2 * n - 1]).abs();
        Ok(Self { params: params.clone(), even, prefactor })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    /// Number of positive lattice points, `n + k`.
    pub fn size(&self) -> usize {
        self.even.len()
    }

    fn row(&self, i: i64) -> Result<Option<&[f64]>> {
        let half = self.size() as i64;
        if i.abs() > half {
            return Err(Error::Domain(format!("lattice index {i} outside ±{half}")));
        }
        // ψ_{2ℓ} is even in u; at u = 0 the weight vanishes.
        Ok((i != 0).then(|| self.even[i.unsigned_abs() as usize - 1].as_slice()))
    }

    /// `ψ_{2ℓ}(i/n)` for `ℓ = 0..=n`.
    pub fn even_values(&self, i: i64) -> Result<Vec<f64>> {
        Ok(self.row(i)?.map_or_else(|| vec![0.0; self.params.n() + 1], <[f64]>::to_vec))
    }

    /// `2 Σ_{ℓ<n} ψ_{2ℓ}(u) ψ_{2ℓ}(v)`.
    pub fn sum_form(&self, i: i64, j: i64) -> Result<f64> {
        let (Some(x), Some(y)) = (self.row(i)?, self.row(j)?) else {
            return Ok(0.0);
        };
        let n = self.params.n();
        Ok(2.0 * x[..n].iter().zip(&y[..n]).map(|(a, b)| a * b).sum::<f64>())
    }

    /// The two-term Christoffel–Darboux form; needs `i² ≠ j²`.
    pub fn cd_form(&self, i: i64, j: i64) -> Result<f64> {
        if i * i == j * j {
            return Err(Error::Domain(format!("CD ratio is 0/0 at u² = v² (indices {i}, {j})")));
        }
        let (Some(x), Some(y)) = (self.row(i)?, self.row(j)?) else {
            return Ok(0.0);
        };
        let n = self.params.n();
        let nf = n as f64;
        let (u, v) = (i as f64 / nf, j as f64 / nf);
        Ok(self.prefactor * (x[n] * y[n - 1] - x[n - 1] * y[n]) / (u * u - v * v))
    }

    /// `𝒦(i/n, j/n)`: the CD form, or the sum form when `u² = v²`.
    pub fn eval(&self, i: i64, j: i64) -> Result<f64> {
        if i * i == j * j {
            self.sum_form(i, j)
        } else {
            self.cd_form(i, j)
        }
    }
}

/// `𝒦(u, v)` at two lattice points.
pub fn cd_kernel(u: f64, v: f64, params: &EnsembleParams) -> Result<f64> {
    let w = WeightFunction::new(params);
    let (i, j) = (w.index_of(u)?, w.index_of(v)?);
    KernelEvaluator::new(params)?.eval(i, j)
}

/// One-point function `ρ(a) = 𝒦(a/n, a/n)`, `1 ≤ a ≤ n + k`.
pub fn density(a: usize, params: &EnsembleParams) -> Result<f64> {
    let top = params.n() + params.k();
    if a == 0 || a > top {
        return Err(Error::Domain(format!("particle coordinate {a} outside [1, {top}]")));
    }
    KernelEvaluator::new(params)?.eval(a as i64, a as i64)
}
