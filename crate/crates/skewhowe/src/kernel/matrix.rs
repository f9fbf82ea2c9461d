use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KernelEvaluator;
use crate::params::EnsembleParams;

/// Largest `n + k` accepted by [`kernel_matrix`].
pub const MATRIX_LIMIT: usize = 4096;

/// `𝒦(a/n, b/n)` for `a, b = 1..=n+k`, row-major.
#[derive(Debug, Clone, Serialize)]
pub struct KernelMatrix {
    pub n: usize,
    pub k: usize,
    size: usize,
    values: Vec<f64>,
}

pub fn kernel_matrix(params: &EnsembleParams) -> Result<KernelMatrix> {
    let size = params.n() + params.k();
    if size > MATRIX_LIMIT {
        return Err(Error::Resource(format!("n + k = {size} exceeds {MATRIX_LIMIT}")));
    }
    let ev = KernelEvaluator::new(params)?;
    let rows: Vec<Vec<f64>> = (1..=size as i64)
        .into_par_iter()
        .map(|a| (1..=size as i64).map(|b| ev.eval(a.min(b), a.max(b))).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;
    Ok(KernelMatrix { n: params.n(), k: params.k(), size, values: rows.concat() })
}

impl KernelMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry at particle coordinates `a, b ∈ 1..=n+k`.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[(a - 1) * self.size + (b - 1)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (1..=self.size).map(|a| self.get(a, a)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn symmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 1..=self.size {
            for b in a + 1..=self.size {
                worst = worst.max((self.get(a, b) - self.get(b, a)).abs());
            }
        }
        worst
    }

    /// `max |𝒦² − 𝒦|`.
    pub fn idempotency_residual(&self) -> f64 {
        let s = self.size;
        (0..s)
            .into_par_iter()
            .map(|i| {
                let row = &self.values[i * s..(i + 1) * s];
                (0..s)
                    .map(|j| {
                        let sq: f64 = row.iter().enumerate().map(|(w, x)| x * self.values[w * s + j]).sum();
                        (sq - row[j]).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `det[𝒦(a_i, a_j)]` over the given particle coordinates.
    pub fn minor_determinant(&self, coords: &[usize]) -> Result<f64> {
        if let Some(&a) = coords.iter().find(|&&a| a == 0 || a > self.size) {
            return Err(Error::Domain(format!("coordinate {a} outside [1, {}]", self.size)));
        }
        let m = coords.len();
        let mut a: Vec<f64> = coords.iter().flat_map(|&x| coords.iter().map(move |&y| (x, y))).map(|(x, y)| self.get(x, y)).collect();
        Ok(determinant(&mut a, m))
    }
}

/// Determinant by Gaussian elimination with partial pivoting; destroys `a`.
pub(crate) fn determinant(a: &mut [f64], m: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..m {
        let p = (c..m).max_by(|&x, &y| a[x * m + c].abs().total_cmp(&a[y * m + c].abs())).expect("nonempty");
        if a[p * m + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for j in 0..m {
                a.swap(p * m + j, c * m + j);
            }
            det = -det;
        }
        let piv = a[c * m + c];
        det *= piv;
        for r in c + 1..m {
            let f = a[r * m + c] / piv;
            for j in c..m {
                a[r * m + j] -= f * a[c * m + j];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::YoungDiagram;
    use crate::measure::{measure_exact, ParticleConfig};

    #[test]
    fn projection_at_8_8() {
        let km = kernel_matrix(&EnsembleParams::new(8, 8).unwrap()).unwrap();
        assert!((km.trace() - 8.0).abs() < 1e-8);
        assert!(km.idempotency_residual() < 1e-8);
        assert_eq!(km.symmetry_residual(), 0.0);
        assert!(km.diagonal().iter().all(|&d| (-1e-12..=1.0 + 1e-12).contains(&d)));
    }

    #[test]
    fn determinants_give_the_measure() {
        for (n, k) in [(1, 1), (2, 2), (2, 3), (3, 2)] {
            let params = EnsembleParams::new(n, k).unwrap();
            let km = kernel_matrix(&params).unwrap();
            for d in YoungDiagram::all_in_box(n, k) {
                let det = km.minor_determinant(ParticleConfig::from_diagram(&d).coords()).unwrap();
                let mu = measure_exact(&d, &params).unwrap().to_f64();
                assert!((det - mu).abs() < 1e-10, "{d}: {det} vs {mu}");
            }
        }
    }

    #[test]
    fn small_determinants() {
        let mut a = vec![2.0, 1.0, 1.0, 3.0];
        assert!((determinant(&mut a, 2) - 5.0).abs() < 1e-15);
        let mut b = vec![0.0, 1.0, 1.0, 0.0];
        assert_eq!(determinant(&mut b, 2), -1.0);
    }

    #[test]
    fn guard() {
        let err = kernel_matrix(&EnsembleParams::new(4000, 100).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }
}
