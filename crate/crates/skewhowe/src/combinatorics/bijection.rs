use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use serde::Serialize;

use crate::combinatorics::diagram::YoungDiagram;
use crate::combinatorics::proctor::{proctor_from_matrix, BinaryMatrix};
use crate::error::{Error, Result};
use crate::measure::sp_dimension;
use crate::params::EnsembleParams;

/// Largest `2nk` accepted by [`validate_bijection`].
pub const EXHAUSTIVE_LIMIT: usize = 24;

/// Summary of an exhaustive run of Proctor's algorithm.
#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub n: usize,
    pub k: usize,
    pub matrices: u64,
    /// `(shape, observed count, dim_n(λ)·dim_k(λ̄′))` for every shape in the box.
    pub multiplicities: Vec<(String, u64, u64)>,
}

/// Runs the algorithm on all `2^{2nk}` matrices and checks that it is a
/// bijection onto pairs of King tableaux of shapes `(λ, λ̄′)`.
pub fn validate_bijection(params: &EnsembleParams) -> Result<BijectionReport> {
    let (n, k) = (params.n(), params.k());
    if 2 * n * k > EXHAUSTIVE_LIMIT {
        return Err(Error::Resource(format!("2nk = {} exceeds {EXHAUSTIVE_LIMIT}", 2 * n * k)));
    }
    let total = 1u64 << (2 * n * k);
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut seen = HashSet::with_capacity(total as usize);
    for index in 0..total {
        let m = BinaryMatrix::from_index(n, k, index);
        let pair = proctor_from_matrix(&m, params)
            .map_err(|e| Error::Consistency(format!("{e}; matrix:\n{m}")))?;
        let lam = pair.p.shape(k)?;
        let q_shape = pair.q.shape(n)?;
        if q_shape != lam.complement_transpose() {
            return Err(Error::Consistency(format!(
                "Q has shape {q_shape}, expected {}; matrix:\n{m}",
                lam.complement_transpose()
            )));
        }
        *counts.entry(lam.rows().to_vec()).or_default() += 1;
        if !seen.insert(pair) {
            return Err(Error::Consistency(format!("(P, Q) repeated; matrix:\n{m}")));
        }
    }
    let mut multiplicities = Vec::new();
    for d in YoungDiagram::all_in_box(n, k) {
        let expected = sp_dimension(d.rows(), n)? * sp_dimension(d.complement_transpose().rows(), k)?;
        let got = counts.get(d.rows()).copied().unwrap_or(0);
        if BigUint::from(got) != expected {
            return Err(Error::Consistency(format!("shape {d}: {got} matrices, expected {expected}")));
        }
        let expected = u64::try_from(expected).expect("bounded by 2^24");
        multiplicities.push((d.to_string(), got, expected));
    }
    Ok(BijectionReport { n, k, matrices: total, multiplicities })
}
