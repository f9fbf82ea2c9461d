use std::fmt;

use crate::combinatorics::insertion::insert_code;
use crate::combinatorics::tableau::KingTableau;
use crate::error::{Error, Result};
use crate::params::EnsembleParams;

/// An `n × 2k` zero-one matrix, one basis vector of the exterior algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n: usize,
    k: usize,
    bits: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize, k: usize) -> Self {
        Self { n, k, bits: vec![false; 2 * n * k] }
    }

    pub fn ones(n: usize, k: usize) -> Self {
        Self { n, k, bits: vec![true; 2 * n * k] }
    }

    /// From rows of bits; every row must have the same even length `2k`.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if n == 0 || width == 0 || width % 2 != 0 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::Structural(format!(
                "need a nonempty n × 2k matrix with equal rows, got {n} rows of width {width}"
            )));
        }
        Ok(Self { n, k: width / 2, bits: rows.concat() })
    }

    /// The matrix whose cell `(i, j)` is bit `i·2k + j` of `index`.
    pub fn from_index(n: usize, k: usize, index: u64) -> Self {
        let bits = (0..2 * n * k).map(|b| (index >> b) & 1 == 1).collect();
        Self { n, k, bits }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        2 * self.k
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * 2 * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * 2 * self.k + j] = v;
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols() {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
        }
        Ok(())
    }
}

/// Both tableaux produced from one matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProctorPair {
    /// Rank-`n` King tableau of shape `λ`.
    pub p: KingTableau,
    /// Rank-`k` King tableau of shape `λ̄′`.
    pub q: KingTableau,
}

/// Letters inserted for column pair `r`: rows read bottom-up, `(0,0) → i`,
/// `(1,0) → ī, i`, `(1,1) → ī`, `(0,1) → nothing`.
pub(crate) fn step_word(bit: impl Fn(usize, usize) -> bool, n: usize, r: usize, word: &mut Vec<u16>) {
    word.clear();
    for i in (0..n).rev() {
        let plain = 2 * i as u16;
        match (bit(i, 2 * r), bit(i, 2 * r + 1)) {
            (false, false) => word.push(plain),
            (true, false) => {
                word.push(plain + 1);
                word.push(plain);
            }
            (true, true) => word.push(plain + 1),
            (false, true) => {}
        }
    }
}

/// Runs Proctor's algorithm on the matrix.
///
/// `P` grows by Berele insertion of the column-pair words. At step `r` the
/// boxes gained and erased in `P` determine the new cells of `Q`, labelled
/// `r` or `r̄` in the rank-`k` alphabet.
pub fn proctor_from_matrix(m: &BinaryMatrix, params: &EnsembleParams) -> Result<ProctorPair> {
    let (n, k) = (params.n(), params.k());
    if m.rows() != n || m.cols() != 2 * k {
        return Err(Error::Structural(format!(
            "matrix is {}×{}, expected {n}×{}",
            m.rows(),
            m.cols(),
            2 * k
        )));
    }
    let mut rows: Vec<Vec<u16>> = vec![Vec::new(); n + 1];
    let mut word = Vec::with_capacity(2 * n);
    // Q cells indexed by (row of the n × k rectangle, 1-based column).
    let mut qcells: Vec<(usize, usize, u16)> = Vec::new();
    for r in 0..k {
        let old: Vec<usize> = rows[..n].iter().map(Vec::len).collect();
        let mut erased = vec![0usize; n];
        step_word(|i, j| m.get(i, j), n, r, &mut word);
        let mut cells = Vec::new();
        for &x in &word {
            if let Some((i, j)) = insert_code(&mut rows, x) {
                erased[i] += 1;
                cells.push((i, j));
            }
        }
        if let Some(&(i, j)) = cells.iter().find(|&&(i, j)| j != rows[i].len()) {
            return Err(Error::Consistency(format!("step {r}: erased cell ({i},{j}) not at the row end")));
        }
        for c in &mut qcells {
            c.1 += 1;
        }
        for i in 0..n {
            let new = rows[i].len();
            let nu = new + erased[i];
            if nu < old[i] || nu > old[i] + 1 || erased[i] > 1 {
                return Err(Error::Consistency(format!(
                    "step {r}, row {i}: old {}, new {new}, erased {}",
                    old[i], erased[i]
                )));
            }
            if nu == new + 1 {
                qcells.push((i, new + 1, 2 * r as u16 + 1));
            }
            if nu == old[i] {
                qcells.push((i, old[i] + 1, 2 * r as u16));
            }
        }
    }
    let lam: Vec<usize> = rows[..n].iter().map(Vec::len).collect();
    let p = KingTableau::from_codes(n, rows)?;
    // Rectangle cell (i, c) becomes Q cell (k − c, n − 1 − i).
    let mut qrows: Vec<Vec<u16>> = (0..k)
        .map(|qr| {
            let c = k - qr;
            let len = lam.iter().filter(|&&l| l < c).count();
            vec![u16::MAX; len]
        })
        .collect();
    for (i, c, label) in qcells {
        if c > k || c <= lam[i] {
            return Err(Error::Consistency(format!("Q cell ({i},{c}) overlaps P")));
        }
        let (qr, qc) = (k - c, n - 1 - i);
        match qrows[qr].get_mut(qc) {
            Some(slot) if *slot == u16::MAX => *slot = label,
            _ => return Err(Error::Consistency(format!("Q cell ({i},{c}) misplaced"))),
        }
    }
    if qrows.iter().flatten().any(|&x| x == u16::MAX) {
        return Err(Error::Consistency("Q does not fill the complement of P".into()));
    }
    let q = KingTableau::from_codes(k, qrows)?;
    Ok(ProctorPair { p, q })
}
