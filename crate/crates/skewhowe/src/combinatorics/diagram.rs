use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A Young diagram confined to an `n × k` box, stored as exactly `n` rows
/// (trailing rows may be zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct YoungDiagram {
    rows: Vec<usize>,
    n: usize,
    k: usize,
}

impl YoungDiagram {
    /// Builds a diagram from its row lengths; missing rows are padded with zeros.
    pub fn new(mut rows: Vec<usize>, n: usize, k: usize) -> Result<Self> {
        while rows.len() > n && rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.len() > n {
            return Err(Error::Domain(format!(
                "diagram {rows:?} has more than n={n} nonzero rows"
            )));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Structural(format!("rows {rows:?} are not weakly decreasing")));
        }
        if rows.first().is_some_and(|&r| r > k) {
            return Err(Error::Domain(format!("first row of {rows:?} exceeds k={k}")));
        }
        rows.resize(n, 0);
        Ok(Self { rows, n, k })
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Self { rows: vec![0; n], n, k }
    }

    /// Row lengths, always `n` of them.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Box height.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Box width.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Number of nonzero rows.
    pub fn length(&self) -> usize {
        self.rows.iter().take_while(|&&r| r > 0).count()
    }

    /// Conjugate diagram, living in the transposed `k × n` box.
    pub fn transpose(&self) -> Self {
        let cols = (0..self.k)
            .map(|c| self.rows.iter().take_while(|&&r| r > c).count())
            .collect();
        Self { rows: cols, n: self.k, k: self.n }
    }

    /// Complement inside the box, `λ̂_i = k − λ_{n+1−i}`.
    pub fn complement(&self) -> Self {
        let rows = self.rows.iter().rev().map(|&r| self.k - r).collect();
        Self { rows, n: self.n, k: self.k }
    }

    /// The shape `λ̄′` paired with `λ` by the duality: complement, then transpose.
    pub fn complement_transpose(&self) -> Self {
        self.complement().transpose()
    }

    /// All diagrams in the `n × k` box, in reverse lexicographic order of rows.
    pub fn all_in_box(n: usize, k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut rows = vec![0usize; n];
        fill(&mut rows, 0, k, &mut out, n, k);
        out
    }
}

fn fill(rows: &mut [usize], i: usize, cap: usize, out: &mut Vec<YoungDiagram>, n: usize, k: usize) {
    if i == rows.len() {
        out.push(YoungDiagram { rows: rows.to_vec(), n, k });
        return;
    }
    for v in (0..=cap).rev() {
        rows[i] = v;
        fill(rows, i + 1, v, out, n, k);
    }
    rows[i] = 0;
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.rows[..self.length()].iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pads_and_validates() {
        let d = YoungDiagram::new(vec![2, 1], 3, 2).unwrap();
        assert_eq!(d.rows(), &[2, 1, 0]);
        assert!(YoungDiagram::new(vec![1, 2], 3, 2).is_err());
        assert!(YoungDiagram::new(vec![3], 3, 2).is_err());
        assert!(YoungDiagram::new(vec![1, 1, 1, 1], 3, 2).is_err());
        assert_eq!(d.to_string(), "(2,1)");
    }

    #[test]
    fn box_counts_are_binomial() {
        assert_eq!(YoungDiagram::all_in_box(1, 1).len(), 2);
        assert_eq!(YoungDiagram::all_in_box(2, 2).len(), 6);
        assert_eq!(YoungDiagram::all_in_box(3, 3).len(), 20);
        assert_eq!(YoungDiagram::all_in_box(2, 4).len(), 15);
    }

    #[test]
    fn complement_transpose_example() {
        // (2,1) in 2 × 3: complement (2,1) -> transpose (2,1) in 3 × 2.
        let d = YoungDiagram::new(vec![2, 1], 2, 3).unwrap();
        let c = d.complement_transpose();
        assert_eq!((c.n(), c.k()), (3, 2));
        assert_eq!(c.rows(), &[2, 1, 0]);
        let full = YoungDiagram::new(vec![3, 3], 2, 3).unwrap();
        assert!(full.complement_transpose().is_empty());
    }
}
