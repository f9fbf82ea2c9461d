use std::fmt;

use crate::combinatorics::diagram::YoungDiagram;
use crate::error::{Error, Result};

/// A symbol of the ordered alphabet `1 < 1̄ < 2 < 2̄ < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// 1-based index.
    pub index: usize,
    pub barred: bool,
}

impl Letter {
    pub fn plain(index: usize) -> Self {
        Self { index, barred: false }
    }

    pub fn bar(index: usize) -> Self {
        Self { index, barred: true }
    }

    /// Dense code preserving the alphabet order: `i ↦ 2(i−1)`, `ī ↦ 2(i−1)+1`.
    pub fn code(self) -> u16 {
        (2 * (self.index - 1) + usize::from(self.barred)) as u16
    }

    pub fn from_code(c: u16) -> Self {
        Self { index: c as usize / 2 + 1, barred: c % 2 == 1 }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "{}\u{0304}", self.index)
        } else {
            write!(f, "{}", self.index)
        }
    }
}

/// A King tableau of rank `rank`: rows weakly increase, columns strictly
/// increase, and row `r` only holds letters `≥ r` (1-based, unbarred `r`
/// being the smallest allowed).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KingTableau {
    rank: usize,
    rows: Vec<Vec<u16>>,
}

impl KingTableau {
    pub fn empty(rank: usize) -> Self {
        Self { rank, rows: Vec::new() }
    }

    /// Builds and validates a tableau from rows of letters.
    pub fn new(rank: usize, rows: Vec<Vec<Letter>>) -> Result<Self> {
        let rows = rows.into_iter().map(|r| r.into_iter().map(Letter::code).collect()).collect();
        Self::from_codes(rank, rows)
    }

    pub(crate) fn from_codes(rank: usize, mut rows: Vec<Vec<u16>>) -> Result<Self> {
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        let t = Self { rank, rows };
        t.validate()?;
        Ok(t)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn codes(&self) -> &[Vec<u16>] {
        &self.rows
    }

    pub fn rows(&self) -> Vec<Vec<Letter>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&c| Letter::from_code(c)).collect())
            .collect()
    }

    pub fn num_boxes(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row lengths.
    pub fn shape_rows(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// The shape as a diagram in a `rank × width` box.
    pub fn shape(&self, width: usize) -> Result<YoungDiagram> {
        YoungDiagram::new(self.shape_rows(), self.rank, width)
    }

    /// Checks shape, semistandardness and the symplectic row condition.
    pub fn validate(&self) -> Result<()> {
        let max_code = 2 * self.rank as u16;
        for (r, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::Structural(format!("empty row {r} inside tableau")));
            }
            if r > 0 && row.len() > self.rows[r - 1].len() {
                return Err(Error::Structural(format!("row {r} longer than the row above")));
            }
            for (c, &x) in row.iter().enumerate() {
                if x >= max_code {
                    return Err(Error::Structural(format!(
                        "letter {} exceeds rank {}",
                        Letter::from_code(x),
                        self.rank
                    )));
                }
                if (x as usize) < 2 * r {
                    return Err(Error::Structural(format!(
                        "letter {} below row {}",
                        Letter::from_code(x),
                        x / 2 + 1
                    )));
                }
                if c > 0 && row[c - 1] > x {
                    return Err(Error::Structural(format!("row {r} decreases at column {c}")));
                }
                if r > 0 && self.rows[r - 1][c] >= x {
                    return Err(Error::Structural(format!("column {c} not strict at row {r}")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for KingTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|&c| Letter::from_code(c).to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Number of King tableaux of the given shape and rank, by brute force.
///
/// Only meant as an independent oracle for small shapes.
pub fn count_king_tableaux(shape: &[usize], rank: usize) -> u64 {
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut grid: Vec<Vec<u16>> = shape.iter().map(|&l| vec![0; l]).collect();
    count_fill(&cells, 0, &mut grid, rank)
}

fn count_fill(cells: &[(usize, usize)], idx: usize, grid: &mut [Vec<u16>], rank: usize) -> u64 {
    if idx == cells.len() {
        return 1;
    }
    let (r, c) = cells[idx];
    let mut lo = 2 * r as u16;
    if c > 0 {
        lo = lo.max(grid[r][c - 1]);
    }
    if r > 0 {
        lo = lo.max(grid[r - 1][c] + 1);
    }
    let mut total = 0;
    for x in lo..2 * rank as u16 {
        grid[r][c] = x;
        total += count_fill(cells, idx + 1, grid, rank);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_codes_follow_alphabet_order() {
        let seq = [Letter::plain(1), Letter::bar(1), Letter::plain(2), Letter::bar(2)];
        for w in seq.windows(2) {
            assert!(w[0].code() < w[1].code());
            assert_eq!(Letter::from_code(w[0].code()), w[0]);
        }
    }

    #[test]
    fn symplectic_condition_enforced() {
        // 1 may not sit in row 2.
        let bad = KingTableau::new(2, vec![vec![Letter::plain(1)], vec![Letter::bar(1)]]);
        assert!(bad.is_err());
        let good = KingTableau::new(2, vec![vec![Letter::plain(1)], vec![Letter::plain(2)]]);
        assert!(good.is_ok());
    }

    #[test]
    fn counts_match_known_dimensions() {
        assert_eq!(count_king_tableaux(&[1], 1), 2);
        assert_eq!(count_king_tableaux(&[1, 1], 2), 5);
        assert_eq!(count_king_tableaux(&[1], 2), 4);
        assert_eq!(count_king_tableaux(&[2], 1), 3);
    }
}
