use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::diagram::YoungDiagram;
use crate::combinatorics::insertion::insert_code;
use crate::combinatorics::proctor::step_word;
use crate::error::Result;
use crate::params::EnsembleParams;

/// The random stream of sample `index` under `seed`; streams for different
/// indices are independent, so batches can be split across threads freely.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Letters handled by [`FlatTableau`]; larger ranks use the reference rows.
const FLAT_ALPHABET: usize = 128;

#[derive(Debug, Clone)]
struct FlatRow {
    len: usize,
    /// Bit `c` is set when letter `c` occurs in the row.
    mask: [u64; 2],
    /// Column of the first occurrence of each letter present.
    first: [u16; FLAT_ALPHABET],
}

impl FlatRow {
    fn has(&self, c: usize) -> bool {
        self.mask[c / 64 % 2] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, c: usize) {
        self.mask[c / 64 % 2] |= 1 << (c % 64);
    }

    /// Smallest letter present and greater than `x`.
    fn next_above(&self, x: usize) -> Option<usize> {
        let c = x + 1;
        if c < 64 {
            let lo = self.mask[0] & (!0u64 << c);
            if lo != 0 {
                return Some(lo.trailing_zeros() as usize);
            }
            return (self.mask[1] != 0).then(|| 64 + self.mask[1].trailing_zeros() as usize);
        }
        let hi = self.mask[1] & (!0u64).checked_shl((c - 64) as u32).unwrap_or(0);
        (hi != 0).then(|| 64 + hi.trailing_zeros() as usize)
    }

    /// Records `c` written at `col`; no copy of `c` may sit left of `col`.
    /// Branch-free: which way these go is close to a coin flip.
    fn gain(&mut self, c: usize, col: usize) {
        let keep = 0u16.wrapping_sub(u16::from(self.has(c)));
        let f = &mut self.first[c];
        *f = (*f & keep) | (col as u16 & !keep);
        self.set(c);
    }

    /// Forgets the copy of `c` at `col` before the cell is overwritten.
    fn lose(&mut self, cells: &[u16], c: usize, col: usize) {
        if self.first[c] as usize == col {
            self.lose_first(cells, c, col);
        }
    }

    /// As [`FlatRow::lose`] when `col` is known to hold the first copy.
    /// `cells` must extend past the row end.
    fn lose_first(&mut self, cells: &[u16], c: usize, col: usize) {
        let more = (col + 1 < self.len) & (cells[col + 1] as usize == c);
        self.first[c] += u16::from(more);
        self.mask[c / 64 % 2] &= !(u64::from(!more) << (c % 64));
    }
}

/// `P` as flat rows plus, per row, the set of letters present and the column
/// of their first occurrence. The bumped entry is the lowest set bit above
/// `x` and its column is known, so a row visit costs O(1).
#[derive(Debug, Clone)]
struct FlatTableau {
    stride: usize,
    cells: Vec<u16>,
    rows: Vec<FlatRow>,
}

impl FlatTableau {
    fn new(n: usize, k: usize) -> Self {
        debug_assert!(2 * n <= FLAT_ALPHABET);
        let stride = k + 2;
        Self {
            stride,
            cells: vec![0; (n + 1) * stride],
            rows: vec![FlatRow { len: 0, mask: [0; 2], first: [0; FLAT_ALPHABET] }; n + 1],
        }
    }

    fn clear(&mut self) {
        for row in &mut self.rows {
            row.len = 0;
            row.mask = [0; 2];
        }
    }

    fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.len)
    }

    /// Same rules as `insert_code`.
    fn insert(&mut self, x: u16) {
        let mut x = x as usize % FLAT_ALPHABET;
        for (r, (row, cells)) in self.rows.iter_mut().zip(self.cells.chunks_exact_mut(self.stride)).enumerate() {
            let Some(y) = row.next_above(x) else {
                cells[row.len] = x as u16;
                row.gain(x, row.len);
                row.len += 1;
                return;
            };
            let y = y % FLAT_ALPHABET;
            let pos = row.first[y] as usize;
            if x == 2 * r && y == x + 1 {
                self.slide_out(r, pos);
                return;
            }
            row.lose_first(cells, y, pos);
            cells[pos] = x as u16;
            row.gain(x, pos);
            x = y;
        }
        unreachable!("a King tableau never grows past its rank");
    }

    fn slide_out(&mut self, mut i: usize, mut j: usize) {
        let s = self.stride;
        let erased = self.cells[i * s + j] as usize;
        self.rows[i].lose(&self.cells[i * s..(i + 1) * s], erased, j);
        loop {
            let right = (j + 1 < self.rows[i].len).then(|| self.cells[i * s + j + 1]);
            let below =
                (i + 1 < self.rows.len() && j < self.rows[i + 1].len).then(|| self.cells[(i + 1) * s + j]);
            match (below, right) {
                (None, None) => break,
                (Some(b), r) if r.is_none_or(|r| b <= r) => {
                    let b = b as usize;
                    self.rows[i + 1].lose(&self.cells[(i + 1) * s..(i + 2) * s], b, j);
                    self.cells[i * s + j] = b as u16;
                    let row = &mut self.rows[i];
                    row.set(b);
                    row.first[b] = j as u16;
                    i += 1;
                }
                (_, Some(r)) => {
                    self.cells[i * s + j] = r;
                    let first = &mut self.rows[i].first[r as usize];
                    *first -= u16::from(*first as usize == j + 1);
                    j += 1;
                }
                (Some(_), None) => unreachable!(),
            }
        }
        self.rows[i].len -= 1;
    }
}

#[derive(Debug, Clone)]
enum Storage {
    Flat(FlatTableau),
    Rows(Vec<Vec<u16>>),
}

/// Reusable buffers for drawing many diagrams with the same parameters.
///
/// Only the shape of `P` is tracked, which is all the measure depends on.
#[derive(Debug, Clone)]
pub struct Sampler {
    n: usize,
    k: usize,
    words: Vec<u64>,
    tableau: Storage,
    word: Vec<u16>,
    shape: Vec<usize>,
}

impl Sampler {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        params.require_symmetric("sampling")?;
        let (n, k) = (params.n(), params.k());
        Ok(Self {
            n,
            k,
            words: vec![0; (2 * n * k).div_ceil(64)],
            tableau: if 2 * n <= FLAT_ALPHABET {
                Storage::Flat(FlatTableau::new(n, k))
            } else {
                Storage::Rows(vec![Vec::with_capacity(k + 2); n + 1])
            },
            word: Vec::with_capacity(2 * n),
            shape: vec![0; n],
        })
    }

    /// Fills the matrix from the sample's stream and returns the row lengths of `P`.
    pub fn sample_rows(&mut self, seed: u64, index: u64) -> &[usize] {
        let mut rng = sample_rng(seed, index);
        for w in &mut self.words {
            *w = rng.next_u64();
        }
        match &mut self.tableau {
            Storage::Flat(t) => t.clear(),
            Storage::Rows(rows) => rows.iter_mut().for_each(Vec::clear),
        }
        let (n, k) = (self.n, self.k);
        let words = &self.words;
        let bit = |i: usize, j: usize| {
            let b = i * 2 * k + j;
            (words[b / 64] >> (b % 64)) & 1 == 1
        };
        for r in 0..k {
            step_word(bit, n, r, &mut self.word);
            match &mut self.tableau {
                Storage::Flat(t) => self.word.iter().for_each(|&x| t.insert(x)),
                Storage::Rows(rows) => self.word.iter().for_each(|&x| {
                    insert_code(rows, x);
                }),
            }
        }
        match &self.tableau {
            Storage::Flat(t) => self.shape.iter_mut().zip(t.lengths()).for_each(|(s, l)| *s = l),
            Storage::Rows(rows) => self.shape.iter_mut().zip(rows).for_each(|(s, r)| *s = r.len()),
        }
        &self.shape
    }

    pub fn sample(&mut self, seed: u64, index: u64) -> YoungDiagram {
        let rows = self.sample_rows(seed, index).to_vec();
        YoungDiagram::new(rows, self.n, self.k).expect("Proctor output fits the box")
    }
}

/// Draws one diagram with fair i.i.d. bits; deterministic in `seed`.
pub fn sample_diagram(params: &EnsembleParams, seed: u64) -> Result<YoungDiagram> {
    Ok(Sampler::new(params)?.sample(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::proctor::{proctor_from_matrix, BinaryMatrix};

    #[test]
    fn n1_k1_shapes() {
        let params = EnsembleParams::new(1, 1).unwrap();
        let mut s = Sampler::new(&params).unwrap();
        let mut ones = 0;
        for i in 0..2000 {
            let d = s.sample(7, i);
            assert!(d.size() <= 1);
            ones += d.size();
        }
        assert!((ones as f64 / 2000.0 - 0.5).abs() < 0.05);
    }

    #[test]
    fn large_rank_uses_reference_rows() {
        let params = EnsembleParams::new(70, 2).unwrap();
        let mut s = Sampler::new(&params).unwrap();
        assert!(matches!(s.tableau, Storage::Rows(_)));
        let d = s.sample(1, 0);
        assert!(d.length() <= 70 && d.rows()[0] <= 2);
    }

    #[test]
    fn deterministic() {
        let params = EnsembleParams::new(3, 4).unwrap();
        assert_eq!(sample_diagram(&params, 11).unwrap(), sample_diagram(&params, 11).unwrap());
    }

    #[test]
    fn flat_tableau_matches_reference_insertion() {
        use crate::combinatorics::insertion::insert_code;
        let (n, k) = (6, 9);
        let mut rng = sample_rng(3, 0);
        for _ in 0..300 {
            let mut flat = FlatTableau::new(n, k);
            let mut rows: Vec<Vec<u16>> = vec![Vec::new(); n + 1];
            let words: Vec<u64> = (0..(2 * n * k).div_ceil(64)).map(|_| rng.next_u64()).collect();
            let bit = |i: usize, j: usize| {
                let b = i * 2 * k + j;
                (words[b / 64] >> (b % 64)) & 1 == 1
            };
            let mut word = Vec::new();
            for r in 0..k {
                step_word(bit, n, r, &mut word);
                for &x in &word {
                    flat.insert(x);
                    insert_code(&mut rows, x);
                }
                for (i, row) in rows.iter().enumerate() {
                    assert_eq!(&flat.cells[i * flat.stride..i * flat.stride + flat.rows[i].len], &row[..]);
                    for c in 0..2 * n {
                        let pos = row.iter().position(|&y| y as usize == c);
                        assert_eq!(flat.rows[i].has(c), pos.is_some());
                        if let Some(pos) = pos {
                            assert_eq!(flat.rows[i].first[c] as usize, pos);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_full_algorithm() {
        let params = EnsembleParams::new(3, 2).unwrap();
        let mut s = Sampler::new(&params).unwrap();
        for idx in 0..200u64 {
            let shape = s.sample_rows(5, idx).to_vec();
            let mut rng = sample_rng(5, idx);
            let w = rng.next_u64();
            let mut m = BinaryMatrix::zeros(3, 2);
            for b in 0..12 {
                m.set(b / 4, b % 4, (w >> b) & 1 == 1);
            }
            let pair = proctor_from_matrix(&m, &params).unwrap();
            let mut expect = pair.p.shape_rows();
            expect.resize(3, 0);
            assert_eq!(shape, expect);
        }
    }
}
