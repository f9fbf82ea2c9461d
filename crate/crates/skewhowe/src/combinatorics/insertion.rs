use crate::combinatorics::tableau::{KingTableau, Letter};
use crate::error::{Error, Result};

/// Result of one Berele insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertion {
    pub tableau: KingTableau,
    /// Cell `(row, column)` (0-based) removed by a cancellation, if one happened.
    pub vacated: Option<(usize, usize)>,
}

/// Inserts `letter` into a King tableau.
///
/// Plain row insertion, except when an unbarred `i` would bump `ī` out of row
/// `i`: then `i` is dropped, the `ī` box is erased and the hole slides out to
/// the boundary by jeu de taquin, so the tableau loses one box.
pub fn berele_insert(tableau: &KingTableau, letter: Letter) -> Result<Insertion> {
    tableau.validate()?;
    let rank = tableau.rank();
    if letter.index == 0 || letter.index > rank {
        return Err(Error::Domain(format!("letter {letter} outside the rank-{rank} alphabet")));
    }
    let mut rows = tableau.codes().to_vec();
    rows.resize(rank + 1, Vec::new());
    let vacated = insert_code(&mut rows, letter.code());
    let tableau = KingTableau::from_codes(rank, rows)?;
    Ok(Insertion { tableau, vacated })
}

/// In-place insertion on rows padded with empty vectors (an empty row ends
/// the tableau). Needs at least `rank + 1` rows. Returns the vacated cell.
pub(crate) fn insert_code(rows: &mut [Vec<u16>], mut x: u16) -> Option<(usize, usize)> {
    let mut r = 0;
    loop {
        let row = &mut rows[r];
        let pos = row.partition_point(|&y| y <= x);
        if pos == row.len() {
            row.push(x);
            return None;
        }
        let y = row[pos];
        if x % 2 == 0 && y == x + 1 && (x / 2) as usize == r {
            return Some(slide_out(rows, r, pos));
        }
        row[pos] = x;
        x = y;
        r += 1;
    }
}

/// Removes the entry at `(i, j)` and slides the hole outwards.
fn slide_out(rows: &mut [Vec<u16>], mut i: usize, mut j: usize) -> (usize, usize) {
    loop {
        let right = rows[i].get(j + 1).copied();
        let below = rows.get(i + 1).and_then(|r| r.get(j)).copied();
        match (below, right) {
            (None, None) => break,
            (Some(b), r) if r.is_none_or(|r| b <= r) => {
                rows[i][j] = b;
                i += 1;
            }
            (_, Some(r)) => {
                rows[i][j] = r;
                j += 1;
            }
            (Some(_), None) => unreachable!(),
        }
    }
    debug_assert_eq!(j + 1, rows[i].len());
    rows[i].pop();
    (i, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(rank: usize, letters: &[Letter]) -> (KingTableau, Vec<Option<(usize, usize)>>) {
        let mut t = KingTableau::empty(rank);
        let mut vac = Vec::new();
        for &l in letters {
            let ins = berele_insert(&t, l).unwrap();
            t = ins.tableau;
            vac.push(ins.vacated);
        }
        (t, vac)
    }

    #[test]
    fn first_insertion() {
        let (t, vac) = word(1, &[Letter::plain(1)]);
        assert_eq!(t.rows(), vec![vec![Letter::plain(1)]]);
        assert_eq!(vac, vec![None]);
    }

    #[test]
    fn bar_then_plain_cancels() {
        // The pair 1̄, 1 annihilates: the shape stays empty.
        let (t, vac) = word(1, &[Letter::bar(1), Letter::plain(1)]);
        assert_eq!(t.num_boxes(), 0);
        assert_eq!(vac, vec![None, Some((0, 0))]);
    }

    #[test]
    fn plain_then_bar_stacks_in_row() {
        let (t, vac) = word(1, &[Letter::plain(1), Letter::bar(1)]);
        assert_eq!(t.rows(), vec![vec![Letter::plain(1), Letter::bar(1)]]);
        assert!(vac.iter().all(Option::is_none));
    }

    #[test]
    fn ordinary_bump_into_second_row() {
        let (t, _) = word(2, &[Letter::plain(2), Letter::bar(1)]);
        assert_eq!(t.rows(), vec![vec![Letter::bar(1)], vec![Letter::plain(2)]]);
    }

    #[test]
    fn cancellation_slides_hole() {
        // 1̄ 2 / 2̄ then insert 1: 1 bumps 1̄ out of row 1, the hole slides.
        let start = KingTableau::new(
            2,
            vec![vec![Letter::bar(1), Letter::plain(2)], vec![Letter::bar(2)]],
        )
        .unwrap();
        let ins = berele_insert(&start, Letter::plain(1)).unwrap();
        assert_eq!(ins.tableau.rows(), vec![vec![Letter::plain(2)], vec![Letter::bar(2)]]);
        assert_eq!(ins.vacated, Some((0, 1)));
    }

    #[test]
    fn rejects_letters_beyond_rank() {
        assert!(berele_insert(&KingTableau::empty(1), Letter::plain(2)).is_err());
    }
}
