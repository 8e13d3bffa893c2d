//! Exact incremental row reduction over a field scalar.
//!
//! `RowSpace` keeps a fully reduced row-echelon basis (unit pivots, pivot
//! columns cleared everywhere else) and accepts rows one at a time. The
//! reduced form is unique for a given row space, so two spaces are equal iff
//! their reduced bases coincide.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse row: column index -> nonzero entry.
pub type SparseRow<T> = BTreeMap<usize, T>;

#[derive(Debug, Clone)]
pub struct RowSpace<T: Scalar> {
    ncols: usize,
    rows: Vec<SparseRow<T>>,
    /// pivot column -> index into `rows`
    pivots: BTreeMap<usize, usize>,
}

impl<T: Scalar> RowSpace<T> {
    pub fn new(ncols: usize) -> Self {
        RowSpace {
            ncols,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Columns without a pivot, ascending; these index the quotient basis.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .collect()
    }

    /// Reduces `row` against the current basis, returning the remainder
    /// (supported on non-pivot columns only).
    pub fn reduce(&self, mut row: SparseRow<T>) -> SparseRow<T> {
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((col, coeff)) = hit else { break };
            let pivot_row = &self.rows[self.pivots[&col]];
            for (c, v) in pivot_row {
                let delta = coeff.clone() * v.clone();
                match row.entry(*c) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        if !delta.is_zero() {
                            e.insert(-delta);
                        }
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let next = e.get().clone() - delta;
                        if next.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = next;
                        }
                    }
                }
            }
        }
        row
    }

    /// Inserts a row; returns true if it was independent (rank grew).
    pub fn insert(&mut self, row: SparseRow<T>) -> bool {
        let row = self.reduce(row);
        let Some((&col, lead)) = row.iter().next() else {
            return false;
        };
        let lead = lead.clone();
        let row: SparseRow<T> = row
            .into_iter()
            .map(|(c, v)| (c, v / lead.clone()))
            .collect();
        // Clear the new pivot column from the existing basis.
        for existing in &mut self.rows {
            if let Some(coeff) = existing.get(&col).cloned() {
                for (c, v) in &row {
                    let delta = coeff.clone() * v.clone();
                    match existing.entry(*c) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            if !delta.is_zero() {
                                e.insert(-delta);
                            }
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let next = e.get().clone() - delta;
                            if next.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = next;
                            }
                        }
                    }
                }
            }
        }
        self.pivots.insert(col, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Reduced basis rows ordered by pivot column; canonical for the space.
    pub fn rref(&self) -> Vec<SparseRow<T>> {
        self.pivots
            .values()
            .map(|&i| self.rows[i].clone())
            .collect()
    }

    pub fn contains(&self, row: SparseRow<T>) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn space_eq(&self, other: &RowSpace<T>) -> bool {
        self.ncols == other.ncols && self.rref() == other.rref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::Zero;

    fn row(entries: &[(usize, i64)]) -> SparseRow<Rat> {
        entries
            .iter()
            .map(|&(c, v)| (c, Rat::from_integer(v.into())))
            .collect()
    }

    /// Dense Gauss-Jordan used as an independent rank oracle.
    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rat::from_integer(v.into())).collect())
            .collect();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            if let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) {
                m.swap(rank, pivot);
                let lead = m[rank][col].clone();
                for v in &mut m[rank] {
                    *v = v.clone() / lead.clone();
                }
                for r in 0..m.len() {
                    if r != rank && !m[r][col].is_zero() {
                        let f = m[r][col].clone();
                        for c in 0..ncols {
                            let delta = f.clone() * m[rank][c].clone();
                            m[r][c] = m[r][c].clone() - delta;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn rank_matches_dense_oracle() {
        let dense = vec![
            vec![1, 2, 3, 0],
            vec![2, 4, 6, 0],
            vec![0, 1, 1, 1],
            vec![1, 3, 4, 1],
            vec![0, 0, 0, 5],
        ];
        let mut space = RowSpace::new(4);
        for r in &dense {
            let sparse: SparseRow<Rat> = r
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c, Rat::from_integer(v.into())))
                .collect();
            space.insert(sparse);
        }
        assert_eq!(space.rank(), dense_rank(&dense));
    }

    #[test]
    fn rref_is_canonical() {
        let mut a = RowSpace::new(3);
        a.insert(row(&[(0, 1), (1, 1)]));
        a.insert(row(&[(1, 2)]));
        let mut b = RowSpace::new(3);
        b.insert(row(&[(1, 7)]));
        b.insert(row(&[(0, 3), (1, 5)]));
        assert!(a.space_eq(&b));

        let mut c = RowSpace::new(3);
        c.insert(row(&[(0, 1)]));
        assert!(!a.space_eq(&c));
    }

    #[test]
    fn reduce_produces_remainder_on_free_columns() {
        let mut space = RowSpace::new(3);
        space.insert(row(&[(0, 1), (2, -1)]));
        let rem = space.reduce(row(&[(0, 2), (1, 1)]));
        // 2*col0 + col1 - 2*(col0 - col2) = col1 + 2*col2
        assert_eq!(rem, row(&[(1, 1), (2, 2)]));
        assert!(space.contains(row(&[(0, 5), (2, -5)])));
    }
}
