//! Rank of column-sparse F2 matrices.
//!
//! Boundary matrices of random complexes have a handful of nonzeros per
//! column. Elimination that always pivots on a shortest live column, at its
//! rarest row, keeps fill-in small; when the shortest live column grows past
//! a threshold the remaining block is finished densely.

use super::{words_for, xor_into, WORD};

/// Shortest-column length at which the sparse phase hands over to dense.
const DENSE_SWITCH: usize = 48;

/// A matrix stored as a list of columns, each a set of row indices.
#[derive(Clone, Debug, Default)]
pub struct SparseColumns {
    rows: usize,
    cols: Vec<Vec<u32>>,
}

/// Result of a sparse rank computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRank {
    pub rank: usize,
    /// Original indices of a maximal independent set of columns.
    pub pivot_columns: Vec<usize>,
}

impl SparseColumns {
    pub fn new(rows: usize) -> Self {
        SparseColumns {
            rows,
            cols: Vec::new(),
        }
    }

    /// Appends a column; repeated row indices cancel in pairs.
    pub fn push_column(&mut self, mut rows: Vec<u32>) {
        rows.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(rows.len());
        for r in rows {
            debug_assert!((r as usize) < self.rows);
            if out.last() == Some(&r) {
                out.pop();
            } else {
                out.push(r);
            }
        }
        self.cols.push(out);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, i: usize) -> &[u32] {
        &self.cols[i]
    }

    pub fn rank(&self) -> usize {
        self.rank_with_pivots().rank
    }

    pub fn rank_with_pivots(&self) -> SparseRank {
        Eliminator::new(self).run()
    }
}

struct Eliminator {
    cols: Vec<Vec<u32>>,
    alive: Vec<bool>,
    occ: Vec<Vec<u32>>,
    row_count: Vec<u32>,
    buckets: Vec<Vec<u32>>,
    scratch: Vec<u32>,
}

impl Eliminator {
    fn new(m: &SparseColumns) -> Self {
        let mut occ = vec![Vec::new(); m.rows];
        let mut row_count = vec![0u32; m.rows];
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); DENSE_SWITCH + 1];
        for (ci, c) in m.cols.iter().enumerate() {
            for &r in c {
                occ[r as usize].push(ci as u32);
                row_count[r as usize] += 1;
            }
            buckets[c.len().min(DENSE_SWITCH)].push(ci as u32);
        }
        Eliminator {
            alive: vec![true; m.cols.len()],
            cols: m.cols.clone(),
            occ,
            row_count,
            buckets,
            scratch: Vec::new(),
        }
    }

    fn run(mut self) -> SparseRank {
        let mut pivots = Vec::new();
        // buckets[0] holds zero columns; they are simply dropped
        for ci in std::mem::take(&mut self.buckets[0]) {
            if self.cols[ci as usize].is_empty() {
                self.alive[ci as usize] = false;
            }
        }
        let mut len = 1;
        while len < DENSE_SWITCH {
            let Some(ci) = self.buckets[len].pop() else {
                len += 1;
                continue;
            };
            let ci = ci as usize;
            if !self.alive[ci] || self.cols[ci].len() != len {
                continue;
            }
            let pivot_row = *self.cols[ci]
                .iter()
                .min_by_key(|&&r| self.row_count[r as usize])
                .expect("nonempty column");
            self.pivot(ci, pivot_row);
            pivots.push(ci);
            // fill may have created shorter columns
            len = 1;
        }
        let rest: Vec<usize> = (0..self.cols.len()).filter(|&c| self.alive[c]).collect();
        pivots.extend(self.dense_tail(&rest));
        SparseRank {
            rank: pivots.len(),
            pivot_columns: pivots,
        }
    }

    fn pivot(&mut self, ci: usize, pivot_row: u32) {
        self.alive[ci] = false;
        let pivot_col = std::mem::take(&mut self.cols[ci]);
        for &r in &pivot_col {
            self.row_count[r as usize] -= 1;
        }
        let users = std::mem::take(&mut self.occ[pivot_row as usize]);
        for cj in users {
            let cj = cj as usize;
            if !self.alive[cj] || self.cols[cj].binary_search(&pivot_row).is_err() {
                continue;
            }
            self.add_into(cj, &pivot_col);
            let l = self.cols[cj].len();
            if l == 0 {
                self.alive[cj] = false;
            } else {
                self.buckets[l.min(DENSE_SWITCH)].push(cj as u32);
            }
        }
        self.cols[ci] = pivot_col;
    }

    /// `cols[cj] ^= src`, maintaining row counts and occurrence lists.
    fn add_into(&mut self, cj: usize, src: &[u32]) {
        let dst = std::mem::take(&mut self.cols[cj]);
        self.scratch.clear();
        let (mut a, mut b) = (0, 0);
        while a < dst.len() || b < src.len() {
            let x = dst.get(a).copied().unwrap_or(u32::MAX);
            let y = src.get(b).copied().unwrap_or(u32::MAX);
            if x == y {
                self.row_count[x as usize] -= 1;
                a += 1;
                b += 1;
            } else if x < y {
                self.scratch.push(x);
                a += 1;
            } else {
                self.scratch.push(y);
                self.row_count[y as usize] += 1;
                self.occ[y as usize].push(cj as u32);
                b += 1;
            }
        }
        let mut out = dst;
        out.clear();
        out.extend_from_slice(&self.scratch);
        self.cols[cj] = out;
    }

    /// Dense elimination of the remaining columns; returns independent ones.
    fn dense_tail(&self, rest: &[usize]) -> Vec<usize> {
        if rest.is_empty() {
            return Vec::new();
        }
        // compress the live rows
        let mut row_map = vec![u32::MAX; self.row_count.len()];
        let mut nrows = 0usize;
        for &c in rest {
            for &r in &self.cols[c] {
                if row_map[r as usize] == u32::MAX {
                    row_map[r as usize] = nrows as u32;
                    nrows += 1;
                }
            }
        }
        let stride = words_for(nrows);
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut lead: Vec<usize> = Vec::new();
        let mut chosen = Vec::new();
        let mut v = vec![0u64; stride];
        for &c in rest {
            v.iter_mut().for_each(|w| *w = 0);
            for &r in &self.cols[c] {
                let i = row_map[r as usize] as usize;
                v[i / WORD] ^= 1 << (i % WORD);
            }
            for (row, &l) in basis.iter().zip(&lead) {
                if v[l / WORD] >> (l % WORD) & 1 == 1 {
                    xor_into(&mut v, row);
                }
            }
            if let Some(l) = first_bit(&v) {
                basis.push(v.clone());
                lead.push(l);
                chosen.push(c);
            }
        }
        chosen
    }
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Gf2Matrix;
    use proptest::prelude::*;

    fn dense_of(m: &SparseColumns) -> Gf2Matrix {
        let mut d = Gf2Matrix::zeros(m.rows(), m.cols());
        for c in 0..m.cols() {
            for &r in m.column(c) {
                d.set(r as usize, c, true);
            }
        }
        d
    }

    #[test]
    fn cancels_repeated_rows() {
        let mut m = SparseColumns::new(4);
        m.push_column(vec![1, 1, 2]);
        assert_eq!(m.column(0), &[2]);
    }

    #[test]
    fn cycle_graph_incidence() {
        // vertex-edge incidence of a 5-cycle has rank 4
        let mut m = SparseColumns::new(5);
        for i in 0..5u32 {
            m.push_column(vec![i, (i + 1) % 5]);
        }
        let r = m.rank_with_pivots();
        assert_eq!(r.rank, 4);
        assert_eq!(r.pivot_columns.len(), 4);
    }

    #[test]
    fn dense_block_fallback() {
        // long columns force the dense tail
        let mut m = SparseColumns::new(100);
        for c in 0..80u32 {
            m.push_column((0..100u32).filter(|r| (r * 7 + c * 13) % 3 != 0).collect());
        }
        assert_eq!(m.rank(), dense_of(&m).rank());
    }

    proptest! {
        #[test]
        fn agrees_with_dense(
            rows in 1usize..60,
            cols in prop::collection::vec(prop::collection::vec(0u32..60, 0..6), 0..80),
        ) {
            let mut m = SparseColumns::new(rows);
            for c in cols {
                m.push_column(c.into_iter().map(|r| r % rows as u32).collect());
            }
            let r = m.rank_with_pivots();
            let d = dense_of(&m);
            prop_assert_eq!(r.rank, d.rank());
            // pivot columns are independent
            let mut sub = SparseColumns::new(rows);
            for &c in &r.pivot_columns {
                sub.push_column(m.column(c).to_vec());
            }
            prop_assert_eq!(dense_of(&sub).rank(), r.rank);
        }
    }
}
