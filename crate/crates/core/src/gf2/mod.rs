//! Linear algebra over the two-element field.
//!
//! [`Gf2Matrix`] is a dense row-major bit matrix; [`SparseColumns`] is a
//! column-sparse matrix whose rank is computed by Markowitz-ordered
//! elimination; [`IncrementalBasis`] maintains a reduced echelon basis under
//! insertion of new vectors.

mod incremental;
mod sparse;

pub use incremental::IncrementalBasis;
pub use sparse::{SparseColumns, SparseRank};

use std::fmt;

use crate::error::{Error, Result};

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// A packed vector over F2.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Vector with ones exactly at `support` (duplicates cancel).
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self::from_support(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of the set bits, increasing.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len);
        xor_into(&mut self.words, &other.words);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A dense bit matrix, row-major, one bit per entry.
///
/// Bits beyond `cols` in the last word of each row are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Gf2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds from row supports (column indices of the ones).
    pub fn from_row_supports(rows: usize, cols: usize, supports: &[Vec<usize>]) -> Self {
        assert_eq!(supports.len(), rows);
        let mut m = Self::zeros(rows, cols);
        for (r, s) in supports.iter().enumerate() {
            for &c in s {
                m.flip(r, c);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Gf2Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for r in v.support() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    pub fn row(&self, r: usize) -> Gf2Vector {
        Gf2Vector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn column(&self, c: usize) -> Gf2Vector {
        Gf2Vector::from_support(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (wi, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = wi * WORD + w.trailing_zeros() as usize;
                    t.set(c, r, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    /// Matrix-vector product `self * x`.
    pub fn mul_vec(&self, x: &Gf2Vector) -> Result<Gf2Vector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        let mut out = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            if parity == 1 {
                out.flip(r);
            }
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    let (dst, src) = (r * out.stride, c * other.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= other.data[src + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rank over F2. The matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false, None).len()
    }

    /// Row reduction in place. Returns pivot columns, one per pivot row
    /// (pivot row `i` is row `i` afterwards). With `reduced`, entries above
    /// pivots are cleared too. `aug` receives the same row operations.
    fn eliminate(&mut self, reduced: bool, mut aug: Option<&mut Vec<bool>>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (wi, mask) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (r..self.rows).find(|&i| self.data[i * self.stride + wi] & mask != 0)
            else {
                continue;
            };
            if p != r {
                for w in 0..self.stride {
                    self.data.swap(p * self.stride + w, r * self.stride + w);
                }
                if let Some(a) = aug.as_deref_mut() {
                    a.swap(p, r);
                }
            }
            let start = if reduced { 0 } else { r + 1 };
            for i in start..self.rows {
                if i == r || self.data[i * self.stride + wi] & mask == 0 {
                    continue;
                }
                let (lo, hi) = self.data.split_at_mut(i.max(r) * self.stride);
                let (dst, src) = if i > r {
                    (&mut hi[..self.stride], &lo[r * self.stride..(r + 1) * self.stride])
                } else {
                    (&mut lo[i * self.stride..(i + 1) * self.stride], &hi[..self.stride])
                };
                xor_into(&mut dst[wi..], &src[wi..]);
                if let Some(a) = aug.as_deref_mut() {
                    a[i] ^= a[r];
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Some `x` with `self * x = b`, or `None` when `b` is outside the column span.
    pub fn solve_in_column_span(&self, b: &Gf2Vector) -> Result<Option<Gf2Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut m = self.clone();
        let mut rhs: Vec<bool> = (0..self.rows).map(|i| b.get(i)).collect();
        let pivots = m.eliminate(true, Some(&mut rhs));
        if rhs[pivots.len()..].iter().any(|&bit| bit) {
            return Ok(None);
        }
        let mut x = Gf2Vector::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if rhs[r] {
                x.set(c, true);
            }
        }
        Ok(Some(x))
    }

    /// A basis of `{x : self * x = 0}`, of size `cols - rank`.
    pub fn nullspace_basis(&self) -> Vec<Gf2Vector> {
        let mut m = self.clone();
        let pivots = m.eliminate(true, None);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = Gf2Vector::zeros(self.cols);
            x.set(free, true);
            for (r, &c) in pivots.iter().enumerate() {
                if m.get(r, free) {
                    x.set(c, true);
                }
            }
            basis.push(x);
        }
        basis
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "{:?}", self.row(r))?;
        }
        Ok(())
    }
}
