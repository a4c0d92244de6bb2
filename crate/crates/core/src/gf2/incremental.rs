use super::{words_for, xor_into, WORD};

/// Reduced row-echelon basis of a growing set of vectors in `F2^universe`.
///
/// Every stored row has a distinct pivot bit and is zero at all other pivot
/// bits, so reducing a new vector costs one XOR per pivot bit it touches.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    universe: usize,
    stride: usize,
    rows: Vec<u64>,
    pivot_of_row: Vec<u32>,
    row_of_pivot: Vec<u32>,
    scratch: Vec<u64>,
}

const NONE: u32 = u32::MAX;

impl IncrementalBasis {
    pub fn new(universe: usize) -> Self {
        let stride = words_for(universe);
        IncrementalBasis {
            universe,
            stride,
            rows: Vec::new(),
            pivot_of_row: Vec::new(),
            row_of_pivot: vec![NONE; universe],
            scratch: vec![0; stride],
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn rank(&self) -> usize {
        self.pivot_of_row.len()
    }

    /// Inserts the vector with the given support (duplicates cancel).
    /// Returns `true` when the rank grew.
    pub fn insert(&mut self, support: &[usize]) -> bool {
        let mut v = std::mem::take(&mut self.scratch);
        v.iter_mut().for_each(|w| *w = 0);
        for &i in support {
            debug_assert!(i < self.universe);
            v[i / WORD] ^= 1 << (i % WORD);
        }
        for &i in support {
            if v[i / WORD] >> (i % WORD) & 1 == 0 {
                continue;
            }
            let r = self.row_of_pivot[i];
            if r != NONE {
                let row = &self.rows[r as usize * self.stride..(r as usize + 1) * self.stride];
                xor_into(&mut v, row);
            }
        }
        // bits introduced by the XORs are never pivots, so v is now reduced
        let Some(p) = first_bit(&v) else {
            self.scratch = v;
            return false;
        };
        let new_row = self.pivot_of_row.len();
        for r in 0..new_row {
            let base = r * self.stride;
            if self.rows[base + p / WORD] >> (p % WORD) & 1 == 1 {
                xor_into(&mut self.rows[base..base + self.stride], &v);
            }
        }
        self.rows.extend_from_slice(&v);
        self.pivot_of_row.push(p as u32);
        self.row_of_pivot[p] = new_row as u32;
        self.scratch = v;
        true
    }

    /// Whether the vector lies in the current span.
    pub fn contains(&mut self, support: &[usize]) -> bool {
        let mut v = std::mem::take(&mut self.scratch);
        v.iter_mut().for_each(|w| *w = 0);
        for &i in support {
            v[i / WORD] ^= 1 << (i % WORD);
        }
        for &i in support {
            if v[i / WORD] >> (i % WORD) & 1 == 1 {
                let r = self.row_of_pivot[i];
                if r != NONE {
                    let row = &self.rows[r as usize * self.stride..(r as usize + 1) * self.stride];
                    xor_into(&mut v, row);
                }
            }
        }
        let zero = v.iter().all(|w| *w == 0);
        self.scratch = v;
        zero
    }
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}
