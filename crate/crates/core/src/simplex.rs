//! Canonical simplices and colexicographic ranking of vertex subsets.
//!
//! A simplex is stored as a strictly increasing list of 0-based vertex ids.
//! The colex rank of `{v_0 < v_1 < ... < v_d}` is `sum_i C(v_i, i + 1)`,
//! which enumerates all `(d+1)`-subsets of `[0, n)` densely in `[0, C(n, d+1))`
//! independently of `n`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Vertex identifier, 0-based.
pub type Vertex = u32;

const TABLE_N: usize = 4096;
const TABLE_K: usize = 16;

fn table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0u64; TABLE_N * TABLE_K];
        for n in 0..TABLE_N {
            t[n * TABLE_K] = 1;
            for k in 1..TABLE_K.min(n + 1) {
                let a = t[(n - 1) * TABLE_K + k - 1];
                let b = if k < n { t[(n - 1) * TABLE_K + k] } else { 0 };
                t[n * TABLE_K + k] = a.saturating_add(b);
            }
        }
        t
    })
}

/// Binomial coefficient `C(n, k)`, saturating at `u64::MAX`.
#[inline]
pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    if n < TABLE_N && k < TABLE_K {
        return table()[n * TABLE_K + k];
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colex rank of a strictly increasing vertex list.
#[inline]
pub fn colex_rank(vertices: &[Vertex]) -> u64 {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| binom(v as usize, i + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for subsets of size `size`.
pub fn colex_unrank(mut rank: u64, size: usize) -> Simplex {
    let mut out: SmallVec<[Vertex; 8]> = SmallVec::from_elem(0, size);
    for i in (0..size).rev() {
        // largest v with C(v, i+1) <= rank
        let mut lo = i as u64;
        let mut hi = lo.max(1);
        while binom(hi as usize, i + 1) <= rank {
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if binom(mid as usize, i + 1) <= rank {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out[i] = lo as Vertex;
        rank -= binom(lo as usize, i + 1);
    }
    Simplex(out)
}

/// A nonempty simplex: strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex(SmallVec<[Vertex; 8]>);

impl Simplex {
    /// Builds a simplex from arbitrary-order vertices, rejecting duplicates.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: SmallVec<[Vertex; 8]> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidSimplex("empty vertex set".into()));
        }
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!(
                "duplicate vertex in {:?}",
                v.as_slice()
            )));
        }
        Ok(Simplex(v))
    }

    /// Caller guarantees strictly increasing input.
    pub(crate) fn from_sorted(v: &[Vertex]) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Simplex(SmallVec::from_slice(v))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn rank(&self) -> u64 {
        colex_rank(&self.0)
    }

    pub fn max_vertex(&self) -> Vertex {
        *self.0.last().expect("simplex is nonempty")
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.by_ref().any(|w| w == v))
    }

    /// The simplex with vertex `v` added (no-op if already present).
    pub fn with_vertex(&self, v: Vertex) -> Simplex {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Simplex(out)
    }

    /// The simplex with vertex at position `i` removed.
    pub fn without_index(&self, i: usize) -> Simplex {
        let mut out = self.0.clone();
        out.remove(i);
        Simplex(out)
    }

    /// Vertices of `self` not in `other`.
    pub fn difference(&self, other: &Simplex) -> Vec<Vertex> {
        self.0
            .iter()
            .copied()
            .filter(|v| !other.contains_vertex(*v))
            .collect()
    }

    /// All faces with exactly `size` vertices, in colex order.
    pub fn faces(&self, size: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for_each_subset(&self.0, size, |s| out.push(Simplex::from_sorted(s)));
        out
    }

    /// Colex ranks of all faces with exactly `size` vertices.
    pub fn face_ranks(&self, size: usize) -> Vec<u64> {
        let mut out = Vec::new();
        for_each_subset(&self.0, size, |s| out.push(colex_rank(s)));
        out
    }

    /// 1-based rendering, as used in fixture files.
    pub fn to_one_based(&self) -> Vec<u32> {
        self.0.iter().map(|v| v + 1).collect()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Calls `f` on every `size`-subset of the sorted slice `set`, in colex order.
pub fn for_each_subset(set: &[Vertex], size: usize, mut f: impl FnMut(&[Vertex])) {
    let m = set.len();
    if size > m {
        return;
    }
    if size == 0 {
        f(&[]);
        return;
    }
    // positions into `set`, colex successor on index tuples
    let mut idx: SmallVec<[usize; 8]> = (0..size).collect();
    let mut buf: SmallVec<[Vertex; 8]> = idx.iter().map(|&i| set[i]).collect();
    loop {
        f(&buf);
        let mut i = 0;
        while i < size && idx[i] + 1 == if i + 1 < size { idx[i + 1] } else { m } {
            i += 1;
        }
        if i == size {
            return;
        }
        idx[i] += 1;
        buf[i] = set[idx[i]];
        for t in 0..i {
            idx[t] = t;
            buf[t] = set[t];
        }
    }
}
