//! Enumeration of traversable supports of nonzero j-cocycles.
//!
//! In a complex where every j-simplex lies in a k-simplex, the support of a
//! j-cocycle that meets a k-simplex must meet it in at least two j-faces, so
//! a traversable support can be grown from its smallest simplex by visiting
//! k-simplices in breadth-first order and deciding all of their j-faces at
//! once. Every assignment inside one k-simplex is checked against the
//! cocycle condition on the (j+1)-faces of that k-simplex, which are all of
//! the (j+1)-simplices of a G-model complex.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Model};
use crate::error::{Error, Result};
use crate::simplex::{for_each_subset, Simplex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportEnumeration {
    /// Each support as sorted j-simplex indices of the complex.
    pub supports: Vec<Vec<usize>>,
    /// Search nodes visited.
    pub nodes: u64,
    /// The node budget ran out before the search finished.
    pub truncated: bool,
}

impl SupportEnumeration {
    pub fn simplices(&self, c: &Complex, j: usize) -> Vec<Vec<Simplex>> {
        let idx = c.index(j);
        self.supports
            .iter()
            .map(|s| s.iter().map(|&i| idx.simplex(i)).collect())
            .collect()
    }
}

struct Search {
    /// j-face indices of each k-simplex, in colex order of positions.
    k_faces: Vec<Vec<u32>>,
    /// k-simplices containing each j-simplex.
    cofaces: Vec<Vec<u32>>,
    /// For each (j+1)-subset of positions in a k-simplex, its j-faces as
    /// positions into `k_faces[K]`.
    parity_pattern: Vec<Vec<u8>>,
    max_size: usize,
    budget: u64,
    nodes: u64,
    truncated: bool,
    decided: Vec<i8>,
    chosen: Vec<u32>,
    found: Vec<Vec<usize>>,
}

const UNDECIDED: i8 = -1;

impl Search {
    fn parity_ok(&self, kk: usize) -> bool {
        let faces = &self.k_faces[kk];
        self.parity_pattern.iter().all(|pat| {
            pat.iter()
                .filter(|&&p| self.decided[faces[p as usize] as usize] == 1)
                .count()
                % 2
                == 0
        })
    }

    fn explore(&mut self, qi: usize, kpos: usize) {
        if self.truncated {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.truncated = true;
            return;
        }
        if qi == self.chosen.len() {
            let mut s: Vec<usize> = self.chosen.iter().map(|&x| x as usize).collect();
            s.sort_unstable();
            self.found.push(s);
            return;
        }
        let sigma = self.chosen[qi] as usize;
        if kpos == self.cofaces[sigma].len() {
            self.explore(qi + 1, 0);
            return;
        }
        let kk = self.cofaces[sigma][kpos] as usize;
        let open: Vec<u32> = self.k_faces[kk]
            .iter()
            .copied()
            .filter(|&f| self.decided[f as usize] == UNDECIDED)
            .collect();
        for mask in 0u64..(1u64 << open.len()) {
            let added = mask.count_ones() as usize;
            if self.chosen.len() + added > self.max_size {
                continue;
            }
            for (b, &f) in open.iter().enumerate() {
                self.decided[f as usize] = (mask >> b & 1) as i8;
            }
            if self.parity_ok(kk) {
                let before = self.chosen.len();
                for (b, &f) in open.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        self.chosen.push(f);
                    }
                }
                self.explore(qi, kpos + 1);
                self.chosen.truncate(before);
            }
            for &f in &open {
                self.decided[f as usize] = UNDECIDED;
            }
            if self.truncated {
                return;
            }
        }
    }
}

/// All traversable supports of nonzero j-cocycles with at most `max_size`
/// simplices, found with at most `budget` search nodes. Requires the G model,
/// where every j-simplex lies in a k-simplex.
pub fn enumerate_traversable_cocycle_supports(
    c: &Complex,
    j: usize,
    max_size: usize,
    budget: u64,
) -> Result<SupportEnumeration> {
    if c.model() != Model::G {
        return Err(Error::ModelMismatch { expected: "G" });
    }
    if j == 0 || j >= c.k() {
        return Err(Error::DimensionOutOfRange {
            dim: j as i64,
            lo: 1,
            hi: c.k() as i64 - 1,
        });
    }
    let k = c.k();
    let faces = c.index(j);
    let tops = c.top_simplices();
    let mut cofaces = vec![Vec::new(); faces.len()];
    let mut k_faces = Vec::with_capacity(tops.len());
    for (ki, t) in tops.iter().enumerate() {
        let fs: Vec<u32> = t
            .face_ranks(j + 1)
            .into_iter()
            .map(|r| faces.index_of_rank(r).expect("closed under faces") as u32)
            .collect();
        for &f in &fs {
            cofaces[f as usize].push(ki as u32);
        }
        k_faces.push(fs);
    }
    // local positions of j-faces within a generic k-simplex on 0..=k
    let positions: Vec<u32> = (0..=k as u32).collect();
    let mut local: HashMap<Vec<u32>, u8> = HashMap::new();
    let mut next = 0u8;
    for_each_subset(&positions, j + 1, |s| {
        local.insert(s.to_vec(), next);
        next += 1;
    });
    let mut parity_pattern = Vec::new();
    for_each_subset(&positions, j + 2, |t| {
        let mut pat = Vec::new();
        for_each_subset(t, j + 1, |s| pat.push(local[s]));
        parity_pattern.push(pat);
    });

    let mut search = Search {
        k_faces,
        cofaces,
        parity_pattern,
        max_size,
        budget,
        nodes: 0,
        truncated: false,
        decided: vec![UNDECIDED; faces.len()],
        chosen: Vec::new(),
        found: Vec::new(),
    };
    if max_size > 0 {
        for root in 0..faces.len() {
            search.decided.iter_mut().for_each(|d| *d = UNDECIDED);
            search.decided[..root].iter_mut().for_each(|d| *d = 0);
            search.decided[root] = 1;
            search.chosen.clear();
            search.chosen.push(root as u32);
            search.explore(0, 0);
            if search.truncated {
                break;
            }
        }
    }
    let mut supports = search.found;
    supports.sort();
    Ok(SupportEnumeration {
        supports,
        nodes: search.nodes,
        truncated: search.truncated,
    })
}
