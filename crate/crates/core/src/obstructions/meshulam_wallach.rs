//! Brute-force check of the coboundary expansion of the complete complex:
//! for a j-cochain `f` on the full simplex on `n` vertices,
//! `|δf| ≥ w(f) · n / (j + 2)`, where `w(f)` is the smallest support in the
//! class `f + δg`.
//!
//! Cochains are bitmasks over colex ranks, so `C(n, j+1)` must fit in 64 bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{binom, colex_rank, for_each_subset, Simplex, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwReport {
    pub w: u32,
    pub b: u32,
    pub holds: bool,
}

/// Result of checking every j-cochain at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwSweep {
    pub n: usize,
    pub j: usize,
    pub cochains: u64,
    pub violations: u64,
    /// Smallest `b(f) (j+2) / (w(f) n)` over cochains with `w(f) > 0`,
    /// as the pair `(b, w)` attaining it.
    pub tightest: Option<(u32, u32)>,
}

struct Tables {
    n: usize,
    j: usize,
    /// Image of δ on the indicator of each (j-1)-simplex.
    cob_lower: Vec<u64>,
    /// For each (j+1)-simplex, the mask of its j-faces.
    upper_faces: Vec<u64>,
}

fn tables(n: usize, j: usize, budget: u64) -> Result<Tables> {
    if j == 0 || n < j + 2 {
        return Err(Error::InvalidConfig(format!(
            "need j >= 1 and n >= j + 2, got n={n}, j={j}"
        )));
    }
    if binom(n, j + 1) > 64 {
        return Err(Error::BudgetExceeded(binom(n, j + 1)));
    }
    let lower = binom(n, j);
    if lower >= 63 || (1u64 << lower) > budget {
        return Err(Error::BudgetExceeded(lower));
    }
    let verts: Vec<Vertex> = (0..n as Vertex).collect();
    let mut cob_lower = vec![0u64; lower as usize];
    let mut upper_faces = Vec::new();
    for_each_subset(&verts, j + 1, |s| {
        let bit = 1u64 << colex_rank(s);
        for_each_subset(s, j, |r| cob_lower[colex_rank(r) as usize] |= bit);
    });
    for_each_subset(&verts, j + 2, |t| {
        let mut m = 0u64;
        for_each_subset(t, j + 1, |s| m |= 1u64 << colex_rank(s));
        upper_faces.push(m);
    });
    Ok(Tables {
        n,
        j,
        cob_lower,
        upper_faces,
    })
}

impl Tables {
    fn report(&self, f: u64) -> MwReport {
        // walk the span of δ^{j-1} in Gray-code order
        let mut w = f.count_ones();
        let mut cur = f;
        for i in 1u64..(1u64 << self.cob_lower.len()) {
            cur ^= self.cob_lower[i.trailing_zeros() as usize];
            w = w.min(cur.count_ones());
        }
        let b = self
            .upper_faces
            .iter()
            .filter(|&&m| (m & f).count_ones() % 2 == 1)
            .count() as u32;
        // b >= w n / (j+2), in integers
        let holds = b as u64 * (self.j as u64 + 2) >= w as u64 * self.n as u64;
        MwReport { w, b, holds }
    }
}

/// `w(f)`, `b(f)` and whether the expansion inequality holds, with at most
/// `budget` coboundary candidates.
pub fn meshulam_wallach_check(n: usize, j: usize, support: &[Simplex], budget: u64) -> Result<MwReport> {
    let t = tables(n, j, budget)?;
    let mut f = 0u64;
    for s in support {
        if s.len() != j + 1 || s.max_vertex() as usize >= n {
            return Err(Error::InvalidSimplex(format!("{s:?} is not a {j}-simplex on {n} vertices")));
        }
        f ^= 1u64 << s.rank();
    }
    Ok(t.report(f))
}

/// Checks every j-cochain on `n` vertices.
pub fn meshulam_wallach_exhaustive(n: usize, j: usize, budget: u64) -> Result<MwSweep> {
    let t = tables(n, j, budget)?;
    let m = binom(n, j + 1);
    if m >= 40 {
        return Err(Error::BudgetExceeded(m));
    }
    let mut sweep = MwSweep {
        n,
        j,
        cochains: 1 << m,
        violations: 0,
        tightest: None,
    };
    for f in 0u64..(1u64 << m) {
        let r = t.report(f);
        if !r.holds {
            sweep.violations += 1;
        }
        if r.w > 0 {
            let better = match sweep.tightest {
                None => true,
                Some((b0, w0)) => (r.b as u64) * (w0 as u64) < (b0 as u64) * (r.w as u64),
            };
            if better {
                sweep.tightest = Some((r.b, r.w));
            }
        }
    }
    Ok(sweep)
}
