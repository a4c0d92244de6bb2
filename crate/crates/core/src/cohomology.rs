//! Coboundary operators and F2 cohomology of complexes.
//!
//! Betti numbers use `dim H^j = f_j - rank δ^j - rank δ^{j-1}` with
//! `rank δ^j = rank ∂_{j+1}`. Ranks come from sparse elimination on the
//! boundary matrices, after discarding the rows of a maximal independent set
//! of (j)-simplices for `∂_{j+1}` (for j = 1 a spanning forest). That
//! projection is injective on cycles, so the rank is unchanged while the
//! remaining system is far smaller and sparser.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector, SparseColumns};
use crate::simplex::Simplex;
use crate::unionfind::UnionFind;

/// A j-cochain, given by its support as indices into `simplices(c, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain {
    dim: usize,
    support: Vec<usize>,
}

impl Cochain {
    pub fn zero(dim: usize) -> Self {
        Cochain {
            dim,
            support: Vec::new(),
        }
    }

    /// Checks every index against the complex's j-simplex count.
    pub fn new(c: &Complex, dim: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        let f = c.simplices(dim)?.len();
        let mut support: Vec<usize> = support.into_iter().collect();
        if let Some(&bad) = support.iter().find(|&&i| i >= f) {
            return Err(Error::NotInComplex(format!("{dim}-simplex index {bad}")));
        }
        support.sort_unstable();
        let mut dedup: Vec<usize> = Vec::with_capacity(support.len());
        for i in support {
            if dedup.last() == Some(&i) {
                dedup.pop();
            } else {
                dedup.push(i);
            }
        }
        Ok(Cochain {
            dim,
            support: dedup,
        })
    }

    /// Indicator cochain of a set of j-simplices of `c`.
    pub fn from_simplices(c: &Complex, dim: usize, simplices: &[Simplex]) -> Result<Self> {
        let idx = c.simplices(dim)?;
        let mut support = Vec::with_capacity(simplices.len());
        for s in simplices {
            support.push(
                idx.index_of(s)
                    .ok_or_else(|| Error::NotInComplex(format!("{s:?}")))?,
            );
        }
        Self::new(c, dim, support)
    }

    pub fn from_vector(dim: usize, v: &Gf2Vector) -> Self {
        Cochain {
            dim,
            support: v.support(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn to_vector(&self, len: usize) -> Gf2Vector {
        Gf2Vector::from_support(len, self.support.iter().copied())
    }

    /// The support as simplices of `c`.
    pub fn simplices(&self, c: &Complex) -> Vec<Simplex> {
        let idx = c.index(self.dim);
        self.support.iter().map(|&i| idx.simplex(i)).collect()
    }

    fn check(&self, c: &Complex) -> Result<()> {
        let f = c.simplices(self.dim)?.len();
        match self.support.last() {
            Some(&i) if i >= f => Err(Error::NotInComplex(format!(
                "{}-simplex index {i}",
                self.dim
            ))),
            _ => Ok(()),
        }
    }
}

/// Betti numbers and simplex counts of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySummary {
    pub bettis: Vec<usize>,
    pub f_vector: Vec<usize>,
}

impl CohomologySummary {
    pub fn euler_from_faces(&self) -> i64 {
        alternating(&self.f_vector)
    }

    pub fn euler_from_bettis(&self) -> i64 {
        alternating(&self.bettis)
    }
}

fn alternating(xs: &[usize]) -> i64 {
    xs.iter()
        .enumerate()
        .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// Row indices (into the (d-1)-simplices) of the facets of each d-simplex.
fn facet_indices(c: &Complex, d: usize) -> Vec<Vec<u32>> {
    let lower = c.index(d - 1);
    c.index(d)
        .ranks()
        .iter()
        .map(|&r| {
            crate::simplex::colex_unrank(r, d + 1)
                .face_ranks(d)
                .into_iter()
                .map(|fr| {
                    lower
                        .index_of_rank(fr)
                        .expect("complexes are closed under faces") as u32
                })
                .collect()
        })
        .collect()
}

/// Matrix of `δ^j : C^j → C^{j+1}` for `-1 <= j <= k-1`: rows are the
/// (j+1)-simplices, columns the j-simplices. `δ^{-1}` is the `f_0 × 0` matrix.
pub fn coboundary_matrix(c: &Complex, j: i64) -> Result<Gf2Matrix> {
    let k = c.k() as i64;
    if j < -1 || j > k - 1 {
        return Err(Error::DimensionOutOfRange {
            dim: j,
            lo: -1,
            hi: k - 1,
        });
    }
    if j == -1 {
        return Ok(Gf2Matrix::zeros(c.count(0), 0));
    }
    let j = j as usize;
    let facets = facet_indices(c, j + 1);
    let supports: Vec<Vec<usize>> = facets
        .into_iter()
        .map(|f| f.into_iter().map(|x| x as usize).collect())
        .collect();
    Ok(Gf2Matrix::from_row_supports(
        supports.len(),
        c.count(j),
        &supports,
    ))
}

/// `∂_d` as sparse columns: one column per d-simplex, rows the (d-1)-simplices.
pub fn boundary_columns(c: &Complex, d: usize) -> Result<SparseColumns> {
    if d == 0 || d > c.k() {
        return Err(Error::DimensionOutOfRange {
            dim: d as i64,
            lo: 1,
            hi: c.k() as i64,
        });
    }
    let mut m = SparseColumns::new(c.count(d - 1));
    for f in facet_indices(c, d) {
        m.push_column(f);
    }
    Ok(m)
}

/// `rank ∂_d` for `d = 1..=k` (index 0 holds `rank ∂_0 = 0`).
pub fn boundary_ranks(c: &Complex) -> Vec<usize> {
    boundary_ranks_upto(c, c.k())
}

fn boundary_ranks_upto(c: &Complex, top: usize) -> Vec<usize> {
    let mut ranks = vec![0usize; top + 1];
    if top == 0 {
        return ranks;
    }
    // d = 1: a spanning forest grown from high-degree vertices
    let forest = spanning_forest(c);
    ranks[1] = forest.iter().filter(|&&b| b).count();
    let mut gauge = forest;
    for d in 2..=top {
        let lower = c.count(d - 1);
        // compress the rows outside the gauge set
        let mut row_map = vec![u32::MAX; lower];
        let mut next = 0u32;
        for (i, g) in gauge.iter().enumerate() {
            if !g {
                row_map[i] = next;
                next += 1;
            }
        }
        let mut m = SparseColumns::new(next as usize);
        for f in facet_indices(c, d) {
            m.push_column(
                f.into_iter()
                    .map(|r| row_map[r as usize])
                    .filter(|&r| r != u32::MAX)
                    .collect(),
            );
        }
        let r = m.rank_with_pivots();
        ranks[d] = r.rank;
        gauge = vec![false; c.count(d)];
        for p in r.pivot_columns {
            gauge[p] = true;
        }
    }
    ranks
}

/// Marks the edges of a BFS spanning forest of the 1-skeleton. Each tree
/// is rooted at its highest-degree vertex so that it is as star-like as
/// possible.
fn spanning_forest(c: &Complex) -> Vec<bool> {
    let n = c.n();
    let edges = c.index(1);
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (i, &r) in edges.ranks().iter().enumerate() {
        let e = crate::simplex::colex_unrank(r, 2);
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adj[a as usize].push((b, i as u32));
        adj[b as usize].push((a, i as u32));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; edges.len()];
    let mut queue = VecDeque::new();
    for root in order {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    in_tree[e as usize] = true;
                    queue.push_back(w as usize);
                }
            }
        }
    }
    in_tree
}

/// `dim H^j(c; F2)` for `0 <= j <= k`.
pub fn betti(c: &Complex, j: usize) -> Result<usize> {
    if j > c.k() {
        return Err(Error::DimensionOutOfRange {
            dim: j as i64,
            lo: 0,
            hi: c.k() as i64,
        });
    }
    let ranks = boundary_ranks_upto(c, (j + 1).min(c.k()));
    let up = if j < c.k() { ranks[j + 1] } else { 0 };
    Ok(c.count(j) - up - ranks[j])
}

/// `b_0..=b_j`, computing only the boundary ranks they need.
pub fn bettis_upto(c: &Complex, j: usize) -> Result<Vec<usize>> {
    if j > c.k() {
        return Err(Error::DimensionOutOfRange {
            dim: j as i64,
            lo: 0,
            hi: c.k() as i64,
        });
    }
    let ranks = boundary_ranks_upto(c, (j + 1).min(c.k()));
    Ok((0..=j)
        .map(|d| c.count(d) - ranks[d] - if d < c.k() { ranks[d + 1] } else { 0 })
        .collect())
}

/// All Betti numbers `b_0..b_k` together with the f-vector.
pub fn summary(c: &Complex) -> CohomologySummary {
    let ranks = boundary_ranks(c);
    let f = c.f_vector();
    let k = c.k();
    let bettis = (0..=k)
        .map(|j| f[j] - ranks[j] - if j < k { ranks[j + 1] } else { 0 })
        .collect();
    CohomologySummary {
        bettis,
        f_vector: f,
    }
}

/// Connected components, by union-find over the vertices of each simplex.
pub fn component_count(c: &Complex) -> usize {
    let mut uf = UnionFind::new(c.n());
    for s in c.hyperedges().iter().chain(c.extra_simplices()) {
        let v = s.vertices();
        for w in &v[1..] {
            uf.union(v[0] as usize, *w as usize);
        }
    }
    if c.model() == crate::complex::Model::Y {
        // the full 1-skeleton is present
        for v in 1..c.n() {
            uf.union(0, v);
        }
    }
    uf.classes()
}

/// `H^0 = F2` and `H^i = 0` for `1 <= i <= j`.
pub fn is_j_cohom_connected(c: &Complex, j: usize) -> Result<bool> {
    if j == 0 || j >= c.k() {
        return Err(Error::DimensionOutOfRange {
            dim: j as i64,
            lo: 1,
            hi: c.k() as i64 - 1,
        });
    }
    if component_count(c) != 1 {
        return Ok(false);
    }
    let ranks = boundary_ranks_upto(c, j + 1);
    Ok((1..=j).all(|i| c.count(i) == ranks[i] + ranks[i + 1]))
}

/// `δ^j f` as a cochain of dimension j+1.
pub fn coboundary(c: &Complex, f: &Cochain) -> Result<Cochain> {
    f.check(c)?;
    let j = f.dim();
    if j >= c.k() {
        return Ok(Cochain::zero(j + 1));
    }
    let mut in_support = vec![false; c.count(j)];
    for &i in f.support() {
        in_support[i] = true;
    }
    let support: Vec<usize> = facet_indices(c, j + 1)
        .into_iter()
        .enumerate()
        .filter(|(_, fs)| fs.iter().filter(|&&x| in_support[x as usize]).count() % 2 == 1)
        .map(|(i, _)| i)
        .collect();
    Ok(Cochain {
        dim: j + 1,
        support,
    })
}

/// Every (j+1)-simplex sees an even number of ones.
pub fn is_cocycle(c: &Complex, f: &Cochain) -> Result<bool> {
    Ok(coboundary(c, f)?.is_zero())
}

/// A (j-1)-cochain `g` with `δ^{j-1} g = f`, if one exists.
pub fn is_coboundary(c: &Complex, f: &Cochain) -> Result<Option<Cochain>> {
    f.check(c)?;
    let j = f.dim();
    if j == 0 {
        return Ok(f.is_zero().then(|| Cochain::zero(0)));
    }
    let m = coboundary_matrix(c, j as i64 - 1)?;
    let b = f.to_vector(c.count(j));
    Ok(m
        .solve_in_column_span(&b)?
        .map(|g| Cochain::from_vector(j - 1, &g)))
}

/// Whether the cocycle `f` is cohomologous to a sum of the given flower
/// cochains.
pub fn is_generated_by(c: &Complex, f: &Cochain, generators: &[Cochain]) -> Result<bool> {
    if !is_cocycle(c, f)? {
        return Err(Error::InvalidConfig("input is not a cocycle".into()));
    }
    let j = f.dim();
    let fj = c.count(j);
    let mut columns: Vec<Gf2Vector> = Vec::new();
    if j > 0 {
        let d = coboundary_matrix(c, j as i64 - 1)?;
        columns.extend((0..d.cols()).map(|i| d.column(i)));
    }
    for g in generators {
        if g.dim() != j {
            return Err(Error::DimensionMismatch {
                expected: j,
                got: g.dim(),
            });
        }
        columns.push(g.to_vector(fj));
    }
    let m = Gf2Matrix::from_columns(fj, &columns);
    Ok(m.solve_in_column_span(&f.to_vector(fj))?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{one_based, Model};

    fn ex33() -> (Complex, Complex, Complex) {
        let g = Complex::build_g(5, 2, one_based(&[&[1, 2, 3], &[1, 4, 5]])).unwrap();
        let g1 = g.add_simplex(&one_based(&[&[2, 3, 4]])[0]).unwrap();
        let g2 = g1.add_simplex(&one_based(&[&[1, 3, 4]])[0]).unwrap();
        (g, g1, g2)
    }

    fn cochain(c: &Complex, sets: &[&[u32]]) -> Cochain {
        let s = one_based(sets);
        Cochain::from_simplices(c, s[0].dim(), &s).unwrap()
    }

    #[test]
    fn coboundary_shapes() {
        let (g, _, _) = ex33();
        let d1 = coboundary_matrix(&g, 1).unwrap();
        assert_eq!((d1.rows(), d1.cols()), (2, 6));
        assert!((0..2).all(|r| d1.row_weight(r) == 3));
        let full = Complex::complete(3, 2, Model::G).unwrap();
        let d0 = coboundary_matrix(&full, 0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (3, 3));
        assert!((0..3).all(|r| d0.row_weight(r) == 2));
        let empty = Complex::build_g(4, 2, vec![]).unwrap();
        let e = coboundary_matrix(&empty, 1).unwrap();
        assert_eq!((e.rows(), e.cols()), (0, 0));
        let m = coboundary_matrix(&g, -1).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 0));
        assert!(coboundary_matrix(&g, 2).is_err());
    }

    #[test]
    fn example_bettis() {
        let (g, g1, g2) = ex33();
        assert_eq!(betti(&g, 1).unwrap(), 0);
        assert_eq!(betti(&g1, 1).unwrap(), 1);
        assert_eq!(betti(&g2, 1).unwrap(), 0);
        assert!(is_j_cohom_connected(&g, 1).unwrap());
        assert!(!is_j_cohom_connected(&g1, 1).unwrap());
        assert!(is_j_cohom_connected(&g2, 1).unwrap());
    }

    #[test]
    fn components() {
        let (g, _, _) = ex33();
        assert_eq!(component_count(&g), 1);
        assert_eq!(component_count(&Complex::build_g(5, 2, vec![]).unwrap()), 5);
        let two = Complex::build_g(6, 2, one_based(&[&[1, 2, 3], &[4, 5, 6]])).unwrap();
        assert_eq!(component_count(&two), 2);
        assert_eq!(betti(&two, 0).unwrap(), 2);
        assert!(!is_j_cohom_connected(&Complex::build_g(5, 2, vec![]).unwrap(), 1).unwrap());
    }

    #[test]
    fn cocycles_and_coboundaries() {
        let (g, _, _) = ex33();
        let f = cochain(&g, &[&[1, 2], &[1, 3]]);
        assert!(is_cocycle(&g, &f).unwrap());
        assert!(!is_cocycle(&g, &cochain(&g, &[&[1, 2]])).unwrap());
        assert!(is_cocycle(&g, &Cochain::zero(1)).unwrap());
        let pre = is_coboundary(&g, &f).unwrap().expect("coboundary");
        assert_eq!(coboundary(&g, &pre).unwrap(), f);
        assert_eq!(is_coboundary(&g, &Cochain::zero(1)).unwrap(), Some(Cochain::zero(0)));
        assert!(Cochain::new(&g, 1, [6]).is_err());
    }

    #[test]
    fn flower_of_g_prime_is_bad() {
        let (_, g1, _) = ex33();
        let f = cochain(&g1, &[&[2, 4], &[3, 4]]);
        assert!(is_cocycle(&g1, &f).unwrap());
        assert!(is_coboundary(&g1, &f).unwrap().is_none());
        assert!(is_generated_by(&g1, &f, &[f.clone()]).unwrap());
        assert!(!is_generated_by(&g1, &f, &[]).unwrap());
        assert!(is_generated_by(&g1, &Cochain::zero(1), &[]).unwrap());
    }

    #[test]
    fn summary_euler() {
        let (_, g1, _) = ex33();
        let s = summary(&g1);
        assert_eq!(s.bettis, vec![1, 1, 0]);
        assert_eq!(s.euler_from_faces(), s.euler_from_bettis());
        let top = Complex::complete(5, 2, Model::Y).unwrap();
        assert_eq!(summary(&top).bettis, vec![1, 0, 4]);
        assert_eq!(betti(&top, 2).unwrap(), 4);
    }
}
