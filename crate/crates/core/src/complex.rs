//! k-dimensional complexes in the two random models.
//!
//! A [`Complex`] is stored through its k-simplices plus an optional side list
//! of sets added with [`Complex::add_simplex`]. Lower-dimensional simplex sets
//! are derived on demand and cached per dimension.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{binom, colex_unrank, Simplex, Vertex};

/// Largest number of potential k-simplices accepted by the constructors.
pub const MAX_TOP_SETS: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Downward closure of the k-simplices, plus all vertices.
    G,
    /// Full (k-1)-skeleton plus the k-simplices.
    Y,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::G => "g",
            Model::Y => "y",
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "g" | "G" => Ok(Model::G),
            "y" | "Y" => Ok(Model::Y),
            other => Err(Error::InvalidConfig(format!("unknown model {other:?}"))),
        }
    }
}

/// Dense indexing of the d-simplices of a complex, in colex order.
#[derive(Clone, Debug)]
pub struct SimplexIndex {
    dim: usize,
    ranks: Vec<u64>,
}

impl SimplexIndex {
    fn new(dim: usize, mut ranks: Vec<u64>) -> Self {
        ranks.sort_unstable();
        ranks.dedup();
        SimplexIndex { dim, ranks }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Colex ranks of the d-simplices, increasing.
    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    #[inline]
    pub fn index_of_rank(&self, rank: u64) -> Option<usize> {
        self.ranks.binary_search(&rank).ok()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        if s.dim() != self.dim {
            return None;
        }
        self.index_of_rank(s.rank())
    }

    pub fn simplex(&self, i: usize) -> Simplex {
        colex_unrank(self.ranks[i], self.dim + 1)
    }

    pub fn simplices(&self) -> Vec<Simplex> {
        (0..self.len()).map(|i| self.simplex(i)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Complex {
    n: usize,
    k: usize,
    model: Model,
    /// k-simplices from the hyperedge list, sorted by colex rank.
    top: Vec<Simplex>,
    /// Sets added by `add_simplex`; each is implicitly downward closed.
    extra: Vec<Simplex>,
    cache: Vec<OnceLock<Arc<SimplexIndex>>>,
}

impl Complex {
    /// G-model complex generated by the given (k+1)-sets.
    pub fn build_g(n: usize, k: usize, hyperedges: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        Self::build(n, k, Model::G, hyperedges)
    }

    /// Y-model complex: full (k-1)-skeleton plus the given (k+1)-sets.
    pub fn build_y(n: usize, k: usize, hyperedges: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        Self::build(n, k, Model::Y, hyperedges)
    }

    pub fn build(
        n: usize,
        k: usize,
        model: Model,
        hyperedges: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self> {
        check_shape(n, k)?;
        let mut top = Vec::new();
        for h in hyperedges {
            if h.len() != k + 1 {
                return Err(Error::InvalidSimplex(format!(
                    "hyperedge {h:?} has {} vertices, expected {}",
                    h.len(),
                    k + 1
                )));
            }
            if h.max_vertex() as usize >= n {
                return Err(Error::InvalidSimplex(format!(
                    "hyperedge {h:?} has a vertex outside [0, {n})"
                )));
            }
            top.push(h);
        }
        Ok(Self::from_sorted_top(n, k, model, top))
    }

    /// Builds from colex ranks of (k+1)-sets; ranks must be < C(n, k+1).
    pub fn from_ranks(n: usize, k: usize, model: Model, ranks: &[u64]) -> Result<Self> {
        check_shape(n, k)?;
        let bound = binom(n, k + 1);
        if let Some(r) = ranks.iter().find(|&&r| r >= bound) {
            return Err(Error::InvalidSimplex(format!("rank {r} >= C({n},{})", k + 1)));
        }
        let top = ranks.iter().map(|&r| colex_unrank(r, k + 1)).collect();
        Ok(Self::from_sorted_top(n, k, model, top))
    }

    /// The complete k-complex on n vertices.
    pub fn complete(n: usize, k: usize, model: Model) -> Result<Self> {
        check_shape(n, k)?;
        let ranks: Vec<u64> = (0..binom(n, k + 1)).collect();
        Self::from_ranks(n, k, model, &ranks)
    }

    fn from_sorted_top(n: usize, k: usize, model: Model, mut top: Vec<Simplex>) -> Self {
        top.sort_unstable_by_key(|s| s.rank());
        top.dedup();
        Complex {
            n,
            k,
            model,
            top,
            extra: Vec::new(),
            cache: (0..=k).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// The generating hyperedges (excluding sets added via `add_simplex`).
    pub fn hyperedges(&self) -> &[Simplex] {
        &self.top
    }

    /// Sets added via `add_simplex`.
    pub fn extra_simplices(&self) -> &[Simplex] {
        &self.extra
    }

    /// `G + B`: adds `b` together with all of its nonempty subsets.
    pub fn add_simplex(&self, b: &Simplex) -> Result<Complex> {
        if b.len() > self.k + 1 {
            return Err(Error::InvalidSimplex(format!(
                "{b:?} has {} vertices, more than k+1 = {}",
                b.len(),
                self.k + 1
            )));
        }
        if b.max_vertex() as usize >= self.n {
            return Err(Error::InvalidSimplex(format!(
                "{b:?} has a vertex outside [0, {})",
                self.n
            )));
        }
        if self.contains(b) {
            return Ok(self.clone());
        }
        let mut extra: Vec<Simplex> = self
            .extra
            .iter()
            .filter(|e| !e.is_subset_of(b))
            .cloned()
            .collect();
        extra.push(b.clone());
        Ok(Complex {
            n: self.n,
            k: self.k,
            model: self.model,
            top: self.top.clone(),
            extra,
            cache: (0..=self.k).map(|_| OnceLock::new()).collect(),
        })
    }

    /// The d-simplices, colex sorted, with their dense index.
    pub fn simplices(&self, d: usize) -> Result<Arc<SimplexIndex>> {
        if d > self.k {
            return Err(Error::DimensionOutOfRange {
                dim: d as i64,
                lo: 0,
                hi: self.k as i64,
            });
        }
        Ok(self.index(d).clone())
    }

    /// Infallible variant of [`Complex::simplices`] for internal use.
    pub(crate) fn index(&self, d: usize) -> &Arc<SimplexIndex> {
        self.cache[d].get_or_init(|| Arc::new(self.compute_index(d)))
    }

    fn compute_index(&self, d: usize) -> SimplexIndex {
        if d == 0 || (self.model == Model::Y && d < self.k) {
            let all = binom(self.n, d + 1);
            return SimplexIndex::new(d, (0..all).collect());
        }
        let mut ranks = Vec::new();
        for s in self.top.iter().chain(self.extra.iter()) {
            if s.len() > d {
                ranks.extend(s.face_ranks(d + 1));
            }
        }
        SimplexIndex::new(d, ranks)
    }

    /// Number of d-simplices.
    pub fn count(&self, d: usize) -> usize {
        self.index(d).len()
    }

    /// f-vector `(f_0, ..., f_k)`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.k).map(|d| self.count(d)).collect()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        let d = s.dim();
        if d > self.k || s.max_vertex() as usize >= self.n {
            return false;
        }
        self.index(d).index_of(s).is_some()
    }

    /// Number of k-simplices of the complex containing `s`.
    pub fn k_degree(&self, s: &Simplex) -> Result<usize> {
        if !self.contains(s) {
            return Err(Error::NotInComplex(format!("{s:?}")));
        }
        let top = self.index(self.k);
        Ok((0..top.len())
            .filter(|&i| s.is_subset_of(&top.simplex(i)))
            .count())
    }

    /// k-degree of every d-simplex, aligned with `simplices(d)`.
    pub fn k_degree_table(&self, d: usize) -> Result<Vec<u32>> {
        let idx = self.simplices(d)?;
        let mut deg = vec![0u32; idx.len()];
        let top = self.index(self.k);
        for &r in top.ranks() {
            let s = colex_unrank(r, self.k + 1);
            for fr in s.face_ranks(d + 1) {
                let i = idx
                    .index_of_rank(fr)
                    .expect("faces of k-simplices are simplices");
                deg[i] += 1;
            }
        }
        Ok(deg)
    }

    /// The k-simplices as vertex sets (generators plus added (k+1)-sets).
    pub fn top_simplices(&self) -> Vec<Simplex> {
        self.index(self.k).simplices()
    }

    /// Parses the text fixture format: a header `n k model` followed by one
    /// (k+1)-subset per line, vertices 1-based. `#` starts a comment.
    pub fn parse_fixture(text: &str) -> Result<Complex> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n k model`".into(),
            });
        }
        let parse_num = |s: &str, line: usize| -> Result<usize> {
            s.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("not a number: {s:?}"),
            })
        };
        let n = parse_num(fields[0], hline)?;
        let k = parse_num(fields[1], hline)?;
        let model: Model = fields[2].parse().map_err(|_| Error::Parse {
            line: hline,
            msg: format!("unknown model {:?}", fields[2]),
        })?;
        let mut edges = Vec::new();
        for (line, l) in lines {
            let mut verts = Vec::new();
            for tok in l.split_whitespace() {
                let v = parse_num(tok, line)?;
                if v == 0 || v > n {
                    return Err(Error::Parse {
                        line,
                        msg: format!("vertex {v} outside 1..={n}"),
                    });
                }
                verts.push((v - 1) as Vertex);
            }
            let s = Simplex::new(verts).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            edges.push(s);
        }
        Complex::build(n, k, model, edges)
    }

    /// Renders the fixture format (1-based vertices). Added sets are not
    /// representable and are omitted.
    pub fn to_fixture(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.k, self.model.name());
        for s in &self.top {
            let v: Vec<String> = s.to_one_based().iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", v.join(" "));
        }
        out
    }
}

impl PartialEq for Complex {
    /// Equal as simplicial complexes (same model, ground set and simplices).
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.k == other.k
            && self.model == other.model
            && (0..=self.k).all(|d| self.index(d).ranks() == other.index(d).ranks())
    }
}

fn check_shape(n: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::DimensionOutOfRange {
            dim: k as i64,
            lo: 2,
            hi: i64::MAX,
        });
    }
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    if binom(n, k + 1) > MAX_TOP_SETS {
        return Err(Error::EnvelopeExceeded(format!(
            "C({n},{}) exceeds 2^31 potential k-simplices",
            k + 1
        )));
    }
    Ok(())
}

/// Convenience: builds simplices from slices of 1-based vertex labels.
pub fn one_based(sets: &[&[u32]]) -> Vec<Simplex> {
    sets.iter()
        .map(|s| Simplex::new(s.iter().map(|v| v - 1)).expect("valid 1-based set"))
        .collect()
}

/// All distinct vertices touched by the given simplices.
pub fn vertex_support(simplices: &[Simplex]) -> HashSet<Vertex> {
    simplices
        .iter()
        .flat_map(|s| s.vertices().iter().copied())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex33() -> Complex {
        Complex::build_g(5, 2, one_based(&[&[1, 2, 3], &[1, 4, 5]])).unwrap()
    }

    fn s1(v: &[u32]) -> Simplex {
        one_based(&[v]).pop().unwrap()
    }

    #[test]
    fn example_g_counts() {
        let g = ex33();
        assert_eq!(g.f_vector(), vec![5, 6, 2]);
        let edges: Vec<Vec<u32>> = g
            .simplices(1)
            .unwrap()
            .simplices()
            .iter()
            .map(|s| s.to_one_based())
            .collect();
        // colex order of {12,13,23,14,15,45}
        assert_eq!(
            edges,
            vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4], vec![1, 5], vec![4, 5]]
        );
    }

    #[test]
    fn empty_hypergraph() {
        let g = Complex::build_g(4, 2, vec![]).unwrap();
        assert_eq!(g.f_vector(), vec![4, 0, 0]);
    }

    #[test]
    fn single_tetrahedron() {
        let g = Complex::build_g(6, 3, one_based(&[&[1, 2, 3, 4]])).unwrap();
        assert_eq!(g.count(1), 6);
        assert_eq!(g.count(2), 4);
        assert_eq!(g.count(3), 1);
    }

    #[test]
    fn y_model_counts() {
        assert_eq!(Complex::build_y(4, 2, vec![]).unwrap().f_vector(), vec![4, 6, 0]);
        let y = Complex::build_y(5, 2, one_based(&[&[1, 2, 3]])).unwrap();
        assert_eq!(y.count(1), 10);
        assert_eq!(y.count(2), 1);
        assert_eq!(Complex::build_y(5, 3, vec![]).unwrap().count(2), 10);
    }

    #[test]
    fn build_errors() {
        assert!(Complex::build_g(5, 1, vec![]).is_err());
        assert!(Complex::build_g(3, 2, one_based(&[&[1, 2, 4]])).is_err());
        assert!(Complex::build_g(5, 2, one_based(&[&[1, 2]])).is_err());
        assert!(Simplex::new([0, 0, 1]).is_err());
    }

    #[test]
    fn add_simplex_example() {
        let g1 = ex33().add_simplex(&s1(&[2, 3, 4])).unwrap();
        assert_eq!(g1.count(1), 8);
        assert_eq!(g1.count(2), 3);
        let tris: Vec<Vec<u32>> = g1
            .simplices(2)
            .unwrap()
            .simplices()
            .iter()
            .map(|s| s.to_one_based())
            .collect();
        assert_eq!(tris, vec![vec![1, 2, 3], vec![2, 3, 4], vec![1, 4, 5]]);
        assert_eq!(g1.k_degree(&s1(&[2, 3])).unwrap(), 2);
        assert_eq!(g1.k_degree(&s1(&[2, 4])).unwrap(), 1);
    }

    #[test]
    fn add_simplex_idempotent_and_lower_dim() {
        let g = ex33();
        assert_eq!(g.add_simplex(&s1(&[1, 2])).unwrap(), g);
        let h = Complex::build_g(5, 2, one_based(&[&[1, 2, 3]]))
            .unwrap()
            .add_simplex(&s1(&[4, 5]))
            .unwrap();
        assert!(h.contains(&s1(&[4, 5])));
        assert_eq!(h.count(2), 1);
        assert!(g.add_simplex(&s1(&[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn k_degree_on_complete() {
        let c = Complex::complete(3, 2, Model::G).unwrap();
        for d in 0..=2 {
            for s in c.simplices(d).unwrap().simplices() {
                assert_eq!(c.k_degree(&s).unwrap(), 1);
            }
        }
        assert!(c.k_degree(&Simplex::new([7]).unwrap()).is_err());
    }

    #[test]
    fn fixture_round_trip() {
        let text = "# example\n5 2 g\n1 2 3\n1 4 5\n";
        let c = Complex::parse_fixture(text).unwrap();
        assert_eq!(c, ex33());
        assert_eq!(Complex::parse_fixture(&c.to_fixture()).unwrap(), c);
        assert!(Complex::parse_fixture("5 2 g\n1 2 9\n").is_err());
        assert!(Complex::parse_fixture("5 2\n").is_err());
    }
}
