//! Detectors for the local structures that obstruct cohomological
//! connectedness.
//!
//! A j-flower `F(K, C)` inside a k-simplex `K` is the set of j-simplices
//! `C ∪ {w}` for `w ∈ K \ C`, where `C` is a j-set. The detectors here find,
//! for a fixed j:
//!
//! * `M_j^-` copies: flowers all of whose petals lie in no other k-simplex;
//! * `M_j` copies: `M_j^-` copies plus a j-cycle meeting the flower in
//!   exactly one petal;
//! * `M_j^*` copies: `M_j^-` copies where a petal is the base of a j-shell
//!   through an apex vertex outside `K`;
//! * local obstacles, j-shells, isolated (k-1)-simplices and traversability.
//!
//! `M_j` detection is a span-membership test. Fix a copy `(K, C)` and a petal
//! `P`, and let `A` be all j-simplices except the other petals. A j-cycle
//! `J ⊆ A` with `P ∈ J` exists iff `∂P` lies in the span of `∂σ` for
//! `σ ∈ A \ {P}`, and any such `J` meets the flower exactly in `{P}`.

mod meshulam_wallach;
mod supports;

pub use meshulam_wallach::{meshulam_wallach_check, meshulam_wallach_exhaustive, MwReport, MwSweep};
pub use supports::{enumerate_traversable_cocycle_supports, SupportEnumeration};

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::Cochain;
use crate::complex::{Complex, Model, SimplexIndex};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::simplex::{colex_rank, for_each_subset, Simplex, Vertex};
use crate::unionfind::UnionFind;

/// A j-flower in a k-simplex: centre `C` (a j-set) inside `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flower {
    pub k_simplex: Simplex,
    pub centre: Simplex,
}

impl Flower {
    /// The petals `C ∪ {w}`, ordered by `w`.
    pub fn petals(&self) -> Vec<Simplex> {
        self.outer_vertices()
            .into_iter()
            .map(|w| self.centre.with_vertex(w))
            .collect()
    }

    /// The vertices `K \ C`.
    pub fn outer_vertices(&self) -> Vec<Vertex> {
        self.k_simplex.difference(&self.centre)
    }

    pub fn j(&self) -> usize {
        self.centre.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MjMinusCopy {
    pub flower: Flower,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MjStarCopy {
    pub base: MjMinusCopy,
    /// The vertex of `K \ C` whose petal is the shell's base.
    pub w: Vertex,
    pub apex: Vertex,
}

impl MjStarCopy {
    /// The j-simplices of the shell `C ∪ {w, a}`.
    pub fn shell(&self) -> Vec<Simplex> {
        let a = self.base.flower.centre.with_vertex(self.w).with_vertex(self.apex);
        a.faces(a.len() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MjCopy {
    pub base: MjMinusCopy,
    pub petal: Simplex,
    /// A j-cycle containing `petal` and no other petal of the flower.
    pub cycle: Vec<Simplex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalObstacle {
    pub k_simplex: Simplex,
    /// The j-faces of the k-simplex lying in no other k-simplex.
    pub free_faces: Vec<Simplex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellQuery {
    pub b: Simplex,
    pub apexes: Vec<Vertex>,
}

impl ShellQuery {
    pub fn count(&self) -> usize {
        self.apexes.len()
    }
}

fn check_j(c: &Complex, j: usize) -> Result<()> {
    if j == 0 || j >= c.k() {
        return Err(Error::DimensionOutOfRange {
            dim: j as i64,
            lo: 1,
            hi: c.k() as i64 - 1,
        });
    }
    Ok(())
}

/// Detectors for one complex and one j, sharing a k-degree table of the
/// j-simplices.
pub struct Detector<'a> {
    c: &'a Complex,
    j: usize,
    faces: Arc<SimplexIndex>,
    degree: Vec<u32>,
}

impl<'a> Detector<'a> {
    pub fn new(c: &'a Complex, j: usize) -> Result<Self> {
        check_j(c, j)?;
        Ok(Detector {
            c,
            j,
            faces: c.simplices(j)?,
            degree: c.k_degree_table(j)?,
        })
    }

    pub fn complex(&self) -> &Complex {
        self.c
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// k-degree of a j-simplex given by vertex list; 0 if absent.
    fn degree_of(&self, v: &[Vertex]) -> u32 {
        self.faces
            .index_of_rank(colex_rank(v))
            .map_or(0, |i| self.degree[i])
    }

    /// Centres C ⊂ K whose petals all have k-degree 1.
    fn minus_centres(&self, k_simplex: &Simplex) -> Vec<Simplex> {
        let kv = k_simplex.vertices();
        let mut out = Vec::new();
        for_each_subset(kv, self.j, |centre| {
            let centre = Simplex::from_sorted(centre);
            let ok = kv
                .iter()
                .filter(|w| !centre.contains_vertex(**w))
                .all(|&w| self.degree_of(centre.with_vertex(w).vertices()) == 1);
            if ok {
                out.push(centre);
            }
        });
        out
    }

    pub fn find_mj_minus(&self) -> Vec<MjMinusCopy> {
        let mut out = Vec::new();
        for k_simplex in self.c.top_simplices() {
            for centre in self.minus_centres(&k_simplex) {
                out.push(MjMinusCopy {
                    flower: Flower {
                        k_simplex: k_simplex.clone(),
                        centre,
                    },
                });
            }
        }
        out
    }

    pub fn count_mj_minus(&self) -> usize {
        self.c
            .top_simplices()
            .iter()
            .map(|k| self.minus_centres(k).len())
            .sum()
    }

    /// Whether `C ∪ {w, a}` is a j-shell.
    fn is_shell(&self, set: &Simplex) -> bool {
        let mut ok = true;
        for_each_subset(set.vertices(), self.j + 1, |s| {
            ok = ok && self.faces.index_of_rank(colex_rank(s)).is_some();
        });
        ok
    }

    pub fn find_mj_star(&self) -> Vec<MjStarCopy> {
        self.find_mj_star_from(&self.find_mj_minus())
    }

    pub fn find_mj_star_from(&self, minus: &[MjMinusCopy]) -> Vec<MjStarCopy> {
        let mut out = Vec::new();
        for copy in minus {
            let f = &copy.flower;
            for w in f.outer_vertices() {
                let base = f.centre.with_vertex(w);
                for a in 0..self.c.n() as Vertex {
                    if f.k_simplex.contains_vertex(a) {
                        continue;
                    }
                    if self.is_shell(&base.with_vertex(a)) {
                        out.push(MjStarCopy {
                            base: copy.clone(),
                            w,
                            apex: a,
                        });
                    }
                }
            }
        }
        out
    }

    /// Boundary matrix of all j-simplices except `excluded` (rows are the
    /// (j-1)-simplices), together with the j-simplex index of each column.
    fn boundary_without(&self, excluded: &[usize]) -> (Gf2Matrix, Vec<usize>) {
        let lower = self.c.index(self.j - 1);
        let cols: Vec<usize> = (0..self.faces.len())
            .filter(|i| !excluded.contains(i))
            .collect();
        let mut m = Gf2Matrix::zeros(lower.len(), cols.len());
        for (ci, &s) in cols.iter().enumerate() {
            for fr in self.faces.simplex(s).face_ranks(self.j) {
                let r = lower.index_of_rank(fr).expect("closed under faces");
                m.set(r, ci, true);
            }
        }
        (m, cols)
    }

    fn boundary_vector(&self, s: &Simplex) -> Gf2Vector {
        let lower = self.c.index(self.j - 1);
        Gf2Vector::from_support(
            lower.len(),
            s.face_ranks(self.j)
                .into_iter()
                .map(|fr| lower.index_of_rank(fr).expect("closed under faces")),
        )
    }

    /// M_j copies built on one M_j^- copy: one per petal admitting a cycle.
    fn mj_for(&self, copy: &MjMinusCopy, first_only: bool) -> Vec<MjCopy> {
        let petals = copy.flower.petals();
        let idx: Vec<usize> = petals
            .iter()
            .map(|p| self.faces.index_of(p).expect("petals are simplices"))
            .collect();
        // columns: everything except all petals; P itself is the target
        let (m, cols) = self.boundary_without(&idx);
        let mut out = Vec::new();
        for (p, petal) in petals.iter().enumerate() {
            let b = self.boundary_vector(petal);
            let solution = m
                .solve_in_column_span(&b)
                .expect("dimensions agree by construction");
            if let Some(x) = solution {
                let mut cycle = vec![petal.clone()];
                cycle.extend(x.support().into_iter().map(|ci| self.faces.simplex(cols[ci])));
                cycle.sort();
                out.push(MjCopy {
                    base: copy.clone(),
                    petal: petals[p].clone(),
                    cycle,
                });
                if first_only {
                    break;
                }
            }
        }
        out
    }

    pub fn find_mj(&self) -> Vec<MjCopy> {
        self.find_mj_from(&self.find_mj_minus())
    }

    pub fn find_mj_from(&self, minus: &[MjMinusCopy]) -> Vec<MjCopy> {
        minus.iter().flat_map(|c| self.mj_for(c, false)).collect()
    }

    /// Number of `(K, C)` pairs that extend to an M_j copy.
    pub fn count_mj_bases(&self) -> usize {
        self.find_mj_minus()
            .iter()
            .filter(|c| !self.mj_for(c, true).is_empty())
            .count()
    }

    pub fn has_mj(&self) -> bool {
        self.find_mj_minus()
            .iter()
            .any(|c| !self.mj_for(c, true).is_empty())
    }

    pub fn find_local_obstacles(&self) -> Vec<LocalObstacle> {
        let need = self.c.k() - self.j + 1;
        let mut out = Vec::new();
        for k_simplex in self.c.top_simplices() {
            let free: Vec<Simplex> = k_simplex
                .faces(self.j + 1)
                .into_iter()
                .filter(|f| self.degree_of(f.vertices()) == 1)
                .collect();
            if free.len() >= need {
                out.push(LocalObstacle {
                    k_simplex,
                    free_faces: free,
                });
            }
        }
        out
    }
}

pub fn find_mj_minus(c: &Complex, j: usize) -> Result<Vec<MjMinusCopy>> {
    Ok(Detector::new(c, j)?.find_mj_minus())
}

pub fn find_mj_star(c: &Complex, j: usize) -> Result<Vec<MjStarCopy>> {
    Ok(Detector::new(c, j)?.find_mj_star())
}

pub fn find_mj(c: &Complex, j: usize) -> Result<Vec<MjCopy>> {
    Ok(Detector::new(c, j)?.find_mj())
}

pub fn find_local_obstacles(c: &Complex, j: usize) -> Result<Vec<LocalObstacle>> {
    Ok(Detector::new(c, j)?.find_local_obstacles())
}

/// The cochain taking value 1 exactly on the petals.
pub fn flower_cochain(c: &Complex, copy: &MjMinusCopy) -> Result<Cochain> {
    Cochain::from_simplices(c, copy.flower.j(), &copy.flower.petals())
}

/// Apex vertices `a ∉ B` such that `B ∪ {a}` is a j-shell of `c + B`,
/// where `j = |B| - 1`.
pub fn count_shells_through(c: &Complex, b: &Simplex) -> Result<ShellQuery> {
    let j = b.len() - 1;
    if j == 0 || j > c.k() - 1 {
        return Err(Error::DimensionOutOfRange {
            dim: j as i64,
            lo: 1,
            hi: c.k() as i64 - 1,
        });
    }
    let cb = c.add_simplex(b)?;
    let faces = cb.index(j);
    let ridges: Vec<Simplex> = b.faces(j);
    let apexes = (0..c.n() as Vertex)
        .filter(|&a| !b.contains_vertex(a))
        .filter(|&a| {
            ridges
                .iter()
                .all(|r| faces.index_of_rank(r.with_vertex(a).rank()).is_some())
        })
        .collect();
    Ok(ShellQuery {
        b: b.clone(),
        apexes,
    })
}

/// All (j+1)-subsets of `a` are simplices but `a` itself is not.
pub fn is_hollow_shell(c: &Complex, a: &Simplex) -> Result<bool> {
    if a.len() < 3 {
        return Err(Error::InvalidSimplex(format!(
            "{a:?}: a shell needs at least 3 vertices"
        )));
    }
    let facets_present = a.faces(a.len() - 1).iter().all(|f| c.contains(f));
    Ok(facets_present && !c.contains(a))
}

/// (k-1)-simplices in no k-simplex. Only meaningful for the Y model.
pub fn find_isolated(c: &Complex) -> Result<Vec<Simplex>> {
    if c.model() != Model::Y {
        return Err(Error::ModelMismatch { expected: "Y" });
    }
    let d = c.k() - 1;
    let deg = c.k_degree_table(d)?;
    let idx = c.index(d);
    Ok(deg
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == 0)
        .map(|(i, _)| idx.simplex(i))
        .collect())
}

/// Whether `s` (a set of j-simplices) is connected under "lie in a common
/// k-simplex". Empty and singleton sets are traversable.
pub fn is_traversable(c: &Complex, s: &[Simplex]) -> Result<bool> {
    if s.len() <= 1 {
        if let Some(x) = s.first() {
            if !c.contains(x) {
                return Err(Error::NotInComplex(format!("{x:?}")));
            }
        }
        return Ok(true);
    }
    let j = s[0].dim();
    let mut pos: HashMap<u64, usize> = HashMap::new();
    for (i, x) in s.iter().enumerate() {
        if x.dim() != j || !c.contains(x) {
            return Err(Error::NotInComplex(format!("{x:?}")));
        }
        pos.insert(x.rank(), i);
    }
    let mut uf = UnionFind::new(s.len());
    for k_simplex in c.top_simplices() {
        let mut first: Option<usize> = None;
        for fr in k_simplex.face_ranks(j + 1) {
            if let Some(&i) = pos.get(&fr) {
                match first {
                    None => first = Some(i),
                    Some(f) => {
                        uf.union(f, i);
                    }
                }
            }
        }
    }
    // repeated members collapse in `pos`
    let distinct: Vec<usize> = pos.values().copied().collect();
    let root = uf.find(distinct[0]);
    Ok(distinct.into_iter().all(|i| uf.find(i) == root))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{betti, is_coboundary, is_cocycle};
    use crate::complex::one_based;

    fn ex33() -> (Complex, Complex, Complex) {
        let g = Complex::build_g(5, 2, one_based(&[&[1, 2, 3], &[1, 4, 5]])).unwrap();
        let g1 = g.add_simplex(&s(&[2, 3, 4])).unwrap();
        let g2 = g1.add_simplex(&s(&[1, 3, 4])).unwrap();
        (g, g1, g2)
    }

    fn s(v: &[u32]) -> Simplex {
        one_based(&[v]).pop().unwrap()
    }

    fn pair(k: &[u32], c: &[u32]) -> (Simplex, Simplex) {
        (s(k), s(c))
    }

    fn bases(copies: &[MjMinusCopy]) -> Vec<(Simplex, Simplex)> {
        copies
            .iter()
            .map(|c| (c.flower.k_simplex.clone(), c.flower.centre.clone()))
            .collect()
    }

    #[test]
    fn mj_minus_in_example() {
        let (g, g1, _) = ex33();
        let m = find_mj_minus(&g, 1).unwrap();
        assert_eq!(m.len(), 6);
        let b = bases(&m);
        assert!(b.contains(&pair(&[1, 2, 3], &[1])));
        assert!(b.contains(&pair(&[1, 4, 5], &[1])));
        let b1 = bases(&find_mj_minus(&g1, 1).unwrap());
        assert!(b1.contains(&pair(&[2, 3, 4], &[4])));
        assert!(!b1.contains(&pair(&[2, 3, 4], &[3])));
        let full = Complex::complete(5, 2, Model::G).unwrap();
        assert!(find_mj_minus(&full, 1).unwrap().is_empty());
        assert!(find_mj_minus(&g, 2).is_err());
    }

    #[test]
    fn mj_star_in_example() {
        let (g, g1, _) = ex33();
        let stars = find_mj_star(&g1, 1).unwrap();
        assert!(stars.iter().any(|st| {
            st.base.flower.k_simplex == s(&[2, 3, 4])
                && st.base.flower.centre == s(&[4])
                && st.w == 1
                && st.apex == 0
        }));
        let none = find_mj_star(&g, 1).unwrap();
        assert!(!none.iter().any(|st| st.base.flower.k_simplex == s(&[1, 2, 3])
            && st.base.flower.centre == s(&[1])
            && st.w == 1));
        let empty = Complex::build_g(5, 2, vec![]).unwrap();
        assert!(find_mj_star(&empty, 1).unwrap().is_empty());
    }

    #[test]
    fn mj_in_example() {
        let (g, g1, g2) = ex33();
        assert!(find_mj(&g, 1).unwrap().is_empty());
        assert!(find_mj(&g2, 1).unwrap().is_empty());
        let copies = find_mj(&g1, 1).unwrap();
        let hit = copies
            .iter()
            .find(|m| m.base.flower.k_simplex == s(&[2, 3, 4]) && m.petal == s(&[2, 4]))
            .expect("copy on (234, {4}) with petal 24");
        assert_eq!(hit.cycle, vec![s(&[1, 2]), s(&[1, 4]), s(&[2, 4])]);
        for m in &copies {
            let petals = m.base.flower.petals();
            let inter: Vec<&Simplex> = m.cycle.iter().filter(|x| petals.contains(x)).collect();
            assert_eq!(inter, vec![&m.petal]);
        }
        assert!(betti(&g1, 1).unwrap() >= 1);
    }

    #[test]
    fn flower_cochains_are_bad() {
        let (g, g1, _) = ex33();
        let copy = &find_mj_minus(&g, 1).unwrap()[0];
        let f = flower_cochain(&g, copy).unwrap();
        assert_eq!(f.support().len(), 2);
        assert_eq!(copy.flower.k_simplex, s(&[1, 2, 3]));
        assert_eq!(f.simplices(&g), vec![s(&[1, 2]), s(&[1, 3])]);
        for m in find_mj(&g1, 1).unwrap() {
            let f = flower_cochain(&g1, &m.base).unwrap();
            assert!(is_cocycle(&g1, &f).unwrap());
            assert!(is_coboundary(&g1, &f).unwrap().is_none());
        }
    }

    #[test]
    fn local_obstacles_in_example() {
        let (g, _, g2) = ex33();
        assert_eq!(find_local_obstacles(&g, 1).unwrap().len(), 2);
        let lo: Vec<Simplex> = find_local_obstacles(&g2, 1)
            .unwrap()
            .into_iter()
            .map(|o| o.k_simplex)
            .collect();
        assert!(lo.contains(&s(&[1, 4, 5])));
        let full = Complex::complete(5, 2, Model::G).unwrap();
        assert!(find_local_obstacles(&full, 1).unwrap().is_empty());
    }

    #[test]
    fn shells() {
        let (_, g1, g2) = ex33();
        let q = count_shells_through(&g1, &s(&[2, 4])).unwrap();
        assert_eq!(q.apexes, vec![0, 2]);
        let full = Complex::complete(6, 2, Model::G).unwrap();
        assert_eq!(count_shells_through(&full, &s(&[1, 2])).unwrap().count(), 4);
        let empty = Complex::build_g(6, 2, vec![]).unwrap();
        assert_eq!(count_shells_through(&empty, &s(&[1, 2])).unwrap().count(), 0);
        assert!(is_hollow_shell(&g1, &s(&[1, 3, 4])).unwrap());
        assert!(!is_hollow_shell(&g2, &s(&[1, 3, 4])).unwrap());
        assert!(!is_hollow_shell(&g1, &s(&[1, 2, 5])).unwrap());
    }

    #[test]
    fn isolated_edges() {
        let y = Complex::build_y(4, 2, one_based(&[&[1, 2, 3]])).unwrap();
        let iso = find_isolated(&y).unwrap();
        assert_eq!(iso, one_based(&[&[1, 4], &[2, 4], &[3, 4]]));
        assert!(find_isolated(&Complex::complete(5, 2, Model::Y).unwrap()).unwrap().is_empty());
        assert_eq!(find_isolated(&Complex::build_y(4, 2, vec![]).unwrap()).unwrap().len(), 6);
        assert!(find_isolated(&Complex::build_g(4, 2, vec![]).unwrap()).is_err());
    }

    #[test]
    fn traversability() {
        let (g, _, _) = ex33();
        assert!(is_traversable(&g, &one_based(&[&[1, 2], &[1, 3]])).unwrap());
        assert!(!is_traversable(&g, &one_based(&[&[1, 2], &[4, 5]])).unwrap());
        assert!(is_traversable(&g, &[]).unwrap());
        assert!(is_traversable(&g, &one_based(&[&[1, 2]])).unwrap());
        assert!(is_traversable(&g, &one_based(&[&[2, 4]])).is_err());
    }
}
