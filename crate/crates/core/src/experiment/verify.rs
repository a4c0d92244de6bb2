//! Exhaustive small-case checks of the library's structural claims.
//!
//! Each check builds its expectation by brute force over bitmask-encoded
//! cochains, so it shares no linear algebra with the code under test.

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{sample_gp, SCHEMA_VERSION};
use crate::cohomology::{betti, coboundary, component_count, is_j_cohom_connected, summary, Cochain};
use crate::complex::{one_based, Complex, Model};
use crate::obstructions::{
    enumerate_traversable_cocycle_supports, find_local_obstacles, find_mj, find_mj_minus, find_mj_star,
    flower_cochain, is_traversable, meshulam_wallach_exhaustive,
};
use crate::process::{scan_process, trial_rng, BirthTimeTable, ScanOptions};
use crate::simplex::{colex_rank, Simplex};
use crate::thresholds::expected_mj_minus;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

const SEED: u64 = 0x5EED_0003;

fn check(name: &str, failures: Vec<String>, cases: usize) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{cases} cases")
        } else {
            format!("{} of {cases} cases failed; first: {}", failures.len(), failures[0])
        },
    }
}

/// Random G-model complexes with at most `max_edges` edges (so that every
/// 1-cochain fits in a bitmask).
fn small_complexes(count: usize, ns: &[usize], max_edges: usize, stream: u64) -> Vec<Complex> {
    let mut rng = trial_rng(SEED, stream);
    let mut out = Vec::new();
    while out.len() < count {
        let n = ns[rng.random_range(0..ns.len())];
        let p = rng.random_range(1..10) as f64 / 10.0;
        let c = sample_gp(n, 2, p, Model::G, &mut rng).expect("valid shape");
        if c.count(1) <= max_edges {
            out.push(c);
        }
    }
    out
}

/// `mask[i]` lists, for the i-th d-simplex, the bit of each of its
/// (d-1)-faces.
fn face_masks(c: &Complex, d: usize) -> Vec<u64> {
    let lower = c.simplices(d - 1).expect("dimension in range");
    c.simplices(d)
        .expect("dimension in range")
        .simplices()
        .iter()
        .map(|s| {
            s.faces(d)
                .iter()
                .map(|f| 1u64 << lower.index_of(f).expect("closed"))
                .fold(0, |a, b| a | b)
        })
        .collect()
}

/// All values of `δ^{j-1}` (as masks over j-simplices).
fn coboundary_images(c: &Complex, j: usize) -> HashSet<u64> {
    let up = face_masks(c, j);
    let lower = c.count(j - 1);
    // column of δ for each (j-1)-simplex
    let mut cols = vec![0u64; lower];
    for (i, m) in up.iter().enumerate() {
        for (r, col) in cols.iter_mut().enumerate() {
            if m >> r & 1 == 1 {
                *col |= 1 << i;
            }
        }
    }
    let mut out = HashSet::new();
    let mut cur = 0u64;
    out.insert(cur);
    for g in 1u64..(1 << lower) {
        cur ^= cols[g.trailing_zeros() as usize];
        out.insert(cur);
    }
    out
}

fn is_cocycle_mask(f: u64, upper: &[u64]) -> bool {
    upper.iter().all(|m| (m & f).count_ones() % 2 == 0)
}

fn example() -> (Complex, Complex, Complex) {
    let g = Complex::build_g(5, 2, one_based(&[&[1, 2, 3], &[1, 4, 5]])).expect("fixture");
    let g1 = g.add_simplex(&one_based(&[&[2, 3, 4]])[0]).expect("fixture");
    let g2 = g1.add_simplex(&one_based(&[&[1, 3, 4]])[0]).expect("fixture");
    (g, g1, g2)
}

fn example_checks() -> Vec<CheckResult> {
    let (g, g1, g2) = example();
    let seq = [&g, &g1, &g2];
    let b: Vec<usize> = seq.iter().map(|c| betti(c, 1).expect("j in range")).collect();
    let conn: Vec<bool> = seq.iter().map(|c| is_j_cohom_connected(c, 1).expect("j in range")).collect();
    let mut fails = Vec::new();
    if b != [0, 1, 0] {
        fails.push(format!("betti sequence {b:?}"));
    }
    if conn != [true, false, true] {
        fails.push(format!("connectedness {conn:?}"));
    }
    let mut out = vec![check("example_betti_sequence", fails, 3)];

    let mut fails = Vec::new();
    if find_mj_minus(&g, 1).expect("j").is_empty() {
        fails.push("no M_1^- copy in G".into());
    }
    if !find_mj(&g, 1).expect("j").is_empty() {
        fails.push("M_1 copy in G".into());
    }
    if find_mj(&g1, 1).expect("j").is_empty() {
        fails.push("no M_1 copy in G'".into());
    }
    if !find_mj(&g2, 1).expect("j").is_empty() {
        fails.push("M_1 copy in G''".into());
    }
    out.push(check("example_detectors", fails, 4));

    // the process passing through G, G', G''
    let first = [[0u32, 1, 2], [0, 3, 4], [1, 2, 3], [0, 2, 3]];
    let mut times = vec![0.0; 10];
    let mut next = 1.0;
    for f in &first {
        times[colex_rank(f) as usize] = next / 20.0;
        next += 1.0;
    }
    for t in times.iter_mut().filter(|t| **t == 0.0) {
        *t = next / 20.0;
        next += 1.0;
    }
    let table = BirthTimeTable::from_times(5, 2, &times).expect("distinct times");
    let scan = scan_process(&table, 1, Model::G, ScanOptions { trace: true }).expect("j");
    let flips: Vec<bool> = scan.trace.iter().take(4).map(|r| r.connected_j).collect();
    let fails = if flips == [false, true, false, true] {
        Vec::new()
    } else {
        vec![format!("trace connectedness {flips:?}")]
    };
    out.push(check("example_process_flips", fails, 1));
    out
}

fn cohomology_oracle() -> CheckResult {
    let mut fails = Vec::new();
    let cases = small_complexes(60, &[5, 6], 15, 1);
    for (i, c) in cases.iter().enumerate() {
        let f1 = c.count(1);
        let upper = face_masks(c, 2);
        let cocycles = (0u64..(1 << f1)).filter(|&f| is_cocycle_mask(f, &upper)).count();
        let cobs = coboundary_images(c, 1).len();
        let expect = (cocycles / cobs).trailing_zeros() as usize;
        let got = betti(c, 1).expect("j");
        if got != expect || cocycles % cobs != 0 {
            fails.push(format!("complex {i}: betti {got}, exhaustive {expect}"));
        }
    }
    check("betti_vs_exhaustive", fails, cases.len())
}

fn structural_identities() -> CheckResult {
    let mut fails = Vec::new();
    let cases = small_complexes(40, &[5, 6, 7], 21, 2);
    for (i, c) in cases.iter().enumerate() {
        let s = summary(c);
        if s.euler_from_faces() != s.euler_from_bettis() {
            fails.push(format!("complex {i}: Euler characteristic"));
        }
        if s.bettis[0] != component_count(c) {
            fails.push(format!("complex {i}: b_0 vs components"));
        }
        for j in 0..2 {
            for idx in 0..c.count(j) {
                let f = Cochain::new(c, j, [idx]).expect("index");
                let dd = coboundary(c, &coboundary(c, &f).expect("f")).expect("δf");
                if !dd.is_zero() {
                    fails.push(format!("complex {i}: δδ ≠ 0 in degree {j}"));
                }
            }
        }
    }
    check("structural_identities", fails, cases.len())
}

/// Restrictions of cocycle supports to k-simplices are empty or cover the
/// simplex with at least k-j+1 faces, and minimal ones are flowers.
fn support_restrictions() -> CheckResult {
    let (k, j) = (2usize, 1usize);
    let mut fails = Vec::new();
    let mut supports = 0;
    let cases = small_complexes(30, &[5, 6, 7], 21, 3);
    for (i, c) in cases.iter().enumerate() {
        let e = enumerate_traversable_cocycle_supports(c, j, 4, 5_000_000).expect("G model");
        if e.truncated {
            fails.push(format!("complex {i}: search truncated"));
            continue;
        }
        for s in e.simplices(c, j) {
            supports += 1;
            for kk in c.top_simplices() {
                let sk: Vec<&Simplex> = s.iter().filter(|x| x.is_subset_of(&kk)).collect();
                if sk.is_empty() {
                    continue;
                }
                let union: BTreeSet<u32> = sk.iter().flat_map(|x| x.vertices().to_vec()).collect();
                if sk.len() < k - j + 1 || union.len() != k + 1 {
                    fails.push(format!("complex {i}: restriction {sk:?} to {kk:?}"));
                    continue;
                }
                if sk.len() == k - j + 1 {
                    let common = sk
                        .iter()
                        .map(|x| x.vertices().iter().copied().collect::<BTreeSet<u32>>())
                        .reduce(|a, b| a.intersection(&b).copied().collect())
                        .unwrap_or_default();
                    if common.len() != j {
                        fails.push(format!("complex {i}: {sk:?} is not a flower"));
                    }
                }
            }
        }
    }
    check("support_restrictions", fails, supports)
}

/// Smallest supports of cocycles outside the span of coboundaries and
/// M_j^- flowers are traversable.
fn minimal_supports_traversable() -> CheckResult {
    let mut fails = Vec::new();
    let cases = small_complexes(40, &[5, 6], 15, 4);
    let mut nontrivial = 0;
    for (i, c) in cases.iter().enumerate() {
        let f1 = c.count(1);
        let upper = face_masks(c, 2);
        let mut gens: Vec<u64> = Vec::new();
        for copy in find_mj_minus(c, 1).expect("j") {
            let f = flower_cochain(c, &copy).expect("copy");
            gens.push(f.support().iter().fold(0, |a, &x| a | 1 << x));
        }
        let mut span: HashSet<u64> = HashSet::new();
        for b in coboundary_images(c, 1) {
            for g in 0u64..(1 << gens.len()) {
                let extra = (0..gens.len()).filter(|t| g >> t & 1 == 1).fold(0, |a, t| a ^ gens[t]);
                span.insert(b ^ extra);
            }
        }
        let outside: Vec<u64> = (1u64..(1 << f1))
            .filter(|&f| is_cocycle_mask(f, &upper) && !span.contains(&f))
            .collect();
        let Some(w) = outside.iter().map(|f| f.count_ones()).min() else {
            continue;
        };
        nontrivial += 1;
        let idx = c.index(1);
        for f in outside.iter().filter(|f| f.count_ones() == w) {
            let s: Vec<Simplex> = (0..f1).filter(|b| f >> b & 1 == 1).map(|b| idx.simplex(b)).collect();
            if !is_traversable(c, &s).expect("simplices of c") {
                fails.push(format!("complex {i}: support {s:?}"));
            }
        }
    }
    check("minimal_supports_traversable", fails, nontrivial)
}

/// Span-membership M_j detection against brute-force search for cycles.
fn mj_against_cycles() -> CheckResult {
    let mut fails = Vec::new();
    let cases = small_complexes(40, &[5, 6], 15, 5);
    for (i, c) in cases.iter().enumerate() {
        let idx = c.index(1);
        let bd = face_masks(c, 1);
        let mut expect = BTreeSet::new();
        for copy in find_mj_minus(c, 1).expect("j") {
            let petals = copy.flower.petals();
            let pidx: Vec<usize> = petals.iter().map(|p| idx.index_of(p).expect("petal")).collect();
            let allowed: Vec<usize> = (0..c.count(1)).filter(|x| !pidx.contains(x)).collect();
            for (pi, &p) in pidx.iter().enumerate() {
                let found = (0u64..(1 << allowed.len())).any(|m| {
                    let b = (0..allowed.len())
                        .filter(|t| m >> t & 1 == 1)
                        .fold(bd[p], |a, t| a ^ bd[allowed[t]]);
                    b == 0
                });
                if found {
                    expect.insert((copy.flower.k_simplex.clone(), copy.flower.centre.clone(), petals[pi].clone()));
                }
            }
        }
        let got: BTreeSet<_> = find_mj(c, 1)
            .expect("j")
            .into_iter()
            .map(|m| (m.base.flower.k_simplex, m.base.flower.centre, m.petal))
            .collect();
        if got != expect {
            fails.push(format!("complex {i}: detector {} vs search {}", got.len(), expect.len()));
        }
    }
    check("mj_vs_cycle_search", fails, cases.len())
}

/// M_j^* bases ⊆ M_j bases ⊆ M_j^- ⊆ local obstacles; flowers of M_j
/// copies are bad functions.
fn implication_chain() -> CheckResult {
    let mut fails = Vec::new();
    let cases = small_complexes(40, &[5, 6, 7], 21, 6);
    for (i, c) in cases.iter().enumerate() {
        let minus = find_mj_minus(c, 1).expect("j");
        let mj = find_mj(c, 1).expect("j");
        let star = find_mj_star(c, 1).expect("j");
        let obstacles: HashSet<Simplex> = find_local_obstacles(c, 1)
            .expect("j")
            .into_iter()
            .map(|o| o.k_simplex)
            .collect();
        let mj_keys: HashSet<_> = mj.iter().map(|m| (m.base.clone(), m.petal.clone())).collect();
        for s in &star {
            let petal = s.base.flower.centre.with_vertex(s.w);
            if !mj_keys.contains(&(s.base.clone(), petal)) {
                fails.push(format!("complex {i}: star copy without M_j"));
            }
        }
        for m in &mj {
            if !minus.contains(&m.base) {
                fails.push(format!("complex {i}: M_j base not in M_j^-"));
            }
            let f = flower_cochain(c, &m.base).expect("copy");
            let bad = crate::cohomology::is_cocycle(c, &f).expect("f")
                && crate::cohomology::is_coboundary(c, &f).expect("f").is_none();
            if !bad {
                fails.push(format!("complex {i}: flower of an M_j copy is not bad"));
            }
        }
        for m in &minus {
            if !obstacles.contains(&m.flower.k_simplex) {
                fails.push(format!("complex {i}: M_j^- simplex is not a local obstacle"));
            }
        }
        if !mj.is_empty() && betti(c, 1).expect("j") == 0 {
            fails.push(format!("complex {i}: M_j copy with b_1 = 0"));
        }
    }
    check("implication_chain", fails, cases.len())
}

fn expansion() -> Vec<CheckResult> {
    [5usize, 6]
        .iter()
        .map(|&n| {
            let s = meshulam_wallach_exhaustive(n, 1, 1 << 20).expect("small n");
            let fails = if s.violations == 0 {
                Vec::new()
            } else {
                vec![format!("{} violations", s.violations)]
            };
            check(&format!("coboundary_expansion_n{n}"), fails, s.cochains as usize)
        })
        .collect()
}

/// First-moment formula at n = 4 against the exact expectation over all 16
/// triangle sets.
fn expectation_exact() -> CheckResult {
    let mut fails = Vec::new();
    for p in [0.1f64, 0.5, 0.9] {
        let mut exact = 0.0;
        for mask in 0u64..16 {
            let ranks: Vec<u64> = (0..4).filter(|r| mask >> r & 1 == 1).collect();
            let c = Complex::from_ranks(4, 2, Model::G, &ranks).expect("shape");
            let m = ranks.len() as i32;
            let weight = p.powi(m) * (1.0 - p).powi(4 - m);
            exact += weight * find_mj_minus(&c, 1).expect("j").len() as f64;
        }
        let formula = expected_mj_minus(4, 2, 1, p);
        if (exact - formula).abs() > 1e-12 {
            fails.push(format!("p = {p}: exact {exact}, formula {formula}"));
        }
    }
    check("expected_mj_minus_n4", fails, 3)
}

pub fn run_verify_suite() -> VerifyReport {
    let mut checks = example_checks();
    checks.push(cohomology_oracle());
    checks.push(structural_identities());
    checks.push(support_restrictions());
    checks.push(minimal_supports_traversable());
    checks.push(mj_against_cycles());
    checks.push(implication_chain());
    checks.extend(expansion());
    checks.push(expectation_exact());
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let r = run_verify_suite();
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert!(r.passed);
    }
}
