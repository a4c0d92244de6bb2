//! Event-driven scan of the birth-time process.
//!
//! Adding one k-simplex changes a bounded neighbourhood, so the scan keeps
//! incremental state: a union-find over vertices, one reduced basis per
//! boundary operator (so each rank update is one reduction), and the k-degree
//! of every j-simplex together with the XOR of the ranks of the k-simplices
//! containing it, which names the unique owner of a degree-1 face. M_j^- and
//! local-obstacle counts are then local updates around the new simplex.
//!
//! M_j presence needs a linear solve on the whole complex. A copy of M_j
//! forces `b_j >= 1` and an M_j^- copy, so it is only evaluated on states
//! where both hold: on every such state when a trace is requested, otherwise
//! backwards from the end until the last state with a copy is found.

use serde::{Deserialize, Serialize};

use crate::complex::Model;
use crate::error::{Error, Result};
use crate::gf2::IncrementalBasis;
use crate::obstructions::Detector;
use crate::process::{snapshot, BirthTimeTable};
use crate::simplex::{binom, colex_unrank, for_each_subset, Simplex, Vertex};
use crate::unionfind::UnionFind;

/// Supremum of the times at which a property holds, under right-continuous
/// snapshots: if the property last holds on the interval `[t_i, t_{i+1})`, the
/// hitting time is `t_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HittingTime {
    /// Birth time, colex rank and 0-based position of the event that ends the
    /// last interval where the property holds.
    At { time: f64, event: u64, index: usize },
    /// The property still holds once every set is born.
    Persists,
    /// The property never holds.
    Never,
}

impl HittingTime {
    pub fn time(&self) -> Option<f64> {
        match self {
            HittingTime::At { time, .. } => Some(*time),
            _ => None,
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            HittingTime::At { index, .. } => Some(*index),
            _ => None,
        }
    }

    /// From the last state (number of events so far) where the property held.
    fn from_last_state(t: &BirthTimeTable, last: Option<usize>) -> Self {
        match last {
            None => HittingTime::Never,
            Some(s) if s == t.len() => HittingTime::Persists,
            Some(s) => HittingTime::At {
                time: t.event_time(s),
                event: t.order()[s],
                index: s,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingTimes {
    pub model: Model,
    pub j: usize,
    /// Last time the complex is disconnected (G model).
    pub p_t: Option<HittingTime>,
    pub p_mj: HittingTime,
    pub p_mj_minus: HittingTime,
    /// Last time the complex is not j-cohomologically connected.
    pub p_conn: HittingTime,
    /// Last time an isolated (k-1)-simplex exists (Y model).
    pub p_isol: Option<HittingTime>,
    /// Last time the complex is not (k-1)-cohomologically connected (Y model).
    pub p_conn_y: Option<HittingTime>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub event_rank: u64,
    pub birth_time: f64,
    pub num_components: usize,
    /// `b_1..b_j`.
    pub bettis: Vec<usize>,
    pub mjminus_count: usize,
    /// Number of M_j^- copies that extend to an M_j copy.
    pub mj_count: usize,
    pub local_obstacles: usize,
    pub connected_j: bool,
}

impl TraceRow {
    pub fn csv_header(j: usize) -> Vec<String> {
        let mut h = vec!["event_rank".into(), "birth_time".into(), "num_components".into()];
        h.extend((1..=j).map(|i| format!("betti_{i}")));
        h.extend(
            ["mjminus_count", "mj_count", "local_obstacles", "connected_j"]
                .iter()
                .map(|s| s.to_string()),
        );
        h
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut r = vec![
            self.event_rank.to_string(),
            format!("{:.17e}", self.birth_time),
            self.num_components.to_string(),
        ];
        r.extend(self.bettis.iter().map(|b| b.to_string()));
        r.push(self.mjminus_count.to_string());
        r.push(self.mj_count.to_string());
        r.push(self.local_obstacles.to_string());
        r.push(self.connected_j.to_string());
        r
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Record a row per event, with M_j evaluated wherever it can occur.
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub hitting: HittingTimes,
    pub trace: Vec<TraceRow>,
    /// First state (number of events) that is j-cohomologically connected.
    pub first_connected_state: Option<usize>,
    /// Number of snapshots on which M_j was evaluated.
    pub mj_evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingCheck {
    /// `p_conn` and `p_mj` are the same event.
    pub conn_equals_mj: bool,
    /// No state before `p_mj` is j-cohomologically connected.
    pub subcritical: bool,
    /// `p_conn_y` and `p_isol` agree (Y model only).
    pub conn_y_equals_isol: Option<bool>,
}

/// k-degrees of all d-simplices (by colex rank) with owner XORs.
struct Degrees {
    deg: Vec<u32>,
    owner: Vec<u64>,
}

impl Degrees {
    fn new(n: usize, d: usize) -> Self {
        let m = binom(n, d + 1) as usize;
        Degrees {
            deg: vec![0; m],
            owner: vec![0; m],
        }
    }
}

struct Scanner<'a> {
    t: &'a BirthTimeTable,
    model: Model,
    n: usize,
    k: usize,
    j: usize,
    /// Presence of d-simplices for G, `present[d]`, d in 1..k.
    present: Vec<Vec<bool>>,
    uf: UnionFind,
    /// `bases[d]` reduces boundaries of d-simplices.
    bases: Vec<Option<IncrementalBasis>>,
    ranks: Vec<usize>,
    f: Vec<usize>,
    jdeg: Degrees,
    /// (k-1)-degrees for isolated-simplex counts (Y model).
    ridge_deg: Vec<u32>,
    isolated: usize,
    minus: usize,
    obstacles: usize,
}

impl<'a> Scanner<'a> {
    fn new(t: &'a BirthTimeTable, j: usize, model: Model) -> Self {
        let (n, k) = (t.n(), t.k());
        let top_basis = (j + 1).max(if model == Model::Y { k } else { 0 });
        let mut bases: Vec<Option<IncrementalBasis>> = (0..=k).map(|_| None).collect();
        for (d, b) in bases.iter_mut().enumerate().take(top_basis + 1).skip(2) {
            if model == Model::G || d == k {
                *b = Some(IncrementalBasis::new(binom(n, d) as usize));
            }
        }
        let mut present = vec![Vec::new(); k];
        if model == Model::G {
            for (d, p) in present.iter_mut().enumerate().skip(1) {
                if d <= j + 1 {
                    *p = vec![false; binom(n, d + 1) as usize];
                }
            }
        }
        let mut f = vec![0usize; j + 1];
        f[0] = n;
        let (ridge_deg, isolated) = if model == Model::Y {
            let m = binom(n, k) as usize;
            (vec![0; m], m)
        } else {
            (Vec::new(), 0)
        };
        Scanner {
            t,
            model,
            n,
            k,
            j,
            present,
            uf: UnionFind::new(n),
            bases,
            ranks: vec![0; k + 1],
            f,
            jdeg: Degrees::new(n, j),
            ridge_deg,
            isolated,
            minus: 0,
            obstacles: 0,
        }
    }

    fn components(&self) -> usize {
        match self.model {
            Model::G => self.uf.classes(),
            Model::Y => 1,
        }
    }

    /// `b_1..b_j` of the current state.
    fn bettis(&self) -> Vec<usize> {
        match self.model {
            Model::G => {
                let r1 = self.n - self.uf.classes();
                (1..=self.j)
                    .map(|d| {
                        let lower = if d == 1 { r1 } else { self.ranks[d] };
                        self.f[d] - lower - self.ranks[d + 1]
                    })
                    .collect()
            }
            Model::Y => (1..=self.j)
                .map(|d| if d == self.k - 1 { self.top_betti_y() } else { 0 })
                .collect(),
        }
    }

    /// `b_{k-1}` of a Y-model state: `C(n-1, k) - rank ∂_k`.
    fn top_betti_y(&self) -> usize {
        binom(self.n - 1, self.k) as usize - self.ranks[self.k]
    }

    fn face_state(&self, kv: &[Vertex]) -> (usize, bool) {
        let j = self.j;
        let need = self.k - j + 1;
        let mut centres = 0;
        for_each_subset(kv, j, |c| {
            let c = Simplex::from_sorted(c);
            let all = kv
                .iter()
                .filter(|w| !c.contains_vertex(**w))
                .all(|&w| self.jdeg.deg[c.with_vertex(w).rank() as usize] == 1);
            if all {
                centres += 1;
            }
        });
        let mut free = 0;
        for_each_subset(kv, j + 1, |s| {
            if self.jdeg.deg[crate::simplex::colex_rank(s) as usize] == 1 {
                free += 1;
            }
        });
        (centres, free >= need)
    }

    fn add(&mut self, rank: u64) {
        let kk = colex_unrank(rank, self.k + 1);
        let kv = kk.vertices();
        if self.model == Model::G {
            let top = (self.j + 1).min(self.k);
            for d in 1..=top {
                for_each_subset(kv, d + 1, |s| {
                    let r = crate::simplex::colex_rank(s) as usize;
                    if d < self.k {
                        if self.present[d][r] {
                            return;
                        }
                        self.present[d][r] = true;
                    }
                    if d <= self.j {
                        self.f[d] += 1;
                    }
                    if d == 1 {
                        self.uf.union(s[0] as usize, s[1] as usize);
                    } else {
                        let mut rows = Vec::with_capacity(d + 1);
                        for_each_subset(s, d, |fc| rows.push(crate::simplex::colex_rank(fc) as usize));
                        let b = self.bases[d].as_mut().expect("basis allocated");
                        if b.insert(&rows) {
                            self.ranks[d] += 1;
                        }
                    }
                });
            }
        } else {
            let mut rows = Vec::with_capacity(self.k + 1);
            for_each_subset(kv, self.k, |fc| {
                let r = crate::simplex::colex_rank(fc) as usize;
                rows.push(r);
                if self.ridge_deg[r] == 0 {
                    self.isolated -= 1;
                }
                self.ridge_deg[r] += 1;
            });
            let b = self.bases[self.k].as_mut().expect("basis allocated");
            if b.insert(&rows) {
                self.ranks[self.k] += 1;
            }
        }

        // owners of the new simplex's free faces lose them
        let mut jfaces = Vec::new();
        for_each_subset(kv, self.j + 1, |s| jfaces.push(crate::simplex::colex_rank(s) as usize));
        let mut affected: Vec<u64> = jfaces
            .iter()
            .filter(|&&f| self.jdeg.deg[f] == 1)
            .map(|&f| self.jdeg.owner[f])
            .collect();
        affected.sort_unstable();
        affected.dedup();
        for &a in &affected {
            let (c, o) = self.face_state(colex_unrank(a, self.k + 1).vertices());
            self.minus -= c;
            self.obstacles -= o as usize;
        }
        for &f in &jfaces {
            self.jdeg.deg[f] += 1;
            self.jdeg.owner[f] ^= rank;
        }
        affected.push(rank);
        for &a in &affected {
            let (c, o) = self.face_state(colex_unrank(a, self.k + 1).vertices());
            self.minus += c;
            self.obstacles += o as usize;
        }
    }

    fn mj_count(&self, state: usize) -> usize {
        let c = snapshot(self.t, state, self.model).expect("table shape was validated");
        Detector::new(&c, self.j).expect("j validated").count_mj_bases()
    }

    fn has_mj(&self, state: usize) -> bool {
        let c = snapshot(self.t, state, self.model).expect("table shape was validated");
        Detector::new(&c, self.j).expect("j validated").has_mj()
    }
}

/// Runs the process in birth order and records every hitting time for
/// dimension `j` (and the model's own hitting times).
pub fn scan_process(t: &BirthTimeTable, j: usize, model: Model, options: ScanOptions) -> Result<ScanResult> {
    let k = t.k();
    if j == 0 || j >= k {
        return Err(Error::DimensionOutOfRange {
            dim: j as i64,
            lo: 1,
            hi: k as i64 - 1,
        });
    }
    let mut s = Scanner::new(t, j, model);
    let events = t.len();

    let mut last_disconnected = None;
    let mut last_minus = None;
    let mut last_not_conn = None;
    let mut last_isolated = None;
    let mut last_top_betti = None;
    let mut first_connected = None;
    let mut candidates: Vec<usize> = Vec::new();
    let mut last_mj = None;
    let mut mj_evaluations = 0;
    let mut trace = Vec::new();

    for state in 0..=events {
        if state > 0 {
            s.add(t.order()[state - 1]);
        }
        let comps = s.components();
        let bettis = s.bettis();
        let connected = comps == 1 && bettis.iter().all(|&b| b == 0);
        if comps > 1 {
            last_disconnected = Some(state);
        }
        if s.minus > 0 {
            last_minus = Some(state);
        }
        if connected {
            first_connected.get_or_insert(state);
        } else {
            last_not_conn = Some(state);
        }
        if model == Model::Y {
            if s.isolated > 0 {
                last_isolated = Some(state);
            }
            if s.top_betti_y() > 0 {
                last_top_betti = Some(state);
            }
        }
        let candidate = bettis[j - 1] > 0 && s.minus > 0;
        let mut mj_count = 0;
        if candidate {
            if options.trace {
                mj_count = s.mj_count(state);
                mj_evaluations += 1;
                if mj_count > 0 {
                    last_mj = Some(state);
                }
            } else {
                candidates.push(state);
            }
        }
        if options.trace && state > 0 {
            trace.push(TraceRow {
                event_rank: t.order()[state - 1],
                birth_time: t.event_time(state - 1),
                num_components: comps,
                bettis,
                mjminus_count: s.minus,
                mj_count,
                local_obstacles: s.obstacles,
                connected_j: connected,
            });
        }
    }
    if !options.trace {
        for &state in candidates.iter().rev() {
            mj_evaluations += 1;
            if s.has_mj(state) {
                last_mj = Some(state);
                break;
            }
        }
    }

    let at = |last| HittingTime::from_last_state(t, last);
    let hitting = HittingTimes {
        model,
        j,
        p_t: (model == Model::G).then(|| at(last_disconnected)),
        p_mj: at(last_mj),
        p_mj_minus: at(last_minus),
        p_conn: at(last_not_conn),
        p_isol: (model == Model::Y).then(|| at(last_isolated)),
        p_conn_y: (model == Model::Y).then(|| at(last_top_betti)),
    };
    Ok(ScanResult {
        hitting,
        trace,
        first_connected_state: first_connected,
        mj_evaluations,
    })
}

/// Compares the scan's hitting times against the exact event identities.
pub fn check_hitting_equality(r: &ScanResult) -> HittingCheck {
    let h = &r.hitting;
    let subcritical = match h.p_mj {
        HittingTime::At { index, .. } => r.first_connected_state.is_none_or(|f| f >= index),
        HittingTime::Persists => r.first_connected_state.is_none(),
        HittingTime::Never => false,
    };
    HittingCheck {
        conn_equals_mj: h.p_conn == h.p_mj,
        subcritical,
        conn_y_equals_isol: match (h.p_conn_y, h.p_isol) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{betti, component_count, is_j_cohom_connected};
    use crate::obstructions::{find_isolated, find_local_obstacles, find_mj, find_mj_minus};
    use crate::process::sample_birth_times;
    use crate::simplex::colex_rank;

    /// Ordering through G, G', G'': 123, 145, 234, 134 first, then the rest.
    fn example_table() -> BirthTimeTable {
        let first: Vec<u64> = [[0, 1, 2], [0, 3, 4], [1, 2, 3], [0, 2, 3]]
            .iter()
            .map(|v| colex_rank(v))
            .collect();
        let m = binom(5, 3) as usize;
        let mut times = vec![0.0; m];
        let mut next = 1;
        for &r in &first {
            times[r as usize] = next as f64 / 20.0;
            next += 1;
        }
        for (r, t) in times.iter_mut().enumerate() {
            if !first.contains(&(r as u64)) {
                *t = next as f64 / 20.0;
                next += 1;
            }
        }
        BirthTimeTable::from_times(5, 2, &times).unwrap()
    }

    #[test]
    fn example_flips() {
        let t = example_table();
        let r = scan_process(&t, 1, Model::G, ScanOptions { trace: true }).unwrap();
        let b1: Vec<usize> = r.trace.iter().take(4).map(|row| row.bettis[0]).collect();
        assert_eq!(b1, vec![0, 0, 1, 0]);
        assert_eq!(r.trace[1].num_components, 1);
        let conn: Vec<bool> = r.trace.iter().take(4).map(|row| row.connected_j).collect();
        assert_eq!(conn, vec![false, true, false, true]);
        assert!(r.trace[2].mj_count > 0);
        assert_eq!(r.trace[3].mj_count, 0);
        // the last M_1 copy disappears with 134, the fourth event
        assert_eq!(r.hitting.p_mj.index(), Some(3));
        assert_eq!(r.hitting.p_conn.index(), Some(3));
        assert_eq!(r.hitting.p_t.unwrap().index(), Some(1));
        let chk = check_hitting_equality(&r);
        assert!(chk.conn_equals_mj);
        // state 2 is connected although it is below p_mj
        assert!(!chk.subcritical);
        let lazy = scan_process(&t, 1, Model::G, ScanOptions::default()).unwrap();
        assert_eq!(lazy.hitting, r.hitting);
    }

    #[test]
    fn single_event() {
        let t = sample_birth_times(3, 2, 9).unwrap();
        let r = scan_process(&t, 1, Model::G, ScanOptions::default()).unwrap();
        let h = r.hitting;
        assert_eq!(h.p_t.unwrap().time(), Some(t.event_time(0)));
        assert_eq!(h.p_mj, HittingTime::Never);
        assert_eq!(h.p_mj_minus, HittingTime::Persists);
        let y = scan_process(&t, 1, Model::Y, ScanOptions::default()).unwrap();
        assert_eq!(y.hitting.p_isol.unwrap().index(), Some(0));
    }

    /// Every trace row against recomputation from scratch.
    fn audit(t: &BirthTimeTable, j: usize, model: Model) {
        let r = scan_process(t, j, model, ScanOptions { trace: true }).unwrap();
        assert_eq!(r.trace.len(), t.len());
        for (i, row) in r.trace.iter().enumerate() {
            let c = snapshot(t, i + 1, model).unwrap();
            assert_eq!(row.num_components, component_count(&c), "event {i}");
            for d in 1..=j {
                assert_eq!(row.bettis[d - 1], betti(&c, d).unwrap(), "event {i} d {d}");
            }
            assert_eq!(row.mjminus_count, find_mj_minus(&c, j).unwrap().len());
            assert_eq!(row.local_obstacles, find_local_obstacles(&c, j).unwrap().len());
            let bases: std::collections::HashSet<_> =
                find_mj(&c, j).unwrap().into_iter().map(|m| m.base).collect();
            assert_eq!(row.mj_count, bases.len());
            assert_eq!(row.connected_j, is_j_cohom_connected(&c, j).unwrap());
            if model == Model::Y {
                let _ = find_isolated(&c).unwrap();
            }
        }
        let lazy = scan_process(t, j, model, ScanOptions::default()).unwrap();
        assert_eq!(lazy.hitting, r.hitting);
        if let Some(p) = r.hitting.p_t {
            assert!(r.hitting.p_conn.time().unwrap_or(2.0) >= p.time().unwrap_or(0.0));
        }
    }

    #[test]
    fn traces_match_recomputation() {
        for seed in 0..4 {
            audit(&sample_birth_times(7, 2, seed).unwrap(), 1, Model::G);
            audit(&sample_birth_times(7, 2, seed).unwrap(), 1, Model::Y);
        }
        audit(&sample_birth_times(7, 3, 5).unwrap(), 2, Model::G);
        audit(&sample_birth_times(7, 3, 5).unwrap(), 1, Model::G);
        audit(&sample_birth_times(7, 3, 6).unwrap(), 2, Model::Y);
    }

    #[test]
    fn y_model_times() {
        let t = sample_birth_times(9, 2, 4).unwrap();
        let r = scan_process(&t, 1, Model::Y, ScanOptions::default()).unwrap();
        let isol = r.hitting.p_isol.unwrap().index().unwrap();
        // the last isolated edge is covered at that event and not before
        assert!(!find_isolated(&snapshot(&t, isol, Model::Y).unwrap()).unwrap().is_empty());
        assert!(find_isolated(&snapshot(&t, isol + 1, Model::Y).unwrap()).unwrap().is_empty());
        assert!(r.hitting.p_conn_y.unwrap().index().unwrap() >= isol);
    }
}
