use proptest::prelude::*;

use cohomconn::cohomology::{betti, is_j_cohom_connected, summary};
use cohomconn::experiment::sample_gp;
use cohomconn::obstructions::{find_isolated, find_mj, find_mj_minus};
use cohomconn::process::{complex_at, sample_birth_times, scan_process, snapshot, trial_rng, HittingTime, ScanOptions};
use cohomconn::simplex::{binom, colex_rank, colex_unrank};
use cohomconn::{Complex, Model};

/// Hitting time from the last state where `holds` is true, recomputed from
/// snapshots.
fn last_state(states: usize, mut holds: impl FnMut(usize) -> bool) -> Option<usize> {
    (0..=states).rev().find(|&s| holds(s))
}

fn expect_hitting(t: &cohomconn::process::BirthTimeTable, last: Option<usize>) -> HittingTime {
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

fn components(n: usize, tops: &[Vec<u32>]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &[usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for s in tops {
        for w in s.windows(2) {
            let (a, b) = (root(&parent, w[0] as usize), root(&parent, w[1] as usize));
            parent[a] = b;
        }
    }
    (0..n).filter(|&v| root(&parent, v) == v).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complex_at_is_monotone(seed in any::<u64>(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let t = sample_birth_times(7, 2, seed).unwrap();
        let (lo, hi) = (a.min(b), a.max(b));
        let small = complex_at(&t, lo).unwrap();
        let large = complex_at(&t, hi).unwrap();
        for s in small.top_simplices() {
            prop_assert!(large.contains(&s));
        }
        prop_assert_eq!(&snapshot(&t, t.events_up_to(lo), Model::G).unwrap(), &small);
        prop_assert!(t.events_up_to(lo) <= t.events_up_to(hi));
    }

    #[test]
    fn scan_matches_snapshots(seed in any::<u64>(), n in 5usize..8) {
        let t = sample_birth_times(n, 2, seed).unwrap();
        let r = scan_process(&t, 1, Model::G, ScanOptions::default()).unwrap();
        let snaps: Vec<Complex> = (0..=t.len()).map(|s| snapshot(&t, s, Model::G).unwrap()).collect();
        let order = t.order();
        let tops = |s: usize| -> Vec<Vec<u32>> {
            order[..s].iter().map(|&r| colex_unrank(r, 3).vertices().to_vec()).collect()
        };
        let p_t = last_state(t.len(), |s| components(n, &tops(s)) > 1);
        prop_assert_eq!(r.hitting.p_t, Some(expect_hitting(&t, p_t)));
        let conn = last_state(t.len(), |s| !is_j_cohom_connected(&snaps[s], 1).unwrap());
        prop_assert_eq!(r.hitting.p_conn, expect_hitting(&t, conn));
        let minus = last_state(t.len(), |s| !find_mj_minus(&snaps[s], 1).unwrap().is_empty());
        prop_assert_eq!(r.hitting.p_mj_minus, expect_hitting(&t, minus));
        let mj = last_state(t.len(), |s| !find_mj(&snaps[s], 1).unwrap().is_empty());
        prop_assert_eq!(r.hitting.p_mj, expect_hitting(&t, mj));
        let first = (0..=t.len()).find(|&s| is_j_cohom_connected(&snaps[s], 1).unwrap());
        prop_assert_eq!(r.first_connected_state, first);
    }

    #[test]
    fn y_scan_matches_snapshots(seed in any::<u64>(), n in 4usize..8) {
        let t = sample_birth_times(n, 2, seed).unwrap();
        let r = scan_process(&t, 1, Model::Y, ScanOptions::default()).unwrap();
        let snaps: Vec<Complex> = (0..=t.len()).map(|s| snapshot(&t, s, Model::Y).unwrap()).collect();
        let isol = last_state(t.len(), |s| !find_isolated(&snaps[s]).unwrap().is_empty());
        prop_assert_eq!(r.hitting.p_isol, Some(expect_hitting(&t, isol)));
        let conn = last_state(t.len(), |s| betti(&snaps[s], 1).unwrap() > 0);
        prop_assert_eq!(r.hitting.p_conn_y, Some(expect_hitting(&t, conn)));
    }

    #[test]
    fn euler_poincare(seed in any::<u64>(), n in 4usize..10, k in 2usize..4, p in 0.05f64..0.9) {
        let mut rng = trial_rng(seed, 0);
        for model in [Model::G, Model::Y] {
            let c = sample_gp(n, k, p, model, &mut rng).unwrap();
            let s = summary(&c);
            prop_assert_eq!(s.euler_from_faces(), s.euler_from_bettis());
            if model == Model::Y {
                prop_assert_eq!(c.count(k - 1) as u64, binom(n, k));
                prop_assert_eq!(s.bettis[0], 1);
            }
        }
    }

    #[test]
    fn colex_roundtrip(n in 1usize..40, size in 1usize..5, x in any::<u64>()) {
        prop_assume!(size <= n);
        let rank = x % binom(n, size);
        let s = colex_unrank(rank, size);
        prop_assert_eq!(s.len(), size);
        prop_assert!(s.max_vertex() < n as u32);
        prop_assert_eq!(colex_rank(s.vertices()), rank);
    }

    #[test]
    fn adding_a_set_never_disconnects(seed in any::<u64>(), n in 5usize..9, p in 0.05f64..0.6) {
        let mut rng = trial_rng(seed, 1);
        let c = sample_gp(n, 2, p, Model::G, &mut rng).unwrap();
        let b = colex_unrank(seed % binom(n, 2), 2);
        let cb = c.add_simplex(&b).unwrap();
        prop_assert!(cb.contains(&b));
        prop_assert!(summary(&cb).bettis[0] <= summary(&c).bettis[0]);
    }
}
