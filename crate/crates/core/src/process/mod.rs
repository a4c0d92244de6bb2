//! The birth-time process: every (k+1)-set gets an independent uniform time
//! in `[0, 1)`, and `G_p` is generated by the sets born at or before `p`.

mod scan;

pub use scan::{check_hitting_equality, scan_process, HittingCheck, HittingTime, HittingTimes, ScanOptions, ScanResult, TraceRow};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Model};
use crate::error::{Error, Result};
use crate::simplex::binom;

/// Largest number of (k+1)-sets a birth-time table may hold.
pub const MAX_EVENTS: u64 = 1 << 25;

/// Birth times carry 53 bits so that they are exact in an `f64`.
const TIME_BITS: u32 = 53;

/// The random stream of trial `trial` under master seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirthTimeTable {
    n: usize,
    k: usize,
    /// Birth time of each (k+1)-set as a 53-bit integer, indexed by colex rank.
    keys: Vec<u64>,
    /// Ranks sorted by birth time.
    order: Vec<u64>,
}

impl BirthTimeTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Birth time of the (k+1)-set with colex rank `rank`.
    pub fn time_of(&self, rank: u64) -> f64 {
        key_to_time(self.keys[rank as usize])
    }

    /// Colex ranks in birth order.
    pub fn order(&self) -> &[u64] {
        &self.order
    }

    /// Time of the `i`-th event (0-based).
    pub fn event_time(&self, i: usize) -> f64 {
        self.time_of(self.order[i])
    }

    /// Number of sets born at or before `p`.
    pub fn events_up_to(&self, p: f64) -> usize {
        self.order.partition_point(|&r| self.time_of(r) <= p)
    }

    /// Builds a table from explicit times; they must be distinct and lie in
    /// `[0, 1]`. Times are rounded to the table's 53-bit grid.
    pub fn from_times(n: usize, k: usize, times: &[f64]) -> Result<Self> {
        let m = binom(n, k + 1);
        if times.len() as u64 != m {
            return Err(Error::InvalidConfig(format!(
                "expected {m} birth times, got {}",
                times.len()
            )));
        }
        let scale = (1u64 << TIME_BITS) as f64;
        let mut keys = Vec::with_capacity(times.len());
        for &t in times {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidConfig(format!("birth time {t} outside [0, 1]")));
            }
            keys.push((t * scale).round() as u64);
        }
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig("birth times must be distinct".into()));
        }
        Ok(Self::from_keys(n, k, keys))
    }

    fn from_keys(n: usize, k: usize, mut keys: Vec<u64>) -> Self {
        let mut order: Vec<u64> = (0..keys.len() as u64).collect();
        order.sort_unstable_by_key(|&r| (keys[r as usize], r));
        // ties keep colex order; later members move up one grid step
        for w in 1..order.len() {
            let (a, b) = (order[w - 1] as usize, order[w] as usize);
            if keys[b] <= keys[a] {
                keys[b] = keys[a] + 1;
            }
        }
        BirthTimeTable { n, k, keys, order }
    }
}

fn key_to_time(key: u64) -> f64 {
    key as f64 / (1u64 << TIME_BITS) as f64
}

fn check_envelope(n: usize, k: usize) -> Result<u64> {
    if k < 2 || n < k + 1 {
        return Err(Error::InvalidConfig(format!(
            "need k >= 2 and n >= k + 1, got n={n}, k={k}"
        )));
    }
    let m = binom(n, k + 1);
    if m > MAX_EVENTS {
        return Err(Error::EnvelopeExceeded(format!(
            "C({n},{}) = {m} birth times exceeds {MAX_EVENTS}",
            k + 1
        )));
    }
    Ok(m)
}

/// Independent uniform birth times for every (k+1)-subset of `[0, n)`.
pub fn sample_birth_times(n: usize, k: usize, seed: u64) -> Result<BirthTimeTable> {
    sample_birth_times_with(n, k, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_birth_times_with<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<BirthTimeTable> {
    let m = check_envelope(n, k)?;
    let keys = (0..m).map(|_| rng.random::<u64>() >> (64 - TIME_BITS)).collect();
    Ok(BirthTimeTable::from_keys(n, k, keys))
}

/// G-model complex generated by the sets born at or before `p`.
pub fn complex_at(t: &BirthTimeTable, p: f64) -> Result<Complex> {
    snapshot(t, t.events_up_to(p), Model::G)
}

/// Complex generated by the first `events` sets of the process.
pub fn snapshot(t: &BirthTimeTable, events: usize, model: Model) -> Result<Complex> {
    Complex::from_ranks(t.n, t.k, model, &t.order[..events])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism_and_size() {
        let a = sample_birth_times(10, 2, 7).unwrap();
        let b = sample_birth_times(10, 2, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 120);
        for w in a.order().windows(2) {
            assert!(a.time_of(w[0]) < a.time_of(w[1]));
        }
        assert_ne!(a, sample_birth_times(10, 2, 8).unwrap());
        assert_eq!(sample_birth_times(3, 2, 1).unwrap().len(), 1);
        let mut sorted = a.order().to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..120).collect::<Vec<u64>>());
    }

    #[test]
    fn envelope() {
        assert!(sample_birth_times(2000, 3, 1).is_err());
        assert!(sample_birth_times(2, 2, 1).is_err());
    }

    #[test]
    fn snapshots() {
        let t = sample_birth_times(8, 2, 3).unwrap();
        assert_eq!(complex_at(&t, 0.0).unwrap().count(2), 0);
        assert_eq!(complex_at(&t, 1.0).unwrap(), Complex::complete(8, 2, Model::G).unwrap());
        for i in [1, 5, 30] {
            assert_eq!(complex_at(&t, t.event_time(i - 1)).unwrap().count(2), i);
        }
    }

    #[test]
    fn ties_are_separated() {
        let keys = vec![5, 5, 5, 1];
        let t = BirthTimeTable::from_keys(4, 2, keys);
        assert_eq!(t.order(), &[3, 0, 1, 2]);
        assert!(t.time_of(0) < t.time_of(1) && t.time_of(1) < t.time_of(2));
    }

    #[test]
    fn explicit_times() {
        let t = BirthTimeTable::from_times(4, 2, &[0.4, 0.1, 0.3, 0.2]).unwrap();
        assert_eq!(t.order(), &[1, 3, 2, 0]);
        assert!(BirthTimeTable::from_times(4, 2, &[0.4, 0.4, 0.3, 0.2]).is_err());
        assert!(BirthTimeTable::from_times(4, 2, &[0.4]).is_err());
    }
}
