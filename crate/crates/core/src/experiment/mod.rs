//! Monte Carlo experiments: configuration, sampling of `G_p`, parallel
//! trial execution and report writing.
//!
//! Trial `t` at size `n` draws from its own ChaCha stream, derived from the
//! master seed and `n`, so any trial can be reproduced on its own and results
//! do not depend on the number of workers.

mod hitting;
mod shells;
mod verify;
mod window;

pub use hitting::{run_hitting_experiment, HittingRecord, HittingReport, HittingSummary};
pub use shells::{run_shell_check, ShellRecord, ShellReport, ShellSummary};
pub use verify::{run_verify_suite, CheckResult, VerifyReport};
pub use window::{run_window_experiment, WindowRecord, WindowReport, WindowSummary};

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{bettis_upto, component_count};
use crate::complex::{Complex, Model};
use crate::error::{Error, Result};
use crate::obstructions::{find_isolated, Detector};
use crate::process::trial_rng;
use crate::simplex::binom;
use crate::thresholds::{expected_mj_minus, Thresholds};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Vec<usize>,
    pub k: usize,
    pub j: usize,
    /// Window parameter added to the threshold numerator.
    pub c: f64,
    /// Explicit probability; overrides the experiment's default.
    pub p: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub model: Model,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Sets B drawn per complex in the shell check.
    pub samples: usize,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: vec![20],
            k: 2,
            j: 1,
            c: 0.0,
            p: None,
            trials: 100,
            seed: 0,
            model: Model::G,
            workers: 0,
            samples: 50,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            return Err(Error::InvalidConfig("at least one n is required".into()));
        }
        if self.k < 2 {
            return Err(Error::InvalidConfig(format!("k must be at least 2, got {}", self.k)));
        }
        if self.j == 0 || self.j >= self.k {
            return Err(Error::InvalidConfig(format!(
                "j must lie in 1..={}, got {}",
                self.k - 1,
                self.j
            )));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < self.k + 1) {
            return Err(Error::InvalidConfig(format!("n = {n} is below k + 1")));
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("p = {p} outside [0, 1]")));
            }
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidConfig("c must be finite".into()));
        }
        Ok(())
    }

    /// The random stream of trial `trial` at size `n`.
    pub fn rng(&self, n: usize, trial: usize) -> ChaCha8Rng {
        let seed = self.seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        trial_rng(seed, trial as u64)
    }

    /// Runs `f` over `0..trials` on the configured number of workers,
    /// keeping results in trial order.
    pub fn run_trials<T, F>(&self, trials: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| (0..trials).into_par_iter().map(f).collect())
    }
}

/// `G_p` (or `Y_p`): each (k+1)-set independently with probability `p`,
/// drawn by geometric skips over colex ranks.
pub fn sample_gp<R: Rng>(n: usize, k: usize, p: f64, model: Model, rng: &mut R) -> Result<Complex> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("p = {p} outside [0, 1]")));
    }
    let total = binom(n, k + 1);
    let mut ranks = Vec::new();
    if p >= 1.0 {
        ranks.extend(0..total);
    } else if p > 0.0 {
        let log_q = (1.0 - p).ln();
        let mut next = 0u64;
        loop {
            let u: f64 = rng.random();
            let skip = ((1.0 - u).ln() / log_q).floor();
            if skip >= (total - next) as f64 {
                break;
            }
            next += skip as u64;
            ranks.push(next);
            next += 1;
            if next >= total {
                break;
            }
        }
    }
    Complex::from_ranks(n, k, model, &ranks)
}

/// One-complex summary for the `sample` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub model: Model,
    pub p: Option<f64>,
    pub f_vector: Vec<usize>,
    /// `b_0..b_{j}`.
    pub bettis: Vec<usize>,
    pub components: usize,
    pub connected_j: bool,
    pub mj_minus: usize,
    pub mj: usize,
    pub mj_star: usize,
    pub local_obstacles: usize,
    pub isolated: Option<usize>,
}

pub fn sample_report(c: &Complex, j: usize, p: Option<f64>) -> Result<SampleReport> {
    let det = Detector::new(c, j)?;
    let minus = det.find_mj_minus();
    let bettis = bettis_upto(c, j)?;
    let components = component_count(c);
    let mj: std::collections::HashSet<_> = det.find_mj_from(&minus).into_iter().map(|m| m.base).collect();
    Ok(SampleReport {
        schema_version: SCHEMA_VERSION,
        n: c.n(),
        k: c.k(),
        j,
        model: c.model(),
        p,
        f_vector: c.f_vector(),
        connected_j: components == 1 && bettis[1..].iter().all(|&b| b == 0),
        bettis,
        components,
        mj_minus: minus.len(),
        mj: mj.len(),
        mj_star: det.find_mj_star_from(&minus).len(),
        local_obstacles: det.find_local_obstacles().len(),
        isolated: match c.model() {
            Model::Y => Some(find_isolated(c)?.len()),
            Model::G => None,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectRow {
    pub n: usize,
    pub thresholds: Thresholds,
    pub c: f64,
    pub lambda: f64,
    pub window_p: f64,
    /// Probability the expectation is evaluated at.
    pub p: f64,
    pub expected_mj_minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectReport {
    pub schema_version: u32,
    pub k: usize,
    pub j: usize,
    pub rows: Vec<ExpectRow>,
}

/// Analytic thresholds and first-moment estimates for each configured `n`.
pub fn run_expect(cfg: &ExperimentConfig) -> Result<ExpectReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n in &cfg.n {
        let t = Thresholds::new(n, cfg.k, cfg.j)?;
        let window_p = t.window_p(cfg.c);
        let p = cfg.p.unwrap_or(window_p);
        rows.push(ExpectRow {
            n,
            thresholds: t,
            c: cfg.c,
            lambda: t.lambda(cfg.c),
            window_p,
            p,
            expected_mj_minus: expected_mj_minus(n, cfg.k, cfg.j, p),
        });
    }
    Ok(ExpectReport {
        schema_version: SCHEMA_VERSION,
        k: cfg.k,
        j: cfg.j,
        rows,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `summary.json` (and `trials.csv` when rows are given) into `dir`,
/// or prints the summary when no directory is set.
pub fn emit<T: Serialize, R: Serialize>(dir: Option<&Path>, summary: &T, rows: Option<&[R]>) -> Result<()> {
    match dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            write_json(&d.join("summary.json"), summary)?;
            if let Some(rows) = rows {
                write_csv(&d.join("trials.csv"), rows)?;
            }
        }
        None => {
            std::io::stdout().write_all(to_json(summary)?.as_bytes())?;
        }
    }
    Ok(())
}

/// Fraction of `true` values, `None` for an empty slice.
pub(crate) fn fraction(flags: impl Iterator<Item = bool>) -> Option<f64> {
    let (mut hit, mut total) = (0usize, 0usize);
    for f in flags {
        total += 1;
        hit += f as usize;
    }
    (total > 0).then(|| hit as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gp_sampling_edges() {
        let mut rng = trial_rng(1, 0);
        assert_eq!(sample_gp(8, 2, 0.0, Model::G, &mut rng).unwrap().count(2), 0);
        assert_eq!(sample_gp(8, 2, 1.0, Model::G, &mut rng).unwrap().count(2), 56);
        assert!(sample_gp(8, 2, 1.5, Model::G, &mut rng).is_err());
    }

    #[test]
    fn gp_density() {
        // mean count over many draws is close to p C(n, 3)
        let mut rng = trial_rng(2, 0);
        let total: usize = (0..200)
            .map(|_| sample_gp(20, 2, 0.1, Model::G, &mut rng).unwrap().count(2))
            .sum();
        let mean = total as f64 / 200.0;
        // sd of the mean is sqrt(1140 * 0.09 / 200) ~ 0.72
        assert!((mean - 114.0).abs() < 4.0, "{mean}");
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::from_toml("n = [10, 20]\ntrials = 5\nmodel = \"y\"\n").unwrap();
        assert_eq!(cfg.n, vec![10, 20]);
        assert_eq!(cfg.model, Model::Y);
        assert_eq!(cfg.k, 2);
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
        let bad = ExperimentConfig {
            j: 2,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn expectations() {
        let cfg = ExperimentConfig {
            n: vec![100],
            ..Default::default()
        };
        let r = run_expect(&cfg).unwrap();
        assert!((r.rows[0].lambda - 0.5).abs() < 1e-15);
        assert!((r.rows[0].window_p - 0.053687).abs() < 1e-6);
    }
}
