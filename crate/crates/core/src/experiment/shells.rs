use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::{sample_gp, ExperimentConfig, SCHEMA_VERSION};
use crate::error::Result;
use crate::obstructions::count_shells_through;
use crate::simplex::Simplex;
use crate::stats::{linear_fit, mean, median, LinearFit};
use crate::thresholds::Thresholds;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellRecord {
    pub n: usize,
    pub trial: usize,
    pub sample: usize,
    pub p: f64,
    /// The set B, 1-based vertices joined by `-`.
    pub b: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellSummary {
    pub n: usize,
    pub p: f64,
    pub sets: usize,
    pub min: Option<usize>,
    pub median: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<usize>,
    /// `min / n`.
    pub gamma_hat: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellReport {
    pub schema_version: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub summaries: Vec<ShellSummary>,
    /// Least-squares fits of the minimum and mean counts against `n`.
    pub fit_min: Option<LinearFit>,
    pub fit_mean: Option<LinearFit>,
    #[serde(skip)]
    pub records: Vec<ShellRecord>,
}

/// Counts j-shells through random (j+1)-sets B in `G_p + B`, by default at
/// the sparse probability `pj_one`.
pub fn run_shell_check(cfg: &ExperimentConfig) -> Result<ShellReport> {
    cfg.validate()?;
    let (k, j) = (cfg.k, cfg.j);
    let mut summaries = Vec::new();
    let mut records = Vec::new();
    for &n in &cfg.n {
        let p = match cfg.p {
            Some(p) => p,
            None => Thresholds::new(n, k, j)?.pj_one,
        };
        let per_trial = cfg.run_trials(cfg.trials, |trial| {
            let mut rng = cfg.rng(n, trial);
            let c = sample_gp(n, k, p, cfg.model, &mut rng)?;
            let mut rows = Vec::with_capacity(cfg.samples);
            for s in 0..cfg.samples {
                let b = Simplex::new(sample(&mut rng, n, j + 1).into_iter().map(|v| v as u32))?;
                let q = count_shells_through(&c, &b)?;
                let label: Vec<String> = b.to_one_based().iter().map(|v| v.to_string()).collect();
                rows.push(ShellRecord {
                    n,
                    trial,
                    sample: s,
                    p,
                    b: label.join("-"),
                    count: q.count(),
                });
            }
            Ok(rows)
        })?;
        let rows: Vec<ShellRecord> = per_trial.into_iter().flatten().collect();
        let counts: Vec<f64> = rows.iter().map(|r| r.count as f64).collect();
        let min = rows.iter().map(|r| r.count).min();
        summaries.push(ShellSummary {
            n,
            p,
            sets: rows.len(),
            min,
            median: (!counts.is_empty()).then(|| median(&counts)),
            mean: (!counts.is_empty()).then(|| mean(&counts)),
            max: rows.iter().map(|r| r.count).max(),
            gamma_hat: min.map(|m| m as f64 / n as f64),
        });
        records.extend(rows);
    }
    let fit = |pick: &dyn Fn(&ShellSummary) -> Option<f64>| {
        let pts: Vec<(f64, f64)> = summaries
            .iter()
            .filter_map(|s| pick(s).map(|y| (s.n as f64, y)))
            .collect();
        (pts.len() >= 2).then(|| {
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            linear_fit(&x, &y)
        })
    };
    let fit_min = fit(&|s| s.min.map(|m| m as f64));
    let fit_mean = fit(&|s| s.mean);
    Ok(ShellReport {
        schema_version: SCHEMA_VERSION,
        kind: "shells".into(),
        config: cfg.clone(),
        summaries,
        fit_min,
        fit_mean,
        records,
    })
}
