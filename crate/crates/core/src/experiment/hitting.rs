use serde::{Deserialize, Serialize};

use super::{fraction, ExperimentConfig, SCHEMA_VERSION};
use crate::complex::Model;
use crate::error::Result;
use crate::process::{check_hitting_equality, sample_birth_times_with, scan_process, HittingTime, ScanOptions};
use crate::stats::{mean, quantile};
use crate::thresholds::normalized_hitting;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingRecord {
    pub n: usize,
    pub trial: usize,
    pub p_t: Option<f64>,
    pub p_mj: Option<f64>,
    pub p_mj_event: Option<usize>,
    pub p_mj_minus: Option<f64>,
    pub p_conn: Option<f64>,
    pub p_conn_event: Option<usize>,
    pub conn_equals_mj: bool,
    pub subcritical: bool,
    pub mj_minus_equals_mj: bool,
    /// `p_mj` on the centred log scale; empty when `p_mj` is a sentinel.
    pub normalized_p_mj: Option<f64>,
    pub y_p_isol: Option<f64>,
    pub y_p_conn: Option<f64>,
    pub y_conn_equals_isol: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingSummary {
    pub n: usize,
    pub trials: usize,
    pub frac_conn_equals_mj: Option<f64>,
    pub frac_subcritical: Option<f64>,
    pub frac_mj_minus_equals_mj: Option<f64>,
    pub frac_y_conn_equals_isol: Option<f64>,
    /// Trials where `p_mj` is a sentinel.
    pub mj_sentinels: usize,
    pub normalized_median: Option<f64>,
    pub normalized_q1: Option<f64>,
    pub normalized_q3: Option<f64>,
    pub normalized_mean: Option<f64>,
}

impl HittingSummary {
    pub fn normalized_iqr(&self) -> Option<f64> {
        Some(self.normalized_q3? - self.normalized_q1?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingReport {
    pub schema_version: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub summaries: Vec<HittingSummary>,
    #[serde(skip)]
    pub records: Vec<HittingRecord>,
}

/// Full process scans for each configured `n`: the G-model scan at `j` and
/// the Y-model scan at `k - 1` share one birth-time table per trial.
pub fn run_hitting_experiment(cfg: &ExperimentConfig) -> Result<HittingReport> {
    cfg.validate()?;
    let (k, j) = (cfg.k, cfg.j);
    let mut summaries = Vec::new();
    let mut records = Vec::new();
    for &n in &cfg.n {
        let rows = cfg.run_trials(cfg.trials, |trial| {
            let table = sample_birth_times_with(n, k, &mut cfg.rng(n, trial))?;
            let g = scan_process(&table, j, Model::G, ScanOptions::default())?;
            let y = scan_process(&table, k - 1, Model::Y, ScanOptions::default())?;
            let gc = check_hitting_equality(&g);
            let yc = check_hitting_equality(&y);
            let h = &g.hitting;
            let time = |t: HittingTime| t.time();
            Ok(HittingRecord {
                n,
                trial,
                p_t: h.p_t.and_then(time),
                p_mj: h.p_mj.time(),
                p_mj_event: h.p_mj.index(),
                p_mj_minus: h.p_mj_minus.time(),
                p_conn: h.p_conn.time(),
                p_conn_event: h.p_conn.index(),
                conn_equals_mj: gc.conn_equals_mj,
                subcritical: gc.subcritical,
                mj_minus_equals_mj: h.p_mj_minus == h.p_mj,
                normalized_p_mj: h.p_mj.time().map(|p| normalized_hitting(n, k, j, p)),
                y_p_isol: y.hitting.p_isol.and_then(time),
                y_p_conn: y.hitting.p_conn_y.and_then(time),
                y_conn_equals_isol: yc.conn_y_equals_isol.unwrap_or(false),
            })
        })?;
        let norm: Vec<f64> = rows.iter().filter_map(|r| r.normalized_p_mj).collect();
        let some = |v: f64| (!norm.is_empty()).then_some(v);
        summaries.push(HittingSummary {
            n,
            trials: rows.len(),
            frac_conn_equals_mj: fraction(rows.iter().map(|r| r.conn_equals_mj)),
            frac_subcritical: fraction(rows.iter().map(|r| r.subcritical)),
            frac_mj_minus_equals_mj: fraction(rows.iter().map(|r| r.mj_minus_equals_mj)),
            frac_y_conn_equals_isol: fraction(rows.iter().map(|r| r.y_conn_equals_isol)),
            mj_sentinels: rows.iter().filter(|r| r.p_mj.is_none()).count(),
            normalized_median: some(quantile(&norm, 0.5)),
            normalized_q1: some(quantile(&norm, 0.25)),
            normalized_q3: some(quantile(&norm, 0.75)),
            normalized_mean: some(mean(&norm)),
        });
        records.extend(rows);
    }
    Ok(HittingReport {
        schema_version: SCHEMA_VERSION,
        kind: "hitting".into(),
        config: cfg.clone(),
        summaries,
        records,
    })
}
