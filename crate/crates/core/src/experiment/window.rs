use serde::{Deserialize, Serialize};

use super::{fraction, sample_gp, ExperimentConfig, SCHEMA_VERSION};
use crate::cohomology::bettis_upto;
use crate::error::Result;
use crate::obstructions::Detector;
use crate::stats::{chi_square_poisson, empirical_pmf, mean, poisson_pmf, std_error, tv_distance_poisson, ChiSquare};
use crate::thresholds::{expected_mj_minus, Thresholds};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    pub n: usize,
    pub trial: usize,
    pub p: f64,
    pub k_simplices: usize,
    /// `dim H^j`.
    pub betti_j: usize,
    pub mj_minus: usize,
    pub betti_equals_mj_minus: bool,
    pub connected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub lambda: f64,
    pub p_connected: Option<f64>,
    /// `exp(-lambda)`.
    pub p_connected_limit: f64,
    pub deviation: Option<f64>,
    pub pmf: Vec<f64>,
    pub poisson_pmf: Vec<f64>,
    pub tv_distance: Option<f64>,
    pub chi_square: Option<ChiSquare>,
    pub frac_betti_equals_mj_minus: Option<f64>,
    pub mean_mj_minus: Option<f64>,
    pub se_mj_minus: Option<f64>,
    pub expected_mj_minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub schema_version: u32,
    pub kind: String,
    pub config: ExperimentConfig,
    pub summaries: Vec<WindowSummary>,
    #[serde(skip)]
    pub records: Vec<WindowRecord>,
}

/// Samples `G_p` at `p = pj + c / scale` for every configured `n` and
/// compares `dim H^j` with its Poisson limit.
pub fn run_window_experiment(cfg: &ExperimentConfig) -> Result<WindowReport> {
    cfg.validate()?;
    let (k, j) = (cfg.k, cfg.j);
    let mut summaries = Vec::new();
    let mut records = Vec::new();
    for &n in &cfg.n {
        let t = Thresholds::new(n, k, j)?;
        let p = cfg.p.unwrap_or_else(|| t.window_p(cfg.c));
        let lambda = t.lambda(cfg.c);
        let rows = cfg.run_trials(cfg.trials, |trial| {
            let c = sample_gp(n, k, p, cfg.model, &mut cfg.rng(n, trial))?;
            let bettis = bettis_upto(&c, j)?;
            let mj_minus = Detector::new(&c, j)?.count_mj_minus();
            Ok(WindowRecord {
                n,
                trial,
                p,
                k_simplices: c.count(k),
                betti_j: bettis[j],
                mj_minus,
                betti_equals_mj_minus: bettis[j] == mj_minus,
                connected: bettis[0] == 1 && bettis[1..].iter().all(|&b| b == 0),
            })
        })?;
        let betti: Vec<usize> = rows.iter().map(|r| r.betti_j).collect();
        let pmf = empirical_pmf(&betti);
        let x: Vec<f64> = rows.iter().map(|r| r.mj_minus as f64).collect();
        let p_connected = fraction(rows.iter().map(|r| r.connected));
        let limit = (-lambda).exp();
        summaries.push(WindowSummary {
            n,
            p,
            trials: rows.len(),
            lambda,
            p_connected,
            p_connected_limit: limit,
            deviation: p_connected.map(|q| (q - limit).abs()),
            poisson_pmf: poisson_pmf(lambda, pmf.len()),
            tv_distance: (!rows.is_empty()).then(|| tv_distance_poisson(&pmf, lambda)),
            chi_square: (!rows.is_empty()).then(|| chi_square_poisson(&betti, lambda, 5.0)),
            pmf,
            frac_betti_equals_mj_minus: fraction(rows.iter().map(|r| r.betti_equals_mj_minus)),
            mean_mj_minus: (!x.is_empty()).then(|| mean(&x)),
            se_mj_minus: (x.len() > 1).then(|| std_error(&x)),
            expected_mj_minus: expected_mj_minus(n, k, j, p),
        });
        records.extend(rows);
    }
    Ok(WindowReport {
        schema_version: SCHEMA_VERSION,
        kind: "window".into(),
        config: cfg.clone(),
        summaries,
        records,
    })
}
