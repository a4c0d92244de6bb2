//! Threshold probabilities for cohomological connectedness and first-moment
//! estimates. All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::binom;

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    /// Connectivity threshold `k! ln n / n^k`.
    pub p0: f64,
    pub p0_minus: f64,
    /// j-cohomological connectivity threshold.
    pub pj: f64,
    pub pj_minus: f64,
    /// Sparse regime used for the shell-count bound.
    pub pj_one: f64,
    pub pj_bar: f64,
}

impl Thresholds {
    pub fn new(n: usize, k: usize, j: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidConfig(format!("thresholds need n >= 3, got {n}")));
        }
        if j == 0 || j >= k {
            return Err(Error::DimensionOutOfRange {
                dim: j as i64,
                lo: 1,
                hi: k as i64 - 1,
            });
        }
        let nf = n as f64;
        let ln = nf.ln();
        let lnln = ln.ln();
        let scale = scale(n, k, j);
        let jf = (j + 1) as f64;
        Ok(Thresholds {
            n,
            k,
            j,
            p0: ln / nf.powi(k as i32) * factorial(k),
            p0_minus: ln / nf.powi(k as i32),
            pj: (jf * ln + lnln) / scale,
            pj_minus: (1.0 - 1.0 / ln.sqrt()) * jf * ln / scale,
            pj_one: 1.0
                / (10.0 * jf * binom(k + 1, j + 1) as f64 * nf.powi((k - j) as i32)),
            pj_bar: (jf * ln + 0.5 * lnln) / scale,
        })
    }

    /// Probability at window parameter `c`: `pj` with `c` added to the
    /// numerator.
    pub fn window_p(&self, c: f64) -> f64 {
        let nf = self.n as f64;
        ((self.j + 1) as f64 * nf.ln() + nf.ln().ln() + c) / scale(self.n, self.k, self.j)
    }

    pub fn lambda(&self, c: f64) -> f64 {
        lambda(self.k, self.j, c)
    }
}

/// `(k-j+1) n^{k-j} / (k-j)!`, the factor that turns `p` into the
/// log-scale of the thresholds.
fn scale(n: usize, k: usize, j: usize) -> f64 {
    (k - j + 1) as f64 * (n as f64).powi((k - j) as i32) / factorial(k - j)
}

/// Mean of the limiting Poisson law of `dim H^j` at window parameter `c`.
pub fn lambda(k: usize, j: usize, c: f64) -> f64 {
    (j + 1) as f64 * (-c).exp() / (((k - j + 1) * (k - j + 1)) as f64 * factorial(j))
}

/// Centred hitting time: `p (k-j+1) n^{k-j} / (k-j)! - (j+1) ln n - ln ln n`.
pub fn normalized_hitting(n: usize, k: usize, j: usize, p: f64) -> f64 {
    let ln = (n as f64).ln();
    p * scale(n, k, j) - (j + 1) as f64 * ln - ln.ln()
}

/// First-moment estimate of the number of M_j^- copies in `G_p`:
/// `C(n, k+1) C(k+1, j) p r^{k-j+1}` with `r = (1-p)^{C(n-j-1, k-j) - 1}`.
/// Overlaps between petals of different copies are ignored.
pub fn expected_mj_minus(n: usize, k: usize, j: usize, p: f64) -> f64 {
    if n < k + 1 {
        return 0.0;
    }
    let others = binom(n - j - 1, k - j) as f64 - 1.0;
    let r = (1.0 - p).powf(others);
    binom(n, k + 1) as f64 * binom(k + 1, j) as f64 * p * r.powi((k - j + 1) as i32)
}
