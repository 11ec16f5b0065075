//! Power-law exponent estimators and a Monte Carlo bias harness.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphgen::SpectrumSampler;
use crate::seeding::{derive_seed, rng_from_seed};
use crate::{scale_free_spectrum, Params, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegressionFit {
    pub beta: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    pub rms_residual: f64,
    pub points: usize,
}

/// Negated least-squares slope of `ln a_d` against `ln d` over the strictly
/// positive entries with `k <= d <= d_max` (tail values included).
pub fn estimate_exponent_regression(
    spectrum: &Spectrum,
    k: usize,
    d_max: usize,
) -> Result<RegressionFit> {
    let lo = k.max(1);
    if d_max < lo {
        return Err(Error::InvalidArgument(format!("empty window [{lo}, {d_max}]")));
    }
    let values = spectrum.extended(d_max);
    let pts: Vec<(f64, f64)> = (lo..=d_max)
        .filter(|&d| values[d] > 0.0)
        .map(|d| ((d as f64).ln(), values[d].ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Degenerate(format!(
            "{} positive entries in [{lo}, {d_max}], need at least 3",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(RegressionFit {
        beta: -slope,
        intercept,
        rms_residual: (rss / m).sqrt(),
        points: pts.len(),
    })
}

/// Hurwitz zeta `sum_{d >= k} d^-s` and `sum_{d >= k} ln(d) d^-s` for `s > 1`,
/// `k >= 1`, by Euler-Maclaurin summation.
pub fn hurwitz_zeta_with_log(s: f64, k: usize) -> (f64, f64) {
    // B_2j / (2j)!
    const B: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
    ];
    let m = k + 20 + (2.0 * s).ceil() as usize;
    let mut zeta = 0.0;
    let mut eta = 0.0;
    for d in k..m {
        let ln_d = (d as f64).ln();
        let term = (-s * ln_d).exp();
        zeta += term;
        eta += ln_d * term;
    }
    let mf = m as f64;
    let ln_m = mf.ln();
    let t1 = mf.powf(1.0 - s) / (s - 1.0);
    let t2 = 0.5 * mf.powf(-s);
    zeta += t1 + t2;
    // eta = -d zeta / ds
    eta += ln_m * t1 + t1 / (s - 1.0) + ln_m * t2;
    let mut rising = s; // (s)_{2j-1}
    let mut harmonic = 1.0 / s; // sum_{i < 2j-1} 1/(s+i)
    for (j, &b) in B.iter().enumerate() {
        let order = 2 * j + 1;
        let term = b * rising * mf.powf(-s - order as f64);
        zeta += term;
        eta -= term * (harmonic - ln_m);
        for i in order..order + 2 {
            rising *= s + i as f64;
            harmonic += 1.0 / (s + i as f64);
        }
    }
    (zeta, eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MleFit {
    pub beta: f64,
    /// The likelihood kept increasing up to the search bound.
    pub degenerate: bool,
    pub samples: usize,
    pub mean_log_degree: f64,
}

pub const MLE_LOWER: f64 = 1.0 + 1e-6;
pub const MLE_UPPER: f64 = 50.0;

/// Sorted `(value, count)` pairs, so the mean log depends only on the
/// empirical distribution.
fn value_counts(samples: &[usize]) -> Vec<(usize, u64)> {
    const DENSE: usize = 4096;
    let mut dense = vec![0u64; DENSE];
    let mut sparse = Vec::new();
    for &s in samples {
        if s < DENSE {
            dense[s] += 1;
        } else {
            sparse.push(s);
        }
    }
    sparse.sort_unstable();
    let mut out: Vec<(usize, u64)> = dense
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect();
    for s in sparse {
        match out.last_mut() {
            Some((v, c)) if *v == s => *c += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}

/// Discrete power-law MLE: maximizes `sum_i ln(d_i^-beta / zeta(beta, k))`.
///
/// The score `E_beta[ln d] - mean(ln d_i)` is strictly decreasing in `beta`,
/// so the root is bracketed on `[MLE_LOWER, MLE_UPPER]` and bisected. If the
/// score is still positive at the upper bound (e.g. every sample equals `k`)
/// the bound is returned and flagged degenerate.
pub fn estimate_exponent_mle(samples: &[usize], k: usize) -> Result<MleFit> {
    if k == 0 {
        return Err(Error::InvalidArgument("power-law MLE needs k >= 1".into()));
    }
    if samples.len() < 10 {
        return Err(Error::Degenerate(format!(
            "{} samples, need at least 10",
            samples.len()
        )));
    }
    if let Some(&bad) = samples.iter().find(|&&d| d < k) {
        return Err(Error::InvalidArgument(format!("sample {bad} below k = {k}")));
    }
    let counts = value_counts(samples);
    let total: u64 = counts.iter().map(|c| c.1).sum();
    let sum_log: f64 = counts.iter().map(|&(v, c)| c as f64 * (v as f64).ln()).sum();
    let mean_log = sum_log / total as f64;
    let beta = solve_mle(mean_log, k)?;
    Ok(MleFit {
        beta: beta.0,
        degenerate: beta.1,
        samples: samples.len(),
        mean_log_degree: mean_log,
    })
}

fn solve_mle(mean_log: f64, k: usize) -> Result<(f64, bool)> {
    let score = |b: f64| {
        let (z, e) = hurwitz_zeta_with_log(b, k);
        e / z - mean_log
    };
    let hi_score = score(MLE_UPPER);
    if !hi_score.is_finite() {
        return Err(Error::Degenerate("likelihood score not finite".into()));
    }
    if hi_score >= 0.0 {
        return Ok((MLE_UPPER, true));
    }
    let (mut lo, mut hi) = (MLE_LOWER, MLE_UPPER);
    if score(lo) <= 0.0 {
        return Ok((lo, true));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let s = score(mid);
        if !s.is_finite() {
            return Err(Error::Degenerate(format!("score not finite at beta = {mid}")));
        }
        if s > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-11 {
            return Ok((0.5 * (lo + hi), false));
        }
    }
    Err(Error::Degenerate("bisection did not converge".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Mle,
    Regression,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasRow {
    pub n: usize,
    pub estimator: Estimator,
    /// Trials in which the estimator produced a value.
    pub trials: usize,
    pub failures: usize,
    pub mean_estimate: f64,
    pub bias: f64,
    /// `None` with fewer than two successful trials.
    pub std_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarnessConfig {
    pub beta: f64,
    pub k: usize,
    pub trials: usize,
    pub master_seed: u64,
    /// Samples are drawn from the family conditioned on `d <= cap`.
    pub cap: usize,
    /// Upper end of the regression window on the empirical histogram.
    pub regression_d_max: usize,
}

impl HarnessConfig {
    pub fn new(beta: f64, k: usize, trials: usize, master_seed: u64) -> Self {
        Self {
            beta,
            k,
            trials,
            master_seed,
            cap: 1_000_000,
            regression_d_max: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasTable {
    pub tool_version: String,
    pub config: HarnessConfig,
    pub n_grid: Vec<usize>,
    pub rows: Vec<BiasRow>,
}

impl BiasTable {
    pub fn row(&self, n: usize, estimator: Estimator) -> Option<&BiasRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.estimator == estimator)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,estimator,trials,failures,mean_estimate,bias,std_error\n");
        for r in &self.rows {
            let est = match r.estimator {
                Estimator::Mle => "mle",
                Estimator::Regression => "regression",
            };
            let se = r.std_error.map_or_else(|| "NA".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.n, est, r.trials, r.failures, r.mean_estimate, r.bias, se
            ));
        }
        let c = &self.config;
        out.push_str(&format!(
            "# scalefree {} beta={} k={} trials={} cap={} regression_d_max={} master_seed={}\n",
            self.tool_version, c.beta, c.k, c.trials, c.cap, c.regression_d_max, c.master_seed
        ));
        out
    }
}

/// Draws `trials` samples of each size in `n_grid` from the normalized family
/// and tabulates the mean bias of both estimators.
pub fn estimator_bias_harness(cfg: &HarnessConfig, n_grid: &[usize]) -> Result<BiasTable> {
    let params = Params::new(cfg.beta, cfg.k)?;
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let spectrum = scale_free_spectrum(&params, cfg.cap.max(cfg.k))?;
    let sampler = SpectrumSampler::new(&spectrum, cfg.cap)?;
    let mut rows = Vec::new();
    for &n in n_grid {
        let base = derive_seed(cfg.master_seed, n as u64);
        let results: Vec<(Option<f64>, Option<f64>)> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = rng_from_seed(derive_seed(base, t));
                let samples: Vec<usize> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
                let mle = estimate_exponent_mle(&samples, cfg.k)
                    .ok()
                    .filter(|f| !f.degenerate)
                    .map(|f| f.beta);
                let reg = empirical_spectrum(&samples)
                    .and_then(|s| estimate_exponent_regression(&s, cfg.k, cfg.regression_d_max))
                    .ok()
                    .map(|f| f.beta);
                (mle, reg)
            })
            .collect();
        let mle: Vec<f64> = results.iter().filter_map(|r| r.0).collect();
        let reg: Vec<f64> = results.iter().filter_map(|r| r.1).collect();
        rows.push(bias_row(n, Estimator::Mle, &mle, cfg.trials, cfg.beta));
        rows.push(bias_row(n, Estimator::Regression, &reg, cfg.trials, cfg.beta));
    }
    Ok(BiasTable {
        tool_version: crate::VERSION.to_string(),
        config: *cfg,
        n_grid: n_grid.to_vec(),
        rows,
    })
}

fn empirical_spectrum(samples: &[usize]) -> Result<Spectrum> {
    let counts = value_counts(samples);
    let max = counts.last().map_or(0, |c| c.0);
    let mut entries = vec![0.0; max + 1];
    let n = samples.len() as f64;
    for (v, c) in counts {
        entries[v] = c as f64 / n;
    }
    Spectrum::probability(entries)
}

fn bias_row(n: usize, estimator: Estimator, values: &[f64], trials: usize, beta: f64) -> BiasRow {
    let m = values.len();
    let mean = values.iter().sum::<f64>() / m as f64;
    let std_error = (m > 1).then(|| {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        (var / m as f64).sqrt()
    });
    BiasRow {
        n,
        estimator,
        trials: m,
        failures: trials - m,
        mean_estimate: mean,
        bias: mean - beta,
        std_error,
    }
}
