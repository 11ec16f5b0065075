use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphgen::{
    configuration_model, degree_histogram, default_cap, percolated_degree_counts,
    sample_family_degrees, sparsity_check, Graph,
};
use crate::seeding::{derive_seed, rng_from_seed};
use crate::thinning::thin_graph;
use crate::{Params, Spectrum, VERSION};

/// `max_{d >= k} |empirical_d - expected_d|`.
pub fn sup_deviation(empirical: &Spectrum, expected: &Spectrum, k: usize) -> Result<f64> {
    if empirical.depth() != expected.depth() {
        return Err(Error::DepthMismatch(empirical.depth(), expected.depth()));
    }
    Ok(sup_deviation_slices(empirical.entries(), expected.entries(), k))
}

fn sup_deviation_slices(empirical: &[f64], expected: &[f64], k: usize) -> f64 {
    empirical
        .iter()
        .zip(expected)
        .skip(k)
        .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// Vertex-exposure martingale bound `exp(-t^2 / (2 sum_m (deg(v_m) + 1)^2))`.
pub fn azuma_bound(degrees: &[usize], t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    let denom: f64 = degrees.iter().map(|&d| ((d + 1) * (d + 1)) as f64).sum();
    if denom == 0.0 {
        return 0.0;
    }
    (-t * t / (2.0 * denom)).exp()
}

/// The constant `c` in `azuma_bound <= exp(-c n^(epsilon/2))` at `t = n^(1 - epsilon/4)`.
pub fn azuma_rate(degrees: &[usize], epsilon: f64) -> f64 {
    let n = degrees.len() as f64;
    let t = deviation_threshold(degrees.len(), epsilon);
    let denom: f64 = degrees.iter().map(|&d| ((d + 1) * (d + 1)) as f64).sum();
    t * t / (2.0 * denom) / n.powf(epsilon / 2.0)
}

/// `t = n^(1 - epsilon/4)`.
pub fn deviation_threshold(n: usize, epsilon: f64) -> f64 {
    (n as f64).powf(1.0 - epsilon / 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub beta: f64,
    pub k: usize,
    pub n: usize,
    pub cap: usize,
    pub p: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub epsilon: f64,
    /// Draw a new graph for every trial instead of percolating one graph.
    #[serde(default)]
    pub fresh_graph_per_trial: bool,
    /// Wall-clock timings make reports non-reproducible, so they are opt-in.
    #[serde(default)]
    pub record_timings: bool,
}

impl ExperimentConfig {
    /// Defaults: `cap = floor(n^0.3)`, `epsilon = 0.4`, one shared graph.
    pub fn new(beta: f64, k: usize, n: usize, p: f64, trials: usize, master_seed: u64) -> Self {
        Self {
            beta,
            k,
            n,
            cap: default_cap(n),
            p,
            trials,
            master_seed,
            epsilon: 0.4,
            fresh_graph_per_trial: false,
            record_timings: false,
        }
    }

    pub fn validate(&self) -> Result<Params> {
        let params = Params::new(self.beta, self.k)?;
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.cap < self.k {
            return Err(Error::InvalidArgument(format!(
                "cap {} below the cutoff k = {}",
                self.cap, self.k
            )));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::Probability(self.p, "(0, 1]"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon = {} outside (0, 1)",
                self.epsilon
            )));
        }
        Ok(params)
    }
}

/// Per-degree comparison of percolated samples against the thinned prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeDeviation {
    pub degree: usize,
    /// Predicted fraction (of the original `n`), averaged over graphs.
    pub expected: f64,
    pub mean_empirical: f64,
    /// Monte Carlo standard error of `mean_empirical - expected`.
    pub std_error: f64,
    pub mean_abs_deviation: f64,
    pub max_abs_deviation: f64,
}

/// Properties of the graph a trial was run on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphSummary {
    pub edges: usize,
    pub max_degree: usize,
    pub sum_deg_sq: u64,
    pub sparsity_satisfied: bool,
    pub azuma_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub master_seed: u64,
    /// Summary of the shared graph (or of the first graph when each trial
    /// draws its own).
    pub graph: GraphSummary,
    pub all_sparsity_satisfied: bool,
    pub degrees: Vec<DegreeDeviation>,
    pub trial_sup_deviations: Vec<f64>,
    pub median_sup_deviation: f64,
    pub max_sup_deviation: f64,
    /// `t = n^(1 - epsilon/4)` and the fraction threshold `t / n`.
    pub t: f64,
    pub t_over_n: f64,
    pub exceedances: usize,
    pub exceedance_fraction: f64,
    /// Worst Azuma bound at `t` over the graphs used.
    pub azuma_bound: f64,
    /// Fitted `c` in `exp(-c n^(epsilon/2))` for the shared/first graph.
    pub azuma_rate: f64,
    pub trial_seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u128>,
}

const GRAPH_STREAM: u64 = u64::MAX;

struct TrialGraph {
    graph: Graph,
    expected: Vec<f64>,
    summary: GraphSummary,
}

fn build_graph(params: &Params, cfg: &ExperimentConfig, seed: u64) -> Result<TrialGraph> {
    let sample = sample_family_degrees(params, cfg.n, cfg.cap, derive_seed(seed, 0))?;
    let graph = configuration_model(&sample, derive_seed(seed, 1))?;
    let hist = degree_histogram(&graph)?;
    let expected = thin_graph(&hist, cfg.p, hist.depth())?
        .spectrum
        .entries()
        .to_vec();
    let degrees = graph.degrees();
    let (sum_deg_sq, sparsity_satisfied) = sparsity_check(&graph, cfg.epsilon);
    let t = deviation_threshold(cfg.n, cfg.epsilon);
    let summary = GraphSummary {
        edges: graph.edge_count(),
        max_degree: hist.depth(),
        sum_deg_sq,
        sparsity_satisfied,
        azuma_bound: azuma_bound(&degrees, t),
    };
    Ok(TrialGraph {
        graph,
        expected,
        summary,
    })
}

struct TrialOutcome {
    empirical: Vec<f64>,
    expected: Vec<f64>,
    summary: GraphSummary,
}

/// Percolates `trials` times, comparing each measured spectrum with the
/// thinned spectrum of the graph it came from.
pub fn concentration_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let params = cfg.validate()?;
    let started = Instant::now();
    let shared = if cfg.fresh_graph_per_trial {
        None
    } else {
        Some(build_graph(&params, cfg, derive_seed(cfg.master_seed, GRAPH_STREAM))?)
    };
    let n = cfg.n as f64;
    let trial_seeds: Vec<u64> = (0..cfg.trials as u64)
        .map(|i| derive_seed(cfg.master_seed, i))
        .collect();

    let run_trial = |seed: u64| -> Result<TrialOutcome> {
        let own;
        let g = match &shared {
            Some(g) => g,
            None => {
                own = build_graph(&params, cfg, derive_seed(seed, 1))?;
                &own
            }
        };
        let mut rng = rng_from_seed(derive_seed(seed, 0));
        let counts = percolated_degree_counts(&g.graph, cfg.p, &mut rng);
        Ok(TrialOutcome {
            empirical: counts.iter().map(|&c| c as f64 / n).collect(),
            expected: g.expected.clone(),
            summary: g.summary,
        })
    };
    let outcomes: Vec<TrialOutcome> = trial_seeds
        .par_iter()
        .map(|&s| run_trial(s))
        .collect::<Result<_>>()?;

    let width = outcomes
        .iter()
        .map(|o| o.empirical.len().max(o.expected.len()))
        .max()
        .unwrap_or(1);
    let pad = |v: &[f64]| {
        let mut v = v.to_vec();
        v.resize(width, 0.0);
        v
    };
    let trials = outcomes.len() as f64;
    let mut sum_emp = vec![0.0; width];
    let mut sum_exp = vec![0.0; width];
    let mut sum_abs = vec![0.0; width];
    let mut max_abs = vec![0.0f64; width];
    let mut diffs: Vec<Vec<f64>> = Vec::with_capacity(outcomes.len());
    let mut sups = Vec::with_capacity(outcomes.len());
    for o in &outcomes {
        let emp = pad(&o.empirical);
        let exp = pad(&o.expected);
        sups.push(sup_deviation_slices(&emp, &exp, cfg.k));
        let diff: Vec<f64> = emp.iter().zip(&exp).map(|(a, b)| a - b).collect();
        for d in 0..width {
            sum_emp[d] += emp[d];
            sum_exp[d] += exp[d];
            sum_abs[d] += diff[d].abs();
            max_abs[d] = max_abs[d].max(diff[d].abs());
        }
        diffs.push(diff);
    }
    let degrees = (0..width)
        .map(|d| {
            let mean_diff = diffs.iter().map(|v| v[d]).sum::<f64>() / trials;
            let var = if outcomes.len() > 1 {
                diffs.iter().map(|v| (v[d] - mean_diff).powi(2)).sum::<f64>() / (trials - 1.0)
            } else {
                0.0
            };
            DegreeDeviation {
                degree: d,
                expected: sum_exp[d] / trials,
                mean_empirical: sum_emp[d] / trials,
                std_error: (var / trials).sqrt(),
                mean_abs_deviation: sum_abs[d] / trials,
                max_abs_deviation: max_abs[d],
            }
        })
        .collect();

    let t = deviation_threshold(cfg.n, cfg.epsilon);
    let t_over_n = t / n;
    let exceedances = sups.iter().filter(|&&s| s > t_over_n).count();
    let first = outcomes[0].summary;
    let azuma_worst = outcomes
        .iter()
        .map(|o| o.summary.azuma_bound)
        .fold(0.0, f64::max);
    let rate = match &shared {
        Some(g) => azuma_rate(&g.graph.degrees(), cfg.epsilon),
        None => -first.azuma_bound.ln() / n.powf(cfg.epsilon / 2.0),
    };
    Ok(ExperimentReport {
        tool_version: VERSION.to_string(),
        config: *cfg,
        master_seed: cfg.master_seed,
        graph: first,
        all_sparsity_satisfied: outcomes.iter().all(|o| o.summary.sparsity_satisfied),
        degrees,
        median_sup_deviation: median(&sups),
        max_sup_deviation: sups.iter().copied().fold(0.0, f64::max),
        trial_sup_deviations: sups,
        t,
        t_over_n,
        exceedances,
        exceedance_fraction: exceedances as f64 / trials,
        azuma_bound: azuma_worst,
        azuma_rate: rate,
        trial_seeds,
        runtime_ms: cfg.record_timings.then(|| started.elapsed().as_millis()),
    })
}

pub(crate) fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
