use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphgen::{configuration_model, default_cap, sample_family_degrees, surviving_degree_counts, Graph};
use crate::graphgen::percolated_degree_counts;
use crate::seeding::{derive_seed, rng_from_seed};
use crate::seqcore::{eigen_coefficient, gen_binom};
use crate::Params;

/// Variance of a random sum of `N` i.i.d. copies of `X`, with `N` independent:
/// `E[X]^2 Var(N) + E[N] Var(X)`.
pub fn compound_variance(mean_x: f64, var_x: f64, mean_n: f64, var_n: f64) -> Result<f64> {
    if var_x < 0.0 || var_n < 0.0 {
        return Err(Error::InvalidArgument("variances must be nonnegative".into()));
    }
    Ok(mean_x * mean_x * var_n + mean_n * var_x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    /// Erased configuration graphs from the family with cutoff `k`.
    Family { n: usize, k: usize, cap: usize },
    /// The same graph in every draw, so only percolation is random.
    Fixed(Graph),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceMcConfig {
    pub source: GraphSource,
    pub graph_draws: usize,
    pub percolations_per_graph: usize,
    pub master_seed: u64,
}

impl VarianceMcConfig {
    pub fn family(n: usize, k: usize, graph_draws: usize, percolations: usize, seed: u64) -> Self {
        Self {
            source: GraphSource::Family {
                n,
                k,
                cap: default_cap(n),
            },
            graph_draws,
            percolations_per_graph: percolations,
            master_seed: seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub beta: f64,
    pub p: f64,
    pub degree: usize,
    pub samples: usize,
    pub master_seed: u64,
    /// Monte Carlo variance of the count `b_d` over graph draws and percolations.
    pub mc_var_b: f64,
    pub mc_var_b_se: f64,
    /// Variance of the count `a_d` across graph draws.
    pub var_a_d: f64,
    /// `p^(2 beta) Var(a_d)`, the left side of the displayed relation.
    pub display_lhs: f64,
    /// The right side, summed term by term with the measured `Var(a_k)`.
    pub display_rhs: f64,
    /// `mc_var_b / display_rhs`.
    pub ratio_rhs: f64,
    /// `mc_var_b / display_lhs`.
    pub ratio_lhs: f64,
}

/// Measures `Var(b_d)` under percolation and evaluates the displayed variance
/// relation literally, without asserting that the two agree.
///
/// The right side is
/// `sum_j C(j,d)^2 p^(2d) (1-p)^(2j-2d) (Var(a_j) + C(j-beta, j)) - p^(beta-1) C(d-beta, d)`,
/// summed until the kernel factor falls below roundoff.
pub fn variance_diagnostic(
    beta: f64,
    p: f64,
    d: usize,
    mc: &VarianceMcConfig,
) -> Result<VarianceReport> {
    if !(beta > 1.0 && beta < 2.0) {
        return Err(Error::InvalidArgument(format!("beta = {beta} outside (1, 2)")));
    }
    if d < beta.ceil() as usize {
        return Err(Error::InvalidArgument(format!("degree {d} below ceil(beta)")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Probability(p, "(0, 1]"));
    }
    if mc.graph_draws == 0 || mc.percolations_per_graph == 0 {
        return Err(Error::InvalidArgument("need at least one draw and one percolation".into()));
    }
    let params = match &mc.source {
        GraphSource::Family { k, .. } => Some(Params::new(beta, *k)?),
        GraphSource::Fixed(_) => None,
    };

    struct Draw {
        a_counts: Vec<u64>,
        b_d: Vec<f64>,
    }
    let draws: Vec<Draw> = (0..mc.graph_draws as u64)
        .into_par_iter()
        .map(|i| -> Result<Draw> {
            let seed = derive_seed(mc.master_seed, i);
            let built;
            let g = match (&mc.source, &params) {
                (GraphSource::Fixed(g), _) => g,
                (GraphSource::Family { n, cap, .. }, Some(params)) => {
                    let s = sample_family_degrees(params, *n, *cap, derive_seed(seed, 0))?;
                    built = configuration_model(&s, derive_seed(seed, 1))?;
                    &built
                }
                _ => unreachable!("family source always has params"),
            };
            let mut rng = rng_from_seed(derive_seed(seed, 2));
            let b_d = (0..mc.percolations_per_graph)
                .map(|_| {
                    let c = if p >= 1.0 {
                        surviving_degree_counts(g, &vec![true; g.n()])
                    } else {
                        percolated_degree_counts(g, p, &mut rng)
                    };
                    c.get(d).copied().unwrap_or(0) as f64
                })
                .collect();
            Ok(Draw {
                a_counts: g.degree_counts(),
                b_d,
            })
        })
        .collect::<Result<_>>()?;

    let b_values: Vec<f64> = draws.iter().flat_map(|dr| dr.b_d.iter().copied()).collect();
    let (mc_var_b, mc_var_b_se) = variance_with_se(&b_values);
    let width = draws.iter().map(|dr| dr.a_counts.len()).max().unwrap_or(1);
    let var_a: Vec<f64> = (0..width)
        .map(|j| {
            let xs: Vec<f64> = draws
                .iter()
                .map(|dr| dr.a_counts.get(j).copied().unwrap_or(0) as f64)
                .collect();
            variance_with_se(&xs).0
        })
        .collect();
    let var_a_d = var_a.get(d).copied().unwrap_or(0.0);

    let q = 1.0 - p;
    let mut rhs = 0.0;
    let mut j = d;
    loop {
        let kernel = gen_binom(j as f64, d).powi(2) * p.powi(2 * d as i32) * q.powi(2 * (j - d) as i32);
        let var_j = var_a.get(j).copied().unwrap_or(0.0);
        rhs += kernel * (var_j + eigen_coefficient(beta, j));
        if j + 1 >= width && (kernel < 1e-300 || kernel * (1.0 + var_j) < 1e-18 * rhs.abs().max(1e-300)) {
            break;
        }
        if j > width + 100_000 {
            break;
        }
        j += 1;
    }
    rhs -= p.powf(beta - 1.0) * eigen_coefficient(beta, d);
    let display_lhs = p.powf(2.0 * beta) * var_a_d;
    Ok(VarianceReport {
        beta,
        p,
        degree: d,
        samples: b_values.len(),
        master_seed: mc.master_seed,
        mc_var_b,
        mc_var_b_se,
        var_a_d,
        display_lhs,
        display_rhs: rhs,
        ratio_rhs: mc_var_b / rhs,
        ratio_lhs: mc_var_b / display_lhs,
    })
}

/// Unbiased sample variance and its large-sample standard error
/// `sqrt((m4 - s^4) / N)`.
pub fn variance_with_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return (0.0, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let var = m2 / (n - 1.0);
    let pop = m2 / n;
    (var, ((m4 - pop * pop).max(0.0) / n).sqrt())
}
