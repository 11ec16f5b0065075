use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scalefree::graphgen::{sample_family_degrees, Graph};
use scalefree::stats::{
    azuma_bound, compound_variance, concentration_experiment, estimate_exponent_mle,
    estimate_exponent_regression, sup_deviation, variance_diagnostic, ExperimentConfig,
    GraphSource, VarianceMcConfig,
};
use scalefree::{scale_free_spectrum, Params, Spectrum};

/// Oracle sampler for `d^(-beta)` on `[k, 10^6]` by inverse CDF over an
/// explicit table.
struct ZipfTable {
    k: usize,
    cdf: Vec<f64>,
}

impl ZipfTable {
    fn new(beta: f64, k: usize) -> Self {
        let mut cdf = Vec::with_capacity(1_000_000);
        let mut acc = 0.0;
        for d in k..=1_000_000 {
            acc += (d as f64).powf(-beta);
            cdf.push(acc);
        }
        cdf.iter_mut().for_each(|c| *c /= acc);
        Self { k, cdf }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.random();
        self.k + self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1)
    }
}

#[test]
fn mle_recovers_zipf_exponent() {
    let table = ZipfTable::new(2.5, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let samples: Vec<usize> = (0..1_000_000).map(|_| table.draw(&mut rng)).collect();
    let fit = estimate_exponent_mle(&samples, 2).unwrap();
    assert!(!fit.degenerate);
    assert!((fit.beta - 2.5).abs() <= 0.01, "{}", fit.beta);
}

#[test]
fn mle_on_heavy_family() {
    let params = Params::new(1.5, 2).unwrap();
    let s = sample_family_degrees(&params, 100_000, 1_000_000, 15).unwrap();
    let tail: Vec<usize> = s.degrees.into_iter().filter(|&d| d >= 2).collect();
    let fit = estimate_exponent_mle(&tail, 2).unwrap();
    assert!((fit.beta - 1.5).abs() <= 0.05, "{}", fit.beta);
}

#[test]
fn regression_exact_and_family_window() {
    let entries: Vec<f64> = (0..=100)
        .map(|d| if d < 2 { 0.0 } else { (d as f64).powf(-2.5) })
        .collect();
    let s = Spectrum::signed(entries).unwrap();
    let fit = estimate_exponent_regression(&s, 2, 100).unwrap();
    assert!((fit.beta - 2.5).abs() <= 1e-9);

    let fam = scale_free_spectrum(&Params::new(2.5, 3).unwrap(), 1024).unwrap();
    let fit = estimate_exponent_regression(&fam, 64, 1024).unwrap();
    assert!((fit.beta - 2.5).abs() <= 0.05, "{}", fit.beta);

    let two = Spectrum::probability(vec![0.0, 0.5, 0.5]).unwrap();
    assert!(estimate_exponent_regression(&two, 1, 2).is_err());
}

proptest! {
    #[test]
    fn mle_duplication_invariant(samples in prop::collection::vec(3usize..200, 10..200)) {
        let once = estimate_exponent_mle(&samples, 3).unwrap();
        let doubled: Vec<usize> = samples.iter().chain(&samples).copied().collect();
        let twice = estimate_exponent_mle(&doubled, 3).unwrap();
        prop_assert_eq!(once.beta, twice.beta);
    }

    #[test]
    fn regression_scale_invariant(
        values in prop::collection::vec(1e-6f64..1.0, 5..60),
        scale in 1e-3f64..1e3,
    ) {
        let s = Spectrum::signed(values.clone()).unwrap();
        let scaled = Spectrum::signed(values.iter().map(|v| v * scale).collect()).unwrap();
        let d_max = values.len() - 1;
        let a = estimate_exponent_regression(&s, 1, d_max).unwrap().beta;
        let b = estimate_exponent_regression(&scaled, 1, d_max).unwrap().beta;
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    #[test]
    fn azuma_monotone(
        degrees in prop::collection::vec(0usize..50, 1..40),
        t in 0.0f64..100.0,
        dt in 0.0f64..10.0,
        bump in 0usize..40,
    ) {
        let base = azuma_bound(&degrees, t);
        prop_assert!((0.0..=1.0).contains(&base));
        prop_assert!(azuma_bound(&degrees, t + dt) <= base);
        let mut bigger = degrees.clone();
        let i = bump % bigger.len();
        bigger[i] += 1;
        prop_assert!(azuma_bound(&bigger, t) >= base);
    }
}

#[test]
fn azuma_examples() {
    assert_eq!(azuma_bound(&[3, 4], 0.0), 1.0);
    assert!((azuma_bound(&[1, 1], 2.0) - (-0.25f64).exp()).abs() <= 1e-15);
}

#[test]
fn sup_deviation_examples() {
    let a = Spectrum::probability(vec![0.2, 0.3, 0.5]).unwrap();
    assert_eq!(sup_deviation(&a, &a, 0).unwrap(), 0.0);
    let b = Spectrum::probability(vec![0.2, 0.35, 0.45]).unwrap();
    assert!((sup_deviation(&b, &a, 1).unwrap() - 0.05).abs() <= 1e-15);
    let short = Spectrum::probability(vec![1.0]).unwrap();
    assert!(sup_deviation(&short, &a, 0).is_err());
}

#[test]
fn compound_variance_enumeration() {
    // X_i ~ Bernoulli(0.5), N ~ Binomial(4, 0.5): enumerate all 2^4 * 2^4
    // outcomes of (N's coins, X_1..X_4) and use only the first N of the X's.
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for n_bits in 0u32..16 {
        for x_bits in 0u32..16 {
            let n = n_bits.count_ones();
            let s = (x_bits & ((1 << n) - 1)).count_ones() as f64;
            m1 += s / 256.0;
            m2 += s * s / 256.0;
        }
    }
    let oracle = m2 - m1 * m1;
    assert!((oracle - 0.75).abs() <= 1e-15);
    assert!((compound_variance(0.5, 0.25, 2.0, 1.0).unwrap() - oracle).abs() <= 1e-15);
    assert_eq!(compound_variance(3.0, 0.0, 2.0, 0.0).unwrap(), 0.0);
    assert_eq!(compound_variance(1.0, 0.0, 5.0, 1.7).unwrap(), 1.7);
    assert!(compound_variance(1.0, -1.0, 1.0, 1.0).is_err());
}

#[test]
fn variance_of_fixed_graph_matches_enumeration() {
    let n = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < 0.25 {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges.clone()).unwrap();
    let (p, d) = (0.5f64, 2);
    let (mut m1, mut m2) = (0.0, 0.0);
    for mask in 0u32..(1 << n) {
        let w = p.powi(mask.count_ones() as i32) * (1.0 - p).powi(n as i32 - mask.count_ones() as i32);
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        let c = (0..n).filter(|&v| mask >> v & 1 == 1 && deg[v] == d).count() as f64;
        m1 += w * c;
        m2 += w * c * c;
    }
    let exact = m2 - m1 * m1;
    let mc = VarianceMcConfig {
        source: GraphSource::Fixed(g.clone()),
        graph_draws: 1,
        percolations_per_graph: 10_000,
        master_seed: 77,
    };
    let r = variance_diagnostic(1.5, p, d, &mc).unwrap();
    assert!((r.mc_var_b - exact).abs() <= 3.0 * r.mc_var_b_se, "{} vs {exact}", r.mc_var_b);

    let at_one = variance_diagnostic(1.5, 1.0, d, &mc).unwrap();
    assert_eq!(at_one.mc_var_b, 0.0);
    assert_eq!(at_one.var_a_d, 0.0);
}

#[test]
fn variance_report_populated_for_family() {
    let mc = VarianceMcConfig::family(2_000, 2, 20, 20, 5);
    let r = variance_diagnostic(1.5, 0.5, 3, &mc).unwrap();
    assert_eq!(r.samples, 400);
    assert!(r.mc_var_b.is_finite() && r.mc_var_b > 0.0);
    assert!(r.display_rhs.is_finite() && r.display_lhs.is_finite());
    assert!(variance_diagnostic(2.5, 0.5, 3, &mc).is_err());
}

#[test]
fn concentration_at_p_one_is_exact() {
    let cfg = ExperimentConfig::new(2.5, 3, 2_000, 1.0, 3, 9);
    let r = concentration_experiment(&cfg).unwrap();
    assert!(r.trial_sup_deviations.iter().all(|&x| x == 0.0));
    assert_eq!(r.exceedances, 0);
    let one = ExperimentConfig::new(2.5, 3, 2_000, 1.0, 1, 9);
    assert_eq!(concentration_experiment(&one).unwrap().trial_sup_deviations, vec![0.0]);
}

#[test]
fn concentration_independent_of_thread_count() {
    let cfg = ExperimentConfig::new(2.5, 3, 5_000, 0.5, 8, 31);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| serde_json::to_string(&concentration_experiment(&cfg).unwrap()).unwrap())
    };
    assert_eq!(run(1), run(4));
}
