use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::seeding::rng_from_seed;
use crate::{Params, Spectrum};

/// Where a degree sample came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSource {
    Family(Params),
    Explicit,
}

/// `n` degrees drawn from a spectrum conditioned on `d <= cap`, with even sum.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequenceSample {
    pub degrees: Vec<usize>,
    pub cap: usize,
    pub source: SampleSource,
    pub seed: u64,
}

impl DegreeSequenceSample {
    pub fn degree_sum(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// Default degree cap `floor(n^0.3)`.
pub fn default_cap(n: usize) -> usize {
    (n as f64).powf(0.3).floor() as usize
}

/// Alias-table sampler over `0..=cap` with weights from a probability spectrum
/// (tail included).
#[derive(Debug, Clone)]
pub struct SpectrumSampler {
    table: WeightedAliasIndex<f64>,
}

impl SpectrumSampler {
    pub fn new(spectrum: &Spectrum, cap: usize) -> Result<Self> {
        if !spectrum.is_probability() {
            return Err(Error::InvalidSpectrum("sampling needs a probability spectrum".into()));
        }
        let weights: Vec<f64> = spectrum
            .extended(cap)
            .into_iter()
            .map(|v| v.max(0.0))
            .collect();
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::Degenerate(format!("spectrum has no mass at degrees <= {cap}")));
        }
        let table = WeightedAliasIndex::new(weights)
            .map_err(|e| Error::InvalidSpectrum(format!("alias table: {e}")))?;
        Ok(Self { table })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.table.sample(rng)
    }
}

/// Draws `n` i.i.d. degrees and fixes the parity of their sum.
///
/// An odd sum is made even by raising one uniformly chosen vertex below the
/// cap by one; if every vertex sits at the cap, one is lowered instead.
pub fn sample_degrees(
    spectrum: &Spectrum,
    n: usize,
    cap: usize,
    seed: u64,
) -> Result<DegreeSequenceSample> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one vertex".into()));
    }
    let sampler = SpectrumSampler::new(spectrum, cap)?;
    let mut rng = rng_from_seed(seed);
    let mut degrees: Vec<usize> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        let below: Vec<usize> = (0..n).filter(|&v| degrees[v] < cap).collect();
        if below.is_empty() {
            let v = rng.random_range(0..n);
            degrees[v] -= 1;
        } else {
            let v = below[rng.random_range(0..below.len())];
            degrees[v] += 1;
        }
    }
    Ok(DegreeSequenceSample {
        degrees,
        cap,
        source: SampleSource::Explicit,
        seed,
    })
}

/// Samples from the normalized power-law family.
pub fn sample_family_degrees(
    params: &Params,
    n: usize,
    cap: usize,
    seed: u64,
) -> Result<DegreeSequenceSample> {
    let spectrum = crate::scale_free_spectrum(params, cap.max(params.k()))?;
    let mut s = sample_degrees(&spectrum, n, cap, seed)?;
    s.source = SampleSource::Family(*params);
    Ok(s)
}

/// Erased configuration model: uniform stub matching, then self-loops and
/// repeated edges are dropped.
pub fn configuration_model(sample: &DegreeSequenceSample, seed: u64) -> Result<Graph> {
    configuration_model_from_degrees(&sample.degrees, seed)
}

pub fn configuration_model_from_degrees(degrees: &[usize], seed: u64) -> Result<Graph> {
    let total: usize = degrees.iter().sum();
    if total % 2 == 1 {
        return Err(Error::InvalidArgument("degree sum is odd".into()));
    }
    let mut stubs = Vec::with_capacity(total);
    for (v, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v, d));
    }
    let mut rng = rng_from_seed(seed);
    stubs.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = stubs
        .chunks_exact(2)
        .filter(|pair| pair[0] != pair[1])
        .map(|pair| (pair[0].min(pair[1]), pair[0].max(pair[1])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph::from_sorted_unchecked(degrees.len(), edges))
}
