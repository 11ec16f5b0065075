use super::percolate::{check_closed, survival_mask};
use crate::error::{Error, Result};
use crate::seeding::rng_from_seed;
use crate::Spectrum;

/// A multiset of subsets of `0..n`. Each member set is kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(sets.len());
        for mut s in sets {
            if let Some(&bad) = s.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidArgument(format!(
                    "member {bad} outside ground set 0..{n}"
                )));
            }
            s.sort_unstable();
            s.dedup();
            out.push(s);
        }
        Ok(Self { n, sets: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Number of sets of each size, indexed `0..=max size`.
    pub fn size_counts(&self) -> Vec<u64> {
        let max = self.sets.iter().map(Vec::len).max().unwrap_or(0);
        let mut counts = vec![0u64; max + 1];
        for s in &self.sets {
            counts[s.len()] += 1;
        }
        counts
    }
}

/// Fraction of sets of each size.
pub fn set_size_histogram(f: &SetSystem) -> Result<Spectrum> {
    if f.sets.is_empty() {
        return Err(Error::Degenerate("set system has no sets".into()));
    }
    let m = f.sets.len() as f64;
    Spectrum::probability(f.size_counts().into_iter().map(|c| c as f64 / m).collect())
}

/// Deletes each ground vertex with probability `1 - p` and shrinks every set
/// to its surviving members. Sets are never dropped and ids are not relabeled.
pub fn percolate_sets(f: &SetSystem, p: f64, seed: u64) -> Result<SetSystem> {
    let p = check_closed(p)?;
    let mut rng = rng_from_seed(seed);
    let keep = survival_mask(f.n, p, &mut rng);
    let sets = f
        .sets
        .iter()
        .map(|s| s.iter().copied().filter(|&v| keep[v]).collect())
        .collect();
    Ok(SetSystem { n: f.n, sets })
}
