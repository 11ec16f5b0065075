use crate::error::{Error, Result};
use crate::Spectrum;

/// Simple undirected graph on vertices `0..n`, stored as a sorted edge list
/// with `u < v` in every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Normalizes orientation and drops repeated edges; self-loops and
    /// out-of-range ids are errors.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u}, {v}) outside vertex range 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(Self { n, edges: out })
    }

    /// Builds from pairs already known to be simple, ordered and in range.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < n));
        Self { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Number of vertices of each degree, indexed `0..=max_degree`.
    pub fn degree_counts(&self) -> Vec<u64> {
        counts_of(&self.degrees())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

pub(crate) fn counts_of(degrees: &[usize]) -> Vec<u64> {
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0u64; max + 1];
    for &d in degrees {
        counts[d] += 1;
    }
    counts
}

/// Fraction of vertices at each degree.
pub fn degree_histogram(g: &Graph) -> Result<Spectrum> {
    if g.n == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.n as f64;
    let entries = g.degree_counts().into_iter().map(|c| c as f64 / n).collect();
    Spectrum::probability(entries)
}

/// `(sum_v deg(v)^2, sum <= n^(2 - epsilon))`.
pub fn sparsity_check(g: &Graph, epsilon: f64) -> (u64, bool) {
    let sum_sq: u64 = g.degrees().iter().map(|&d| (d * d) as u64).sum();
    let limit = (g.n as f64).powf(2.0 - epsilon);
    (sum_sq, sum_sq as f64 <= limit)
}
