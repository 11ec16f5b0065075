use rand::Rng;

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::seeding::rng_from_seed;

/// Induced subgraph on the surviving vertices, relabeled `0..survivors.len()`
/// in increasing order of original id.
#[derive(Debug, Clone, PartialEq)]
pub struct Percolated {
    pub graph: Graph,
    /// `survivors[new_id] = old_id`.
    pub survivors: Vec<usize>,
}

pub(crate) fn check_closed<T: Into<f64> + Copy>(p: T) -> Result<f64> {
    let p = p.into();
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::Probability(p, "[0, 1]"))
    }
}

/// Survival mask: vertex `v` is kept when its uniform draw is below `p`.
pub(crate) fn survival_mask<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<bool> {
    (0..n).map(|_| rng.random::<f64>() < p).collect()
}

/// Keeps each vertex independently with probability `p`.
pub fn percolate(g: &Graph, p: f64, seed: u64) -> Result<Percolated> {
    let p = check_closed(p)?;
    let mut rng = rng_from_seed(seed);
    let keep = survival_mask(g.n(), p, &mut rng);
    Ok(induced(g, &keep))
}

/// Induced subgraph on the vertices flagged in `keep`.
pub fn induced(g: &Graph, keep: &[bool]) -> Percolated {
    let mut new_id = vec![usize::MAX; g.n()];
    let mut survivors = Vec::new();
    for (v, _) in keep.iter().enumerate().filter(|(_, &k)| k) {
        new_id[v] = survivors.len();
        survivors.push(v);
    }
    // relabeling is monotone, so sorted input stays sorted
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| keep[u] && keep[v])
        .map(|&(u, v)| (new_id[u], new_id[v]))
        .collect();
    Percolated {
        graph: Graph::from_sorted_unchecked(survivors.len(), edges),
        survivors,
    }
}

/// Degree counts of the surviving vertices, indexed `0..=g.max_degree()`;
/// skips building the relabeled graph.
pub fn percolated_degree_counts<R: Rng + ?Sized>(g: &Graph, p: f64, rng: &mut R) -> Vec<u64> {
    let keep = survival_mask(g.n(), p, rng);
    surviving_degree_counts(g, &keep)
}

pub(crate) fn surviving_degree_counts(g: &Graph, keep: &[bool]) -> Vec<u64> {
    let mut deg = vec![0usize; g.n()];
    let mut max = 0;
    for &(u, v) in g.edges() {
        if keep[u] && keep[v] {
            deg[u] += 1;
            deg[v] += 1;
            max = max.max(deg[u]).max(deg[v]);
        }
    }
    let width = g.max_degree().max(max) + 1;
    let mut counts = vec![0u64; width];
    for (v, &d) in deg.iter().enumerate() {
        if keep[v] {
            counts[d] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::derive_seed;

    #[test]
    fn keep_everything() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let out = percolate(&g, 1.0, 4).unwrap();
        assert_eq!(out.graph, g);
        assert_eq!(out.survivors, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn keep_nothing() {
        let out = percolate(&Graph::complete(6), 0.0, 4).unwrap();
        assert_eq!(out.graph.n(), 0);
        assert!(out.survivors.is_empty());
    }

    #[test]
    fn rejects_bad_p() {
        assert!(percolate(&Graph::complete(3), -0.1, 0).is_err());
        assert!(percolate(&Graph::complete(3), 1.1, 0).is_err());
    }

    #[test]
    fn triangle_survivor_means() {
        let g = Graph::complete(3);
        let trials = 100_000u64;
        let (mut verts, mut edges) = (0usize, 0usize);
        for t in 0..trials {
            let out = percolate(&g, 0.5, derive_seed(17, t)).unwrap();
            verts += out.graph.n();
            edges += out.graph.edge_count();
        }
        let mv = verts as f64 / trials as f64;
        let me = edges as f64 / trials as f64;
        assert!((mv - 1.5).abs() < 0.01, "{mv}");
        assert!((me - 0.75).abs() < 0.01, "{me}");
    }

    #[test]
    fn fast_counts_match_relabeled_graph() {
        let g = Graph::from_edges(7, [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (5, 6), (2, 6)])
            .unwrap();
        for seed in 0..20 {
            let mut rng = rng_from_seed(seed);
            let counts = percolated_degree_counts(&g, 0.6, &mut rng);
            let out = percolate(&g, 0.6, seed).unwrap();
            let mut want = out.graph.degree_counts();
            want.resize(counts.len(), 0);
            assert_eq!(counts, want);
        }
    }
}
