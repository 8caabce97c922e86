use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{read_edge_list, RegularGraph};
use crate::error::{Error, Result};

/// Pairing-model attempts before [`build_random_regular`] gives up.
pub const RANDOM_REGULAR_MAX_ATTEMPTS: usize = 1000;

/// Buckyball adjacency. Vertices are numbered on a Schlegel projection
/// centered on a pentagonal face: the central pentagon is 1..=5, then each
/// concentric ring (sizes 5, 10, 10, 10, 10, 5, 5) counterclockwise.
const C60_EDGES: &str = include_str!("../../data/c60.edges");

/// The cycle `C_n`; vertex `i` is adjacent to `i - 1` and `i + 1` mod `n`.
pub fn build_cycle(n: usize) -> Result<RegularGraph> {
    if n < 3 {
        return Err(Error::arg(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
    RegularGraph::from_edges(n, &edges)
}

/// The complete graph `K_n` (degree `n - 1`), `n >= 2`.
pub fn build_complete(n: usize) -> Result<RegularGraph> {
    if n < 2 {
        return Err(Error::arg(format!("complete graph needs at least 2 vertices, got {n}")));
    }
    let edges: Vec<_> = (1..=n).flat_map(|u| ((u + 1)..=n).map(move |v| (u, v))).collect();
    RegularGraph::from_edges(n, &edges)
}

/// Petersen graph: outer 5-cycle 1..5, inner pentagram 6..10, spokes `i <-> i+5`.
pub fn build_petersen() -> RegularGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 1..=5 {
        edges.push((i, i % 5 + 1));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 1) % 5 + 6));
    }
    RegularGraph::from_edges(10, &edges).expect("petersen graph is valid")
}

pub fn build_fullerene_c60() -> RegularGraph {
    read_edge_list(C60_EDGES.as_bytes()).expect("shipped C60 table is valid")
}

/// Connected simple `d`-regular graph on `n` vertices from the pairing
/// (configuration) model, rejecting loops, multi-edges and disconnected
/// samples. Deterministic in `seed`.
pub fn build_random_regular(n: usize, d: usize, seed: u64) -> Result<RegularGraph> {
    if d == 0 || d >= n {
        return Err(Error::arg(format!("need 0 < d < n, got n={n}, d={d}")));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::arg(format!("n*d must be even, got n={n}, d={d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..RANDOM_REGULAR_MAX_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::with_capacity(n * d / 2);
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut simple = true;
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                simple = false;
                break;
            }
            edges.push((u + 1, v + 1));
        }
        if !simple {
            continue;
        }
        // from_edges rejects disconnected samples; anything else is a bug
        if let Ok(g) = RegularGraph::from_edges(n, &edges) {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed { attempts: RANDOM_REGULAR_MAX_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All simple graphs on `n` labeled vertices that are `d`-regular, by
    /// enumerating every subset of the possible edges.
    fn enumerate_regular(n: usize, d: usize) -> Vec<Vec<(usize, usize)>> {
        let all: Vec<_> = (1..=n).flat_map(|u| ((u + 1)..=n).map(move |v| (u, v))).collect();
        (0u32..(1 << all.len()))
            .map(|mask| all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect::<Vec<_>>())
            .filter(|edges| {
                let mut deg = vec![0; n + 1];
                for &(u, v) in edges {
                    deg[u] += 1;
                    deg[v] += 1;
                }
                deg[1..].iter().all(|&x| x == d)
            })
            .collect()
    }

    #[test]
    fn cycle_shapes() {
        let g = build_cycle(318).unwrap();
        assert_eq!((g.num_vertices(), g.degree()), (318, 2));
        let t = build_cycle(3).unwrap();
        for v in 1..=3 {
            assert_eq!(t.neighbors(v).len(), 2);
            assert!(!t.neighbors(v).contains(&v));
        }
        assert!(matches!(build_cycle(2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn petersen_shape() {
        let g = build_petersen();
        assert_eq!((g.num_vertices(), g.degree(), g.joint_dimension()), (10, 3, 30));
        assert_eq!(g.diameter().unwrap(), 2);
        assert!(g.has_odd_cycle());
    }

    #[test]
    fn c60_shape() {
        let g = build_fullerene_c60();
        assert_eq!((g.num_vertices(), g.degree(), g.num_edges()), (60, 3, 90));
        assert_eq!(g.diameter().unwrap(), 9);
        assert!(g.has_odd_cycle());
        // central pentagon
        for i in 1..=5 {
            assert!(g.are_adjacent(i, i % 5 + 1));
        }
    }

    #[test]
    fn random_regular_preconditions() {
        assert!(matches!(build_random_regular(5, 3, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_random_regular(4, 4, 1), Err(Error::InvalidArgument(_))));
        let g = build_random_regular(10, 3, 7).unwrap();
        assert_eq!((g.num_vertices(), g.degree()), (10, 3));
        assert_eq!(g, build_random_regular(10, 3, 7).unwrap());
    }

    #[test]
    fn random_regular_on_four_vertices_is_k4() {
        let all = enumerate_regular(4, 3);
        assert_eq!(all.len(), 1);
        let k4 = RegularGraph::from_edges(4, &all[0]).unwrap();
        assert_eq!(k4, build_complete(4).unwrap());
        for seed in 0..5 {
            assert_eq!(build_random_regular(4, 3, seed).unwrap(), k4);
        }
    }
}
