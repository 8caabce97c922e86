//! Consistent edge labelings.
//!
//! A rotation map assigns each vertex an ordered list of its `d` neighbors so
//! that, for every label `j`, `v -> neighbor_of(v, j)` is a permutation of the
//! vertex set. That is exactly the condition under which the label-preserving
//! shift operator is a permutation (hence unitary) on coin-position space.

use super::RegularGraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationMap {
    // targets[j][v] = w, all 0-based
    targets: Vec<Vec<usize>>,
    // back[j][v] = k with targets[k][w] == v, 0-based label
    back: Vec<Vec<usize>>,
}

impl RotationMap {
    /// Builds a rotation map from explicit 1-based label permutations
    /// (`perms[j - 1][v - 1]` is the neighbor of `v` under label `j`) and
    /// validates it against `g`.
    pub fn from_permutations(g: &RegularGraph, perms: &[Vec<usize>]) -> Result<Self> {
        let targets: Vec<Vec<usize>> = perms.iter().map(|p| p.iter().map(|&w| w.wrapping_sub(1)).collect()).collect();
        let n = g.num_vertices();
        if targets.len() != g.degree() || targets.iter().any(|p| p.len() != n || p.iter().any(|&w| w >= n)) {
            return Err(Error::graph("label permutations do not match graph dimensions"));
        }
        let back = reverse_labels(&targets)?;
        let rm = RotationMap { targets, back };
        rm.validate(g)?;
        Ok(rm)
    }

    pub fn degree(&self) -> usize {
        self.targets.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.targets.first().map_or(0, Vec::len)
    }

    /// The neighbor of 1-based `v` along 1-based label `j`.
    pub fn neighbor_of(&self, v: usize, j: usize) -> Option<usize> {
        self.targets.get(j.checked_sub(1)?)?.get(v.checked_sub(1)?).map(|w| w + 1)
    }

    /// The label under which the edge `(v, neighbor_of(v, j))` is seen from
    /// the other end.
    pub fn reverse_label(&self, v: usize, j: usize) -> Option<usize> {
        self.back.get(j.checked_sub(1)?)?.get(v.checked_sub(1)?).map(|k| k + 1)
    }

    /// `Rot(v, j) = (w, k)`; an involution on the `d |V|` slots.
    pub fn rotate(&self, v: usize, j: usize) -> Option<(usize, usize)> {
        Some((self.neighbor_of(v, j)?, self.reverse_label(v, j)?))
    }

    /// 0-based permutation for 0-based label `j`: `perm[v] = w`.
    pub fn permutation(&self, j: usize) -> &[usize] {
        &self.targets[j]
    }

    /// Checks every rotation-map invariant against `g`.
    pub fn validate(&self, g: &RegularGraph) -> Result<()> {
        let (n, d) = (g.num_vertices(), g.degree());
        if self.degree() != d || self.num_vertices() != n {
            return Err(Error::graph("rotation map dimensions differ from graph"));
        }
        for (j, perm) in self.targets.iter().enumerate() {
            let mut hit = vec![false; n];
            for &w in perm {
                if std::mem::replace(&mut hit[w], true) {
                    return Err(Error::graph(format!("label {} is not a permutation", j + 1)));
                }
            }
        }
        for v in 0..n {
            let mut seen: Vec<usize> = self.targets.iter().map(|p| p[v]).collect();
            seen.sort_unstable();
            if seen != g.adj0(v) {
                return Err(Error::graph(format!("labels at vertex {} do not enumerate its neighbors", v + 1)));
            }
            for j in 0..d {
                let (w, k) = (self.targets[j][v], self.back[j][v]);
                if self.targets[k][w] != v || self.back[k][w] != j {
                    return Err(Error::graph(format!("rotation is not an involution at ({}, {})", v + 1, j + 1)));
                }
            }
        }
        Ok(())
    }
}

fn reverse_labels(targets: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    targets
        .iter()
        .enumerate()
        .map(|(j, perm)| {
            perm.iter()
                .enumerate()
                .map(|(v, &w)| {
                    targets.iter().position(|p| p[w] == v).ok_or_else(|| {
                        Error::graph(format!("edge ({}, {}) has no reverse label (label {})", v + 1, w + 1, j + 1))
                    })
                })
                .collect()
        })
        .collect()
}

/// Decomposes the arcs of `g` into `d` vertex permutations by extracting
/// perfect matchings from the bipartite double cover (tails on the left,
/// heads on the right). The residual cover stays regular after every
/// extraction, so a perfect matching always exists. Kuhn's algorithm with
/// ascending neighbor order makes the result deterministic.
pub fn compute_rotation_map(g: &RegularGraph) -> Result<RotationMap> {
    let n = g.num_vertices();
    let d = g.degree();
    let mut residual: Vec<Vec<usize>> = (0..n).map(|v| g.adj0(v).to_vec()).collect();
    let mut targets = Vec::with_capacity(d);

    for _ in 0..d {
        let mut head_owner: Vec<Option<usize>> = vec![None; n];
        let mut tail_match = vec![usize::MAX; n];
        for u in 0..n {
            let mut visited = vec![false; n];
            if !augment(u, &residual, &mut visited, &mut head_owner, &mut tail_match) {
                return Err(Error::graph(format!("no perfect matching covering vertex {}", u + 1)));
            }
        }
        for (u, &w) in tail_match.iter().enumerate() {
            residual[u].retain(|&x| x != w);
        }
        targets.push(tail_match);
    }

    let back = reverse_labels(&targets)?;
    let rm = RotationMap { targets, back };
    rm.validate(g)?;
    Ok(rm)
}

fn augment(
    u: usize,
    residual: &[Vec<usize>],
    visited: &mut [bool],
    head_owner: &mut [Option<usize>],
    tail_match: &mut [usize],
) -> bool {
    for &w in &residual[u] {
        if visited[w] {
            continue;
        }
        visited[w] = true;
        let free = match head_owner[w] {
            None => true,
            Some(owner) => augment(owner, residual, visited, head_owner, tail_match),
        };
        if free {
            head_owner[w] = Some(u);
            tail_match[u] = w;
            return true;
        }
    }
    false
}
