//! Regular graphs and their rotation maps.
//!
//! Vertex ids are 1-based everywhere in the public API (edge lists,
//! neighbor queries, builders). Storage is 0-based.

mod builders;
mod io;
mod rotation;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builders::{
    build_complete, build_cycle, build_fullerene_c60, build_petersen, build_random_regular, RANDOM_REGULAR_MAX_ATTEMPTS,
};
pub use io::{read_edge_list, write_edge_list};
pub use rotation::{compute_rotation_map, RotationMap};

/// Connected, simple, undirected `d`-regular graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularGraph {
    degree: usize,
    // 0-based, each list sorted ascending
    adjacency: Vec<Vec<usize>>,
}

impl RegularGraph {
    /// Builds a graph from a 1-based undirected edge list and checks every
    /// invariant: regularity, no loops, no multi-edges, connectivity.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::graph("graph has no vertices"));
        }
        let mut adjacency = vec![Vec::new(); num_vertices];
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > num_vertices || v > num_vertices {
                return Err(Error::graph(format!("edge ({u}, {v}) outside 1..={num_vertices}")));
            }
            if u == v {
                return Err(Error::graph(format!("self-loop at vertex {u}")));
            }
            adjacency[u - 1].push(v - 1);
            adjacency[v - 1].push(u - 1);
        }
        for (v, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::graph(format!("multi-edge at vertex {}", v + 1)));
            }
        }
        let degree = adjacency[0].len();
        if degree == 0 {
            return Err(Error::graph("vertex 1 has no neighbors"));
        }
        if let Some(v) = adjacency.iter().position(|n| n.len() != degree) {
            return Err(Error::graph(format!("vertex {} has degree {}, expected {degree}", v + 1, adjacency[v].len())));
        }
        let g = RegularGraph { degree, adjacency };
        if !g.is_connected() {
            return Err(Error::graph("graph is disconnected"));
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_edges(&self) -> usize {
        self.num_vertices() * self.degree / 2
    }

    /// Dimension of the coin-position space, `d |V|`.
    pub fn joint_dimension(&self) -> usize {
        self.num_vertices() * self.degree
    }

    /// Sorted 1-based neighbors of 1-based vertex `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.adjacency[v - 1].iter().map(|&w| w + 1).collect()
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        u >= 1 && u <= self.num_vertices() && self.adjacency[u - 1].binary_search(&(v.wrapping_sub(1))).is_ok()
    }

    /// 1-based edge list with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&w| w > u).map(|&w| (u + 1, w + 1)));
        }
        out
    }

    pub(crate) fn adj0(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// BFS distances from 0-based `src`; `usize::MAX` marks unreachable.
    fn bfs(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_vertices()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != usize::MAX)
    }

    /// Largest shortest-path distance over all vertex pairs.
    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for v in 0..self.num_vertices() {
            let dist = self.bfs(v);
            let far = *dist.iter().max().expect("non-empty");
            if far == usize::MAX {
                return Err(Error::graph("graph is disconnected"));
            }
            best = best.max(far);
        }
        Ok(best)
    }

    /// Two-coloring by BFS: `Some(side)` with `side[i]` the part of vertex
    /// `i + 1`, or `None` when an odd cycle exists. Vertex 1 is on part `false`.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let dist = self.bfs(0);
        let side: Vec<bool> = dist.iter().map(|d| d % 2 == 1).collect();
        let ok = self.adjacency.iter().enumerate().all(|(u, nbrs)| nbrs.iter().all(|&w| side[u] != side[w]));
        ok.then_some(side)
    }

    pub fn has_odd_cycle(&self) -> bool {
        self.bipartition().is_none()
    }
}

/// Free-function form of [`RegularGraph::has_odd_cycle`].
pub fn has_odd_cycle(g: &RegularGraph) -> bool {
    g.has_odd_cycle()
}

/// Free-function form of [`RegularGraph::diameter`].
pub fn diameter(g: &RegularGraph) -> Result<usize> {
    g.diameter()
}

/// Textual graph selector: `cycle:N`, `complete:N`, `petersen`, `c60`,
/// `random:N:D:SEED`, or a path to an edge-list file (optionally `file:PATH`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GraphSpec {
    Cycle(usize),
    Complete(usize),
    Petersen,
    C60,
    Random { n: usize, d: usize, seed: u64 },
    File(String),
}

impl GraphSpec {
    pub fn build(&self) -> Result<RegularGraph> {
        match self {
            GraphSpec::Cycle(n) => build_cycle(*n),
            GraphSpec::Complete(n) => build_complete(*n),
            GraphSpec::Petersen => Ok(build_petersen()),
            GraphSpec::C60 => Ok(build_fullerene_c60()),
            GraphSpec::Random { n, d, seed } => build_random_regular(*n, *d, *seed),
            GraphSpec::File(path) => read_edge_list(crate::error::open_file(path)?),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.parse::<usize>().map_err(|_| Error::arg(format!("bad number '{x}' in graph spec '{s}'")));
        match parts.as_slice() {
            ["petersen"] => Ok(GraphSpec::Petersen),
            ["c60"] => Ok(GraphSpec::C60),
            ["cycle", n] => Ok(GraphSpec::Cycle(num(n)?)),
            ["complete", n] => Ok(GraphSpec::Complete(num(n)?)),
            ["random", n, d, seed] => Ok(GraphSpec::Random {
                n: num(n)?,
                d: num(d)?,
                seed: seed.parse().map_err(|_| Error::arg(format!("bad seed in '{s}'")))?,
            }),
            ["file", ..] => Ok(GraphSpec::File(s["file:".len()..].to_string())),
            [kw, ..] if ["cycle", "complete", "random"].contains(kw) => {
                Err(Error::arg(format!("malformed graph spec '{s}'")))
            }
            _ if s.is_empty() => Err(Error::arg("empty graph spec")),
            _ => Ok(GraphSpec::File(s.to_string())),
        }
    }
}

impl TryFrom<String> for GraphSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GraphSpec> for String {
    fn from(g: GraphSpec) -> String {
        g.to_string()
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Petersen => f.write_str("petersen"),
            GraphSpec::C60 => f.write_str("c60"),
            GraphSpec::Random { n, d, seed } => write!(f, "random:{n}:{d}:{seed}"),
            GraphSpec::File(p) => write!(f, "file:{p}"),
        }
    }
}
