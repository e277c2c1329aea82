//! Undirected graphs for the dominating-set gadget generators, plus the
//! brute-force dominating-set oracle the generated instances are checked
//! against.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::ReductionError;

/// Simple undirected graph with vertices named `v1..v|V|` (1-based), no
/// self-loops, edges stored as normalized `(min, max)` pairs.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Graph, ReductionError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(ReductionError::Malformed(format!("self-loop at v{u}")));
            }
            if u < 1 || v < 1 || u > vertex_count || v > vertex_count {
                return Err(ReductionError::Malformed(format!(
                    "edge ({u}, {v}) outside 1..={vertex_count}"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            vertex_count,
            edges: set,
        })
    }

    /// Parses the text form: first non-empty line is `|V|`, every following
    /// non-empty line one `u v` edge (1-based endpoints).
    pub fn parse(text: &str) -> Result<Graph, ReductionError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| ReductionError::Malformed("empty graph text".into()))?;
        let vertex_count: usize = header
            .parse()
            .map_err(|_| ReductionError::Malformed(format!("bad vertex count {header:?}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut nums = line.split_whitespace().map(str::parse::<usize>);
            match (nums.next(), nums.next(), nums.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => {
                    return Err(ReductionError::Malformed(format!(
                        "bad edge line {line:?}, expected two vertex numbers"
                    )))
                }
            }
        }
        Graph::new(vertex_count, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Closed neighborhood: `v` itself plus every adjacent vertex, ascending.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        assert!(v >= 1 && v <= self.vertex_count, "vertex v{v} out of range");
        (1..=self.vertex_count)
            .filter(|&u| u == v || self.has_edge(u, v))
            .collect()
    }

    /// Vertices outside the closed neighborhood of `v`, ascending.
    pub fn closed_non_neighbors(&self, v: usize) -> Vec<usize> {
        (1..=self.vertex_count)
            .filter(|&u| u != v && !self.has_edge(u, v))
            .collect()
    }
}

impl fmt::Display for Graph {
    /// Emits the same text form `parse` accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.vertex_count)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Every labeled graph on `n` vertices (all `2^C(n,2)` edge subsets).
pub fn all_labeled_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "labeled enumeration only intended for tiny n");
    let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            Graph::new(n, edges).expect("generated edges are valid")
        })
        .collect()
}

/// Brute-force dominating-set decision: is there a vertex subset of size at
/// most `k` whose closed neighborhoods cover every vertex? Refuses graphs
/// with more than 20 vertices.
pub fn oracle_dominating_set(g: &Graph, k: usize) -> Result<bool, ReductionError> {
    let n = g.vertex_count();
    if n > 20 {
        return Err(ReductionError::Unsupported(format!(
            "brute-force domination check refuses |V| = {n} > 20"
        )));
    }
    if n == 0 {
        return Ok(true);
    }
    let neighborhoods: Vec<u32> = (1..=n)
        .map(|v| {
            g.closed_neighborhood(v)
                .into_iter()
                .fold(0u32, |acc, u| acc | 1 << (u - 1))
        })
        .collect();
    let full = (1u32 << n) - 1;
    let dominates = |subset: &[usize]| {
        subset
            .iter()
            .fold(0u32, |acc, &v| acc | neighborhoods[v - 1])
            == full
    };
    Ok((0..=k.min(n)).any(|size| (1..=n).combinations(size).any(|s| dominates(&s))))
}
