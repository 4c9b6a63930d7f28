//! Undirected simple graphs and everything the graph-automorphism side of the
//! reductions needs.
//!
//! Nodes are `1..=n` externally. The text format is a header line `n m`
//! followed by `m` lines `u v` with `1 ≤ u < v ≤ n`.

pub mod fixtures;
mod label;
mod promise;
mod search;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub use label::{attach_label, attach_label_scaled, build_query, query_node_count, LabelPlan};
pub use promise::{
    check_promise, coset_sample, koebler_reduce, unique_ga_ff_oracle, CosetSign, KoeblerOutcome,
    PromiseInstance, QueryRecord, QueryScheme, SearchOracle, UniqueGaFfOracle, ORACLE_NODE_LIMIT,
};
pub use search::{automorphisms, automorphisms_bounded, AutGroup, DEFAULT_NODE_LIMIT};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    n: usize,
    // 0-based, smaller endpoint first
    edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from 1-based edges, rejecting self-loops, duplicates
    /// and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(Error::NodeOutOfRange {
                    node: x,
                    count: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
        }
        let key = ((u.min(v) - 1) as u32, (u.max(v) - 1) as u32);
        if !self.edges.insert(key) {
            return Err(Error::InvalidGraph(format!("duplicate edge {{{u}, {v}}}")));
        }
        Ok(())
    }

    /// Appends `count` isolated nodes and returns the 1-based index of the first.
    pub(crate) fn add_nodes(&mut self, count: usize) -> usize {
        let first = self.n + 1;
        self.n += count;
        first
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.insert_edge(u, v).expect("internal edge insertion");
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 1-based `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize + 1, v as usize + 1))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u == v {
            return false;
        }
        self.edges
            .contains(&((u.min(v) - 1) as u32, (u.max(v) - 1) as u32))
    }

    /// 0-based adjacency lists.
    pub(crate) fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    /// Relabels nodes: edge `{u, v}` becomes `{σ(u), σ(v)}`.
    pub fn apply_perm(&self, sigma: &Permutation) -> Result<Graph> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: sigma.degree(),
            });
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (sigma.at(u as usize) as u32, sigma.at(v as usize) as u32);
                (a.min(b), a.max(b))
            })
            .collect();
        Ok(Graph { n: self.n, edges })
    }

    pub fn is_automorphism(&self, sigma: &Permutation) -> bool {
        sigma.degree() == self.n
            && self.edges.iter().all(|&(u, v)| {
                let (a, b) = (sigma.at(u as usize) as u32, sigma.at(v as usize) as u32);
                self.edges.contains(&(a.min(b), a.max(b)))
            })
    }

    /// `self ⊔ other`, with `other`'s nodes numbered after `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n as u32;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Graph {
            n: self.n + other.n,
            edges,
        }
    }

    pub fn complement(&self) -> Graph {
        let n = self.n as u32;
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|e| !self.edges.contains(e))
            .collect();
        Graph { n: self.n, edges }
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u as usize] {
                if !std::mem::replace(&mut seen[w as usize], true) {
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("graph", "empty input"))?;
        let nums = |line: &str| -> Result<Vec<usize>> {
            line.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse("graph", format!("bad integer {t:?} in {line:?}")))
                })
                .collect()
        };
        let (n, m) = match nums(header)?.as_slice() {
            &[n, m] => (n, m),
            _ => return Err(Error::parse("graph", format!("bad header {header:?}"))),
        };
        let mut g = Graph::empty(n);
        for _ in 0..m {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse("graph", format!("expected {m} edge lines")))?;
            let (u, v) = match nums(line)?.as_slice() {
                &[u, v] => (u, v),
                _ => return Err(Error::parse("graph", format!("bad edge line {line:?}"))),
            };
            if u > v {
                return Err(Error::parse("graph", format!("edge {line:?} must have u < v")));
            }
            g.insert_edge(u, v)?;
        }
        if let Some(extra) = lines.next() {
            return Err(Error::parse("graph", format!("unexpected line {extra:?}")));
        }
        Ok(g)
    }
}

/// Every labelled graph on `n` nodes, in order of the edge bitmask over the
/// pairs `(1,2), (1,3), ..., (n-1,n)`.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    let total: u64 = 1 << pairs.len();
    (0..total).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(n, &edges).expect("distinct pairs")
    })
}

/// Erdős–Rényi graph with edge probability 1/2.
pub fn random_graph<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen::<bool>() {
                g.add_edge(u, v);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::random_permutation;
    use crate::seed::rng_from_seed;

    #[test]
    fn text_roundtrip_and_sorted_output() {
        let g = Graph::from_edges(4, &[(3, 4), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.to_text(), "4 3\n1 2\n2 3\n3 4\n");
        assert_eq!(g.to_text().parse::<Graph>().unwrap(), g);
    }

    #[test]
    fn parser_rejections() {
        assert!("3 1\n1 1\n".parse::<Graph>().is_err());
        assert!("3 2\n1 2\n1 2\n".parse::<Graph>().is_err());
        assert!("3 1\n1 4\n".parse::<Graph>().is_err());
        assert!("3 1\n2 1\n".parse::<Graph>().is_err());
        assert!("3 2\n1 2\n".parse::<Graph>().is_err());
        assert!("3 1\n1 2\n2 3\n".parse::<Graph>().is_err());
        assert!(Graph::from_edges(3, &[(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn relabelling() {
        let mut rng = rng_from_seed(1);
        let g = random_graph(7, &mut rng);
        assert_eq!(g.apply_perm(&Permutation::identity(7)).unwrap(), g);
        for _ in 0..20 {
            let s = random_permutation(7, &mut rng);
            let t = random_permutation(7, &mut rng);
            let lhs = g.apply_perm(&s.compose(&t).unwrap()).unwrap();
            let rhs = g.apply_perm(&t).unwrap().apply_perm(&s).unwrap();
            assert_eq!(lhs, rhs);
        }
        let path = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let flip = Permutation::from_cycles(3, &[&[1, 3]]).unwrap();
        assert!(path.is_automorphism(&flip));
        assert_eq!(path.apply_perm(&flip).unwrap(), path);
        assert!(path.apply_perm(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn complement_and_connectivity() {
        let g = Graph::from_edges(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(!g.is_connected());
        let c = g.complement();
        assert_eq!(c.edge_count(), 4);
        assert!(c.is_connected());
        assert_eq!(c.complement(), g);
        for g in all_graphs(4) {
            assert!(g.is_connected() || g.complement().is_connected());
        }
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(all_graphs(1).count(), 1);
        assert_eq!(all_graphs(3).count(), 8);
        assert_eq!(all_graphs(4).count(), 64);
    }
}
