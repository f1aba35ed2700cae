//! Undirected simple graphs on labeled nodes `0..n`, with the distance
//! semantics of the game: unreachable pairs are tracked structurally rather
//! than through a sentinel value.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cost::ExtendedCost;
use crate::error::Error;
use crate::scalar::scalar_u;

/// Hop distance between two nodes. `Unreachable` compares strictly greater
/// than every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Distance {
    Finite(usize),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }
}

/// Undirected simple graph: node count plus a sorted set of edges `(u, v)`
/// with `u < v`. This is the created network; under the game's equilibrium
/// abstraction it stands in for the whole strategy vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// Wire form: `{"n": ..., "edges": [[u, v], ...]}`.
#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { n: g.n, edges: g.edges.into_iter().collect() }
    }
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self, Error> {
        Graph::from_edges(raw.n, raw.edges)
    }
}

/// Normalizes an unordered pair into the stored `(min, max)` form.
pub fn edge(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: BTreeSet::new() }
    }

    /// Builds a graph, rejecting self-loops and out-of-range endpoints.
    /// Duplicate pairs collapse to one edge.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, Error> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        if u == v {
            return Err(Error::InvalidEdge { u, v, reason: "self-loop" });
        }
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::NodeOutOfRange { node: x, n: self.n });
            }
        }
        self.edges.insert(edge(u, v));
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        if !self.edges.remove(&edge(u, v)) {
            return Err(Error::InvalidEdge { u, v, reason: "not present" });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&edge(u, v))
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == u || b == u).count()
    }

    /// Adjacency lists, each sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    fn check_node(&self, u: usize) -> Result<(), Error> {
        if u >= self.n {
            return Err(Error::NodeOutOfRange { node: u, n: self.n });
        }
        Ok(())
    }

    /// Breadth-first distances from `u`; nodes in other components are
    /// `Unreachable`.
    pub fn distances_from(&self, u: usize) -> Result<Vec<Distance>, Error> {
        self.check_node(u)?;
        let adj = self.adjacency();
        Ok(bfs(&adj, u))
    }

    /// `(unreachable count, sum of finite distances)` from `u`.
    pub fn distance_totals(&self, u: usize) -> Result<(usize, u64), Error> {
        let dist = self.distances_from(u)?;
        let mut unreachable = 0usize;
        let mut sum = 0u64;
        for d in dist {
            match d {
                Distance::Finite(d) => sum += d as u64,
                Distance::Unreachable => unreachable += 1,
            }
        }
        Ok((unreachable, sum))
    }

    /// Total distance cost of `u` as an extended cost (unreachable count
    /// first, exact finite sum second).
    pub fn total_distance(&self, u: usize) -> Result<ExtendedCost, Error> {
        let (unreachable, sum) = self.distance_totals(u)?;
        Ok(ExtendedCost::new(unreachable as u64, scalar_u(sum)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        bfs(&adj, 0).iter().all(|d| *d != Distance::Unreachable)
    }

    /// Largest finite eccentricity; `Unreachable` for disconnected graphs.
    pub fn diameter(&self) -> Distance {
        let adj = self.adjacency();
        let mut best = 0usize;
        for u in 0..self.n {
            for d in bfs(&adj, u) {
                match d {
                    Distance::Finite(d) => best = best.max(d),
                    Distance::Unreachable => return Distance::Unreachable,
                }
            }
        }
        Distance::Finite(best)
    }

    /// Stable text fingerprint: `"{n}:{u-v u-v ...}"` over the canonical form
    /// when exact canonicalization is feasible (`n <= 8`), otherwise over the
    /// labeled edge list as given.
    pub fn fingerprint(&self) -> alloc::string::String {
        let g = crate::enumerate::canonical_form(self).unwrap_or_else(|_| self.clone());
        let mut s = alloc::format!("{}:", g.n);
        let mut first = true;
        for (u, v) in g.edges() {
            if !first {
                s.push(' ');
            }
            first = false;
            s.push_str(&alloc::format!("{u}-{v}"));
        }
        s
    }
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<Distance> {
    let n = adj.len();
    let mut dist = vec![Distance::Unreachable; n];
    dist[start] = Distance::Finite(0);
    let mut frontier = vec![start];
    let mut depth = 0usize;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in &adj[u] {
                if dist[v] == Distance::Unreachable {
                    dist[v] = Distance::Finite(depth);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Standard families used throughout: star with center 0, path `0-1-..`,
/// cycle `0-1-..-0`, complete graph.
pub mod family {
    use super::Graph;

    pub fn star(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (0, v))).expect("star is simple")
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    pub fn clique(n: usize) -> Graph {
        let mut edges = alloc::vec::Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, edges).expect("clique is simple")
    }
}

#[cfg(test)]
mod tests {
    use super::family::*;
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn distances_star_center() {
        let g = star(5);
        let d = g.distances_from(0).unwrap();
        assert_eq!(d[0], Distance::Finite(0));
        for v in 1..5 {
            assert_eq!(d[v], Distance::Finite(1));
        }
    }

    #[test]
    fn distances_path_endpoint() {
        let g = path(4);
        let d = g.distances_from(0).unwrap();
        assert_eq!(
            d,
            vec![Distance::Finite(0), Distance::Finite(1), Distance::Finite(2), Distance::Finite(3)]
        );
    }

    #[test]
    fn distances_isolated_pair() {
        let g = Graph::empty(2);
        let d = g.distances_from(0).unwrap();
        assert_eq!(d[1], Distance::Unreachable);
        assert_eq!(g.distance_totals(0).unwrap(), (1, 0));
    }

    #[test]
    fn totals_match_examples() {
        assert_eq!(star(5).distance_totals(0).unwrap(), (0, 4));
        assert_eq!(path(4).distance_totals(0).unwrap(), (0, 6));
    }

    #[test]
    fn connectivity_and_diameter() {
        assert!(cycle(5).is_connected());
        assert_eq!(cycle(5).diameter(), Distance::Finite(2));
        assert_eq!(path(4).diameter(), Distance::Finite(3));
        let g = Graph::empty(2);
        assert!(!g.is_connected());
        assert_eq!(g.diameter(), Distance::Unreachable);
    }

    #[test]
    fn totals_agree_with_per_pair_distances() {
        // Independent check: Floyd-Warshall style all-pairs table.
        for g in [star(5), path(6), cycle(6), clique(4), Graph::empty(3)] {
            let n = g.n();
            let big = usize::MAX / 4;
            let mut d = vec![vec![big; n]; n];
            for u in 0..n {
                d[u][u] = 0;
            }
            for (u, v) in g.edges() {
                d[u][v] = 1;
                d[v][u] = 1;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let via = d[i][k].saturating_add(d[k][j]);
                        if via < d[i][j] {
                            d[i][j] = via;
                        }
                    }
                }
            }
            for u in 0..n {
                let (unreach, sum) = g.distance_totals(u).unwrap();
                let fw_unreach = d[u].iter().filter(|&&x| x >= big).count();
                let fw_sum: u64 = d[u].iter().filter(|&&x| x < big).map(|&x| x as u64).sum();
                assert_eq!((unreach, sum), (fw_unreach, fw_sum));
            }
        }
    }

    #[test]
    fn distance_ordering() {
        assert!(Distance::Finite(1_000_000) < Distance::Unreachable);
        assert!(Distance::Finite(2) > Distance::Finite(1));
    }
}
