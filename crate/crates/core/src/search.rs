//! Internal bitset engine for the exhaustive checkers.
//!
//! Costs are compared as `(unreachable, alpha_num * degree + alpha_den *
//! distance_sum)` with the exact rational `alpha = alpha_num / alpha_den`
//! scaled to integers, so the hot loop never allocates. Candidate moves are
//! applied by toggling adjacency bits and undone the same way.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::cost::GameParams;
use crate::error::Error;
use crate::graph::Graph;

/// Scaled lexicographic agent cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct AgentCost {
    pub unreachable: u32,
    pub scaled: i128,
}

pub(crate) struct Engine {
    pub n: usize,
    words: usize,
    adj: Vec<u64>,
    pub alpha_num: i128,
    pub alpha_den: i128,
    pub base: Vec<AgentCost>,
    /// Whether the node could ever strictly improve on its base cost in any
    /// simple graph on `n` nodes (degree/distance lower bound). Nodes at the
    /// bound can be excluded from every consulted role.
    pub can_improve: Vec<bool>,
    visited: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
}

impl Engine {
    pub fn new(g: &Graph, params: &GameParams) -> Result<Self, Error> {
        let n = g.n();
        let words = n.div_ceil(64).max(1);
        let (alpha_num, alpha_den) = scaled_alpha(params)?;
        let mut adj = vec![0u64; n * words];
        for (u, v) in g.edges() {
            adj[u * words + v / 64] |= 1 << (v % 64);
            adj[v * words + u / 64] |= 1 << (u % 64);
        }
        let mut engine = Engine {
            n,
            words,
            adj,
            alpha_num,
            alpha_den,
            base: Vec::new(),
            can_improve: Vec::new(),
            visited: vec![0; words],
            frontier: vec![0; words],
            next: vec![0; words],
        };
        engine.base = (0..n).map(|u| engine.cost(u)).collect();
        engine.can_improve = (0..n)
            .map(|u| {
                let base = engine.base[u];
                if n < 2 {
                    return false;
                }
                if base.unreachable > 0 {
                    return true;
                }
                // In any simple graph where u reaches everyone, her distance
                // sum is at least 2(n-1) - degree, so her scaled cost is at
                // least this bound over degrees 1..n-1.
                let (p, q, nm1) = (alpha_num, alpha_den, (n - 1) as i128);
                let at = |deg: i128| p * deg + q * (2 * nm1 - deg);
                let lower = at(1).min(at(nm1));
                base.scaled > lower
            })
            .collect();
        Ok(engine)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] ^= 1 << (v % 64);
        self.adj[v * self.words + u / 64] ^= 1 << (u % 64);
    }

    pub fn degree(&self, u: usize) -> u32 {
        self.adj[u * self.words..(u + 1) * self.words].iter().map(|w| w.count_ones()).sum()
    }

    /// Cost of `u` in the current (toggled) graph.
    pub fn cost(&mut self, u: usize) -> AgentCost {
        let (unreachable, sum) = self.distance_profile(u);
        AgentCost {
            unreachable,
            scaled: self.alpha_num * self.degree(u) as i128 + self.alpha_den * sum as i128,
        }
    }

    /// `(unreachable count, finite distance sum)` of `u` in the current
    /// (toggled) graph.
    pub fn distance_profile(&mut self, u: usize) -> (u32, u64) {
        let words = self.words;
        for w in 0..words {
            self.visited[w] = 0;
            self.frontier[w] = 0;
        }
        self.visited[u / 64] |= 1 << (u % 64);
        self.frontier[u / 64] |= 1 << (u % 64);
        let mut sum = 0u64;
        let mut reached = 0u32;
        let mut depth = 0u64;
        loop {
            depth += 1;
            for w in 0..words {
                self.next[w] = 0;
            }
            for w in 0..words {
                let mut bits = self.frontier[w];
                while bits != 0 {
                    let v = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let row = &self.adj[v * words..(v + 1) * words];
                    for (x, r) in self.next.iter_mut().zip(row) {
                        *x |= r;
                    }
                }
            }
            let mut count = 0u32;
            for w in 0..words {
                self.next[w] &= !self.visited[w];
                self.visited[w] |= self.next[w];
                count += self.next[w].count_ones();
            }
            if count == 0 {
                break;
            }
            sum += depth * count as u64;
            reached += count;
            core::mem::swap(&mut self.frontier, &mut self.next);
        }
        let unreachable = (self.n as u32 - 1).saturating_sub(reached);
        (unreachable, sum)
    }

    /// Does `u` strictly improve on her base cost in the current graph?
    /// Prunes with the distance-sum lower bound before running a BFS.
    pub fn improves(&mut self, u: usize) -> bool {
        let base = self.base[u];
        if base.unreachable == 0 {
            let lb = self.alpha_num * self.degree(u) as i128
                + self.alpha_den * (self.n.saturating_sub(1)) as i128;
            if lb >= base.scaled {
                return false;
            }
        }
        self.cost(u) < base
    }
}

fn scaled_alpha(params: &GameParams) -> Result<(i128, i128), Error> {
    let limit = 1i128 << 62;
    let p = params.alpha().numer().to_i128().filter(|x| x.abs() < limit);
    let q = params.alpha().denom().to_i128().filter(|x| x.abs() < limit);
    match (p, q) {
        (Some(p), Some(q)) if q > 0 => Ok((p, q)),
        _ => Err(Error::InvalidParameter(format!(
            "alpha {} is too large for exhaustive search",
            params.alpha()
        ))),
    }
}
