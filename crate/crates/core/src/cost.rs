//! Exact cost semantics of the bilateral network creation game.
//!
//! An agent pays `alpha` per incident edge plus her total hop distance.
//! Disconnection is ranked lexicographically: an agent first prefers to
//! reach more agents, and only then compares exact finite cost. This encodes
//! the usual "huge constant" distance for unreachable pairs without ever
//! forming the huge number; `ExtendedCost::literal` recovers the literal
//! sentinel form for cross-checking.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::Graph;
use crate::moves::Move;
use crate::scalar::{scalar, scalar_u, Scalar};

/// Lexicographic cost value: number of unreachable agents first, exact
/// finite cost second.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtendedCost {
    pub unreachable: u64,
    #[serde(with = "crate::scalar::serde_string")]
    pub finite: Scalar,
}

impl ExtendedCost {
    pub fn new(unreachable: u64, finite: Scalar) -> Self {
        ExtendedCost { unreachable, finite }
    }

    pub fn zero() -> Self {
        ExtendedCost::new(0, Scalar::zero())
    }

    /// Collapses to a single rational using the literal sentinel
    /// `M = alpha * n^3 + 1` for each unreachable agent. Ordering of literal
    /// values agrees with the lexicographic ordering at desk scale; this is
    /// exercised by the cross-mode sweep in the tests.
    pub fn literal(&self, params: &GameParams, n: usize) -> Scalar {
        let m = params.alpha.clone() * scalar_u((n as u64).pow(3)) + Scalar::one();
        m * scalar_u(self.unreachable) + self.finite.clone()
    }
}

/// Signed difference of two extended costs; strict improvement means
/// lexicographically negative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CostDelta {
    pub unreachable: i64,
    #[serde(with = "crate::scalar::serde_string")]
    pub finite: Scalar,
}

impl CostDelta {
    pub fn between(after: &ExtendedCost, before: &ExtendedCost) -> Self {
        CostDelta {
            unreachable: after.unreachable as i64 - before.unreachable as i64,
            finite: after.finite.clone() - before.finite.clone(),
        }
    }

    pub fn is_strict_improvement(&self) -> bool {
        self.unreachable < 0 || (self.unreachable == 0 && self.finite.is_negative())
    }
}

/// Game parameters: the edge price `alpha > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameParams {
    #[serde(with = "crate::scalar::serde_string")]
    alpha: Scalar,
}

impl GameParams {
    pub fn new(alpha: Scalar) -> Result<Self, Error> {
        if !alpha.is_positive() {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        Ok(GameParams { alpha })
    }

    pub fn from_int(alpha: i64) -> Self {
        GameParams::new(scalar(alpha)).expect("positive")
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }
}

/// Cost of agent `u`: `alpha * degree(u)` plus total distance. Degree stands
/// in for the strategy size under the graph abstraction.
pub fn agent_cost(g: &Graph, params: &GameParams, u: usize) -> Result<ExtendedCost, Error> {
    let (unreachable, sum) = g.distance_totals(u)?;
    let buy = params.alpha.clone() * scalar_u(g.degree(u) as u64);
    Ok(ExtendedCost::new(unreachable as u64, buy + scalar_u(sum)))
}

/// Component-wise sum of all agent costs. The buying component equals
/// `2 * alpha * |E|` since both endpoints pay.
pub fn social_cost(g: &Graph, params: &GameParams) -> ExtendedCost {
    let mut unreachable = 0u64;
    let mut finite = Scalar::zero();
    for u in 0..g.n() {
        let c = agent_cost(g, params, u).expect("node in range");
        unreachable += c.unreachable;
        finite += c.finite;
    }
    ExtendedCost::new(unreachable, finite)
}

/// Social optimum cost: `2(n-1)(alpha + n - 1)` for `alpha >= 1` (star) and
/// `n(n-1)(1 + alpha)` for `alpha < 1` (clique); the two branches coincide
/// at `alpha = 1`.
pub fn social_optimum_cost(n: usize, params: &GameParams) -> Scalar {
    let n_s = scalar_u(n as u64);
    let nm1 = scalar_u(n.saturating_sub(1) as u64);
    if n == 0 {
        return Scalar::zero();
    }
    if params.alpha >= Scalar::one() {
        scalar(2) * nm1.clone() * (params.alpha.clone() + nm1)
    } else {
        n_s * nm1 * (Scalar::one() + params.alpha.clone())
    }
}

/// Social cost ratio against the optimum. Defined only for connected graphs
/// with at least two nodes; equals 1 exactly on a social optimum.
pub fn poa(g: &Graph, params: &GameParams) -> Result<Scalar, Error> {
    if g.n() < 2 {
        return Err(Error::TooFewNodes { min: 2, n: g.n() });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let cost = social_cost(g, params);
    debug_assert_eq!(cost.unreachable, 0);
    Ok(cost.finite / social_optimum_cost(g.n(), params))
}

/// Cost change for agent `u` when move `m` is applied to `g`.
pub fn cost_delta(g: &Graph, params: &GameParams, u: usize, m: &Move) -> Result<CostDelta, Error> {
    let after_graph = m.apply(g)?;
    let before = agent_cost(g, params, u)?;
    let after = agent_cost(&after_graph, params, u)?;
    Ok(CostDelta::between(&after, &before))
}

/// All agent costs at once.
pub fn agent_costs(g: &Graph, params: &GameParams) -> Vec<ExtendedCost> {
    (0..g.n()).map(|u| agent_cost(g, params, u).expect("node in range")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::family::*;
    use crate::moves::Move;
    use crate::scalar::ratio;

    fn p(alpha: i64) -> GameParams {
        GameParams::from_int(alpha)
    }

    #[test]
    fn agent_cost_star4() {
        let g = star(4);
        assert_eq!(agent_cost(&g, &p(2), 0).unwrap(), ExtendedCost::new(0, scalar(9)));
        assert_eq!(agent_cost(&g, &p(2), 1).unwrap(), ExtendedCost::new(0, scalar(7)));
    }

    #[test]
    fn agent_cost_single_node() {
        let g = Graph::empty(1);
        assert_eq!(agent_cost(&g, &p(7), 0).unwrap(), ExtendedCost::zero());
    }

    #[test]
    fn social_cost_examples() {
        assert_eq!(social_cost(&path(3), &p(2)), ExtendedCost::new(0, scalar(16)));
        assert_eq!(social_cost(&clique(3), &p(1)), ExtendedCost::new(0, scalar(12)));
        // star(5) at alpha = 1: buy 2*1*4 = 8, distance 4 + 4*7 = 32.
        assert_eq!(social_cost(&star(5), &p(1)), ExtendedCost::new(0, scalar(40)));
    }

    #[test]
    fn social_cost_distance_component_is_symmetric() {
        for g in [star(5), path(5), cycle(6), clique(4)] {
            let forward: u64 = (0..g.n()).map(|u| g.distance_totals(u).unwrap().1).sum();
            let mut transpose = 0u64;
            for v in 0..g.n() {
                for (u, d) in g.distances_from(v).unwrap().into_iter().enumerate() {
                    if u != v {
                        transpose += d.finite().unwrap() as u64;
                    }
                }
            }
            assert_eq!(forward, transpose);
            let params = p(3);
            let buy = scalar(2) * params.alpha().clone() * scalar_u(g.edge_count() as u64);
            assert_eq!(social_cost(&g, &params).finite, buy + scalar_u(forward));
        }
    }

    #[test]
    fn social_optimum_examples() {
        assert_eq!(social_optimum_cost(5, &p(3)), scalar(56));
        assert_eq!(social_optimum_cost(3, &GameParams::new(ratio(1, 2)).unwrap()), scalar(9));
        assert_eq!(social_optimum_cost(1, &p(9)), scalar(0));
    }

    #[test]
    fn optimum_branches_agree_at_alpha_one() {
        for n in 1..=100usize {
            let star_branch = scalar(2) * scalar_u((n - 1) as u64) * (scalar(1) + scalar_u((n - 1) as u64));
            let clique_branch = scalar_u(n as u64) * scalar_u((n - 1) as u64) * scalar(2);
            assert_eq!(star_branch, clique_branch, "n = {n}");
        }
    }

    #[test]
    fn poa_examples() {
        assert_eq!(poa(&star(6), &p(2)).unwrap(), scalar(1));
        assert_eq!(poa(&path(4), &p(1)).unwrap(), ratio(13, 12));
        assert_eq!(poa(&clique(4), &GameParams::new(ratio(1, 2)).unwrap()).unwrap(), scalar(1));
        assert!(poa(&Graph::empty(2), &p(1)).is_err());
        assert!(poa(&Graph::empty(1), &p(1)).is_err());
    }

    #[test]
    fn poa_at_least_one_on_small_graphs() {
        for g in [star(4), path(5), cycle(5), clique(5), cycle(6)] {
            for alpha in [ratio(1, 2), scalar(1), scalar(2), scalar(5)] {
                let params = GameParams::new(alpha).unwrap();
                assert!(poa(&g, &params).unwrap() >= scalar(1));
            }
        }
    }

    #[test]
    fn cost_delta_examples() {
        // path(3): endpoint buys the closing edge at alpha = 1, exactly non-strict.
        let d = cost_delta(&path(3), &p(1), 0, &Move::add(0, 2)).unwrap();
        assert_eq!(d, CostDelta { unreachable: 0, finite: scalar(0) });
        assert!(!d.is_strict_improvement());

        let d = cost_delta(&cycle(3), &p(5), 0, &Move::remove(0, 1)).unwrap();
        assert_eq!(d, CostDelta { unreachable: 0, finite: scalar(-4) });
        assert!(d.is_strict_improvement());

        let d = cost_delta(&path(2), &p(1), 0, &Move::remove(0, 1)).unwrap();
        assert_eq!(d, CostDelta { unreachable: 1, finite: scalar(-2) });
        assert!(!d.is_strict_improvement());
    }

    #[test]
    fn literal_sentinel_ordering_agrees() {
        // Cross-mode sweep: the lexicographic ordering and the literal
        // M = alpha * n^3 + 1 ordering must agree on every pair of agent
        // costs arising on small graphs.
        use crate::enumerate::enumerate_graphs;
        for n in 1..=6usize {
            let graphs = enumerate_graphs(n, false, 6).unwrap();
            for alpha in [ratio(1, 2), scalar(1), scalar(2), scalar(5)] {
                let params = GameParams::new(alpha).unwrap();
                for g in &graphs {
                    let costs = agent_costs(g, &params);
                    for a in &costs {
                        for b in &costs {
                            let lex = a.cmp(b);
                            let lit = a.literal(&params, n).cmp(&b.literal(&params, n));
                            assert_eq!(lex, lit, "n={n} a={a:?} b={b:?}");
                        }
                    }
                }
            }
        }
    }
}
