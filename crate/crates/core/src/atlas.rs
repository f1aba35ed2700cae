//! Exhaustive classification of small graphs under all concepts, witness
//! search for separating examples, improving-move dynamics, and worst-case
//! price-of-anarchy surveys.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::cost::{poa, GameParams};
use crate::enumerate::{enumerate_free_trees, enumerate_graphs};
use crate::error::Error;
use crate::graph::Graph;
use crate::moves::Move;
use crate::scalar::{ratio, scalar_u, Scalar};
use crate::stability::{check_stability, improving_moves, SearchLimits, StabilityReport};

/// Stability of one concept on one graph: decided stable, decided unstable,
/// or undecided within budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Stable,
    Unstable,
    Budget,
}

impl TriState {
    pub fn letter(&self) -> char {
        match self {
            TriState::Stable => 'S',
            TriState::Unstable => 'U',
            TriState::Budget => 'B',
        }
    }
}

/// One classification row: a graph, an edge price, and the tri-state of
/// every requested concept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub n: usize,
    #[serde(with = "crate::scalar::serde_string")]
    pub alpha: Scalar,
    pub fingerprint: String,
    pub results: Vec<(Concept, TriState)>,
}

/// Which graphs a sweep ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphClass {
    All,
    Connected,
    Trees,
}

impl core::str::FromStr for GraphClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "all" => GraphClass::All,
            "connected" => GraphClass::Connected,
            "trees" => GraphClass::Trees,
            other => return Err(Error::Parse(format!("unknown graph class {other:?}"))),
        })
    }
}

/// Graphs of one class at one size, in deterministic enumeration order.
pub fn graphs_of_class(n: usize, class: GraphClass, limits: &SearchLimits) -> Result<Vec<Graph>, Error> {
    match class {
        GraphClass::All => enumerate_graphs(n, false, limits.graph_enumeration_cap),
        GraphClass::Connected => enumerate_graphs(n, true, limits.graph_enumeration_cap),
        GraphClass::Trees => enumerate_free_trees(n, limits.tree_enumeration_cap),
    }
}

/// Default edge-price grid for size `n`: `{1/2, 1, 2, 5, n/2, n, 2n}`,
/// sorted and deduplicated.
pub fn default_alpha_grid(n: usize) -> Vec<Scalar> {
    let mut grid = alloc::vec![
        ratio(1, 2),
        scalar_u(1),
        scalar_u(2),
        scalar_u(5),
        scalar_u(n as u64) / scalar_u(2),
        scalar_u(n as u64),
        scalar_u(2 * n as u64),
    ];
    grid.sort();
    grid.dedup();
    grid
}

/// The concept columns classification defaults to.
pub fn default_concepts() -> Vec<Concept> {
    alloc::vec![
        Concept::Remove,
        Concept::BilateralAdd,
        Concept::PairwiseStable,
        Concept::BilateralSwap,
        Concept::BilateralGreedy,
        Concept::Neighborhood,
        Concept::KStrong(2),
        Concept::KStrong(3),
        Concept::Strong,
    ]
}

/// Classifies one graph at one edge price.
pub fn classify_graph(
    g: &Graph,
    params: &GameParams,
    concepts: &[Concept],
    limits: &SearchLimits,
) -> Result<ClassificationRow, Error> {
    let mut results = Vec::with_capacity(concepts.len());
    for &concept in concepts {
        let report = check_stability(concept, g, params, limits)?;
        let tri = if report.budget_exhausted {
            TriState::Budget
        } else if report.stable {
            TriState::Stable
        } else {
            TriState::Unstable
        };
        results.push((concept, tri));
    }
    Ok(ClassificationRow {
        n: g.n(),
        alpha: params.alpha().clone(),
        fingerprint: g.fingerprint(),
        results,
    })
}

/// One row per (isomorphism class, edge price) for every size up to
/// `n_max`, in deterministic order: size, then enumeration order, then the
/// price grid. An empty `alphas` means the default grid per size.
pub fn classify_all(
    n_max: usize,
    alphas: &[Scalar],
    concepts: &[Concept],
    class: GraphClass,
    limits: &SearchLimits,
) -> Result<Vec<ClassificationRow>, Error> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let grid = if alphas.is_empty() { default_alpha_grid(n) } else { alphas.to_vec() };
        for g in graphs_of_class(n, class, limits)? {
            for alpha in &grid {
                let params = GameParams::new(alpha.clone())?;
                rows.push(classify_graph(&g, &params, concepts, limits)?);
            }
        }
    }
    Ok(rows)
}

/// Does stability under `stronger` imply stability under `weaker`? True
/// exactly when every move shape the weaker concept forbids is also
/// forbidden by the stronger one (coalition shapes subsume the smaller
/// ones; a neighborhood change around `u` is a coalition of `u` and the
/// new partners).
pub fn implies(stronger: Concept, weaker: Concept, n: usize) -> bool {
    let covers = |a: Concept, b: Concept| -> bool {
        // Every b-move is an a-move.
        match (a, b) {
            _ if a == b => true,
            (Concept::KStrong(ka), Concept::KStrong(kb)) => ka >= kb,
            (Concept::KStrong(k), Concept::Remove) => k >= 1,
            (Concept::KStrong(k), Concept::BilateralAdd) => k >= 2,
            (Concept::KStrong(k), Concept::BilateralSwap) => k >= 2,
            (Concept::KStrong(k), Concept::Neighborhood) => k >= n,
            (Concept::Neighborhood, Concept::Remove) => true,
            (Concept::Neighborhood, Concept::BilateralAdd) => true,
            (Concept::Neighborhood, Concept::BilateralSwap) => true,
            _ => false,
        }
    };
    weaker
        .components(n)
        .into_iter()
        .all(|w| stronger.components(n).into_iter().any(|s| covers(s, w)))
}

/// Hierarchy violations in one classification row: a concept decided stable
/// while an implied weaker concept is decided unstable.
pub fn hierarchy_violations(row: &ClassificationRow) -> Vec<String> {
    let mut out = Vec::new();
    for &(a, tri_a) in &row.results {
        if tri_a != TriState::Stable {
            continue;
        }
        for &(b, tri_b) in &row.results {
            if a != b && tri_b == TriState::Unstable && implies(a, b, row.n) {
                out.push(format!(
                    "{} stable but {} unstable on {} at alpha {}",
                    a, b, row.fingerprint, row.alpha
                ));
            }
        }
    }
    out
}

/// A separating-example query: graphs stable under every `stable_in`
/// concept and unstable under every `unstable_in` concept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessQuery {
    pub stable_in: Vec<Concept>,
    pub unstable_in: Vec<Concept>,
    pub n_max: usize,
    pub alphas: Vec<Scalar>,
    pub tree_only: bool,
}

/// Result of a witness search. "Not found within bounds" is a first-class
/// answer distinct from nonexistence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found {
        graph: Graph,
        #[serde(with = "crate::scalar::serde_string")]
        alpha: Scalar,
    },
    NotFoundWithinBounds {
        candidates_checked: u64,
        budget_hits: u64,
    },
}

/// Finds the first (size, price, graph) satisfying the query, scanning
/// sizes outward, prices ascending, graphs in enumeration order. Candidates
/// that hit a search budget are counted and skipped, never guessed.
pub fn find_witness(query: &WitnessQuery, limits: &SearchLimits) -> Result<WitnessOutcome, Error> {
    if query.stable_in.iter().any(|c| query.unstable_in.contains(c)) {
        return Err(Error::InvalidParameter("stable and unstable sets intersect".into()));
    }
    let mut alphas = query.alphas.clone();
    alphas.sort();
    alphas.dedup();
    let mut candidates = 0u64;
    let mut budget_hits = 0u64;
    for n in 1..=query.n_max {
        let class = if query.tree_only { GraphClass::Trees } else { GraphClass::All };
        let graphs = graphs_of_class(n, class, limits)?;
        for alpha in &alphas {
            let params = GameParams::new(alpha.clone())?;
            'graphs: for g in &graphs {
                candidates += 1;
                for &concept in query.stable_in.iter().chain(&query.unstable_in) {
                    let want_stable = query.stable_in.contains(&concept);
                    let report = check_stability(concept, g, &params, limits)?;
                    if report.budget_exhausted {
                        budget_hits += 1;
                        continue 'graphs;
                    }
                    if report.stable != want_stable {
                        continue 'graphs;
                    }
                }
                return Ok(WitnessOutcome::Found { graph: g.clone(), alpha: alpha.clone() });
            }
        }
    }
    Ok(WitnessOutcome::NotFoundWithinBounds { candidates_checked: candidates, budget_hits })
}

/// Outcome of the search for a graph that is a unilateral pure Nash
/// equilibrium under some edge assignment yet not pairwise stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum NeVsPsOutcome {
    Found {
        graph: Graph,
        #[serde(with = "crate::scalar::serde_string")]
        alpha: Scalar,
        /// One owning endpoint per edge, in sorted edge order.
        owners: Vec<usize>,
    },
    NotFoundWithinBounds {
        candidates_checked: u64,
        budget_hits: u64,
    },
}

/// Searches for a connected graph plus edge assignment that the unilateral
/// game accepts as a pure Nash equilibrium while the bilateral game rejects
/// as pairwise stable.
///
/// Only remove deviations can separate the two: a profitable pair-add would
/// already be a profitable unilateral add for the bigger gainer. So the
/// search keeps graphs that are add-stable but not remove-stable and forces
/// every edge's owner onto an endpoint that does not profit from dropping
/// it, then sweeps the remaining assignments through the Nash check.
pub fn find_unilateral_ne_not_ps(
    n_max: usize,
    alphas: &[Scalar],
    limits: &SearchLimits,
) -> Result<NeVsPsOutcome, Error> {
    use crate::cost::agent_cost;
    use crate::stability::{check_unilateral_ne, EdgeAssignment};

    let mut alphas = alphas.to_vec();
    alphas.sort();
    alphas.dedup();
    let mut candidates = 0u64;
    let mut budget_hits = 0u64;
    for n in 2..=n_max {
        let graphs = graphs_of_class(n, GraphClass::Connected, limits)?;
        for alpha in &alphas {
            let params = GameParams::new(alpha.clone())?;
            'graphs: for g in &graphs {
                candidates += 1;
                let add = check_stability(Concept::BilateralAdd, g, &params, limits)?;
                if !add.stable {
                    continue;
                }
                let remove = check_stability(Concept::Remove, g, &params, limits)?;
                if remove.stable {
                    continue; // pairwise stable
                }
                // Allowed owners per edge: endpoints that do not profit
                // from dropping it.
                let mut allowed: Vec<Vec<usize>> = Vec::new();
                for (u, v) in g.edges() {
                    let mut ok = Vec::new();
                    let dropped = Move::remove(u, v).apply(g)?;
                    for end in [u, v] {
                        if agent_cost(&dropped, &params, end)? >= agent_cost(g, &params, end)? {
                            ok.push(end);
                        }
                    }
                    if ok.is_empty() {
                        continue 'graphs;
                    }
                    allowed.push(ok);
                }
                let product: u64 = allowed.iter().map(|a| a.len() as u64).product();
                if product > 1 << 14 {
                    budget_hits += 1;
                    continue;
                }
                let edge_count = allowed.len();
                let mut owners = vec![0usize; edge_count];
                let mut stack = vec![0usize; edge_count + 1];
                let mut depth = 0usize;
                loop {
                    if depth == edge_count {
                        let assignment = EdgeAssignment::new(g, owners.clone())?;
                        let ne = check_unilateral_ne(g, &assignment, &params, limits)?;
                        if ne.budget_exhausted {
                            budget_hits += 1;
                            continue 'graphs;
                        }
                        if ne.stable {
                            return Ok(NeVsPsOutcome::Found {
                                graph: g.clone(),
                                alpha: alpha.clone(),
                                owners,
                            });
                        }
                        depth -= 1;
                        stack[depth] += 1;
                        continue;
                    }
                    if stack[depth] >= allowed[depth].len() {
                        if depth == 0 {
                            break;
                        }
                        stack[depth] = 0;
                        depth -= 1;
                        stack[depth] += 1;
                        continue;
                    }
                    owners[depth] = allowed[depth][stack[depth]];
                    depth += 1;
                }
            }
        }
    }
    Ok(NeVsPsOutcome::NotFoundWithinBounds { candidates_checked: candidates, budget_hits })
}

/// Move-selection policy for the dynamics runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Apply the canonically first improving move.
    FirstImprovement,
    /// Apply the move with the largest total improvement summed over its
    /// consulted agents, ties broken canonically.
    BestImprovement,
}

impl core::str::FromStr for Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "first-improvement" | "first" => Policy::FirstImprovement,
            "best-improvement" | "best" => Policy::BestImprovement,
            other => return Err(Error::Parse(format!("unknown policy {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsOutcome {
    ReachedStable,
    StepLimit,
    CycleDetected,
    BudgetExhausted,
}

/// An improving-move trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsRun {
    pub trajectory: Vec<Move>,
    pub terminal: Graph,
    pub report: StabilityReport,
    pub outcome: DynamicsOutcome,
}

/// Runs improving-move dynamics from `g0`. Every applied move strictly
/// improves all of its consulted agents; no convergence is claimed, and
/// revisiting a graph (by fingerprint) is reported as a cycle.
pub fn run_dynamics(
    g0: &Graph,
    params: &GameParams,
    concept: Concept,
    policy: Policy,
    max_steps: usize,
    limits: &SearchLimits,
) -> Result<DynamicsRun, Error> {
    let mut g = g0.clone();
    let mut trajectory = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    seen.insert(g.fingerprint());
    let mut outcome = DynamicsOutcome::StepLimit;
    for _ in 0..max_steps {
        let report = check_stability(concept, &g, params, limits)?;
        if report.budget_exhausted {
            outcome = DynamicsOutcome::BudgetExhausted;
            break;
        }
        let Some(first) = report.witness else {
            outcome = DynamicsOutcome::ReachedStable;
            break;
        };
        let chosen = match policy {
            Policy::FirstImprovement => first,
            Policy::BestImprovement => match best_improvement(&g, params, concept, limits)? {
                Some(mv) => mv,
                None => {
                    outcome = DynamicsOutcome::BudgetExhausted;
                    break;
                }
            },
        };
        g = chosen.apply(&g)?;
        trajectory.push(chosen);
        if !seen.insert(g.fingerprint()) {
            outcome = DynamicsOutcome::CycleDetected;
            break;
        }
    }
    let report = check_stability(concept, &g, params, limits)?;
    Ok(DynamicsRun { trajectory, terminal: g, report, outcome })
}

/// The improving move with the largest total consulted-agent gain, or None
/// when a budget prevents listing all moves.
fn best_improvement(
    g: &Graph,
    params: &GameParams,
    concept: Concept,
    limits: &SearchLimits,
) -> Result<Option<Move>, Error> {
    use crate::cost::{agent_cost, CostDelta};
    let mut best: Option<(CostDelta, Move)> = None;
    for component in concept.components(g.n()) {
        let moves = match improving_moves(component, g, params, limits) {
            Ok(moves) => moves,
            Err(Error::SearchBudgetExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        for mv in moves {
            let after = mv.apply(g)?;
            let mut total = CostDelta { unreachable: 0, finite: crate::scalar::scalar(0) };
            for agent in mv.consulted() {
                let delta = CostDelta::between(
                    &agent_cost(&after, params, agent)?,
                    &agent_cost(g, params, agent)?,
                );
                total.unreachable += delta.unreachable;
                total.finite += delta.finite;
            }
            let better = match &best {
                None => true,
                Some((bt, bm)) => {
                    (&total, mv.key()) < (bt, bm.key())
                }
            };
            if better {
                best = Some((total, mv));
            }
        }
    }
    Ok(best.map(|(_, mv)| mv))
}

/// One survey line: how many graphs of the class are stable at this price,
/// and the worst social-cost ratio among them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    #[serde(with = "crate::scalar::serde_string")]
    pub alpha: Scalar,
    pub stable_count: u64,
    pub budget_count: u64,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::scalar::serde_option_string"
    )]
    pub max_poa: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub argmax_fingerprint: Option<String>,
}

/// Worst-case price of anarchy over the stable set at size `n`, per edge
/// price. Only connected graphs are surveyed (the ratio is defined there).
pub fn survey_poa(
    concept: Concept,
    n: usize,
    alphas: &[Scalar],
    tree_only: bool,
    limits: &SearchLimits,
) -> Result<Vec<SurveyRow>, Error> {
    let class = if tree_only { GraphClass::Trees } else { GraphClass::Connected };
    let graphs = graphs_of_class(n, class, limits)?;
    let mut rows = Vec::new();
    for alpha in alphas {
        let params = GameParams::new(alpha.clone())?;
        let mut stable_count = 0u64;
        let mut budget_count = 0u64;
        let mut max_poa: Option<Scalar> = None;
        let mut argmax: Option<String> = None;
        for g in &graphs {
            let report = check_stability(concept, g, &params, limits)?;
            if report.budget_exhausted {
                budget_count += 1;
                continue;
            }
            if !report.stable {
                continue;
            }
            stable_count += 1;
            let ratio = poa(g, &params)?;
            if max_poa.as_ref().is_none_or(|m| ratio > *m) {
                max_poa = Some(ratio);
                argmax = Some(g.fingerprint());
            }
        }
        rows.push(SurveyRow {
            alpha: alpha.clone(),
            stable_count,
            budget_count,
            max_poa,
            argmax_fingerprint: argmax,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::family::*;
    use crate::scalar::scalar;

    fn p(alpha: i64) -> GameParams {
        GameParams::from_int(alpha)
    }

    fn limits() -> SearchLimits {
        SearchLimits::default()
    }

    #[test]
    fn triangle_row_at_alpha_one() {
        let row = classify_graph(
            &cycle(3),
            &p(1),
            &[Concept::Remove, Concept::BilateralAdd],
            &limits(),
        )
        .unwrap();
        // Removing an edge trades alpha = 1 against +1 distance: a tie, so
        // remove-stable; the triangle is complete, so add-stable.
        assert_eq!(row.results[0].1, TriState::Stable);
        assert_eq!(row.results[1].1, TriState::Stable);
    }

    #[test]
    fn path4_row_at_alpha_one() {
        let row = classify_graph(
            &path(4),
            &p(1),
            &[Concept::Remove, Concept::BilateralAdd],
            &limits(),
        )
        .unwrap();
        assert_eq!(row.results[0].1, TriState::Stable);
        assert_eq!(row.results[1].1, TriState::Unstable);
    }

    #[test]
    fn implication_relation() {
        assert!(implies(Concept::Strong, Concept::KStrong(3), 6));
        assert!(implies(Concept::KStrong(3), Concept::KStrong(2), 6));
        assert!(implies(Concept::KStrong(2), Concept::BilateralGreedy, 6));
        assert!(implies(Concept::Neighborhood, Concept::BilateralGreedy, 6));
        assert!(implies(Concept::BilateralGreedy, Concept::PairwiseStable, 6));
        assert!(implies(Concept::PairwiseStable, Concept::Remove, 6));
        assert!(implies(Concept::Strong, Concept::Neighborhood, 6));
        assert!(!implies(Concept::Remove, Concept::BilateralAdd, 6));
        assert!(!implies(Concept::KStrong(2), Concept::Neighborhood, 6));
        assert!(!implies(Concept::BilateralSwap, Concept::Remove, 6));
    }

    #[test]
    fn no_hierarchy_violations_on_tiny_atlas() {
        let rows = classify_all(
            4,
            &[scalar(1), scalar(5)],
            &default_concepts(),
            GraphClass::All,
            &limits(),
        )
        .unwrap();
        for row in &rows {
            assert!(hierarchy_violations(row).is_empty(), "{row:?}");
        }
    }

    #[test]
    fn witness_examples() {
        // Remove-stable but not add-stable: the 4-path at alpha 1.
        let query = WitnessQuery {
            stable_in: alloc::vec![Concept::Remove],
            unstable_in: alloc::vec![Concept::BilateralAdd],
            n_max: 4,
            alphas: alloc::vec![scalar(1)],
            tree_only: true,
        };
        match find_witness(&query, &limits()).unwrap() {
            WitnessOutcome::Found { graph, alpha } => {
                assert_eq!(alpha, scalar(1));
                assert_eq!(graph.fingerprint(), path(4).fingerprint());
            }
            other => panic!("expected a witness, got {other:?}"),
        }

        // Add-stable but not remove-stable: the triangle at alpha 5.
        let query = WitnessQuery {
            stable_in: alloc::vec![Concept::BilateralAdd],
            unstable_in: alloc::vec![Concept::Remove],
            n_max: 3,
            alphas: alloc::vec![scalar(5)],
            tree_only: false,
        };
        match find_witness(&query, &limits()).unwrap() {
            WitnessOutcome::Found { graph, .. } => {
                assert_eq!(graph.fingerprint(), cycle(3).fingerprint());
            }
            other => panic!("expected a witness, got {other:?}"),
        }
    }

    #[test]
    fn witness_not_found_is_reported() {
        let query = WitnessQuery {
            stable_in: alloc::vec![Concept::BilateralAdd],
            unstable_in: alloc::vec![Concept::Remove],
            n_max: 2,
            alphas: alloc::vec![scalar(1)],
            tree_only: false,
        };
        assert!(matches!(
            find_witness(&query, &limits()).unwrap(),
            WitnessOutcome::NotFoundWithinBounds { .. }
        ));
    }

    #[test]
    fn dynamics_on_cheap_path_terminates_adding() {
        let run = run_dynamics(
            &path(4),
            &GameParams::new(ratio(1, 2)).unwrap(),
            Concept::BilateralAdd,
            Policy::FirstImprovement,
            6,
            &limits(),
        )
        .unwrap();
        assert_eq!(run.outcome, DynamicsOutcome::ReachedStable);
        assert!(run.report.stable);
        assert!(run.trajectory.len() <= 6);
        assert!(run.trajectory.iter().all(|m| matches!(m, Move::Add { .. })));
    }

    #[test]
    fn dynamics_on_stable_star_is_empty() {
        let run = run_dynamics(
            &star(6),
            &p(2),
            Concept::Strong,
            Policy::FirstImprovement,
            10,
            &limits(),
        )
        .unwrap();
        assert_eq!(run.outcome, DynamicsOutcome::ReachedStable);
        assert!(run.trajectory.is_empty());
    }

    #[test]
    fn dynamics_on_expensive_cycle_removes() {
        let run = run_dynamics(
            &cycle(6),
            &p(7),
            Concept::Remove,
            Policy::BestImprovement,
            10,
            &limits(),
        )
        .unwrap();
        assert!(!run.trajectory.is_empty());
        assert!(matches!(run.trajectory[0], Move::Remove { .. }));
    }

    #[test]
    fn ne_vs_ps_separation_is_found_and_reverifies() {
        // A five-node graph separates the two models: some ownership makes
        // it a unilateral Nash equilibrium even though one agent profits
        // from severing an edge she does not own. The witness must
        // re-verify through the checkers.
        use crate::stability::{check_unilateral_ne, EdgeAssignment};
        let outcome =
            find_unilateral_ne_not_ps(5, &[scalar(1), scalar(2), scalar(3)], &limits()).unwrap();
        let NeVsPsOutcome::Found { graph, alpha, owners } = outcome else {
            panic!("a separating witness exists at five nodes: {outcome:?}");
        };
        assert_eq!(graph.n(), 5);
        let p = GameParams::new(alpha).unwrap();
        let f = EdgeAssignment::new(&graph, owners).unwrap();
        assert!(check_unilateral_ne(&graph, &f, &p, &limits()).unwrap().stable);
        assert!(
            !check_stability(Concept::PairwiseStable, &graph, &p, &limits()).unwrap().stable
        );

        // Below that size the search reports not-found honestly.
        let smaller =
            find_unilateral_ne_not_ps(4, &[scalar(1), scalar(2), scalar(3)], &limits()).unwrap();
        assert!(matches!(smaller, NeVsPsOutcome::NotFoundWithinBounds { budget_hits: 0, .. }));
    }

    #[test]
    fn survey_maxima_shrink_with_more_cooperation() {
        // On trees at a fixed size and price, the worst ratio can only drop
        // as coalitions grow. Pairwise vs greedy at size 8; the full chain
        // at size 6, where the strongest check is decidable by default.
        let alpha = [scalar(4)];
        let ps = survey_poa(Concept::PairwiseStable, 8, &alpha, true, &limits()).unwrap();
        let bge = survey_poa(Concept::BilateralGreedy, 8, &alpha, true, &limits()).unwrap();
        assert!(ps[0].max_poa >= bge[0].max_poa);

        let order = [
            Concept::PairwiseStable,
            Concept::BilateralGreedy,
            Concept::KStrong(3),
            Concept::Strong,
        ];
        let mut last: Option<Scalar> = None;
        for concept in order {
            let rows = survey_poa(concept, 6, &alpha, true, &limits()).unwrap();
            assert_eq!(rows[0].budget_count, 0);
            let max = rows[0].max_poa.clone().expect("stars are always stable");
            if let Some(prev) = &last {
                assert!(max <= *prev, "{concept} worst ratio grew: {max} > {prev}");
            }
            last = Some(max);
        }
    }

    #[test]
    fn survey_is_self_consistent() {
        let rows =
            survey_poa(Concept::Remove, 6, &[scalar(2)], true, &limits()).unwrap();
        let row = &rows[0];
        // Recompute by direct scan.
        let mut expected: Option<Scalar> = None;
        let mut count = 0u64;
        for t in enumerate_free_trees(6, 10).unwrap() {
            let report = check_stability(Concept::Remove, &t, &p(2), &limits()).unwrap();
            if report.stable {
                count += 1;
                let r = poa(&t, &p(2)).unwrap();
                if expected.as_ref().is_none_or(|m| r > *m) {
                    expected = Some(r);
                }
            }
        }
        assert_eq!(row.stable_count, count);
        assert_eq!(row.max_poa, expected);
    }

    use crate::scalar::ratio;
}
