//! Exhaustive improving-move search and stability checkers for every
//! solution concept, plus the unilateral-game checks used to compare the
//! two edge-formation models.
//!
//! Candidates are enumerated in the canonical move order (see
//! [`Move::key`]); the first improving move found is therefore the
//! canonically smallest witness and repeated runs return identical reports.

use alloc::string::String;
use alloc::string::ToString;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::cost::{agent_cost, CostDelta, GameParams};
use crate::error::Error;
use crate::graph::Graph;
use crate::moves::Move;
use crate::search::Engine;

/// Budgets for the exponential searches. Caps are on candidate counts, so a
/// hit budget is reported deterministically and never turns into a false
/// "stable".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// A neighborhood-change center is searched only when its candidate
    /// space `2^(deg) * 2^(n-1-deg) = 2^(n-1)` fits this cap.
    pub bne_center_cap: u64,
    /// Maximum coalition-move candidates examined per k-strong check. The
    /// default keeps every full-coalition check on up to 6 nodes decidable
    /// (at most `2^21` candidates exist there) while larger instances stop
    /// honestly at the cap.
    pub coalition_cap: u64,
    /// Maximum strategies per agent in the unilateral Nash check
    /// (each agent has `2^(n-1)` of them).
    pub ne_strategy_cap: u64,
    /// Node caps for graph and free-tree enumeration.
    pub graph_enumeration_cap: usize,
    pub tree_enumeration_cap: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            bne_center_cap: 1 << 24,
            coalition_cap: 1 << 22,
            ne_strategy_cap: 1 << 20,
            graph_enumeration_cap: 8,
            tree_enumeration_cap: 10,
        }
    }
}

/// Outcome of a stability check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Check id (`re`, `bae`, ..., `uni-ne`).
    pub concept: String,
    pub stable: bool,
    /// Canonically smallest improving move, when unstable.
    pub witness: Option<Move>,
    pub moves_examined: u64,
    /// True when the search stopped at its budget before any witness was
    /// found; `stable` is then false but instability is not claimed either.
    pub budget_exhausted: bool,
}

impl StabilityReport {
    fn decided(concept: String, witness: Option<Move>, examined: u64) -> Self {
        StabilityReport {
            concept,
            stable: witness.is_none(),
            witness,
            moves_examined: examined,
            budget_exhausted: false,
        }
    }

    fn budget(concept: String, examined: u64) -> Self {
        StabilityReport {
            concept,
            stable: false,
            witness: None,
            moves_examined: examined,
            budget_exhausted: true,
        }
    }
}

struct Searcher<'a> {
    engine: Engine,
    on_improving: &'a mut dyn FnMut(Move) -> bool,
    examined: u64,
    cap: u64,
    bne_center_cap: u64,
    budget_exhausted: bool,
}

impl<'a> Searcher<'a> {
    /// Records one evaluated candidate; false once the budget is blown.
    fn register(&mut self) -> bool {
        self.examined += 1;
        if self.examined > self.cap {
            self.budget_exhausted = true;
            return false;
        }
        true
    }

    fn emit(&mut self, mv: Move) -> bool {
        (self.on_improving)(mv)
    }

    fn search_remove(&mut self, g: &Graph) -> bool {
        for (a, b) in g.edges() {
            self.engine.toggle_edge(a, b);
            let improved = [self.engine.improves(a), self.engine.improves(b)];
            self.engine.toggle_edge(a, b);
            for (idx, (u, v)) in [(a, b), (b, a)].into_iter().enumerate() {
                if !self.register() {
                    return false;
                }
                if improved[idx] && !self.emit(Move::Remove { u, v }) {
                    return false;
                }
            }
        }
        true
    }

    fn search_add(&mut self, g: &Graph) -> bool {
        let n = g.n();
        for a in 0..n {
            for b in (a + 1)..n {
                if g.has_edge(a, b) {
                    continue;
                }
                if !self.register() {
                    return false;
                }
                if !(self.engine.can_improve[a] && self.engine.can_improve[b]) {
                    continue;
                }
                self.engine.toggle_edge(a, b);
                let ok = self.engine.improves(a) && self.engine.improves(b);
                self.engine.toggle_edge(a, b);
                if ok && !self.emit(Move::add(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    fn search_swap(&mut self, g: &Graph) -> bool {
        let n = g.n();
        let mut candidates = Vec::new();
        for (a, b) in g.edges() {
            for (keeper, dropped) in [(a, b), (b, a)] {
                if !self.engine.can_improve[keeper] {
                    continue;
                }
                for added in 0..n {
                    if added == keeper || added == dropped || g.has_edge(keeper, added) {
                        continue;
                    }
                    if !self.engine.can_improve[added] {
                        continue;
                    }
                    candidates.push(Move::swap(keeper, dropped, added));
                }
            }
        }
        candidates.sort_by_key(|mv| mv.key());
        for mv in candidates {
            let Move::Swap { keeper, dropped, added } = mv else { unreachable!() };
            if !self.register() {
                return false;
            }
            self.engine.toggle_edge(keeper, dropped);
            self.engine.toggle_edge(keeper, added);
            let ok = self.engine.improves(keeper) && self.engine.improves(added);
            self.engine.toggle_edge(keeper, added);
            self.engine.toggle_edge(keeper, dropped);
            if ok && !self.emit(mv) {
                return false;
            }
        }
        true
    }

    fn search_neighborhood(&mut self, g: &Graph) -> bool {
        let n = g.n();
        if n >= 2 {
            let bits = n - 1;
            if bits >= 63 || (1u64 << bits) > self.bne_center_cap {
                self.budget_exhausted = true;
                return false;
            }
        }
        let adjacency = g.adjacency();
        for center in 0..n {
            if !self.engine.can_improve[center] {
                continue;
            }
            let incident = &adjacency[center];
            let others: Vec<usize> = (0..n)
                .filter(|&v| v != center && !g.has_edge(center, v) && self.engine.can_improve[v])
                .collect();
            let mut removed = Vec::new();
            let mut added = Vec::new();
            if !self.bne_removed_rec(center, incident, &others, 0, &mut removed, &mut added) {
                return false;
            }
        }
        true
    }

    fn bne_removed_rec(
        &mut self,
        center: usize,
        incident: &[usize],
        others: &[usize],
        start: usize,
        removed: &mut Vec<usize>,
        added: &mut Vec<usize>,
    ) -> bool {
        if !self.bne_added_rec(center, others, 0, removed, added) {
            return false;
        }
        for i in start..incident.len() {
            let v = incident[i];
            removed.push(v);
            self.engine.toggle_edge(center, v);
            let go = self.bne_removed_rec(center, incident, others, i + 1, removed, added);
            self.engine.toggle_edge(center, v);
            removed.pop();
            if !go {
                return false;
            }
        }
        true
    }

    fn bne_added_rec(
        &mut self,
        center: usize,
        others: &[usize],
        start: usize,
        removed: &mut Vec<usize>,
        added: &mut Vec<usize>,
    ) -> bool {
        if !(removed.is_empty() && added.is_empty()) {
            if !self.register() {
                return false;
            }
            let mut ok = self.engine.improves(center);
            if ok {
                for &a in added.iter() {
                    if !self.engine.improves(a) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && !self.emit(Move::neighborhood(center, removed.clone(), added.clone())) {
                return false;
            }
        }
        for i in start..others.len() {
            let v = others[i];
            added.push(v);
            self.engine.toggle_edge(center, v);
            let go = self.bne_added_rec(center, others, i + 1, removed, added);
            self.engine.toggle_edge(center, v);
            added.pop();
            if !go {
                return false;
            }
        }
        true
    }

    fn search_coalition(&mut self, g: &Graph, k: usize) -> bool {
        let n = g.n();
        let k = k.clamp(1, n.max(1));
        let edges = g.edge_vec();
        let mut members = Vec::new();
        self.coalition_members_rec(g, &edges, k, 0, &mut members)
    }

    fn coalition_members_rec(
        &mut self,
        g: &Graph,
        edges: &[(usize, usize)],
        k: usize,
        start: usize,
        members: &mut Vec<usize>,
    ) -> bool {
        for v in start..g.n() {
            if !self.engine.can_improve[v] {
                continue;
            }
            members.push(v);
            let mut go = self.coalition_changes(g, edges, members);
            if go && members.len() < k {
                go = self.coalition_members_rec(g, edges, k, v + 1, members);
            }
            members.pop();
            if !go {
                return false;
            }
        }
        true
    }

    fn coalition_changes(&mut self, g: &Graph, edges: &[(usize, usize)], members: &[usize]) -> bool {
        let removable: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(u, v)| members.contains(&u) || members.contains(&v))
            .collect();
        let mut addable = Vec::new();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if !g.has_edge(u, v) {
                    addable.push((u, v));
                }
            }
        }
        addable.sort_unstable();
        let mut removed = Vec::new();
        let mut added = Vec::new();
        self.coalition_removed_rec(members, &removable, &addable, 0, &mut removed, &mut added)
    }

    fn coalition_removed_rec(
        &mut self,
        members: &[usize],
        removable: &[(usize, usize)],
        addable: &[(usize, usize)],
        start: usize,
        removed: &mut Vec<(usize, usize)>,
        added: &mut Vec<(usize, usize)>,
    ) -> bool {
        if !self.coalition_added_rec(members, addable, 0, removed, added) {
            return false;
        }
        for i in start..removable.len() {
            let (u, v) = removable[i];
            removed.push((u, v));
            self.engine.toggle_edge(u, v);
            let go = self.coalition_removed_rec(members, removable, addable, i + 1, removed, added);
            self.engine.toggle_edge(u, v);
            removed.pop();
            if !go {
                return false;
            }
        }
        true
    }

    fn coalition_added_rec(
        &mut self,
        members: &[usize],
        addable: &[(usize, usize)],
        start: usize,
        removed: &mut Vec<(usize, usize)>,
        added: &mut Vec<(usize, usize)>,
    ) -> bool {
        if !(removed.is_empty() && added.is_empty()) {
            if !self.register() {
                return false;
            }
            let mut ok = true;
            for &m in members {
                if !self.engine.improves(m) {
                    ok = false;
                    break;
                }
            }
            if ok {
                let mv = Move::coalition(members.to_vec(), removed.clone(), added.clone());
                if !self.emit(mv) {
                    return false;
                }
            }
        }
        for i in start..addable.len() {
            let (u, v) = addable[i];
            added.push((u, v));
            self.engine.toggle_edge(u, v);
            let go = self.coalition_added_rec(members, addable, i + 1, removed, added);
            self.engine.toggle_edge(u, v);
            added.pop();
            if !go {
                return false;
            }
        }
        true
    }
}

/// Runs the improving-move search for one base concept, invoking
/// `on_improving` for each improving move in canonical order until it
/// returns false. Returns `(candidates examined, budget exhausted)`.
fn run_search(
    concept: Concept,
    g: &Graph,
    params: &GameParams,
    limits: &SearchLimits,
    on_improving: &mut dyn FnMut(Move) -> bool,
) -> Result<(u64, bool), Error> {
    let engine = Engine::new(g, params)?;
    let mut searcher = Searcher {
        engine,
        on_improving,
        examined: 0,
        cap: u64::MAX,
        bne_center_cap: limits.bne_center_cap,
        budget_exhausted: false,
    };
    match concept {
        Concept::Remove => {
            searcher.search_remove(g);
        }
        Concept::BilateralAdd => {
            searcher.search_add(g);
        }
        Concept::BilateralSwap => {
            searcher.search_swap(g);
        }
        Concept::Neighborhood => {
            searcher.search_neighborhood(g);
        }
        Concept::KStrong(k) => {
            searcher.cap = limits.coalition_cap;
            searcher.search_coalition(g, k);
        }
        other => {
            return Err(Error::InvalidParameter(alloc::format!(
                "{other} is a composite concept; search its components"
            )))
        }
    }
    Ok((searcher.examined, searcher.budget_exhausted))
}

/// All improving moves of a base concept in canonical order.
///
/// Errors with [`Error::SearchBudgetExceeded`] when the budget is hit, so a
/// truncated stream is never mistaken for the full one.
pub fn improving_moves(
    concept: Concept,
    g: &Graph,
    params: &GameParams,
    limits: &SearchLimits,
) -> Result<Vec<Move>, Error> {
    if matches!(
        concept,
        Concept::PairwiseStable | Concept::BilateralGreedy | Concept::Strong
    ) {
        return Err(Error::InvalidParameter(alloc::format!(
            "improving_moves takes a base concept, not {concept}"
        )));
    }
    let mut moves = Vec::new();
    let (examined, budget) = run_search(concept, g, params, limits, &mut |mv| {
        moves.push(mv);
        true
    })?;
    if budget {
        return Err(Error::SearchBudgetExceeded { examined });
    }
    Ok(moves)
}

/// Decides stability of `g` under `concept`. Composite concepts decompose
/// into their base checks in canonical shape order, so the returned witness
/// is the canonically smallest improving move overall.
pub fn check_stability(
    concept: Concept,
    g: &Graph,
    params: &GameParams,
    limits: &SearchLimits,
) -> Result<StabilityReport, Error> {
    let mut examined = 0u64;
    for component in concept.components(g.n()) {
        let mut witness: Option<Move> = None;
        let (component_examined, budget) = run_search(component, g, params, limits, &mut |mv| {
            witness = Some(mv);
            false
        })?;
        examined += component_examined;
        if let Some(mv) = witness {
            verify_witness(g, params, &mv);
            return Ok(StabilityReport::decided(concept.id(), Some(mv), examined));
        }
        if budget {
            return Ok(StabilityReport::budget(concept.id(), examined));
        }
    }
    Ok(StabilityReport::decided(concept.id(), None, examined))
}

/// Re-derives the witness soundness claim through the exact rational cost
/// path, independently of the bitset search.
fn verify_witness(g: &Graph, params: &GameParams, mv: &Move) {
    let after = mv.apply(g).expect("witness must be applicable");
    for agent in mv.consulted() {
        let before = agent_cost(g, params, agent).expect("agent in range");
        let now = agent_cost(&after, params, agent).expect("agent in range");
        assert!(
            CostDelta::between(&now, &before).is_strict_improvement(),
            "witness {mv:?} does not strictly improve agent {agent}"
        );
    }
}

/// Assignment of each edge to one owning endpoint, in the graph's sorted
/// edge order. Captures a unilateral-game strategy vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAssignment {
    pub owners: Vec<usize>,
}

impl EdgeAssignment {
    pub fn new(g: &Graph, owners: Vec<usize>) -> Result<Self, Error> {
        if owners.len() != g.edge_count() {
            return Err(Error::InvalidParameter(alloc::format!(
                "expected {} owners, got {}",
                g.edge_count(),
                owners.len()
            )));
        }
        for ((u, v), &owner) in g.edges().zip(&owners) {
            if owner != u && owner != v {
                return Err(Error::InvalidParameter(alloc::format!(
                    "owner {owner} is not an endpoint of edge ({u}, {v})"
                )));
            }
        }
        Ok(EdgeAssignment { owners })
    }

    /// Every edge owned by its smaller endpoint.
    pub fn min_endpoints(g: &Graph) -> Self {
        EdgeAssignment { owners: g.edges().map(|(u, _)| u).collect() }
    }

    /// All `2^m` assignments (m = edge count); capped to keep sweeps finite.
    pub fn enumerate_all(g: &Graph) -> Result<Vec<EdgeAssignment>, Error> {
        let m = g.edge_count();
        if m > 20 {
            return Err(Error::InvalidParameter(alloc::format!(
                "refusing to enumerate 2^{m} edge assignments"
            )));
        }
        let edges = g.edge_vec();
        let mut out = Vec::with_capacity(1 << m);
        for mask in 0u32..(1u32 << m) {
            let owners = edges
                .iter()
                .enumerate()
                .map(|(i, &(u, v))| if mask & (1 << i) == 0 { u } else { v })
                .collect();
            out.push(EdgeAssignment { owners });
        }
        Ok(out)
    }

    /// Partners of `u` along edges owned by `u`.
    pub fn owned_partners(&self, g: &Graph, u: usize) -> Vec<usize> {
        g.edges()
            .zip(&self.owners)
            .filter(|&((a, b), &owner)| owner == u && (a == u || b == u))
            .map(|((a, b), _)| if a == u { b } else { a })
            .collect()
    }
}

/// Unilateral add check: unstable iff some single agent strictly improves
/// by buying one edge alone. The witness `Add` records the buyer as `u`.
pub fn check_unilateral_add(g: &Graph, params: &GameParams) -> Result<StabilityReport, Error> {
    let mut engine = Engine::new(g, params)?;
    let n = g.n();
    let mut examined = 0u64;
    for u in 0..n {
        if !engine.can_improve[u] {
            continue;
        }
        for v in 0..n {
            if v == u || g.has_edge(u, v) {
                continue;
            }
            examined += 1;
            engine.toggle_edge(u, v);
            let ok = engine.improves(u);
            engine.toggle_edge(u, v);
            if ok {
                return Ok(StabilityReport::decided(
                    "uni-add".to_string(),
                    Some(Move::Add { u, v }),
                    examined,
                ));
            }
        }
    }
    Ok(StabilityReport::decided("uni-add".to_string(), None, examined))
}

/// Unilateral remove check under an edge assignment: only owners may drop
/// their edges.
pub fn check_unilateral_remove(
    g: &Graph,
    assignment: &EdgeAssignment,
    params: &GameParams,
) -> Result<StabilityReport, Error> {
    if assignment.owners.len() != g.edge_count() {
        return Err(Error::InvalidParameter("assignment does not match the graph".into()));
    }
    let mut engine = Engine::new(g, params)?;
    let mut examined = 0u64;
    for ((a, b), &owner) in g.edges().zip(&assignment.owners) {
        examined += 1;
        engine.toggle_edge(a, b);
        let ok = engine.improves(owner);
        engine.toggle_edge(a, b);
        if ok {
            let other = if owner == a { b } else { a };
            return Ok(StabilityReport::decided(
                "uni-re".to_string(),
                Some(Move::Remove { u: owner, v: other }),
                examined,
            ));
        }
    }
    Ok(StabilityReport::decided("uni-re".to_string(), None, examined))
}

/// Unilateral pure Nash check: each agent best-responds over all `2^(n-1)`
/// strategies while every other agent's listings (per the assignment) are
/// fixed. An agent pays for each listed target whether or not the edge
/// materializes. The witness records the strategy change as a neighborhood
/// move around the deviating agent.
pub fn check_unilateral_ne(
    g: &Graph,
    assignment: &EdgeAssignment,
    params: &GameParams,
    limits: &SearchLimits,
) -> Result<StabilityReport, Error> {
    if assignment.owners.len() != g.edge_count() {
        return Err(Error::InvalidParameter("assignment does not match the graph".into()));
    }
    let n = g.n();
    if n >= 2 {
        let bits = n - 1;
        if bits >= 63 || (1u64 << bits) > limits.ne_strategy_cap {
            return Ok(StabilityReport::budget("uni-ne".to_string(), 0));
        }
    }
    let mut engine = Engine::new(g, params)?;
    let mut examined = 0u64;
    for u in 0..n {
        let owned = assignment.owned_partners(g, u);
        let (base_unreach, base_sum) = engine.distance_profile(u);
        let base_scaled =
            engine.alpha_num * owned.len() as i128 + engine.alpha_den * base_sum as i128;
        // Retract u's own listings; edges listed by the partner stay up.
        for &v in &owned {
            engine.toggle_edge(u, v);
        }
        let others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
        let mut listed = Vec::new();
        let mut found: Option<Vec<usize>> = None;
        ne_strategy_rec(
            &mut engine,
            u,
            &others,
            0,
            &mut listed,
            (base_unreach, base_scaled),
            &mut examined,
            &mut found,
        );
        for &v in &owned {
            engine.toggle_edge(u, v);
        }
        if let Some(strategy) = found {
            let removed: Vec<usize> =
                owned.iter().copied().filter(|v| !strategy.contains(v)).collect();
            let added: Vec<usize> =
                strategy.iter().copied().filter(|v| !owned.contains(v)).collect();
            return Ok(StabilityReport::decided(
                "uni-ne".to_string(),
                Some(Move::neighborhood(u, removed, added)),
                examined,
            ));
        }
    }
    Ok(StabilityReport::decided("uni-ne".to_string(), None, examined))
}

#[allow(clippy::too_many_arguments)]
fn ne_strategy_rec(
    engine: &mut Engine,
    u: usize,
    others: &[usize],
    start: usize,
    listed: &mut Vec<usize>,
    base: (u32, i128),
    examined: &mut u64,
    found: &mut Option<Vec<usize>>,
) -> bool {
    *examined += 1;
    let (unreach, sum) = engine.distance_profile(u);
    let scaled = engine.alpha_num * listed.len() as i128 + engine.alpha_den * sum as i128;
    if (unreach, scaled) < base {
        *found = Some(listed.clone());
        return false;
    }
    for i in start..others.len() {
        let v = others[i];
        // Listing v creates the edge only if it is not already up through
        // v's own listing; either way u pays for the entry.
        let creates_edge = !engine.has_edge(u, v);
        if creates_edge {
            engine.toggle_edge(u, v);
        }
        listed.push(v);
        let go = ne_strategy_rec(engine, u, others, i + 1, listed, base, examined, found);
        listed.pop();
        if creates_edge {
            engine.toggle_edge(u, v);
        }
        if !go {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::family::*;
    use crate::scalar::ratio;

    fn p(alpha: i64) -> GameParams {
        GameParams::from_int(alpha)
    }

    fn ph(num: i64, den: i64) -> GameParams {
        GameParams::new(ratio(num, den)).unwrap()
    }

    fn limits() -> SearchLimits {
        SearchLimits::default()
    }

    fn check(concept: Concept, g: &Graph, params: &GameParams) -> StabilityReport {
        check_stability(concept, g, params, &limits()).unwrap()
    }

    #[test]
    fn remove_moves_on_expensive_triangle() {
        let moves = improving_moves(Concept::Remove, &cycle(3), &p(5), &limits()).unwrap();
        assert!(moves.contains(&Move::Remove { u: 0, v: 1 }));
        assert_eq!(moves.len(), 6);
        assert_eq!(moves[0], Move::Remove { u: 0, v: 1 });
    }

    #[test]
    fn add_moves_on_path3_at_one_are_exactly_non_strict() {
        let moves = improving_moves(Concept::BilateralAdd, &path(3), &p(1), &limits()).unwrap();
        assert!(moves.is_empty());
    }

    #[test]
    fn pair_coalition_closes_the_path() {
        let moves =
            improving_moves(Concept::KStrong(2), &path(4), &p(1), &limits()).unwrap();
        let target = Move::coalition(vec![0, 3], vec![], vec![(0, 3)]);
        assert!(moves.contains(&target), "moves: {moves:?}");
    }

    #[test]
    fn every_streamed_move_strictly_improves_its_agents() {
        use crate::cost::cost_delta;
        for (g, alpha, concept) in [
            (path(4), 1, Concept::KStrong(2)),
            (cycle(5), 7, Concept::KStrong(3)),
            (star(5), 1, Concept::Neighborhood),
            (path(5), 1, Concept::BilateralSwap),
        ] {
            let params = p(alpha);
            let moves = improving_moves(concept, &g, &params, &limits()).unwrap();
            let mut keys: Vec<_> = moves.iter().map(|m| m.key()).collect();
            let sorted = {
                let mut s = keys.clone();
                s.sort();
                s
            };
            assert_eq!(keys.len(), {
                keys.dedup();
                keys.len()
            });
            assert_eq!(keys, sorted, "stream must already be in canonical order");
            for mv in &moves {
                for agent in mv.consulted() {
                    assert!(
                        cost_delta(&g, &params, agent, mv).unwrap().is_strict_improvement(),
                        "{mv:?} does not strictly improve {agent}"
                    );
                }
            }
        }
    }

    #[test]
    fn neighborhood_stream_covers_single_edge_shapes() {
        // A neighborhood change subsumes single removals (R = {v}, A = {})
        // and consenting adds (R = {}, A = {v}) around its center.
        let moves =
            improving_moves(Concept::Neighborhood, &cycle(3), &p(5), &limits()).unwrap();
        assert!(moves.contains(&Move::neighborhood(0, vec![1], vec![])));
        let moves =
            improving_moves(Concept::Neighborhood, &Graph::empty(2), &p(100), &limits())
                .unwrap();
        assert_eq!(moves, vec![
            Move::neighborhood(0, vec![], vec![1]),
            Move::neighborhood(1, vec![], vec![0]),
        ]);
    }

    #[test]
    fn improving_moves_rejects_composites() {
        assert!(improving_moves(Concept::PairwiseStable, &path(3), &p(1), &limits()).is_err());
        assert!(improving_moves(Concept::Strong, &path(3), &p(1), &limits()).is_err());
    }

    #[test]
    fn star_is_strongly_stable() {
        assert!(check(Concept::Strong, &star(6), &p(2)).stable);
        assert!(check(Concept::Neighborhood, &star(6), &p(2)).stable);
    }

    #[test]
    fn cycle5_strong_stability_follows_the_remove_threshold() {
        // The single-edge removal on C5 trades alpha against a distance
        // increase of exactly 4, so the cycle leaves every equilibrium as
        // soon as alpha exceeds 4.
        assert!(check(Concept::Strong, &cycle(5), &p(3)).stable);
        assert!(check(Concept::Strong, &cycle(5), &p(4)).stable);
        let at5 = check(Concept::Remove, &cycle(5), &p(5));
        assert!(!at5.stable);
        assert_eq!(at5.witness, Some(Move::Remove { u: 0, v: 1 }));
        let at7 = check(Concept::Remove, &cycle(5), &p(7));
        assert!(!at7.stable);
        assert!(!check(Concept::Strong, &cycle(5), &p(5)).stable);
    }

    #[test]
    fn path4_is_not_strong_at_alpha_one() {
        let report = check(Concept::Strong, &path(4), &p(1));
        assert!(!report.stable);
        assert_eq!(report.witness, Some(Move::coalition(vec![0, 3], vec![], vec![(0, 3)])));
    }

    #[test]
    fn unilateral_add_examples() {
        assert!(check_unilateral_add(&star(5), &p(1)).unwrap().stable);
        // An endpoint of the 4-path saves 2 for a price of 1 by buying an
        // edge two hops ahead; (0, 2) is the canonically first such buy.
        let report = check_unilateral_add(&path(4), &p(1)).unwrap();
        assert!(!report.stable);
        assert_eq!(report.witness, Some(Move::Add { u: 0, v: 2 }));
        assert!(check_unilateral_add(&clique(4), &p(1)).unwrap().stable);
        assert!(check_unilateral_add(&clique(4), &p(5)).unwrap().stable);
    }

    #[test]
    fn unilateral_remove_depends_on_ownership() {
        // On C5 at alpha 5 every owner wants out, whatever the assignment.
        let g = cycle(5);
        for assignment in [EdgeAssignment::min_endpoints(&g)]
            .into_iter()
            .chain(EdgeAssignment::enumerate_all(&g).unwrap().into_iter().take(8))
        {
            assert!(!check_unilateral_remove(&g, &assignment, &p(5)).unwrap().stable);
        }
    }

    #[test]
    fn unilateral_ne_star_center_owns_everything() {
        let g = star(5);
        let owners = vec![0; 4];
        let assignment = EdgeAssignment::new(&g, owners).unwrap();
        assert!(check_unilateral_ne(&g, &assignment, &p(2), &limits()).unwrap().stable);
    }

    #[test]
    fn unilateral_ne_never_disconnects_for_large_alpha() {
        let g = path(2);
        let assignment = EdgeAssignment::min_endpoints(&g);
        assert!(check_unilateral_ne(&g, &assignment, &p(10), &limits()).unwrap().stable);
    }

    #[test]
    fn budget_exhaustion_is_reported_not_invented() {
        let mut tight = limits();
        tight.coalition_cap = 3;
        let report = check_stability(Concept::Strong, &cycle(6), &p(5), &tight).unwrap();
        assert!(!report.stable);
        assert!(report.budget_exhausted);
        assert!(report.witness.is_none());
        assert!(improving_moves(Concept::KStrong(6), &cycle(6), &p(5), &tight).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        for _ in 0..2 {
            let a = check(Concept::Strong, &path(4), &p(1));
            let b = check(Concept::Strong, &path(4), &p(1));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witnesses_strictly_improve_every_consulted_agent() {
        // Re-verified here through the exact rational cost path.
        use crate::cost::cost_delta;
        let grid = [ph(1, 2), p(1), p(2), p(5)];
        for n in 2..=5usize {
            for g in crate::enumerate::enumerate_graphs(n, false, 5).unwrap() {
                for params in &grid {
                    for concept in [
                        Concept::Remove,
                        Concept::BilateralAdd,
                        Concept::BilateralSwap,
                        Concept::Neighborhood,
                        Concept::KStrong(2),
                        Concept::Strong,
                    ] {
                        let report = check(concept, &g, params);
                        if let Some(w) = &report.witness {
                            for agent in w.consulted() {
                                assert!(cost_delta(&g, params, agent, w)
                                    .unwrap()
                                    .is_strict_improvement());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hierarchy_holds_on_tiny_graphs() {
        let implications = [
            (Concept::Strong, Concept::KStrong(3)),
            (Concept::KStrong(3), Concept::KStrong(2)),
            (Concept::KStrong(2), Concept::BilateralGreedy),
            (Concept::Neighborhood, Concept::BilateralGreedy),
            (Concept::BilateralGreedy, Concept::PairwiseStable),
            (Concept::BilateralGreedy, Concept::BilateralSwap),
            (Concept::PairwiseStable, Concept::Remove),
            (Concept::PairwiseStable, Concept::BilateralAdd),
        ];
        for n in 1..=4usize {
            for g in crate::enumerate::enumerate_graphs(n, false, 4).unwrap() {
                for params in [ph(1, 2), p(1), p(5)] {
                    for (stronger, weaker) in implications {
                        let a = check(stronger, &g, &params);
                        let b = check(weaker, &g, &params);
                        if a.stable {
                            assert!(b.stable, "{stronger} stable but {weaker} not on {g:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn remove_matches_full_bilateral_deviation_oracle_small() {
        // Oracle: a single agent may adopt any strategy; in the bilateral
        // game only listed-and-reciprocated edges survive, so the reachable
        // graphs drop any subset of her incident edges, and unreciprocated
        // listings just cost money.
        for n in 2..=4usize {
            for g in crate::enumerate::enumerate_graphs(n, true, 4).unwrap() {
                for params in [ph(1, 2), p(1), p(2), p(5)] {
                    let re = check(Concept::Remove, &g, &params).stable;
                    assert_eq!(re, bilateral_deviation_stable(&g, &params), "{g:?}");
                }
            }
        }
    }

    fn bilateral_deviation_stable(g: &Graph, params: &GameParams) -> bool {
        use crate::cost::ExtendedCost;
        use crate::scalar::scalar_u;
        let n = g.n();
        for u in 0..n {
            let neighbors: Vec<usize> =
                (0..n).filter(|&v| g.has_edge(u, v)).collect();
            let others: Vec<usize> = (0..n).filter(|&v| v != u).collect();
            let base = agent_cost(g, params, u).unwrap();
            for mask in 0u32..(1u32 << others.len()) {
                let strategy: Vec<usize> = others
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                let mut h = g.clone();
                for &v in &neighbors {
                    if !strategy.contains(&v) {
                        h.remove_edge(u, v).unwrap();
                    }
                }
                let (unreach, sum) = h.distance_totals(u).unwrap();
                let cost = ExtendedCost::new(
                    unreach as u64,
                    params.alpha().clone() * scalar_u(strategy.len() as u64) + scalar_u(sum),
                );
                if cost < base {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn single_node_is_stable_everywhere() {
        let g = Graph::empty(1);
        for concept in [Concept::Remove, Concept::Neighborhood, Concept::Strong] {
            assert!(check(concept, &g, &p(1)).stable);
        }
    }

    #[test]
    fn disconnected_graphs_want_bridging_edges() {
        let g = Graph::empty(2);
        let report = check(Concept::BilateralAdd, &g, &p(100));
        assert!(!report.stable, "reachability dominates any price");
        assert_eq!(report.witness, Some(Move::add(0, 1)));
    }

    #[test]
    fn scaled_comparison_matches_exact_on_witness_boundary() {
        // alpha = 6/5: removal on C5 saves 6/5 against +4 distance; still
        // stable. alpha = 21/5 > 4: unstable.
        assert!(check(Concept::Remove, &cycle(5), &ph(6, 5)).stable);
        assert!(!check(Concept::Remove, &cycle(5), &ph(21, 5)).stable);
        assert!(check(Concept::Remove, &cycle(5), &ph(20, 5)).stable);
    }
}
