//! Improving-move shapes shared by every stability checker, with a total
//! canonical order so that searches are deterministic and the first witness
//! in that order is reproducible.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{edge, Graph};

/// One atomic strategy change.
///
/// Role conventions: `Remove` is performed by `u` alone; `Add` needs both
/// endpoints; `Swap` keeps `keeper`'s degree constant by replacing the edge
/// to `dropped` with one to `added`; `Neighborhood` rewires edges around a
/// single `center`; `Coalition` deletes edges meeting the member set and
/// adds edges inside it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    Remove { u: usize, v: usize },
    Add { u: usize, v: usize },
    Swap { keeper: usize, dropped: usize, added: usize },
    Neighborhood { center: usize, removed: Vec<usize>, added: Vec<usize> },
    Coalition { members: Vec<usize>, removed: Vec<(usize, usize)>, added: Vec<(usize, usize)> },
}

/// Canonical sort key: shape rank, then sorted node ids, then the removed
/// and added edge lists, then the raw role list to break remaining ties.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MoveKey {
    rank: u8,
    nodes: Vec<usize>,
    removed: Vec<(usize, usize)>,
    added: Vec<(usize, usize)>,
    roles: Vec<usize>,
}

impl Move {
    pub fn remove(u: usize, v: usize) -> Self {
        Move::Remove { u, v }
    }

    pub fn add(u: usize, v: usize) -> Self {
        let (u, v) = edge(u, v);
        Move::Add { u, v }
    }

    pub fn swap(keeper: usize, dropped: usize, added: usize) -> Self {
        Move::Swap { keeper, dropped, added }
    }

    pub fn neighborhood(center: usize, mut removed: Vec<usize>, mut added: Vec<usize>) -> Self {
        removed.sort_unstable();
        added.sort_unstable();
        Move::Neighborhood { center, removed, added }
    }

    pub fn coalition(
        mut members: Vec<usize>,
        removed: Vec<(usize, usize)>,
        added: Vec<(usize, usize)>,
    ) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut removed: Vec<_> = removed.into_iter().map(|(u, v)| edge(u, v)).collect();
        let mut added: Vec<_> = added.into_iter().map(|(u, v)| edge(u, v)).collect();
        removed.sort_unstable();
        added.sort_unstable();
        Move::Coalition { members, removed, added }
    }

    /// Edges deleted by this move, normalized.
    pub fn removed_edges(&self) -> Vec<(usize, usize)> {
        match self {
            Move::Remove { u, v } => vec![edge(*u, *v)],
            Move::Add { .. } => vec![],
            Move::Swap { keeper, dropped, .. } => vec![edge(*keeper, *dropped)],
            Move::Neighborhood { center, removed, .. } => {
                removed.iter().map(|&v| edge(*center, v)).collect()
            }
            Move::Coalition { removed, .. } => removed.clone(),
        }
    }

    /// Edges created by this move, normalized.
    pub fn added_edges(&self) -> Vec<(usize, usize)> {
        match self {
            Move::Remove { .. } => vec![],
            Move::Add { u, v } => vec![edge(*u, *v)],
            Move::Swap { keeper, added, .. } => vec![edge(*keeper, *added)],
            Move::Neighborhood { center, added, .. } => {
                added.iter().map(|&v| edge(*center, v)).collect()
            }
            Move::Coalition { added, .. } => added.clone(),
        }
    }

    /// Agents that must strictly improve for this move to count: the remover;
    /// both endpoints of an add; keeper and new partner of a swap (the dropped
    /// partner is not consulted); the center and all new partners of a
    /// neighborhood change (deleted partners are not consulted); every
    /// coalition member.
    pub fn consulted(&self) -> Vec<usize> {
        match self {
            Move::Remove { u, .. } => vec![*u],
            Move::Add { u, v } => vec![*u, *v],
            Move::Swap { keeper, added, .. } => {
                let mut c = vec![*keeper, *added];
                c.sort_unstable();
                c
            }
            Move::Neighborhood { center, added, .. } => {
                let mut c = added.clone();
                c.push(*center);
                c.sort_unstable();
                c
            }
            Move::Coalition { members, .. } => members.clone(),
        }
    }

    pub fn key(&self) -> MoveKey {
        let (rank, roles) = match self {
            Move::Remove { u, v } => (0, vec![*u, *v]),
            Move::Add { u, v } => (1, vec![*u, *v]),
            Move::Swap { keeper, dropped, added } => (2, vec![*keeper, *dropped, *added]),
            Move::Neighborhood { center, .. } => (3, vec![*center]),
            Move::Coalition { members, .. } => (4, members.clone()),
        };
        let mut nodes = roles.clone();
        nodes.sort_unstable();
        nodes.dedup();
        MoveKey { rank, nodes, removed: self.removed_edges(), added: self.added_edges(), roles }
    }

    /// Checks the move's shape constraints against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), Error> {
        let bad = |why: alloc::string::String| Err(Error::MoveNotApplicable(why));
        let node_ok = |x: usize| x < g.n();
        match self {
            Move::Remove { u, v } => {
                if !g.has_edge(*u, *v) {
                    return bad(format!("edge ({u}, {v}) not present"));
                }
            }
            Move::Add { u, v } => {
                if *u == *v || !node_ok(*u) || !node_ok(*v) {
                    return bad(format!("invalid endpoints ({u}, {v})"));
                }
                if g.has_edge(*u, *v) {
                    return bad(format!("edge ({u}, {v}) already present"));
                }
            }
            Move::Swap { keeper, dropped, added } => {
                if added == keeper || added == dropped || !node_ok(*added) {
                    return bad(format!("invalid swap target {added}"));
                }
                if !g.has_edge(*keeper, *dropped) {
                    return bad(format!("edge ({keeper}, {dropped}) not present"));
                }
                if g.has_edge(*keeper, *added) {
                    return bad(format!("edge ({keeper}, {added}) already present"));
                }
            }
            Move::Neighborhood { center, removed, added } => {
                if removed.is_empty() && added.is_empty() {
                    return bad("empty neighborhood change".into());
                }
                for &v in removed {
                    if !g.has_edge(*center, v) {
                        return bad(format!("edge ({center}, {v}) not present"));
                    }
                }
                for &v in added {
                    if v == *center || !node_ok(v) {
                        return bad(format!("invalid new partner {v}"));
                    }
                    if g.has_edge(*center, v) {
                        return bad(format!("edge ({center}, {v}) already present"));
                    }
                }
            }
            Move::Coalition { members, removed, added } => {
                if members.is_empty() {
                    return bad("empty coalition".into());
                }
                if removed.is_empty() && added.is_empty() {
                    return bad("empty coalition change".into());
                }
                if members.iter().any(|&m| !node_ok(m)) {
                    return bad("coalition member out of range".into());
                }
                for &(u, v) in removed {
                    if !g.has_edge(u, v) {
                        return bad(format!("edge ({u}, {v}) not present"));
                    }
                    if !members.contains(&u) && !members.contains(&v) {
                        return bad(format!("removed edge ({u}, {v}) does not meet the coalition"));
                    }
                }
                for &(u, v) in added {
                    if u == v || !node_ok(u) || !node_ok(v) {
                        return bad(format!("invalid new edge ({u}, {v})"));
                    }
                    if g.has_edge(u, v) {
                        return bad(format!("edge ({u}, {v}) already present"));
                    }
                    if !members.contains(&u) || !members.contains(&v) {
                        return bad(format!("added edge ({u}, {v}) leaves the coalition"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies the move to a copy of `g`.
    pub fn apply(&self, g: &Graph) -> Result<Graph, Error> {
        self.validate(g)?;
        let mut out = g.clone();
        for (u, v) in self.removed_edges() {
            out.remove_edge(u, v)?;
        }
        for (u, v) in self.added_edges() {
            out.add_edge(u, v)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::family::*;

    #[test]
    fn validation_catches_bad_moves() {
        let g = path(3);
        assert!(Move::remove(0, 2).apply(&g).is_err());
        assert!(Move::add(0, 1).apply(&g).is_err());
        assert!(Move::swap(0, 1, 1).apply(&g).is_err());
        assert!(Move::neighborhood(0, vec![], vec![]).apply(&g).is_err());
        assert!(Move::coalition(vec![0], vec![], vec![]).apply(&g).is_err());
        // Removed edge must meet the coalition.
        assert!(Move::coalition(vec![0], vec![(1, 2)], vec![]).apply(&g).is_err());
        // Added edge must stay inside the coalition.
        assert!(Move::coalition(vec![0], vec![], vec![(0, 2)]).apply(&g).is_err());
    }

    #[test]
    fn apply_rewires() {
        let g = path(4);
        let out = Move::swap(0, 1, 3).apply(&g).unwrap();
        assert!(out.has_edge(0, 3) && !out.has_edge(0, 1));
        let out = Move::coalition(vec![0, 3], vec![], vec![(0, 3)]).apply(&g).unwrap();
        assert_eq!(out.edge_count(), 4);
    }

    #[test]
    fn key_order_ranks_shapes() {
        let remove = Move::remove(5, 6).key();
        let add = Move::add(0, 1).key();
        let swap = Move::swap(0, 1, 2).key();
        assert!(remove < add && add < swap);
        assert!(Move::remove(0, 1).key() < Move::remove(1, 0).key());
        assert!(Move::coalition(vec![0, 3], vec![], vec![(0, 3)]).key()
            < Move::coalition(vec![1], vec![(1, 2)], vec![]).key());
    }

    #[test]
    fn consulted_agents() {
        assert_eq!(Move::remove(2, 1).consulted(), vec![2]);
        assert_eq!(Move::add(2, 1).consulted(), vec![1, 2]);
        assert_eq!(Move::swap(3, 1, 0).consulted(), vec![0, 3]);
        assert_eq!(Move::neighborhood(2, vec![1], vec![4, 0]).consulted(), vec![0, 2, 4]);
    }
}
