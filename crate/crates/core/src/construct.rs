//! Generators for the named graph families, with exact metadata and the
//! sufficient stability conditions known for them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::concept::Concept;
use crate::error::Error;
use crate::graph::{family, Graph};
use crate::scalar::{scalar_u, Scalar};
use crate::tree::tree_view;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Star,
    Path,
    Cycle,
    Clique,
    CompleteDary,
    AlmostCompleteDary,
    StretchedBinary,
    StretchedTreeStar,
}

impl Family {
    pub fn id(&self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Clique => "clique",
            Family::CompleteDary => "complete-dary",
            Family::AlmostCompleteDary => "almost-complete-dary",
            Family::StretchedBinary => "stretched-binary",
            Family::StretchedTreeStar => "stretched-tree-star",
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "star" => Family::Star,
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "clique" => Family::Clique,
            "complete-dary" => Family::CompleteDary,
            "almost-complete-dary" => Family::AlmostCompleteDary,
            "stretched-binary" => Family::StretchedBinary,
            "stretched-tree-star" => Family::StretchedTreeStar,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        })
    }
}

/// Parameters of a construction. Which fields are required depends on the
/// family: `n` for the four basic families and the almost complete d-ary
/// tree; `arity` for the d-ary trees; `depth`/`stretch` for the stretched
/// binary tree; `stretch`/`subtree_target`/`target_size` for the stretched
/// tree star.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stretch: Option<usize>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::scalar::serde_option_string"
    )]
    pub subtree_target: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
}

impl ConstructionSpec {
    pub fn basic(family: Family, n: usize) -> Self {
        ConstructionSpec {
            family,
            n: Some(n),
            depth: None,
            stretch: None,
            subtree_target: None,
            target_size: None,
            arity: None,
        }
    }

    pub fn stretched_binary(depth: usize, stretch: usize) -> Self {
        ConstructionSpec {
            family: Family::StretchedBinary,
            n: None,
            depth: Some(depth),
            stretch: Some(stretch),
            subtree_target: None,
            target_size: None,
            arity: None,
        }
    }

    pub fn stretched_tree_star(stretch: usize, subtree_target: Scalar, target_size: usize) -> Self {
        ConstructionSpec {
            family: Family::StretchedTreeStar,
            n: None,
            depth: None,
            stretch: Some(stretch),
            subtree_target: Some(subtree_target),
            target_size: Some(target_size),
            arity: None,
        }
    }

    pub fn dary(family: Family, arity: usize, n: Option<usize>, depth: Option<usize>) -> Self {
        ConstructionSpec {
            family,
            n,
            depth,
            stretch: None,
            subtree_target: None,
            target_size: None,
            arity: Some(arity),
        }
    }
}

/// Family-specific measurements, all re-derivable from the graph itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub family: Family,
    pub n: usize,
    /// Depth of the tree families measured from the root; cycle/clique have
    /// none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// Depth of the underlying (unstretched) binary tree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stretch: Option<usize>,
    /// Nodes of the underlying binary tree, in its breadth-first order,
    /// as labels of the built graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary_nodes: Option<Vec<usize>>,
    /// Per-copy node count of a stretched tree star (the shared root is not
    /// counted).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtree_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub copy_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub graph: Graph,
    pub root: usize,
    pub meta: ConstructionMeta,
}

fn require(field: Option<usize>, name: &str) -> Result<usize, Error> {
    field.ok_or_else(|| Error::InvalidParameter(format!("missing parameter {name}")))
}

/// Builds the requested family. Tree families are rooted at node 0; labels
/// are assigned in construction order so outputs are stable.
pub fn construct(spec: &ConstructionSpec) -> Result<ConstructionResult, Error> {
    match spec.family {
        Family::Star | Family::Path | Family::Cycle | Family::Clique => {
            let n = require(spec.n, "n")?;
            let min = if spec.family == Family::Cycle { 3 } else { 1 };
            if n < min {
                return Err(Error::TooFewNodes { min, n });
            }
            let graph = match spec.family {
                Family::Star => family::star(n),
                Family::Path => family::path(n),
                Family::Cycle => family::cycle(n),
                Family::Clique => family::clique(n),
                _ => unreachable!(),
            };
            let depth = match spec.family {
                Family::Star => Some(usize::from(n > 1)),
                Family::Path => Some(n - 1),
                _ => None,
            };
            Ok(ConstructionResult {
                graph,
                root: 0,
                meta: ConstructionMeta {
                    family: spec.family,
                    n,
                    depth,
                    binary_depth: None,
                    stretch: None,
                    binary_nodes: None,
                    subtree_size: None,
                    copy_count: None,
                    arity: None,
                },
            })
        }
        Family::CompleteDary => {
            let arity = require(spec.arity, "arity")?;
            let depth = require(spec.depth, "depth")?;
            if arity < 2 {
                return Err(Error::InvalidParameter("arity must be at least 2".into()));
            }
            let mut n = 1usize;
            let mut layer = 1usize;
            for _ in 0..depth {
                layer = layer.checked_mul(arity).ok_or_else(too_big)?;
                n = n.checked_add(layer).ok_or_else(too_big)?;
            }
            build_dary(spec.family, arity, n)
        }
        Family::AlmostCompleteDary => {
            let arity = require(spec.arity, "arity")?;
            let n = require(spec.n, "n")?;
            if arity < 2 {
                return Err(Error::InvalidParameter("arity must be at least 2".into()));
            }
            if n < 1 {
                return Err(Error::TooFewNodes { min: 1, n });
            }
            build_dary(spec.family, arity, n)
        }
        Family::StretchedBinary => {
            let depth = require(spec.depth, "depth")?;
            let stretch = require(spec.stretch, "stretch")?;
            if stretch < 1 {
                return Err(Error::InvalidParameter("stretch factor must be at least 1".into()));
            }
            build_stretched_binary(depth, stretch)
        }
        Family::StretchedTreeStar => {
            let stretch = require(spec.stretch, "stretch")?;
            let target_size = require(spec.target_size, "target size")?;
            let subtree_target = spec
                .subtree_target
                .clone()
                .ok_or_else(|| Error::InvalidParameter("missing parameter subtree target".into()))?;
            build_stretched_tree_star(stretch, &subtree_target, target_size)
        }
    }
}

fn too_big() -> Error {
    Error::InvalidParameter("construction size overflows".into())
}

fn build_dary(fam: Family, arity: usize, n: usize) -> Result<ConstructionResult, Error> {
    // Breadth-first filling, leftmost child first: parent of i is (i-1)/d.
    let graph = Graph::from_edges(n, (1..n).map(|i| ((i - 1) / arity, i)))?;
    let depth = if n > 1 { tree_view(&graph, 0)?.depth() } else { 0 };
    Ok(ConstructionResult {
        graph,
        root: 0,
        meta: ConstructionMeta {
            family: fam,
            n,
            depth: Some(depth),
            binary_depth: None,
            stretch: None,
            binary_nodes: None,
            subtree_size: None,
            copy_count: None,
            arity: Some(arity),
        },
    })
}

/// Appends the body of a stretched binary tree of depth `depth` hanging from
/// `root`: every edge of the complete binary tree becomes a path of
/// `stretch` edges. Returns the labels of the binary-tree nodes in
/// breadth-first order (starting with `root`).
fn append_stretched_binary(
    root: usize,
    depth: usize,
    stretch: usize,
    next: &mut usize,
    edges: &mut Vec<(usize, usize)>,
) -> Vec<usize> {
    let mut binary_nodes = vec![root];
    let mut frontier = vec![root];
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for &parent in &frontier {
            for _child in 0..2 {
                let mut attach = parent;
                for _ in 0..stretch {
                    edges.push((attach, *next));
                    attach = *next;
                    *next += 1;
                }
                binary_nodes.push(attach);
                next_frontier.push(attach);
            }
        }
        frontier = next_frontier;
    }
    binary_nodes
}

/// Node budget for constructed families; beyond this the exact engines are
/// out of reach anyway.
const MAX_CONSTRUCTION_NODES: usize = 1 << 20;

fn checked_body_size(depth: usize, stretch: usize) -> Result<usize, Error> {
    if depth >= 24 || stretch == 0 {
        return Err(too_big());
    }
    ((1usize << (depth + 1)) - 2)
        .checked_mul(stretch)
        .filter(|&n| n < MAX_CONSTRUCTION_NODES)
        .ok_or_else(too_big)
}

/// Complete binary tree of depth `depth` with every edge subdivided into a
/// path of `stretch` edges: `(2^(depth+1) - 2) * stretch + 1` nodes, depth
/// `stretch * depth`.
pub fn build_stretched_binary(depth: usize, stretch: usize) -> Result<ConstructionResult, Error> {
    checked_body_size(depth.max(1), stretch)?;
    let mut edges = Vec::new();
    let mut next = 1usize;
    let binary_nodes = append_stretched_binary(0, depth, stretch, &mut next, &mut edges);
    let graph = Graph::from_edges(next, edges)?;
    debug_assert_eq!(next, ((1usize << (depth + 1)) - 2) * stretch + 1);
    Ok(ConstructionResult {
        graph,
        root: 0,
        meta: ConstructionMeta {
            family: Family::StretchedBinary,
            n: next,
            depth: Some(stretch * depth),
            binary_depth: Some(depth),
            stretch: Some(stretch),
            binary_nodes: Some(binary_nodes),
            subtree_size: None,
            copy_count: None,
            arity: None,
        },
    })
}

/// A root carrying `ceil((target_size - 1) / |T|)` copies of a stretched
/// binary tree, where the copy body `T` (the root is shared) is as large as
/// possible subject to `|T| <= subtree_target`.
pub fn build_stretched_tree_star(
    stretch: usize,
    subtree_target: &Scalar,
    target_size: usize,
) -> Result<ConstructionResult, Error> {
    if stretch < 1 {
        return Err(Error::InvalidParameter("stretch factor must be at least 1".into()));
    }
    // Definition constraints: t >= 2k + 1 and eta >= 2t + 1.
    if *subtree_target < scalar_u((2 * stretch + 1) as u64) {
        return Err(Error::InvalidParameter(format!(
            "subtree target {subtree_target} below 2k+1 = {}",
            2 * stretch + 1
        )));
    }
    if scalar_u(target_size as u64) < scalar_u(2) * subtree_target.clone() + Scalar::one() {
        return Err(Error::InvalidParameter(format!(
            "target size {target_size} below 2t+1"
        )));
    }
    let mut depth = 1usize;
    loop {
        let next_size = match checked_body_size(depth + 1, stretch) {
            Ok(size) => size,
            Err(_) => break,
        };
        if scalar_u(next_size as u64) > *subtree_target {
            break;
        }
        depth += 1;
    }
    let body = checked_body_size(depth, stretch)?;
    let copies = (target_size - 1).div_ceil(body);
    if copies.checked_mul(body).is_none_or(|n| n >= MAX_CONSTRUCTION_NODES) {
        return Err(too_big());
    }
    let mut edges = Vec::new();
    let mut next = 1usize;
    for _ in 0..copies {
        append_stretched_binary(0, depth, stretch, &mut next, &mut edges);
    }
    let graph = Graph::from_edges(next, edges)?;
    Ok(ConstructionResult {
        graph,
        root: 0,
        meta: ConstructionMeta {
            family: Family::StretchedTreeStar,
            n: next,
            depth: Some(stretch * depth),
            binary_depth: Some(depth),
            stretch: Some(stretch),
            binary_nodes: None,
            subtree_size: Some(body),
            copy_count: Some(copies),
            arity: None,
        },
    })
}

/// Open interval of edge prices for which the cycle is strongly stable:
/// `(n^2/4 - (n-1), n(n-2)/4)` for even `n` and
/// `((n+1)(n-1)/4 - (n-1), (n+1)(n-1)/4)` for odd `n`.
pub fn cycle_bse_alpha_range(n: usize) -> Result<(Scalar, Scalar), Error> {
    if n < 3 {
        return Err(Error::TooFewNodes { min: 3, n });
    }
    let n_s = scalar_u(n as u64);
    let nm1 = scalar_u((n - 1) as u64);
    let quarter = Scalar::new(1.into(), 4.into());
    let (lo, hi) = if n % 2 == 0 {
        let lo = n_s.clone() * n_s.clone() * quarter.clone() - nm1;
        let hi = n_s.clone() * (n_s - scalar_u(2)) * quarter;
        (lo, hi)
    } else {
        let base = (n_s.clone() + Scalar::one()) * (n_s - Scalar::one()) * quarter;
        (base.clone() - nm1, base)
    };
    Ok((lo, hi))
}

/// A sufficient condition on the edge price for a construction to be stable
/// under some concept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum StabilityCondition {
    /// Holds for every edge price (trees under single removals).
    Always,
    AlphaAtLeast(#[serde(with = "crate::scalar::serde_string")] Scalar),
    AlphaBelow(#[serde(with = "crate::scalar::serde_string")] Scalar),
    /// Open interval.
    AlphaWithin {
        #[serde(with = "crate::scalar::serde_string")]
        lo: Scalar,
        #[serde(with = "crate::scalar::serde_string")]
        hi: Scalar,
    },
    /// Neighborhood stability of a stretched tree star:
    /// `3 n depth / alpha + 1 <= alpha / (3 |T| depth)`, requiring
    /// `stretch = 1` or `alpha >= 6 k n`.
    StarNeighborhood { n: usize, subtree_size: usize, depth: usize, stretch: usize },
}

impl StabilityCondition {
    pub fn holds(&self, alpha: &Scalar) -> bool {
        match self {
            StabilityCondition::Always => true,
            StabilityCondition::AlphaAtLeast(t) => alpha >= t,
            StabilityCondition::AlphaBelow(t) => alpha < t,
            StabilityCondition::AlphaWithin { lo, hi } => alpha > lo && alpha < hi,
            StabilityCondition::StarNeighborhood { n, subtree_size, depth, stretch } => {
                let n_s = scalar_u(*n as u64);
                let depth_s = scalar_u(*depth as u64);
                let size_s = scalar_u(*subtree_size as u64);
                let lhs = scalar_u(3) * n_s.clone() * depth_s.clone() / alpha.clone()
                    + Scalar::one();
                let rhs = alpha.clone() / (scalar_u(3) * size_s * depth_s);
                let side = *stretch == 1
                    || *alpha >= scalar_u(6) * scalar_u(*stretch as u64) * n_s;
                side && lhs <= rhs
            }
        }
    }
}

/// The sufficient stability conditions known for a constructed graph, as
/// `(concept, condition)` pairs.
pub fn stability_sufficient_alpha(
    result: &ConstructionResult,
) -> Vec<(Concept, StabilityCondition)> {
    let meta = &result.meta;
    match meta.family {
        Family::Star => {
            // A star is an equilibrium for every considered concept once
            // alpha is at least 1.
            let all = [
                Concept::Remove,
                Concept::BilateralAdd,
                Concept::PairwiseStable,
                Concept::BilateralSwap,
                Concept::BilateralGreedy,
                Concept::Neighborhood,
                Concept::KStrong(meta.n),
                Concept::Strong,
            ];
            all.iter().map(|&c| (c, StabilityCondition::AlphaAtLeast(Scalar::one()))).collect()
        }
        Family::Path | Family::CompleteDary | Family::AlmostCompleteDary => {
            vec![(Concept::Remove, StabilityCondition::Always)]
        }
        Family::Cycle => {
            let (lo, hi) = cycle_bse_alpha_range(meta.n).expect("cycle has n >= 3");
            vec![(Concept::Strong, StabilityCondition::AlphaWithin { lo, hi })]
        }
        Family::Clique => {
            vec![(Concept::Strong, StabilityCondition::AlphaBelow(Scalar::one()))]
        }
        Family::StretchedBinary => {
            let k = meta.stretch.unwrap_or(1) as u64;
            let n = meta.n as u64;
            vec![
                (Concept::Remove, StabilityCondition::Always),
                (Concept::BilateralAdd, StabilityCondition::AlphaAtLeast(scalar_u(5 * k * n))),
                (Concept::BilateralSwap, StabilityCondition::AlphaAtLeast(scalar_u(7 * k * n))),
                (Concept::BilateralGreedy, StabilityCondition::AlphaAtLeast(scalar_u(7 * k * n))),
            ]
        }
        Family::StretchedTreeStar => {
            vec![
                (Concept::Remove, StabilityCondition::Always),
                (
                    Concept::Neighborhood,
                    StabilityCondition::StarNeighborhood {
                        n: meta.n,
                        subtree_size: meta.subtree_size.expect("star meta"),
                        depth: meta.depth.expect("star meta"),
                        stretch: meta.stretch.expect("star meta"),
                    },
                ),
            ]
        }
    }
}

/// The condition for one specific concept, if the family has one.
pub fn sufficient_condition(
    result: &ConstructionResult,
    concept: Concept,
) -> Result<StabilityCondition, Error> {
    stability_sufficient_alpha(result)
        .into_iter()
        .find(|(c, _)| *c == concept)
        .map(|(_, cond)| cond)
        .ok_or(Error::UnsupportedConceptForFamily)
}

/// Human-readable description of a condition, used by reports.
pub fn condition_description(cond: &StabilityCondition) -> String {
    match cond {
        StabilityCondition::Always => "always".into(),
        StabilityCondition::AlphaAtLeast(t) => format!("alpha >= {t}"),
        StabilityCondition::AlphaBelow(t) => format!("alpha < {t}"),
        StabilityCondition::AlphaWithin { lo, hi } => format!("{lo} < alpha < {hi}"),
        StabilityCondition::StarNeighborhood { n, subtree_size, depth, stretch } => format!(
            "3*{n}*{depth}/alpha + 1 <= alpha/(3*{subtree_size}*{depth}) and (k = 1 or alpha >= 6*{stretch}*{n})"
        ),
    }
}
