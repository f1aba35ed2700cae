//! Rooted views of trees: layers, parents, subtree sizes, depths, and
//! 1-medians. Tree lemma verification is built on these.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::Graph;

/// Whether `g` is a connected tree.
pub fn is_tree(g: &Graph) -> bool {
    g.n() >= 1 && g.edge_count() == g.n() - 1 && g.is_connected()
}

/// A tree rooted at `root`: per-node parent, layer (distance to the root),
/// and subtree cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeView {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub layer: Vec<usize>,
    pub subtree_size: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

impl TreeView {
    /// Maximum layer.
    pub fn depth(&self) -> usize {
        self.layer.iter().copied().max().unwrap_or(0)
    }

    /// Nodes of the subtree rooted at `u` (including `u`), ascending.
    pub fn subtree_nodes(&self, u: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for &c in &self.children[x] {
                out.push(c);
                stack.push(c);
            }
        }
        out.sort_unstable();
        out
    }

    /// Depth of the subtree rooted at `u`, measured from `u`.
    pub fn subtree_depth(&self, u: usize) -> usize {
        self.subtree_nodes(u).iter().map(|&v| self.layer[v] - self.layer[u]).max().unwrap_or(0)
    }
}

/// Roots the tree `g` at `root`.
pub fn tree_view(g: &Graph, root: usize) -> Result<TreeView, Error> {
    if root >= g.n() {
        return Err(Error::NodeOutOfRange { node: root, n: g.n() });
    }
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    let n = g.n();
    let adj = g.adjacency();
    let mut parent = vec![None; n];
    let mut layer = vec![0usize; n];
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
                layer[v] = layer[u] + 1;
                order.push(v);
            }
        }
    }
    let mut children = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(p) = parent[v] {
            children[p].push(v);
        }
    }
    let mut subtree_size = vec![1usize; n];
    for &u in order.iter().rev() {
        if let Some(p) = parent[u] {
            subtree_size[p] += subtree_size[u];
        }
    }
    Ok(TreeView { root, parent, layer, subtree_size, children })
}

/// All 1-medians of the tree: the nodes of minimum total distance, sorted by
/// id. Each tree has one or two. Cross-checked against the equivalent
/// characterization that removing a median leaves components of size at most
/// `n / 2`.
pub fn one_medians(g: &Graph) -> Result<Vec<usize>, Error> {
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    let totals: Vec<u64> =
        (0..g.n()).map(|u| g.distance_totals(u).expect("node in range").1).collect();
    let best = *totals.iter().min().expect("nonempty");
    let medians: Vec<usize> = (0..g.n()).filter(|&u| totals[u] == best).collect();
    debug_assert!(
        medians.iter().all(|&m| max_component_after_removal(g, m) * 2 <= g.n()),
        "a 1-median must split the tree into components of size <= n/2"
    );
    debug_assert!(matches!(medians.len(), 1 | 2));
    Ok(medians)
}

/// The median chosen as root throughout the tree lemmas: the smallest-id
/// 1-median.
pub fn median_root(g: &Graph) -> Result<usize, Error> {
    Ok(one_medians(g)?[0])
}

fn max_component_after_removal(g: &Graph, removed: usize) -> usize {
    let adj = g.adjacency();
    let n = g.n();
    let mut seen = vec![false; n];
    seen[removed] = true;
    let mut best = 0usize;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut size = 0usize;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// 1-medians of the subtree hanging at `u` in `view`, computed over the
/// subtree alone; distances inside a subtree agree with distances in the
/// whole tree.
pub fn subtree_medians(g: &Graph, view: &TreeView, u: usize) -> Vec<usize> {
    let nodes = view.subtree_nodes(u);
    let mut best: Option<(u64, Vec<usize>)> = None;
    for &v in &nodes {
        let dist = g.distances_from(v).expect("node in range");
        let total: u64 = nodes
            .iter()
            .map(|&w| dist[w].finite().expect("tree is connected") as u64)
            .sum();
        match &mut best {
            Some((b, list)) => {
                if total < *b {
                    best = Some((total, vec![v]));
                } else if total == *b {
                    list.push(v);
                }
            }
            None => best = Some((total, vec![v])),
        }
    }
    best.expect("subtree nonempty").1
}

/// Diameter shortcut for trees (twice-BFS is unnecessary at desk scale).
pub fn tree_depth_from(g: &Graph, root: usize) -> Result<usize, Error> {
    let view = tree_view(g, root)?;
    Ok(view.depth())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::family::*;

    #[test]
    fn rejects_non_trees() {
        assert!(tree_view(&cycle(4), 0).is_err());
        assert!(one_medians(&Graph::empty(3)).is_err());
    }

    #[test]
    fn view_of_path3_from_endpoint() {
        let v = tree_view(&path(3), 0).unwrap();
        assert_eq!(v.depth(), 2);
        assert_eq!(v.subtree_size, vec![3, 2, 1]);
        assert_eq!(v.layer, vec![0, 1, 2]);
    }

    #[test]
    fn view_of_star5_from_center() {
        let v = tree_view(&star(5), 0).unwrap();
        assert_eq!(v.depth(), 1);
        assert_eq!(v.subtree_size, vec![5, 1, 1, 1, 1]);
    }

    #[test]
    fn medians() {
        assert_eq!(one_medians(&star(6)).unwrap(), vec![0]);
        assert_eq!(one_medians(&path(4)).unwrap(), vec![1, 2]);
        assert_eq!(one_medians(&path(5)).unwrap(), vec![2]);
        assert_eq!(median_root(&path(4)).unwrap(), 1);
    }

    #[test]
    fn median_properties_on_all_small_trees() {
        // Every returned median splits into components of size <= n/2 and
        // every non-median has strictly larger total distance.
        for n in 1..=10usize {
            for t in crate::enumerate::enumerate_free_trees(n, 10).unwrap() {
                let medians = one_medians(&t).unwrap();
                assert!(!medians.is_empty() && medians.len() <= 2);
                let totals: Vec<u64> =
                    (0..n).map(|u| t.distance_totals(u).unwrap().1).collect();
                let best = *totals.iter().min().unwrap();
                for u in 0..n {
                    if medians.contains(&u) {
                        assert_eq!(totals[u], best);
                        assert!(max_component_after_removal(&t, u) * 2 <= n);
                    } else {
                        assert!(totals[u] > best);
                    }
                }
            }
        }
    }

    #[test]
    fn subtree_sizes_bounded_at_median_root() {
        for n in 2..=9usize {
            for t in crate::enumerate::enumerate_free_trees(n, 9).unwrap() {
                let view = tree_view(&t, median_root(&t).unwrap()).unwrap();
                assert_eq!(view.subtree_size[view.root], n);
                for u in 0..n {
                    if u != view.root {
                        assert!(view.subtree_size[u] * 2 <= n, "n={n} u={u}");
                    }
                    let kids: usize =
                        view.children[u].iter().map(|&c| view.subtree_size[c]).sum();
                    assert_eq!(view.subtree_size[u], kids + 1);
                }
            }
        }
    }
}
