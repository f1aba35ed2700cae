//! Isomorphism-free enumeration of small graphs and free trees, plus the
//! canonical forms behind graph fingerprints.
//!
//! Graphs are canonicalized by minimizing the adjacency bit code over all
//! degree-respecting relabelings (brute force, capped at 8 nodes). Free
//! trees use a center-rooted canonical string, which scales to the tree
//! sizes the sweeps need.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::Graph;
use crate::tree::is_tree;

/// Largest node count for exact graph canonicalization.
pub const CANONICAL_CAP: usize = 8;

fn pair_index(u: usize, v: usize, n: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if code & (1u64 << pair_index(u, v, n)) != 0 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("code encodes a simple graph")
}

/// Minimum adjacency code over all relabelings that sort nodes by degree.
/// Any isomorphism preserves degrees, so restricting to degree-respecting
/// relabelings keeps the form canonical while pruning most permutations.
fn canonical_code(g: &Graph) -> Result<u64, Error> {
    let n = g.n();
    if n > CANONICAL_CAP {
        return Err(Error::EnumerationCapExceeded { n, cap: CANONICAL_CAP });
    }
    if n <= 1 {
        return Ok(0);
    }
    let degrees: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for u in 0..n {
        by_degree.entry(degrees[u]).or_default().push(u);
    }
    let classes: Vec<Vec<usize>> = by_degree.into_values().collect();
    let edges = g.edge_vec();

    let mut new_label = vec![0usize; n];
    let mut best = u64::MAX;
    assign_classes(&classes, 0, 0, &mut new_label, &mut |labels| {
        let mut code = 0u64;
        for &(u, v) in &edges {
            let (a, b) = crate::graph::edge(labels[u], labels[v]);
            code |= 1u64 << pair_index(a, b, n);
        }
        if code < best {
            best = code;
        }
    });
    Ok(best)
}

/// Recursively assigns the nodes of each degree class to the positions the
/// class occupies, in every order, invoking `f` per complete labeling.
fn assign_classes(
    classes: &[Vec<usize>],
    class_idx: usize,
    next_position: usize,
    new_label: &mut [usize],
    f: &mut impl FnMut(&[usize]),
) {
    if class_idx == classes.len() {
        f(new_label);
        return;
    }
    let members = &classes[class_idx];
    let mut order: Vec<usize> = (0..members.len()).collect();
    permute(&mut order, 0, &mut |perm| {
        for (offset, &slot) in perm.iter().enumerate() {
            new_label[members[slot]] = next_position + offset;
        }
        assign_classes(classes, class_idx + 1, next_position + members.len(), new_label, f);
    });
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Canonical representative of `g`'s isomorphism class (`n <= 8`).
pub fn canonical_form(g: &Graph) -> Result<Graph, Error> {
    Ok(graph_from_code(g.n(), canonical_code(g)?))
}

/// All graphs on `n` nodes up to isomorphism, by augmenting each smaller
/// class with one new node in every way. Deterministic order (ascending
/// canonical code).
pub fn enumerate_graphs(n: usize, connected_only: bool, cap: usize) -> Result<Vec<Graph>, Error> {
    if n == 0 || n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    if n > CANONICAL_CAP {
        return Err(Error::EnumerationCapExceeded { n, cap: CANONICAL_CAP });
    }
    let mut classes: BTreeSet<u64> = BTreeSet::new();
    classes.insert(0); // the 1-node graph
    for m in 2..=n {
        let mut next: BTreeSet<u64> = BTreeSet::new();
        for &code in &classes {
            let base = graph_from_code(m - 1, code);
            for mask in 0u64..(1u64 << (m - 1)) {
                let mut g = Graph::empty(m);
                for (u, v) in base.edges() {
                    g.add_edge(u, v).expect("copied edge");
                }
                for v in 0..(m - 1) {
                    if mask & (1 << v) != 0 {
                        g.add_edge(v, m - 1).expect("new edge");
                    }
                }
                next.insert(canonical_code(&g)?);
            }
        }
        classes = next;
    }
    Ok(classes
        .into_iter()
        .map(|code| graph_from_code(n, code))
        .filter(|g| !connected_only || g.is_connected())
        .collect())
}

/// Eccentricity centers of a tree (one or two nodes).
fn tree_centers(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut centers = Vec::new();
    for u in 0..n {
        let ecc = g
            .distances_from(u)
            .expect("node in range")
            .into_iter()
            .map(|d| d.finite().expect("tree connected"))
            .max()
            .unwrap_or(0);
        if ecc < best {
            best = ecc;
            centers = vec![u];
        } else if ecc == best {
            centers.push(u);
        }
    }
    centers
}

fn rooted_string(adj: &[Vec<usize>], u: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = adj[u]
        .iter()
        .filter(|&&v| Some(v) != parent)
        .map(|&v| rooted_string(adj, v, Some(u)))
        .collect();
    kids.sort_unstable();
    let mut s = String::from("(");
    for k in kids {
        s.push_str(&k);
    }
    s.push(')');
    s
}

/// Canonical string of a free tree: minimum center-rooted string.
pub fn tree_canonical_string(g: &Graph) -> Result<String, Error> {
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    let adj = g.adjacency();
    Ok(tree_centers(g)
        .into_iter()
        .map(|c| rooted_string(&adj, c, None))
        .min()
        .expect("tree has a center"))
}

/// Relabels a free tree canonically: root at the center realizing the
/// canonical string, children visited in sorted-substring order, ids in
/// preorder.
fn tree_canonical_form(g: &Graph) -> Graph {
    let adj = g.adjacency();
    let (_, root) = tree_centers(g)
        .into_iter()
        .map(|c| (rooted_string(&adj, c, None), c))
        .min()
        .expect("tree has a center");
    let mut label = vec![usize::MAX; g.n()];
    let mut next = 0usize;
    let mut edges = Vec::new();
    relabel(&adj, root, None, &mut label, &mut next, &mut edges);
    Graph::from_edges(g.n(), edges).expect("relabeled tree")
}

fn relabel(
    adj: &[Vec<usize>],
    u: usize,
    parent: Option<usize>,
    label: &mut [usize],
    next: &mut usize,
    edges: &mut Vec<(usize, usize)>,
) {
    label[u] = *next;
    *next += 1;
    let mut kids: Vec<(String, usize)> = adj[u]
        .iter()
        .filter(|&&v| Some(v) != parent)
        .map(|&v| (rooted_string(adj, v, Some(u)), v))
        .collect();
    kids.sort_unstable();
    for (_, v) in kids {
        edges.push((label[u], *next));
        relabel(adj, v, Some(u), label, next, edges);
    }
}

/// All free trees on `n` nodes up to isomorphism, canonically labeled, in
/// ascending canonical-string order. Built by leaf augmentation.
pub fn enumerate_free_trees(n: usize, cap: usize) -> Result<Vec<Graph>, Error> {
    if n == 0 || n > cap {
        return Err(Error::EnumerationCapExceeded { n, cap });
    }
    let mut current: BTreeMap<String, Graph> = BTreeMap::new();
    current.insert(String::from("()"), Graph::empty(1));
    for m in 2..=n {
        let mut next: BTreeMap<String, Graph> = BTreeMap::new();
        for base in current.values() {
            for attach in 0..(m - 1) {
                let mut t = Graph::empty(m);
                for (u, v) in base.edges() {
                    t.add_edge(u, v).expect("copied edge");
                }
                t.add_edge(attach, m - 1).expect("new leaf");
                let key = tree_canonical_string(&t).expect("leaf-augmented tree");
                next.entry(key).or_insert_with(|| tree_canonical_form(&t));
            }
        }
        current = next;
    }
    Ok(current.into_values().collect())
}
