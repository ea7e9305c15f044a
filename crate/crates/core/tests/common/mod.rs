//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::VecDeque;

use streamdfs::stream::{Edge, GraphInput, GraphSource, VertexId};
use streamdfs::tree::DfsTree;

pub fn graph(n: usize, edges: &[(usize, usize)]) -> GraphInput {
    GraphInput {
        name: "test".into(),
        n_original: n,
        edges: edges.iter().map(|&(u, v)| Edge::new(u, v)).collect(),
        source: GraphSource::File,
    }
}

pub fn adjacency(n: usize, edges: impl IntoIterator<Item = Edge>) -> Vec<Vec<VertexId>> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    adj
}

/// Component label per active vertex by breadth-first search: the smallest
/// vertex of its component.
pub fn bfs_components(n: usize, edges: &[Edge], active: &[bool]) -> Vec<Option<VertexId>> {
    let adj = adjacency(
        n,
        edges.iter().copied().filter(|e| active[e.u] && active[e.v]),
    );
    let mut label = vec![None; n];
    for s in 0..n {
        if !active[s] || label[s].is_some() {
            continue;
        }
        label[s] = Some(s);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u] {
                if label[w].is_none() {
                    label[w] = Some(s);
                    q.push_back(w);
                }
            }
        }
    }
    label
}

/// Recursive depth-first search of the augmented graph from the dummy root.
pub fn recursive_dfs(g: &GraphInput) -> Vec<Option<VertexId>> {
    fn visit(
        u: VertexId,
        adj: &[Vec<VertexId>],
        parent: &mut [Option<VertexId>],
        seen: &mut [bool],
    ) {
        seen[u] = true;
        for &w in &adj[u] {
            if !seen[w] {
                parent[w] = Some(u);
                visit(w, adj, parent, seen);
            }
        }
    }
    let n = g.n_aug();
    let adj = adjacency(n, g.augmented_edges());
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    visit(0, &adj, &mut parent, &mut seen);
    parent
}

/// Root path of `v` by following parent pointers.
pub fn root_path(t: &DfsTree, v: VertexId) -> Vec<VertexId> {
    let mut path = vec![v];
    while let Some(p) = t.parent(*path.last().unwrap()) {
        path.push(p);
    }
    path
}

pub fn naive_is_ancestor(t: &DfsTree, a: VertexId, d: VertexId) -> bool {
    root_path(t, d).contains(&a)
}

/// Lowest common ancestor by intersecting the two root paths.
pub fn naive_lca(t: &DfsTree, a: VertexId, b: VertexId) -> Option<VertexId> {
    let pa = root_path(t, a);
    root_path(t, b).into_iter().find(|v| pa.contains(v))
}

/// Whether every edge joins an ancestor-descendant pair, by parent walking.
pub fn naive_is_dfs(t: &DfsTree, edges: impl IntoIterator<Item = Edge>) -> bool {
    edges
        .into_iter()
        .all(|e| naive_is_ancestor(t, e.u, e.v) || naive_is_ancestor(t, e.v, e.u))
}

/// Height by walking every root path.
pub fn naive_height(t: &DfsTree) -> usize {
    t.vertices()
        .map(|v| root_path(t, v).len() - 1)
        .max()
        .unwrap_or(0)
}

/// Builds a random rooted tree on `0..n` where vertex `v > 0` picks its parent
/// among `0..v` from `choices`.
pub fn tree_from_choices(n: usize, choices: &[usize]) -> DfsTree {
    let mut t = DfsTree::new(n, 0);
    for v in 1..n {
        t.attach(v, choices[v - 1] % v).unwrap();
    }
    t
}
