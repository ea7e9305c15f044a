//! Incremental DFS-tree restructuring under edge insertion with monotonic
//! fall: every path reversal only pushes vertices deeper, never higher.
//!
//! The stored subgraph [`SubgraphH`] holds the non-tree edges kept alongside a
//! component tree; tree edges live in the [`DfsTree`] itself.

use std::collections::HashSet;

use crate::stream::{Edge, VertexId};
use crate::tree::DfsTree;

pub type EdgeId = usize;

#[derive(Clone, Debug)]
struct Slot {
    edge: Edge,
    pos_u: usize,
    pos_v: usize,
    in_pool: bool,
    alive: bool,
}

/// Non-tree edges stored next to a tree, indexed by endpoint. Parallel copies
/// of an already stored edge are rejected.
#[derive(Clone, Debug)]
pub struct SubgraphH {
    slots: Vec<Slot>,
    free: Vec<EdgeId>,
    adj: Vec<Vec<EdgeId>>,
    keys: HashSet<(VertexId, VertexId)>,
}

impl SubgraphH {
    pub fn new(n: usize) -> Self {
        SubgraphH {
            slots: Vec::new(),
            free: Vec::new(),
            adj: vec![Vec::new(); n],
            keys: HashSet::new(),
        }
    }

    /// Number of stored non-tree edges.
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.keys.contains(&e.key())
    }

    /// Stores `e` unless an identical edge is already present.
    pub fn insert(&mut self, e: Edge) -> Option<EdgeId> {
        if !self.keys.insert(e.key()) {
            return None;
        }
        let slot = Slot {
            edge: e,
            pos_u: self.adj[e.u].len(),
            pos_v: self.adj[e.v].len(),
            in_pool: false,
            alive: true,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.slots[id] = slot;
                id
            }
            None => {
                self.slots.push(slot);
                self.slots.len() - 1
            }
        };
        self.adj[e.u].push(id);
        self.adj[e.v].push(id);
        Some(id)
    }

    pub fn remove(&mut self, id: EdgeId) -> Edge {
        let Slot {
            edge,
            pos_u,
            pos_v,
            alive,
            ..
        } = self.slots[id].clone();
        assert!(alive, "edge {id} already removed");
        self.detach(edge.u, pos_u);
        self.detach(edge.v, pos_v);
        self.slots[id].alive = false;
        self.keys.remove(&edge.key());
        self.free.push(id);
        edge
    }

    fn detach(&mut self, x: VertexId, pos: usize) {
        let list = &mut self.adj[x];
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            let s = &mut self.slots[moved];
            if s.edge.u == x {
                s.pos_u = pos;
            } else {
                s.pos_v = pos;
            }
        }
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.slots[id].edge
    }

    pub fn in_pool(&self, id: EdgeId) -> bool {
        self.slots[id].in_pool
    }

    /// Non-tree edges incident on `x`.
    pub fn incident(&self, x: VertexId) -> &[EdgeId] {
        &self.adj[x]
    }

    pub fn ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.slots.len()).filter(|&i| self.slots[i].alive)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.ids().map(|i| self.slots[i].edge)
    }

    /// Drops every stored edge incident on `x`.
    pub fn clear_vertex(&mut self, x: VertexId) -> usize {
        let mut n = 0;
        while let Some(&id) = self.adj[x].last() {
            self.remove(id);
            n += 1;
        }
        n
    }
}

/// Worklist of stored edges awaiting reinsertion. Extraction is LIFO.
#[derive(Clone, Debug, Default)]
pub struct EdgePool {
    stack: Vec<EdgeId>,
}

impl EdgePool {
    pub fn push(&mut self, h: &mut SubgraphH, id: EdgeId) {
        h.slots[id].in_pool = true;
        self.stack.push(id);
    }

    pub fn pop(&mut self, h: &mut SubgraphH) -> Option<EdgeId> {
        let id = self.stack.pop()?;
        h.slots[id].in_pool = false;
        Some(id)
    }

    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }
}

/// Classification of a non-tree edge `(x, y)` with `level(x) >= level(y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathSplit {
    /// `y` is an ancestor of `x`.
    Back,
    /// `w` is the LCA and `v` the child of `w` on the path to `y`.
    Cross { w: VertexId, v: VertexId },
}

/// Locates the LCA of a cross edge and the top vertex of the path that will be
/// reversed. Endpoints are swapped first so that `x` is the deeper one.
pub fn find_path_vertex_v(
    t: &DfsTree,
    x: VertexId,
    y: VertexId,
) -> (VertexId, VertexId, PathSplit) {
    let (x, y) = if t.level(x) >= t.level(y) {
        (x, y)
    } else {
        (y, x)
    };
    let mut a = t.ancestor_at(x, t.level(y));
    if a == y {
        return (x, y, PathSplit::Back);
    }
    let mut b = y;
    loop {
        let (pa, pb) = (t.parent(a), t.parent(b));
        match (pa, pb) {
            (Some(pa), Some(pb)) if pa == pb => return (x, y, PathSplit::Cross { w: pa, v: b }),
            (Some(pa), Some(pb)) => {
                a = pa;
                b = pb;
            }
            _ => panic!("edge ({x}, {y}) joins different trees"),
        }
    }
}

/// Hangs the subtree of `v` from `x` through `y`, reversing the tree path
/// `y .. v`. Returns the moved vertices in preorder from `y`.
pub fn reverse_and_rehang(t: &mut DfsTree, x: VertexId, y: VertexId, v: VertexId) -> Vec<VertexId> {
    let path = t.root_path_from(y, v);
    for &p in &path {
        t.cut(p);
    }
    for pair in path.windows(2) {
        t.link(pair[1], pair[0]);
    }
    t.link(y, x);
    t.relevel_subtree(y, t.level(x) + 1);
    t.subtree(y)
}

/// Stored non-tree edges incident on `moved` that are no longer back edges.
/// Collected edges are marked as pooled and pushed onto `pool`.
pub fn collect_new_cross_edges(
    t: &DfsTree,
    h: &mut SubgraphH,
    moved: &[VertexId],
    pool: &mut EdgePool,
) -> Vec<EdgeId> {
    let mut found = Vec::new();
    for &u in moved {
        for i in 0..h.incident(u).len() {
            let id = h.incident(u)[i];
            if h.in_pool(id) {
                continue;
            }
            let o = h.edge(id).other(u);
            if !(t.is_ancestor(u, o) || t.is_ancestor(o, u)) {
                pool.push(h, id);
                found.push(id);
            }
        }
    }
    found
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RestructureReport {
    /// Path reversals performed.
    pub reversals: usize,
    /// Vertices whose level changed, possibly repeated across reversals.
    pub moved: Vec<VertexId>,
    /// Increase of the sum of levels.
    pub potential_gain: usize,
}

/// Restores `t` as a DFS tree of `h` after the stored edge `e` was inserted.
///
/// Back edges are left alone. A cross edge `(x, y)` with `level(x) >=
/// level(y)` replaces the tree edge `(w, v)`, which stays in `h` as a back
/// edge; edges turned into cross edges by the reversal are processed in turn.
pub fn maintain_dfs(t: &mut DfsTree, h: &mut SubgraphH, e: EdgeId) -> RestructureReport {
    maintain_dfs_with(t, h, e, |_, _, _| {})
}

/// [`maintain_dfs`] calling `on_reversal(t, path, moved)` after every
/// reversal, where `path` runs from the new top `y` down to the old top `v`
/// and `moved` lists the rehung subtree in preorder.
pub fn maintain_dfs_with<F>(
    t: &mut DfsTree,
    h: &mut SubgraphH,
    e: EdgeId,
    mut on_reversal: F,
) -> RestructureReport
where
    F: FnMut(&DfsTree, &[VertexId], &[VertexId]),
{
    let mut report = RestructureReport::default();
    let mut pool = EdgePool::default();
    pool.push(h, e);
    while let Some(id) = pool.pop(h) {
        let edge = h.edge(id);
        let (x, y, split) = find_path_vertex_v(t, edge.u, edge.v);
        let PathSplit::Cross { w, v } = split else {
            continue;
        };
        let path = t.root_path_from(y, v);
        let before: usize = t.subtree(v).iter().map(|&u| t.level(u)).sum();
        let moved = reverse_and_rehang(t, x, y, v);
        let after: usize = moved.iter().map(|&u| t.level(u)).sum();
        debug_assert!(after > before, "reversal must push vertices down");
        report.potential_gain += after - before;
        report.reversals += 1;
        on_reversal(t, &path, &moved);

        h.remove(id);
        h.insert(Edge::new(w, v));
        collect_new_cross_edges(t, h, &moved, &mut pool);
        report.moved.extend(moved);
    }
    report
}
