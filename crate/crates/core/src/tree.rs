//! Rooted trees over dense vertex ids.
//!
//! [`DfsTree`] is used both for the output tree and for the per-component
//! trees that are still being restructured. It may hold several rooted trees
//! at once (one per component); [`DfsTree::root`] names the designated root
//! when there is one.

use std::fmt::Write as _;

use thiserror::Error;

use crate::stream::{Edge, GraphInput, VertexId, NIL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex {0} is not in the tree")]
    NotInTree(VertexId),
    #[error("vertex {0} is already in the tree")]
    AlreadyInTree(VertexId),
    #[error("vertex {0} is out of range")]
    OutOfRange(VertexId),
    #[error("tree does not span the graph: vertex {0} is unreachable from the root")]
    NotSpanning(VertexId),
    #[error("tree has no designated root")]
    NoRoot,
}

#[derive(Clone, Debug)]
pub struct DfsTree {
    root: VertexId,
    parent: Vec<VertexId>,
    level: Vec<usize>,
    children: Vec<Vec<VertexId>>,
    // Index of a vertex inside its parent's child list.
    child_pos: Vec<usize>,
    in_tree: Vec<bool>,
    size: usize,
}

impl DfsTree {
    /// A tree over `n` vertex slots containing only `root`.
    pub fn new(n: usize, root: VertexId) -> Self {
        let mut t = Self::forest(n);
        t.root = root;
        t.plant(root).expect("fresh tree");
        t
    }

    /// An empty forest over `n` vertex slots.
    pub fn forest(n: usize) -> Self {
        DfsTree {
            root: NIL,
            parent: vec![NIL; n],
            level: vec![0; n],
            children: vec![Vec::new(); n],
            child_pos: vec![0; n],
            in_tree: vec![false; n],
            size: 0,
        }
    }

    /// Rebuilds a tree from parent pointers (`None` for the root and for
    /// vertices outside the tree). Levels are recomputed from the root.
    pub fn from_parents(root: VertexId, parents: &[Option<VertexId>]) -> Result<Self, TreeError> {
        let n = parents.len();
        if root >= n {
            return Err(TreeError::OutOfRange(root));
        }
        let mut kids: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(TreeError::OutOfRange(p));
                }
                kids[p].push(v);
            }
        }
        let mut t = DfsTree::new(n, root);
        let mut stack = vec![root];
        while let Some(p) = stack.pop() {
            for &c in &kids[p] {
                if t.in_tree[c] {
                    return Err(TreeError::AlreadyInTree(c));
                }
                t.attach(c, p)?;
                stack.push(c);
            }
        }
        if let Some(v) = (0..n).find(|&v| parents[v].is_some() && !t.in_tree[v]) {
            return Err(TreeError::NotSpanning(v));
        }
        Ok(t)
    }

    pub fn capacity(&self) -> usize {
        self.parent.len()
    }

    /// Number of vertices currently in the tree.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn root(&self) -> Option<VertexId> {
        (self.root != NIL).then_some(self.root)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.in_tree.get(v).copied().unwrap_or(false)
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        let p = *self.parent.get(v)?;
        (p != NIL).then_some(p)
    }

    pub fn level(&self, v: VertexId) -> usize {
        self.level[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.in_tree.len()).filter(|&v| self.in_tree[v])
    }

    /// Maximum level over all vertices in the tree.
    pub fn height(&self) -> usize {
        self.vertices().map(|v| self.level[v]).max().unwrap_or(0)
    }

    /// Adds `v` as the root of a new tree at level 0.
    pub fn plant(&mut self, v: VertexId) -> Result<(), TreeError> {
        self.check_free(v)?;
        self.in_tree[v] = true;
        self.parent[v] = NIL;
        self.level[v] = 0;
        self.size += 1;
        Ok(())
    }

    /// Adds the tree edge `(parent, child)` for a vertex not yet in the tree.
    pub fn attach(&mut self, child: VertexId, parent: VertexId) -> Result<(), TreeError> {
        if !self.contains(parent) {
            return Err(TreeError::NotInTree(parent));
        }
        self.check_free(child)?;
        self.in_tree[child] = true;
        self.size += 1;
        self.link(child, parent);
        self.level[child] = self.level[parent] + 1;
        Ok(())
    }

    fn check_free(&self, v: VertexId) -> Result<(), TreeError> {
        if v >= self.in_tree.len() {
            Err(TreeError::OutOfRange(v))
        } else if self.in_tree[v] {
            Err(TreeError::AlreadyInTree(v))
        } else {
            Ok(())
        }
    }

    /// Detaches `v` from its parent, leaving it as the root of its subtree.
    /// Levels are not touched.
    pub(crate) fn cut(&mut self, v: VertexId) {
        let p = self.parent[v];
        if p == NIL {
            return;
        }
        let pos = self.child_pos[v];
        let list = &mut self.children[p];
        list.swap_remove(pos);
        if let Some(&moved) = list.get(pos) {
            self.child_pos[moved] = pos;
        }
        self.parent[v] = NIL;
    }

    /// Makes `v` (currently parentless) a child of `p`. Levels are not touched.
    pub(crate) fn link(&mut self, v: VertexId, p: VertexId) {
        debug_assert_eq!(self.parent[v], NIL);
        self.parent[v] = p;
        self.child_pos[v] = self.children[p].len();
        self.children[p].push(v);
    }

    /// Removes a parentless subtree from the tree entirely.
    pub(crate) fn remove_subtree(&mut self, v: VertexId) {
        self.cut(v);
        for u in self.subtree(v) {
            self.in_tree[u] = false;
            self.children[u].clear();
            self.parent[u] = NIL;
            self.size -= 1;
        }
    }

    /// Recomputes levels in the subtree of `v` so that `v` sits at `base`.
    pub(crate) fn relevel_subtree(&mut self, v: VertexId, base: usize) {
        self.level[v] = base;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let next = self.level[u] + 1;
            for i in 0..self.children[u].len() {
                let c = self.children[u][i];
                self.level[c] = next;
                stack.push(c);
            }
        }
    }

    /// Vertices of the subtree rooted at `v` in preorder.
    pub fn subtree(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    /// Non-proper ancestry by walking parent pointers from the deeper vertex.
    pub fn is_ancestor(&self, a: VertexId, d: VertexId) -> bool {
        if !self.contains(a) || !self.contains(d) || self.level[a] > self.level[d] {
            return false;
        }
        let mut cur = d;
        while self.level[cur] > self.level[a] {
            cur = self.parent[cur];
        }
        cur == a
    }

    /// Lowest common ancestor, or `None` for vertices in different trees.
    pub fn lca(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        let (mut a, mut b) = (a, b);
        while self.level[a] > self.level[b] {
            a = self.parent[a];
        }
        while self.level[b] > self.level[a] {
            b = self.parent[b];
        }
        while a != b {
            a = self.parent[a];
            b = self.parent[b];
            if a == NIL || b == NIL {
                return None;
            }
        }
        Some(a)
    }

    /// Ancestor of `v` at `level` (which must not exceed `v`'s level).
    pub fn ancestor_at(&self, v: VertexId, level: usize) -> VertexId {
        let mut cur = v;
        while self.level[cur] > level {
            cur = self.parent[cur];
        }
        cur
    }

    /// Path from the designated root to its deepest vertex, smallest id
    /// winning ties.
    pub fn longest_root_path(&self) -> Vec<VertexId> {
        let Some(root) = self.root() else {
            return Vec::new();
        };
        let deepest = self
            .subtree(root)
            .into_iter()
            .min_by_key(|&v| (std::cmp::Reverse(self.level[v]), v))
            .unwrap_or(root);
        self.root_path(deepest)
    }

    /// Vertices from the tree root down to `v`.
    pub fn root_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// Vertices from `v` up to its ancestor `top`.
    pub fn root_path_from(&self, v: VertexId, top: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != top {
            cur = self.parent[cur];
            assert!(cur != NIL, "{top} is not an ancestor of {v}");
            path.push(cur);
        }
        path
    }

    /// Splits the designated root's tree into its top `k` levels and the
    /// subtrees hanging below them.
    pub fn top_k_levels(&self, k: usize) -> TopLevels {
        assert!(k >= 1, "k must be positive");
        let mut top = TopLevels::default();
        let Some(root) = self.root() else {
            return top;
        };
        let base = self.level[root];
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            top.prime.push(u);
            for &c in &self.children[u] {
                if self.level[c] - base < k {
                    stack.push(c);
                } else {
                    top.hanging.push((c, u));
                }
            }
        }
        top
    }

    /// Preorder intervals for constant-time ancestry queries.
    pub fn euler_index(&self) -> EulerIndex {
        let n = self.capacity();
        let mut tin = vec![usize::MAX; n];
        let mut tout = vec![0; n];
        let mut clock = 0;
        for r in self.vertices().filter(|&v| self.parent[v] == NIL) {
            let mut stack = vec![(r, false)];
            while let Some((u, done)) = stack.pop() {
                if done {
                    tout[u] = clock;
                    continue;
                }
                tin[u] = clock;
                clock += 1;
                stack.push((u, true));
                stack.extend(self.children[u].iter().map(|&c| (c, false)));
            }
        }
        EulerIndex { tin, tout }
    }

    /// First edge that is neither a tree edge nor a back edge, or has an
    /// endpoint outside the tree.
    pub fn first_cross_edge<I: IntoIterator<Item = Edge>>(&self, edges: I) -> Option<Edge> {
        let idx = self.euler_index();
        edges.into_iter().find(|e| {
            !(self.contains(e.u)
                && self.contains(e.v)
                && (idx.is_ancestor(e.u, e.v) || idx.is_ancestor(e.v, e.u)))
        })
    }

    /// Serializes as one `v parent level` line per vertex, `-1` for the root.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.vertices() {
            match self.parent(v) {
                Some(p) => writeln!(out, "{v} {p} {}", self.level[v]),
                None => writeln!(out, "{v} -1 {}", self.level[v]),
            }
            .expect("write to String");
        }
        out
    }
}

/// Preorder entry/exit times of a tree.
#[derive(Clone, Debug)]
pub struct EulerIndex {
    tin: Vec<usize>,
    tout: Vec<usize>,
}

impl EulerIndex {
    /// Non-proper ancestry; false for vertices outside the indexed tree.
    pub fn is_ancestor(&self, a: VertexId, d: VertexId) -> bool {
        self.tin[a] != usize::MAX
            && self.tin[d] != usize::MAX
            && self.tin[a] <= self.tin[d]
            && self.tout[d] <= self.tout[a]
    }
}

/// Result of [`DfsTree::top_k_levels`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TopLevels {
    /// Vertices with relative level `0..k`.
    pub prime: Vec<VertexId>,
    /// `(root, parent)` of each subtree hanging below the top levels.
    pub hanging: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validity {
    pub valid: bool,
    pub first_violation: Option<Edge>,
}

/// Checks that `t` is a DFS tree of `g` augmented with the dummy root: the
/// tree spans every vertex and every graph edge joins an ancestor-descendant
/// pair.
pub fn validate_dfs(g: &GraphInput, t: &DfsTree) -> Result<Validity, TreeError> {
    let root = t.root().ok_or(TreeError::NoRoot)?;
    if t.capacity() < g.n_aug() {
        return Err(TreeError::OutOfRange(g.n_aug() - 1));
    }
    if let Some(v) =
        (0..g.n_aug()).find(|&v| !t.contains(v) || (v != root && t.parent(v).is_none()))
    {
        return Err(TreeError::NotSpanning(v));
    }
    let first_violation = t.first_cross_edge(g.augmented_edges());
    Ok(Validity {
        valid: first_violation.is_none(),
        first_violation,
    })
}

/// For each vertex its ancestor at relative level `k` inside its tree, or
/// itself when it sits above level `k`. Two vertices below the top `k` levels
/// share a representative iff they lie in the same hanging subtree.
#[derive(Clone, Debug)]
pub struct RepIndex {
    rep: Vec<VertexId>,
    k: usize,
}

impl RepIndex {
    pub fn new(n: usize, k: usize) -> Self {
        RepIndex {
            rep: (0..n).collect(),
            k,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, v: VertexId) -> VertexId {
        self.rep[v]
    }

    /// Recomputes representatives for the subtree of `v`, top-down, from
    /// current levels. Returns the number of vertices touched.
    pub fn update_subtree(&mut self, t: &DfsTree, v: VertexId) -> usize {
        let mut touched = 0;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            touched += 1;
            self.rep[u] = if t.level(u) <= self.k {
                u
            } else {
                self.rep[t.parent(u).expect("below level k")]
            };
            stack.extend_from_slice(t.children(u));
        }
        touched
    }

    /// Recomputes the representative of `v` alone; its parent's entry must be
    /// current.
    pub fn refresh(&mut self, t: &DfsTree, v: VertexId) {
        self.rep[v] = match t.parent(v) {
            Some(p) if t.level(v) > self.k => self.rep[p],
            _ => v,
        };
    }

    /// Both vertices lie in one subtree hanging below the top `k` levels.
    pub fn same_hanging_tree(&self, t: &DfsTree, x: VertexId, y: VertexId) -> bool {
        t.level(x) >= self.k && t.level(y) >= self.k && self.rep[x] == self.rep[y]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::GraphSource;

    fn path_tree(n: usize) -> DfsTree {
        let mut t = DfsTree::new(n, 0);
        for v in 1..n {
            t.attach(v, v - 1).unwrap();
        }
        t
    }

    #[test]
    fn attach_levels_and_errors() {
        let mut t = DfsTree::new(4, 0);
        t.attach(1, 0).unwrap();
        assert_eq!(t.level(1), 1);
        t.attach(2, 1).unwrap();
        assert_eq!(t.level(2), 2);
        assert_eq!(t.attach(2, 0), Err(TreeError::AlreadyInTree(2)));
        assert_eq!(t.attach(3, 3), Err(TreeError::NotInTree(3)));
    }

    #[test]
    fn ancestry_queries() {
        let mut t = DfsTree::new(5, 0);
        t.attach(1, 0).unwrap();
        t.attach(2, 0).unwrap();
        t.attach(3, 1).unwrap();
        assert!(t.vertices().all(|v| t.is_ancestor(0, v)));
        assert!(t.is_ancestor(3, 3));
        assert!(!t.is_ancestor(1, 2));
        assert!(!t.is_ancestor(2, 3));
        assert_eq!(t.lca(3, 2), Some(0));
        let idx = t.euler_index();
        assert!(idx.is_ancestor(1, 3) && !idx.is_ancestor(3, 1) && !idx.is_ancestor(2, 3));
        assert!(!idx.is_ancestor(0, 4));
    }

    #[test]
    fn validate_triangle() {
        let g = GraphInput {
            name: "tri".into(),
            n_original: 3,
            edges: vec![Edge::new(1, 2), Edge::new(2, 3), Edge::new(1, 3)],
            source: GraphSource::File,
        };
        let t = path_tree(4);
        assert_eq!(
            validate_dfs(&g, &t).unwrap(),
            Validity {
                valid: true,
                first_violation: None
            }
        );

        let mut star = DfsTree::new(4, 0);
        for v in 1..4 {
            star.attach(v, 0).unwrap();
        }
        let r = validate_dfs(&g, &star).unwrap();
        assert!(!r.valid);
        assert_eq!(r.first_violation, Some(Edge::new(1, 2)));

        let partial = DfsTree::new(4, 0);
        assert_eq!(validate_dfs(&g, &partial), Err(TreeError::NotSpanning(1)));
    }

    #[test]
    fn longest_path_tie_break() {
        let t = DfsTree::new(3, 2);
        assert_eq!(t.longest_root_path(), vec![2]);

        let mut star = DfsTree::new(6, 3);
        for v in [5, 1, 4, 2] {
            star.attach(v, 3).unwrap();
        }
        assert_eq!(star.longest_root_path(), vec![3, 1]);
        assert_eq!(path_tree(6).longest_root_path(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn top_levels_split() {
        let mut t = DfsTree::new(3, 0);
        t.attach(1, 0).unwrap();
        t.attach(2, 1).unwrap();
        let top = t.top_k_levels(5);
        assert_eq!(top.prime.len(), 3);
        assert!(top.hanging.is_empty());

        let p = path_tree(10);
        let top = p.top_k_levels(3);
        assert_eq!(top.prime, vec![0, 1, 2]);
        assert_eq!(top.hanging, vec![(3, 2)]);
        assert_eq!(p.subtree(3).len(), 7);
    }

    #[test]
    fn rep_index_on_path() {
        let p = path_tree(8);
        let mut rep = RepIndex::new(8, 3);
        rep.update_subtree(&p, 0);
        assert_eq!(
            (0..8).map(|v| rep.get(v)).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 3, 3, 3, 3]
        );
        assert!(rep.same_hanging_tree(&p, 4, 7));
        assert!(!rep.same_hanging_tree(&p, 2, 7));
    }

    #[test]
    fn from_parents_roundtrip_and_errors() {
        let p = path_tree(5);
        let parents: Vec<_> = (0..5).map(|v| p.parent(v)).collect();
        let q = DfsTree::from_parents(0, &parents).unwrap();
        assert_eq!(q.to_text(), p.to_text());
        // 3 and 4 point at each other: unreachable from the root.
        let cyclic = [None, Some(0), Some(1), Some(4), Some(3)];
        assert_eq!(
            DfsTree::from_parents(0, &cyclic).unwrap_err(),
            TreeError::NotSpanning(3)
        );
    }

    #[test]
    fn cut_link_relevel() {
        let mut t = path_tree(5);
        t.cut(3);
        t.link(3, 1);
        t.relevel_subtree(3, 2);
        assert_eq!((t.level(3), t.level(4)), (2, 3));
        assert!(t.is_ancestor(1, 4) && !t.is_ancestor(2, 4));
        t.remove_subtree(3);
        assert_eq!(t.len(), 3);
        assert!(!t.contains(4));
    }
}
