//! `k` tree levels per component and pass, maintained by restructuring.

use crate::algorithms::{dfs_preorder, spanning_pass, Diagnostics};
use crate::restructure::{maintain_dfs_with, SubgraphH};
use crate::stream::{BudgetViolation, Edge, EdgeStream, SpaceMeter, VertexId, DUMMY_ROOT, NIL};
use crate::tree::{DfsTree, RepIndex};

struct KLev<'a> {
    k: usize,
    early: bool,
    check: bool,
    /// Committed output tree with global levels.
    t: DfsTree,
    /// Component trees with component-local levels.
    work: DfsTree,
    h: SubgraphH,
    rep: RepIndex,
    roots: Vec<VertexId>,
    /// Parent in `t` of each component root.
    attach: Vec<VertexId>,
    live: Vec<bool>,
    meter: &'a mut SpaceMeter,
    diag: &'a mut Diagnostics,
    // Early commit bookkeeping, reset every pass.
    /// Endpoint of an edge seen this pass that is not stored.
    unstored: Vec<bool>,
    /// Some unstored edge may be a cross edge with its lowest common
    /// ancestor in the subtree of a marked vertex.
    marked: Vec<bool>,
    owner: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    // Checked runs only.
    shadow: Vec<usize>,
    global_seen: Vec<usize>,
}

/// Pass 0 computes the components of the graph without the dummy root and a
/// spanning tree for each. In every later pass each component keeps its tree
/// `T_C` a DFS tree of the stored subgraph `H_C`: an edge with both endpoints
/// in one subtree hanging below the top `k` levels is skipped, any other edge
/// is stored and restructured in, and stored edges that end up inside a
/// hanging subtree are dropped again. At the end of the pass the top `k`
/// levels are committed and each hanging subtree becomes a component.
///
/// With `early` set, the commit also extends below level `k` to every vertex
/// that is not inside the subtree of a marked vertex. A skipped edge that is a
/// cross edge marks its lowest common ancestor. A reversal of the path
/// `y .. v` marks the highest path vertex `p_j` whose side subtree holds an
/// endpoint of an unstored edge, provided a lower path vertex `p_i`, `i > j`,
/// has one too: only such pairs can turn an unstored back edge into a cross
/// edge. A mark on the reversed path below `y` moves up to `y`.
pub fn run_k_lev(
    stream: &mut EdgeStream,
    meter: &mut SpaceMeter,
    k: usize,
    early: bool,
    check: bool,
    diag: &mut Diagnostics,
) -> Result<DfsTree, BudgetViolation> {
    let n = stream.n_aug();
    let seeds = spanning_pass(stream, meter)?;
    let mut run = KLev {
        k,
        early,
        check,
        t: DfsTree::new(n, DUMMY_ROOT),
        work: DfsTree::forest(n),
        h: SubgraphH::new(n),
        rep: RepIndex::new(n, k),
        roots: Vec::new(),
        attach: vec![NIL; n],
        live: vec![false; n],
        meter,
        diag,
        unstored: vec![false; n],
        marked: vec![false; n],
        owner: vec![NIL; n],
        stamp: vec![0; n],
        epoch: 0,
        shadow: vec![0; n],
        global_seen: vec![0; n],
    };
    let mut scratch = vec![NIL; n];
    for s in seeds {
        if s.vertices.len() == 1 {
            run.t.attach(s.root, DUMMY_ROOT).expect("root is committed");
            continue;
        }
        for (v, p, _) in dfs_preorder(s.root, &s.vertices, s.tree_edges, &mut scratch) {
            if p == NIL {
                run.work.plant(v).expect("fresh vertex");
            } else {
                run.work.attach(v, p).expect("preorder");
            }
            run.live[v] = true;
        }
        run.rep.update_subtree(&run.work, s.root);
        run.attach[s.root] = DUMMY_ROOT;
        run.roots.push(s.root);
    }
    while !run.roots.is_empty() {
        for e in stream.pass() {
            run.edge(e)?;
        }
        run.finish_pass();
    }
    Ok(run.t)
}

/// Marks the top of the region that may contain a new unstored cross edge
/// after the reversal of `path` (new top first).
fn mark_reversal(
    t: &DfsTree,
    path: &[VertexId],
    moved: &[VertexId],
    unstored: &[bool],
    marked: &mut [bool],
    owner: &mut [usize],
) {
    if path[1..].iter().any(|&p| marked[p]) {
        marked[path[0]] = true;
    }
    let Some(lowest) = (1..path.len()).rev().find(|&i| unstored[path[i]]) else {
        return;
    };
    for (i, &p) in path.iter().enumerate() {
        owner[p] = i;
    }
    let mut highest = NIL;
    for &u in moved {
        if owner[u] == NIL {
            owner[u] = owner[t.parent(u).expect("inside the moved subtree")];
            if unstored[u] && owner[u] < lowest {
                highest = highest.min(owner[u]);
            }
        }
    }
    for &u in moved {
        owner[u] = NIL;
    }
    if highest != NIL {
        marked[path[highest]] = true;
    }
}

impl KLev<'_> {
    fn is_tree_edge(&self, e: Edge) -> bool {
        self.work.parent(e.u) == Some(e.v) || self.work.parent(e.v) == Some(e.u)
    }

    fn edge(&mut self, e: Edge) -> Result<(), BudgetViolation> {
        let (a, b) = (e.u, e.v);
        if !self.live[a] || !self.live[b] || self.is_tree_edge(e) || self.h.contains(e) {
            return Ok(());
        }
        let k = self.k;
        if self.work.level(a) >= k && self.work.level(b) >= k && self.rep.get(a) == self.rep.get(b)
        {
            if self.early {
                self.unstored[a] = true;
                self.unstored[b] = true;
                let c = self.work.lca(a, b).expect("same component");
                if c != a && c != b {
                    self.marked[c] = true;
                }
            }
            return Ok(());
        }
        let id = self.h.insert(e).expect("not stored yet");
        self.meter.store(1, "klev: stored edge")?;
        let early = self.early;
        let (unstored, marked, owner) = (&self.unstored, &mut self.marked, &mut self.owner);
        let report = maintain_dfs_with(&mut self.work, &mut self.h, id, |t, path, moved| {
            if early {
                mark_reversal(t, path, moved, unstored, marked, owner);
            }
        });
        if report.reversals == 0 {
            return Ok(());
        }
        self.diag.restructures += 1;
        self.diag.reversals += report.reversals;
        self.diag.potential_gain += report.potential_gain;

        self.epoch += 1;
        let mut moved = Vec::new();
        for u in report.moved {
            if self.stamp[u] != self.epoch {
                self.stamp[u] = self.epoch;
                moved.push(u);
            }
        }
        moved.sort_by_key(|&u| self.work.level(u));
        for &u in &moved {
            self.rep.refresh(&self.work, u);
        }
        if self.check {
            for &u in &moved {
                if self.work.level(u) < self.shadow[u] {
                    self.diag.monotonic_violations += 1;
                }
                self.shadow[u] = self.work.level(u);
            }
            self.diag.stored_cross_edges += self.stored_cross_edges();
        }
        for &u in &moved {
            if self.work.level(u) < k {
                continue;
            }
            let mut i = 0;
            while i < self.h.incident(u).len() {
                let id = self.h.incident(u)[i];
                let o = self.h.edge(id).other(u);
                if self.work.level(o) >= k {
                    self.h.remove(id);
                    self.meter.release(1, "klev: dropped edge");
                    self.unstored[u] = true;
                    self.unstored[o] = true;
                } else {
                    i += 1;
                }
            }
        }
        Ok(())
    }

    fn stored_cross_edges(&self) -> usize {
        self.h
            .edges()
            .filter(|e| !(self.work.is_ancestor(e.u, e.v) || self.work.is_ancestor(e.v, e.u)))
            .count()
    }

    fn finish_pass(&mut self) {
        let stored: Vec<_> = self.h.ids().collect();
        for id in stored {
            self.h.remove(id);
        }

        let mut pieces = Vec::new();
        for r in std::mem::take(&mut self.roots) {
            if self.check {
                let base = self.t.level(self.attach[r]) + 1;
                for u in self.work.subtree(r) {
                    let g = base + self.work.level(u);
                    if g < self.global_seen[u] {
                        self.diag.monotonic_violations += 1;
                    }
                    self.global_seen[u] = g;
                }
            }
            let first_piece = pieces.len();
            let mut stack = vec![(r, false)];
            while let Some((u, above)) = stack.pop() {
                let deep = self.work.level(u) >= self.k;
                let under_mark = above || self.marked[u];
                if deep && (!self.early || under_mark) {
                    pieces.push((u, self.work.parent(u).expect("below the root")));
                    continue;
                }
                let parent = self.work.parent(u).unwrap_or(self.attach[r]);
                self.t.attach(u, parent).expect("parent committed first");
                self.live[u] = false;
                if deep {
                    self.diag.early_commits += 1;
                }
                stack.extend(self.work.children(u).iter().rev().map(|&c| (c, under_mark)));
            }
            for &(c, _) in &pieces[first_piece..] {
                self.work.cut(c);
            }
            self.work.remove_subtree(r);
        }
        for (c, p) in pieces {
            if self.work.children(c).is_empty() {
                self.work.remove_subtree(c);
                self.live[c] = false;
                self.t.attach(c, p).expect("parent committed");
                continue;
            }
            self.work.relevel_subtree(c, 0);
            self.rep.update_subtree(&self.work, c);
            if self.check {
                for u in self.work.subtree(c) {
                    self.shadow[u] = self.work.level(u);
                }
            }
            self.attach[c] = p;
            self.roots.push(c);
        }
        self.roots.sort_unstable();
        let excess = self.meter.current() - self.tree_edge_count();
        self.meter.release(excess, "klev: pass end");
        if self.early {
            self.unstored.fill(false);
            self.marked.fill(false);
        }
    }

    fn tree_edge_count(&self) -> usize {
        self.work.len() - self.roots.len()
    }
}
