//! A path of length at least `k` per component and pass, from a buffer of
//! `|V_C| · k` edges.

use std::collections::{BTreeMap, HashSet};

use crate::algorithms::{dfs_preorder, spanning_pass, Diagnostics};
use crate::dsu::DsuState;
use crate::stream::{BudgetViolation, Edge, EdgeStream, SpaceMeter, VertexId, DUMMY_ROOT, NIL};
use crate::tree::DfsTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Collecting the first `|V_C| · k` distinct edges of the component.
    Buffering,
    /// A path was committed; union-find runs on the rest of the component.
    Split,
}

#[derive(Debug)]
struct Component {
    root: VertexId,
    attach: VertexId,
    vertices: Vec<VertexId>,
    tree_edges: Vec<Edge>,
    buffer: Vec<Edge>,
    keys: HashSet<(VertexId, VertexId)>,
    capacity: usize,
    mode: Mode,
    forest: Vec<Edge>,
}

impl Component {
    fn new(
        root: VertexId,
        attach: VertexId,
        vertices: Vec<VertexId>,
        tree_edges: Vec<Edge>,
        k: usize,
    ) -> Self {
        let capacity = vertices.len() * k;
        Component {
            root,
            attach,
            vertices,
            tree_edges,
            buffer: Vec::new(),
            keys: HashSet::new(),
            capacity,
            mode: Mode::Buffering,
            forest: Vec::new(),
        }
    }
}

struct KPath<'a> {
    k: usize,
    check: bool,
    t: DfsTree,
    meter: &'a mut SpaceMeter,
    diag: &'a mut Diagnostics,
    comps: Vec<Component>,
    comp_of: Vec<usize>,
    on_path: Vec<bool>,
    /// Deepest path vertex adjacent to each vertex off the path.
    best_on_path: Vec<VertexId>,
    dsu: DsuState,
    scratch: Vec<usize>,
}

/// Pass 0 computes the components of the graph without the dummy root. In
/// every later pass each live component buffers its first `|V_C| · k`
/// distinct edges. A component whose buffer never overflows is finished with
/// an in-memory DFS. Otherwise, at the first overflowing edge, the longest
/// root path of a DFS of `T_C` plus the buffer is committed and the rest of
/// the pass (replaying the buffer first) computes the components of the
/// remainder and their deepest edge to the path.
pub fn run_k_path(
    stream: &mut EdgeStream,
    meter: &mut SpaceMeter,
    k: usize,
    check: bool,
    diag: &mut Diagnostics,
) -> Result<DfsTree, BudgetViolation> {
    let n = stream.n_aug();
    let seeds = spanning_pass(stream, meter)?;
    let mut run = KPath {
        k,
        check,
        t: DfsTree::new(n, DUMMY_ROOT),
        meter,
        diag,
        comps: Vec::new(),
        comp_of: vec![NIL; n],
        on_path: vec![false; n],
        best_on_path: vec![NIL; n],
        dsu: DsuState::with_active(vec![false; n]),
        scratch: vec![NIL; n],
    };
    for s in seeds {
        run.spawn(s.root, DUMMY_ROOT, s.vertices, s.tree_edges);
    }
    while !run.comps.is_empty() {
        for (i, c) in run.comps.iter().enumerate() {
            for &v in &c.vertices {
                run.comp_of[v] = i;
            }
        }
        for e in stream.pass() {
            run.edge(e)?;
        }
        run.finish_pass()?;
    }
    Ok(run.t)
}

impl KPath<'_> {
    /// Queues a component for the next pass, or commits it at once when it
    /// is a single vertex.
    fn spawn(
        &mut self,
        root: VertexId,
        attach: VertexId,
        vertices: Vec<VertexId>,
        tree_edges: Vec<Edge>,
    ) {
        if vertices.len() == 1 {
            self.t
                .attach(root, attach)
                .expect("attachment vertex is committed");
        } else {
            self.comps
                .push(Component::new(root, attach, vertices, tree_edges, self.k));
        }
    }

    fn edge(&mut self, e: Edge) -> Result<(), BudgetViolation> {
        let c = self.comp_of[e.u];
        if c == NIL || self.comp_of[e.v] == NIL {
            return Ok(());
        }
        debug_assert_eq!(c, self.comp_of[e.v], "edge between components");
        let comp = &mut self.comps[c];
        if comp.mode == Mode::Split {
            return self.split_edge(c, e);
        }
        if comp.keys.contains(&e.key()) {
            return Ok(());
        }
        if comp.buffer.len() < comp.capacity {
            comp.keys.insert(e.key());
            comp.buffer.push(e);
            return self.meter.store(1, "kpath: buffer");
        }
        self.extract_path(c)?;
        self.split_edge(c, e)
    }

    /// Commits the longest root path of a DFS of `T_C` plus the full buffer,
    /// then replays the buffer through union-find.
    fn extract_path(&mut self, c: usize) -> Result<(), BudgetViolation> {
        let comp = &mut self.comps[c];
        let order = dfs_preorder(
            comp.root,
            &comp.vertices,
            comp.tree_edges.iter().chain(comp.buffer.iter()).copied(),
            &mut self.scratch,
        );
        let &(deepest, _, depth) = order
            .iter()
            .min_by_key(|&&(v, _, d)| (std::cmp::Reverse(d), v))
            .expect("root is present");
        let aux_edges = comp.tree_edges.len() + comp.buffer.len();
        if self.check {
            // Any DFS tree of a connected graph has height at least m / n.
            assert!(
                depth * comp.vertices.len() >= aux_edges,
                "auxiliary tree too shallow"
            );
        }
        self.diag.aux_trees += 1;
        self.diag.min_aux_path = Some(self.diag.min_aux_path.map_or(depth, |m| m.min(depth)));

        for &(v, p, _) in &order {
            self.scratch[v] = p;
        }
        let mut path = vec![deepest];
        while let Some(&top) = path.last() {
            let p = self.scratch[top];
            if p == NIL {
                break;
            }
            path.push(p);
        }
        for &(v, _, _) in &order {
            self.scratch[v] = NIL;
        }
        path.reverse();
        self.t
            .attach(comp.root, comp.attach)
            .expect("attachment vertex is committed");
        for w in path.windows(2) {
            self.t.attach(w[1], w[0]).expect("path is connected");
        }
        for &v in &path {
            self.on_path[v] = true;
        }
        for &v in &comp.vertices {
            if !self.on_path[v] {
                self.dsu.activate(v);
                self.best_on_path[v] = NIL;
            }
        }
        self.meter
            .release(comp.tree_edges.len(), "kpath: component tree");
        comp.tree_edges = Vec::new();
        comp.keys = HashSet::new();
        comp.mode = Mode::Split;
        let buffer = std::mem::take(&mut comp.buffer);
        for e in buffer {
            self.meter.release(1, "kpath: buffer");
            self.split_edge(c, e)?;
        }
        Ok(())
    }

    fn split_edge(&mut self, c: usize, e: Edge) -> Result<(), BudgetViolation> {
        match (self.on_path[e.u], self.on_path[e.v]) {
            (false, false) => {
                if self
                    .dsu
                    .union(e.u, e.v)
                    .expect("off-path vertices are active")
                {
                    self.comps[c].forest.push(e);
                    self.meter.store(1, "kpath: child forest")?;
                }
            }
            (true, false) => self.offer(e.v, e.u),
            (false, true) => self.offer(e.u, e.v),
            (true, true) => {}
        }
        Ok(())
    }

    fn offer(&mut self, y: VertexId, x: VertexId) {
        let cur = self.best_on_path[y];
        if cur == NIL || self.t.level(x) > self.t.level(cur) {
            self.best_on_path[y] = x;
        }
    }

    fn finish_pass(&mut self) -> Result<(), BudgetViolation> {
        let comps = std::mem::take(&mut self.comps);
        for v in comps.iter().flat_map(|c| c.vertices.iter()) {
            self.comp_of[*v] = NIL;
        }
        for comp in comps {
            match comp.mode {
                Mode::Buffering => self.finish_whole(comp),
                Mode::Split => self.spawn_children(comp),
            }
        }
        self.comps.sort_by_key(|c| c.root);
        Ok(())
    }

    /// The buffer held every edge of the component: its DFS is final.
    fn finish_whole(&mut self, comp: Component) {
        let order = dfs_preorder(
            comp.root,
            &comp.vertices,
            comp.tree_edges.iter().chain(comp.buffer.iter()).copied(),
            &mut self.scratch,
        );
        debug_assert_eq!(order.len(), comp.vertices.len());
        for (v, p, _) in order {
            let parent = if p == NIL { comp.attach } else { p };
            self.t
                .attach(v, parent)
                .expect("parent precedes child in preorder");
        }
        self.meter.release(
            comp.tree_edges.len() + comp.buffer.len(),
            "kpath: finished component",
        );
    }

    fn spawn_children(&mut self, comp: Component) {
        let mut groups: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &v in &comp.vertices {
            if self.on_path[v] {
                self.on_path[v] = false;
                continue;
            }
            let r = self.dsu.find(v).expect("active");
            groups.entry(r).or_default().push(v);
        }
        let mut edges: BTreeMap<VertexId, Vec<Edge>> = BTreeMap::new();
        for &e in &comp.forest {
            edges
                .entry(self.dsu.find(e.u).expect("active"))
                .or_default()
                .push(e);
        }
        for (r, vertices) in groups {
            let y = *vertices
                .iter()
                .max_by_key(|&&v| {
                    let x = self.best_on_path[v];
                    (
                        x != NIL,
                        if x == NIL { 0 } else { self.t.level(x) },
                        std::cmp::Reverse(v),
                    )
                })
                .expect("nonempty group");
            let x = self.best_on_path[y];
            assert!(
                x != NIL,
                "component of the remainder is not adjacent to the path"
            );
            for &v in &vertices {
                self.dsu.deactivate(v);
            }
            self.spawn(y, x, vertices, edges.remove(&r).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{Enforcement, GraphInput, GraphSource};
    use crate::tree::validate_dfs;

    fn run(g: &GraphInput, k: usize) -> (DfsTree, usize, Diagnostics) {
        let mut s = EdgeStream::augment_with_root(g);
        let mut m = SpaceMeter::new(g.n_aug() * (k + 1), Enforcement::Strict);
        let mut d = Diagnostics::default();
        let t = run_k_path(&mut s, &mut m, k, true, &mut d).unwrap();
        assert!(validate_dfs(g, &t).unwrap().valid);
        (t, s.passes(), d)
    }

    fn path_graph(n: usize) -> GraphInput {
        GraphInput {
            name: "path".into(),
            n_original: n,
            edges: (1..n).map(|v| Edge::new(v, v + 1)).collect(),
            source: GraphSource::File,
        }
    }

    #[test]
    fn path_fits_in_buffer() {
        let (t, passes, d) = run(&path_graph(100), 10);
        assert_eq!(passes, 2);
        assert_eq!(t.height(), 100);
        assert_eq!(d.aux_trees, 0);
    }

    #[test]
    fn no_edges_needs_only_the_spanning_pass() {
        let g = GraphInput {
            name: "e".into(),
            n_original: 4,
            edges: vec![],
            source: GraphSource::File,
        };
        let (t, passes, _) = run(&g, 1);
        assert_eq!((passes, t.height()), (1, 1));
    }

    #[test]
    fn overflow_extracts_long_path() {
        // K_6: 15 edges, buffer of 6 with k = 1.
        let mut edges = Vec::new();
        for u in 1..=6 {
            for v in u + 1..=6 {
                edges.push(Edge::new(u, v));
            }
        }
        let g = GraphInput {
            name: "k6".into(),
            n_original: 6,
            edges,
            source: GraphSource::File,
        };
        let (t, _, d) = run(&g, 1);
        assert_eq!(t.height(), 6);
        assert!(d.aux_trees >= 1);
        assert!(d.min_aux_path.unwrap() >= 1);
    }
}
