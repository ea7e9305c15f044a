//! One tree level per pass.

use crate::dsu::DsuState;
use crate::stream::{BudgetViolation, EdgeStream, SpaceMeter, VertexId, DUMMY_ROOT, NIL};
use crate::tree::DfsTree;

/// Each pass finds the components of the unvisited graph and, for every
/// unvisited vertex, its first edge to a vertex added in the previous pass.
/// Every component then hangs one such edge, so pass `i` adds exactly the
/// vertices at level `i`.
pub fn run_imprv(
    stream: &mut EdgeStream,
    meter: &mut SpaceMeter,
) -> Result<DfsTree, BudgetViolation> {
    let n = stream.n_aug();
    let mut t = DfsTree::new(n, DUMMY_ROOT);
    let mut frontier = vec![false; n];
    frontier[DUMMY_ROOT] = true;
    let mut dsu = DsuState::new(n);
    // (leaf, stream position) of the recorded edge per unvisited vertex.
    let mut edge_to_leaf: Vec<(VertexId, usize)> = vec![(NIL, 0); n];
    let mut best: Vec<(usize, VertexId)> = vec![(usize::MAX, NIL); n];
    while t.len() < n {
        dsu.reset(|v| !t.contains(v));
        edge_to_leaf.fill((NIL, 0));
        let mut stored = 0;
        for (pos, e) in stream.pass().enumerate() {
            let (x, y) = match (t.contains(e.u), t.contains(e.v)) {
                (false, false) => {
                    dsu.union(e.u, e.v).expect("unvisited vertices are active");
                    continue;
                }
                (true, false) => (e.u, e.v),
                (false, true) => (e.v, e.u),
                (true, true) => continue,
            };
            if frontier[x] && edge_to_leaf[y].0 == NIL {
                edge_to_leaf[y] = (x, pos);
                stored += 1;
                meter.store(1, "imprv: leaf edge")?;
            }
        }
        best.fill((usize::MAX, NIL));
        let mut roots = Vec::new();
        for (y, &(x, pos)) in edge_to_leaf.iter().enumerate() {
            if x == NIL || t.contains(y) {
                continue;
            }
            let r = dsu.find(y).expect("unvisited");
            if best[r].1 == NIL {
                roots.push(r);
            }
            if pos < best[r].0 {
                best[r] = (pos, y);
            }
        }
        assert!(!roots.is_empty(), "no component reached the previous level");
        frontier.fill(false);
        for r in roots {
            let y = best[r].1;
            t.attach(y, edge_to_leaf[y].0).expect("leaf is in the tree");
            frontier[y] = true;
        }
        meter.release(stored, "imprv: leaf edge");
    }
    Ok(t)
}
