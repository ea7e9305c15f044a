//! One vertex per pass, optionally chasing fresh neighbours in the rest of
//! the pass.

use crate::stream::{BudgetViolation, EdgeStream, SpaceMeter, VertexId, DUMMY_ROOT, NIL};
use crate::tree::DfsTree;

/// Each pass stores, for every tree vertex `x`, the first edge from `x` to an
/// unvisited vertex, then extends the tree from the lowest ancestor of the
/// current vertex that has one. Exactly one vertex is added per pass.
pub fn run_simp_o(
    stream: &mut EdgeStream,
    meter: &mut SpaceMeter,
) -> Result<DfsTree, BudgetViolation> {
    simple(stream, meter, false)
}

/// Like [`run_simp_o`], but an edge from the current vertex to an unvisited
/// vertex seen later in the pass attaches that vertex at once and moves the
/// current vertex to it.
pub fn run_simp(
    stream: &mut EdgeStream,
    meter: &mut SpaceMeter,
) -> Result<DfsTree, BudgetViolation> {
    simple(stream, meter, true)
}

fn simple(
    stream: &mut EdgeStream,
    meter: &mut SpaceMeter,
    chase: bool,
) -> Result<DfsTree, BudgetViolation> {
    let n = stream.n_aug();
    let mut t = DfsTree::new(n, DUMMY_ROOT);
    let mut cur = DUMMY_ROOT;
    let mut next: Vec<VertexId> = vec![NIL; n];
    while t.len() < n {
        next.fill(NIL);
        let mut stored = 0;
        let mut chased = false;
        for e in stream.pass() {
            if chase && (e.u == cur || e.v == cur) {
                let y = e.other(cur);
                if !t.contains(y) {
                    t.attach(y, cur).expect("cur is in the tree");
                    cur = y;
                    chased = true;
                    if t.len() == n {
                        break;
                    }
                    continue;
                }
            }
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                if next[x] == NIL && t.contains(x) && !t.contains(y) {
                    next[x] = y;
                    stored += 1;
                    meter.store(1, "simple: next edge")?;
                }
            }
        }
        meter.release(stored, "simple: next edge");
        // Records of vertices chased into during this pass are incomplete, so
        // backtracking only happens after a pass without progress.
        if !chased {
            let mut v = cur;
            loop {
                let y = next[v];
                if y != NIL && !t.contains(y) {
                    t.attach(y, v).expect("v is in the tree");
                    cur = y;
                    break;
                }
                v = t.parent(v).expect("the dummy root reaches every vertex");
            }
        }
    }
    Ok(t)
}
