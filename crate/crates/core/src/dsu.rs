//! Union-find over a subset of active vertices.

use thiserror::Error;

use crate::stream::{Edge, VertexId};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("vertex {0} is not active in this union-find")]
pub struct InactiveVertex(pub VertexId);

/// Disjoint sets with union by rank and full path compression.
#[derive(Clone, Debug)]
pub struct DsuState {
    parent: Vec<VertexId>,
    rank: Vec<u8>,
    active: Vec<bool>,
}

impl DsuState {
    /// All `n` vertices active, each in its own set.
    pub fn new(n: usize) -> Self {
        Self::with_active(vec![true; n])
    }

    pub fn with_active(active: Vec<bool>) -> Self {
        let n = active.len();
        DsuState {
            parent: (0..n).collect(),
            rank: vec![0; n],
            active,
        }
    }

    /// Re-initializes every vertex as a singleton and replaces the active mask.
    pub fn reset<F: Fn(VertexId) -> bool>(&mut self, is_active: F) {
        for v in 0..self.parent.len() {
            self.parent[v] = v;
            self.rank[v] = 0;
            self.active[v] = is_active(v);
        }
    }

    /// Turns `x` into an active singleton. Other vertices must not still point
    /// at `x` from an earlier union unless they are reset as well.
    pub fn activate(&mut self, x: VertexId) {
        self.parent[x] = x;
        self.rank[x] = 0;
        self.active[x] = true;
    }

    pub fn deactivate(&mut self, x: VertexId) {
        self.active[x] = false;
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn is_active(&self, x: VertexId) -> bool {
        self.active.get(x).copied().unwrap_or(false)
    }

    pub fn find(&mut self, x: VertexId) -> Result<VertexId, InactiveVertex> {
        if !self.is_active(x) {
            return Err(InactiveVertex(x));
        }
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        Ok(root)
    }

    /// Returns `true` iff `x` and `y` were in different sets.
    pub fn union(&mut self, x: VertexId, y: VertexId) -> Result<bool, InactiveVertex> {
        let (rx, ry) = (self.find(x)?, self.find(y)?);
        if rx == ry {
            return Ok(false);
        }
        let (hi, lo) = if self.rank[rx] >= self.rank[ry] {
            (rx, ry)
        } else {
            (ry, rx)
        };
        self.parent[lo] = hi;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        Ok(true)
    }
}

/// Connected components of the active vertices and a spanning forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Canonical DSU root per vertex, `None` for inactive vertices.
    pub label: Vec<Option<VertexId>>,
    /// Edges that merged two sets, in stream order.
    pub forest: Vec<Edge>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.label
            .iter()
            .enumerate()
            .filter(|&(v, l)| *l == Some(v))
            .count()
    }
}

/// Runs union-find over `edges`, ignoring edges with an inactive endpoint.
pub fn components_and_spanning_forest<I>(edges: I, active: &[bool]) -> Components
where
    I: IntoIterator<Item = Edge>,
{
    let mut dsu = DsuState::with_active(active.to_vec());
    let mut forest = Vec::new();
    for e in edges {
        if dsu.is_active(e.u) && dsu.is_active(e.v) && e.u != e.v && dsu.union(e.u, e.v) == Ok(true)
        {
            forest.push(e);
        }
    }
    let label = (0..active.len()).map(|v| dsu.find(v).ok()).collect();
    Components { label, forest }
}
