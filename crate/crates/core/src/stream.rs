//! The semi-streaming access model.
//!
//! Graph edges are only reachable through an [`EdgeStream`], which replays a
//! fixed edge order on every pass and counts how many passes were started.
//! Stored edges are accounted for by a [`SpaceMeter`]; per-vertex scalar
//! bookkeeping (parents, levels, flags) is not charged.

use std::collections::HashMap;
use std::fmt;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Dense vertex index. Id 0 is the dummy root, original vertices are `1..=n`.
pub type VertexId = usize;

/// The artificial root adjacent to every original vertex.
pub const DUMMY_ROOT: VertexId = 0;

/// Sentinel used in per-vertex arrays for "no vertex".
pub const NIL: VertexId = usize::MAX;

/// An undirected edge. The endpoint order carries no meaning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        Edge { u, v }
    }

    /// Canonical `(min, max)` form, used to detect duplicates.
    pub fn key(self) -> (VertexId, VertexId) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    /// The endpoint opposite to `x`. `x` must be an endpoint.
    pub fn other(self, x: VertexId) -> VertexId {
        debug_assert!(self.u == x || self.v == x);
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    File,
    Random { n: usize, m: usize, seed: u64 },
}

/// An undirected input graph before augmentation with the dummy root.
#[derive(Clone, Debug)]
pub struct GraphInput {
    pub name: String,
    pub n_original: usize,
    /// Original edges in stream order. Endpoints lie in `1..=n_original`.
    pub edges: Vec<Edge>,
    pub source: GraphSource,
}

impl GraphInput {
    /// Vertex count including the dummy root.
    pub fn n_aug(&self) -> usize {
        self.n_original + 1
    }

    /// Number of original edges (dummy-root edges are not counted).
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// All edges of the augmented graph in stream order.
    pub fn augmented_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (1..=self.n_original)
            .map(|v| Edge::new(DUMMY_ROOT, v))
            .chain(self.edges.iter().copied())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("input contains no vertices")]
    Empty,
    #[error("edge count {m} out of range for {n} vertices (max {max})")]
    EdgeCount { n: usize, m: usize, max: u64 },
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `%` or `#` are comments. Every data line needs at least
/// two integer labels; further columns (weights, timestamps) are ignored.
/// Labels are remapped to `1..=n` in order of first appearance, self-loops are
/// dropped and duplicate edges are kept in place.
pub fn ingest_edge_list(text: &[u8], name: &str) -> Result<GraphInput, InputError> {
    let text = String::from_utf8_lossy(text);
    let mut ids: HashMap<u64, VertexId> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |label: u64| -> VertexId {
        let next = ids.len() + 1;
        *ids.entry(label).or_insert(next)
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut label = |what: &str| -> Result<u64, InputError> {
            let tok = tokens.next().ok_or_else(|| InputError::Parse {
                line: idx + 1,
                reason: format!("missing {what} endpoint"),
            })?;
            tok.parse::<u64>().map_err(|_| InputError::Parse {
                line: idx + 1,
                reason: format!("invalid vertex label {tok:?}"),
            })
        };
        let a = label("first")?;
        let b = label("second")?;
        let (u, v) = (intern(a), intern(b));
        if u != v {
            edges.push(Edge::new(u, v));
        }
    }
    if ids.is_empty() {
        return Err(InputError::Empty);
    }
    Ok(GraphInput {
        name: name.to_string(),
        n_original: ids.len(),
        edges,
        source: GraphSource::File,
    })
}

/// Number of unordered vertex pairs among `n` vertices.
pub fn max_edges(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Maps a rank in `0..n(n-1)/2` to the pair `(u, v)`, `1 <= u < v <= n`,
/// enumerating pairs row by row.
fn unrank_pair(n: usize, rank: u64) -> Edge {
    // Pairs with first endpoint < u: (u-1)(2n-u)/2.
    let before = |u: u64| (u - 1) * (2 * n as u64 - u) / 2;
    let (mut lo, mut hi) = (1u64, n as u64 - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if before(mid) <= rank {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let u = lo;
    let v = u + 1 + (rank - before(u));
    Edge::new(u as VertexId, v as VertexId)
}

/// Erdős–Rényi `G(n, m)`: the first `m` entries of a uniform random
/// permutation of all `n(n-1)/2` vertex pairs.
///
/// The permutation is a partial Fisher–Yates shuffle over pair ranks, with
/// displaced ranks kept in a sparse map so memory is `O(m)`. Randomness comes
/// from ChaCha8 seeded through `seed_from_u64`, which is stable across
/// platforms.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Result<GraphInput, InputError> {
    let total = max_edges(n);
    if m as u64 > total {
        return Err(InputError::EdgeCount { n, m, max: total });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut displaced: HashMap<u64, u64> = HashMap::with_capacity(2 * m);
    let mut edges = Vec::with_capacity(m);
    for i in 0..m as u64 {
        let j = rng.gen_range(i..total);
        let at_j = *displaced.get(&j).unwrap_or(&j);
        let at_i = *displaced.get(&i).unwrap_or(&i);
        displaced.insert(j, at_i);
        edges.push(unrank_pair(n, at_j));
    }
    Ok(GraphInput {
        name: format!("gnm-{n}-{m}-{seed}"),
        n_original: n,
        edges,
        source: GraphSource::Random { n, m, seed },
    })
}

/// `⌈n · ln n⌉`, capped at the number of vertex pairs.
pub fn n_log_n_edges(n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    let m = (n as f64 * (n as f64).ln()).ceil() as u64;
    m.min(max_edges(n)) as usize
}

/// Resettable stream over the augmented edge sequence.
///
/// The dummy-root edges `(0, v)` for `v = 1..=n` come first, followed by the
/// original edges in input order. Every call to [`EdgeStream::pass`] counts as
/// one pass, whether or not the scan is completed.
#[derive(Clone, Debug)]
pub struct EdgeStream {
    edges: Vec<Edge>,
    n_original: usize,
    passes: usize,
    scanned: u64,
}

impl EdgeStream {
    pub fn augment_with_root(g: &GraphInput) -> Self {
        EdgeStream {
            edges: g.augmented_edges().collect(),
            n_original: g.n_original,
            passes: 0,
            scanned: 0,
        }
    }

    /// Starts a new pass from the beginning of the stream.
    pub fn pass(&mut self) -> Pass<'_> {
        self.passes += 1;
        Pass {
            edges: &self.edges,
            pos: 0,
            scanned: &mut self.scanned,
        }
    }

    pub fn passes(&self) -> usize {
        self.passes
    }

    pub fn edges_scanned(&self) -> u64 {
        self.scanned
    }

    /// Edges yielded by one full pass.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn n_original(&self) -> usize {
        self.n_original
    }

    pub fn n_aug(&self) -> usize {
        self.n_original + 1
    }
}

/// One scan over an [`EdgeStream`].
pub struct Pass<'a> {
    edges: &'a [Edge],
    pos: usize,
    scanned: &'a mut u64,
}

impl Iterator for Pass<'_> {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        let e = *self.edges.get(self.pos)?;
        self.pos += 1;
        *self.scanned += 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.edges.len() - self.pos;
        (rest, Some(rest))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Enforcement {
    /// Exceeding the budget is an error.
    #[default]
    Strict,
    /// Exceeding the budget logs one warning and continues.
    Warn,
    Off,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("space budget exceeded at {site}: {current} stored edges > budget {budget}")]
pub struct BudgetViolation {
    pub site: &'static str,
    pub current: usize,
    pub budget: usize,
}

/// Counts stored edges against a fixed budget.
#[derive(Clone, Debug)]
pub struct SpaceMeter {
    budget: usize,
    current: usize,
    peak: usize,
    enforcement: Enforcement,
    warned: bool,
}

impl SpaceMeter {
    pub fn new(budget: usize, enforcement: Enforcement) -> Self {
        SpaceMeter {
            budget,
            current: 0,
            peak: 0,
            enforcement,
            warned: false,
        }
    }

    /// Budget of `multiplier · n · k` edges.
    pub fn for_nk(multiplier: usize, n: usize, k: usize, enforcement: Enforcement) -> Self {
        Self::new(multiplier * n * k, enforcement)
    }

    pub fn charge(&mut self, delta: isize, site: &'static str) -> Result<(), BudgetViolation> {
        let next = self.current as isize + delta;
        assert!(next >= 0, "space meter underflow at {site}");
        self.current = next as usize;
        self.peak = self.peak.max(self.current);
        if self.current > self.budget {
            match self.enforcement {
                Enforcement::Strict => {
                    return Err(BudgetViolation {
                        site,
                        current: self.current,
                        budget: self.budget,
                    })
                }
                Enforcement::Warn if !self.warned => {
                    self.warned = true;
                    log::warn!(
                        "space budget exceeded at {site}: {} > {}",
                        self.current,
                        self.budget
                    );
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn store(&mut self, count: usize, site: &'static str) -> Result<(), BudgetViolation> {
        self.charge(count as isize, site)
    }

    pub fn release(&mut self, count: usize, site: &'static str) {
        // Releasing never exceeds the budget.
        let _ = self.charge(-(count as isize), site);
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn current(&self) -> usize {
        self.current
    }

    pub fn peak(&self) -> usize {
        self.peak
    }
}

/// Summary of one algorithm run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PassStats {
    pub passes: usize,
    pub edges_scanned: u64,
    pub peak_stored_edges: usize,
    pub tree_height: usize,
    pub wall_time: Duration,
}
