//! Streaming DFS constructions.
//!
//! Every algorithm reads the augmented stream (dummy root first), stores edges
//! only through a [`SpaceMeter`] and returns a tree rooted at the dummy root.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::dsu::DsuState;
use crate::stream::{
    BudgetViolation, Edge, EdgeStream, Enforcement, GraphInput, PassStats, SpaceMeter, VertexId,
    DUMMY_ROOT, NIL,
};
use crate::tree::{DfsTree, TreeError};

pub mod improved;
pub mod klev;
pub mod kpath;
pub mod simple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    SimpO,
    Simp,
    Imprv,
    KPath,
    KLevO,
    KLev,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::SimpO,
        Algorithm::Simp,
        Algorithm::Imprv,
        Algorithm::KPath,
        Algorithm::KLevO,
        Algorithm::KLev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SimpO => "simpo",
            Algorithm::Simp => "simp",
            Algorithm::Imprv => "imprv",
            Algorithm::KPath => "kpath",
            Algorithm::KLevO => "klevo",
            Algorithm::KLev => "klev",
        }
    }

    /// Whether the algorithm takes the space parameter `k`.
    pub fn uses_k(self) -> bool {
        matches!(self, Algorithm::KPath | Algorithm::KLevO | Algorithm::KLev)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown algorithm {0:?} (expected one of simpo, simp, imprv, kpath, klevo, klev)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgoConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    /// Budget multiplier `c` in `c · n · k` for the level algorithms and the
    /// simple baselines (which use `k = 1`).
    pub space_mult: usize,
    pub enforcement: Enforcement,
    /// Runs expensive internal consistency checks and records their outcome
    /// in [`Diagnostics`].
    pub check_invariants: bool,
}

impl AlgoConfig {
    pub const DEFAULT_SPACE_MULT: usize = 4;

    pub fn new(algorithm: Algorithm, k: usize) -> Self {
        AlgoConfig {
            algorithm,
            k,
            space_mult: Self::DEFAULT_SPACE_MULT,
            enforcement: Enforcement::Strict,
            check_invariants: false,
        }
    }

    pub fn checked(mut self) -> Self {
        self.check_invariants = true;
        self
    }

    /// Stored-edge budget for a graph with `n_aug` vertices.
    pub fn budget(&self, n_aug: usize) -> usize {
        match self.algorithm {
            Algorithm::KPath => n_aug * self.k + n_aug,
            Algorithm::KLevO | Algorithm::KLev => self.space_mult * n_aug * self.k,
            _ => self.space_mult * n_aug,
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgoError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error(transparent)]
    Budget(#[from] BudgetViolation),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Counters collected during a run beyond [`PassStats`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Auxiliary trees built from a full buffer (kpath).
    pub aux_trees: usize,
    /// Shortest path, in edges, extracted from a full-buffer auxiliary tree.
    pub min_aux_path: Option<usize>,
    /// Restructuring calls that performed at least one reversal (klev).
    pub restructures: usize,
    pub reversals: usize,
    /// Total increase of the level sum caused by reversals.
    pub potential_gain: usize,
    /// Vertices committed below the top `k` levels of their component.
    pub early_commits: usize,
    /// Vertices whose level was seen to decrease (checked runs only).
    pub monotonic_violations: usize,
    /// Stored edges found to be cross edges after restructuring (checked runs
    /// only).
    pub stored_cross_edges: usize,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub tree: DfsTree,
    pub stats: PassStats,
    pub diagnostics: Diagnostics,
}

/// Runs the configured algorithm on `g`.
pub fn run(g: &GraphInput, cfg: &AlgoConfig) -> Result<RunOutput, AlgoError> {
    if cfg.k == 0 {
        return Err(AlgoError::InvalidK);
    }
    let start = Instant::now();
    let mut stream = EdgeStream::augment_with_root(g);
    let mut meter = SpaceMeter::new(cfg.budget(g.n_aug()), cfg.enforcement);
    let mut diag = Diagnostics::default();
    let tree = match cfg.algorithm {
        Algorithm::SimpO => simple::run_simp_o(&mut stream, &mut meter)?,
        Algorithm::Simp => simple::run_simp(&mut stream, &mut meter)?,
        Algorithm::Imprv => improved::run_imprv(&mut stream, &mut meter)?,
        Algorithm::KPath => kpath::run_k_path(
            &mut stream,
            &mut meter,
            cfg.k,
            cfg.check_invariants,
            &mut diag,
        )?,
        Algorithm::KLevO | Algorithm::KLev => klev::run_k_lev(
            &mut stream,
            &mut meter,
            cfg.k,
            cfg.algorithm == Algorithm::KLev,
            cfg.check_invariants,
            &mut diag,
        )?,
    };
    let stats = PassStats {
        passes: stream.passes(),
        edges_scanned: stream.edges_scanned(),
        peak_stored_edges: meter.peak(),
        tree_height: tree.height(),
        wall_time: start.elapsed(),
    };
    log::info!(
        "{} on {}: {} passes, height {}, peak {} edges",
        cfg.algorithm,
        g.name,
        stats.passes,
        stats.tree_height,
        stats.peak_stored_edges
    );
    Ok(RunOutput {
        tree,
        stats,
        diagnostics: diag,
    })
}

/// A connected component of the graph without the dummy root, found by the
/// initial spanning pass.
#[derive(Clone, Debug)]
pub(crate) struct Seed {
    /// Smallest vertex id of the component.
    pub root: VertexId,
    pub vertices: Vec<VertexId>,
    /// Spanning tree edges, already charged to the meter.
    pub tree_edges: Vec<Edge>,
}

/// One pass of union-find over the original edges. Dummy-root edges are
/// ignored; every component later hangs from the dummy root.
pub(crate) fn spanning_pass(
    stream: &mut EdgeStream,
    meter: &mut SpaceMeter,
) -> Result<Vec<Seed>, BudgetViolation> {
    let n = stream.n_aug();
    let mut dsu = DsuState::with_active((0..n).map(|v| v != DUMMY_ROOT).collect());
    let mut forest = Vec::new();
    for e in stream.pass() {
        if e.u == DUMMY_ROOT || e.v == DUMMY_ROOT {
            continue;
        }
        if dsu.union(e.u, e.v).expect("original vertices are active") {
            meter.store(1, "spanning forest")?;
            forest.push(e);
        }
    }
    let mut slot = vec![NIL; n];
    let mut seeds: Vec<Seed> = Vec::new();
    for v in 1..n {
        let r = dsu.find(v).expect("active");
        if slot[r] == NIL {
            slot[r] = seeds.len();
            seeds.push(Seed {
                root: v,
                vertices: Vec::new(),
                tree_edges: Vec::new(),
            });
        }
        seeds[slot[r]].vertices.push(v);
    }
    for e in forest {
        let r = dsu.find(e.u).expect("active");
        seeds[slot[r]].tree_edges.push(e);
    }
    Ok(seeds)
}

/// In-memory depth-first search over a small edge set.
///
/// `index` is a per-vertex scratch array that must hold `NIL` everywhere; it
/// is restored before returning. Neighbours are explored in edge order. The
/// result lists `(vertex, parent, depth)` in preorder, with `NIL` as the
/// root's parent. Vertices unreachable from `root` are omitted.
pub(crate) fn dfs_preorder<I>(
    root: VertexId,
    vertices: &[VertexId],
    edges: I,
    index: &mut [usize],
) -> Vec<(VertexId, VertexId, usize)>
where
    I: IntoIterator<Item = Edge>,
{
    for (i, &v) in vertices.iter().enumerate() {
        index[v] = i;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for e in edges {
        let (a, b) = (index[e.u], index[e.v]);
        if a != NIL && b != NIL && a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; vertices.len()];
    let mut out = Vec::with_capacity(vertices.len());
    let r = index[root];
    seen[r] = true;
    out.push((root, NIL, 0));
    let mut stack = vec![(r, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (u, next) = *top;
        if next == adj[u].len() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let c = adj[u][next];
        if !seen[c] {
            seen[c] = true;
            out.push((vertices[c], vertices[u], stack.len()));
            stack.push((c, 0));
        }
    }
    for &v in vertices {
        index[v] = NIL;
    }
    out
}
