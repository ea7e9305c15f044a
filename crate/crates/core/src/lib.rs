//! Depth-first search trees of undirected graphs in the semi-streaming model.
//!
//! Edges are read only through a multi-pass [`stream::EdgeStream`] and stored
//! edges are metered against an `O(nk)` budget. The [`algorithms`] module
//! provides the constructions, from the one-vertex-per-pass baseline up to
//! the restructuring-based `k`-level algorithm.

pub mod algorithms;
pub mod dsu;
pub mod restructure;
pub mod stream;
pub mod tree;

pub use algorithms::{run, AlgoConfig, AlgoError, Algorithm, Diagnostics, RunOutput};
pub use stream::{Edge, GraphInput, VertexId};
pub use tree::{validate_dfs, DfsTree};
