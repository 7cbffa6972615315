//! Truncated Poisson-weighted infinite trees and the optimal matching on
//! them.
//!
//! A tree of nominal depth `h` and width `K` is stored explicitly down to a
//! core depth `c ≤ h`. Below a core frontier vertex the subtree is
//! independent of everything else, so its only contribution, the forward
//! value `X(→v)`, is drawn from the law obtained by pushing the boundary law
//! through `h - c` levels of the K-truncated recursion. With `c = h` the tree
//! is fully explicit and the frontier draws are the boundary values
//! themselves.

mod frontier;
mod matching;
mod snapshot;
mod tree;
mod xfield;

use thiserror::Error;

pub use frontier::{Boundary, FrontierLaw, DEFAULT_POOL_SIZE};
pub use matching::{build_matching, mchar_violations, root_edge_stats, RootEdge, TreeMatching};
pub use snapshot::write_snapshot;
pub use tree::{default_core_depth, sample_pwit, sample_pwit_core, TruncatedPwit, CORE_NODE_BUDGET, DEFAULT_NODE_CAP};
pub use xfield::{propagate_x, propagate_x_with, XField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PwitError {
    #[error("depth and width must be at least 1 (got depth {depth}, width {width})")]
    InvalidShape { depth: usize, width: usize },
    #[error("core depth {core} must lie in 1..={depth}")]
    InvalidCore { core: usize, depth: usize },
    #[error("tree would have {nodes} explicit vertices, cap is {cap}")]
    TooLarge { nodes: u128, cap: usize },
    #[error("frontier law does not fit the tree: {0}")]
    FrontierMismatch(String),
    #[error("x-field or matching was built for a different tree")]
    Mismatch,
    #[error("root lies within distance 2 of the truncation boundary")]
    IndeterminateRoot,
}
