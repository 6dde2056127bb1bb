//! Search harnesses over the move kernels.
//!
//! Every returned path or trace is replayed through the core operations
//! before it is handed back, so callers never see unverified output.

mod pachner;
mod sigma;
mod unstabilize;

pub use pachner::{
    invert_flip_path, pachner_path, replay_flip_path, FlipPath, PachnerOutcome, PathMove,
};
pub use sigma::{sigma_explore, SigmaGraph, SigmaNode};
pub use unstabilize::{unstabilize_search, verify_unstabilize_trace, UnstabilizeOutcome};

use serde::{Deserialize, Serialize};

/// Node and depth limits for the searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: usize,
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_nodes: 1_000_000,
            max_depth: 64,
        }
    }
}

/// What a failed search saw before giving up.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub visited: usize,
    pub frontier: usize,
    pub depth_reached: usize,
}
