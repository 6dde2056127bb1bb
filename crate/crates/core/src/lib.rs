//! Combinatorial engine for Heegaard splittings of closed orientable
//! 3-manifolds.
//!
//! The crate has four computational layers plus a command-line surface:
//!
//! - [`tricomplex`]: pseudo-triangulations with face gluings, bistellar
//!   flips, barycentric subdivision, and the genus of the splitting
//!   associated to a triangulation's 1-skeleton neighborhood.
//! - [`diagram`]: curve systems on a genus-g surface as combinatorial maps:
//!   intersection matrices, good/great classification, handle slides,
//!   stabilization, and the dual cell-complex counts.
//! - [`waldhausen`]: a machine-checked reduction driver over configurations
//!   carrying two meridian systems, with strictly decreasing measures and
//!   replayable traces.
//! - [`search`]: flip-graph path search, diagram unstabilization search, and
//!   bounded stabilization-graph exploration.

pub mod cli;
pub mod diagram;
pub mod perm;
pub mod report;
pub mod search;
pub mod trace;
pub mod tricomplex;
pub mod unionfind;
pub mod waldhausen;
