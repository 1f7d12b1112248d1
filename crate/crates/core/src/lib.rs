//! Random planar maps weighted by their number of 2-connected blocks.
//!
//! The weight `u^{#blocks}` interpolates between uniform maps (`u = 1`) and
//! tree-like maps (`u` large); the phase transition sits at `u = 9/5`.
//! Everything is also available for quadrangulations weighted by simple
//! components, through Tutte's angular bijection.

pub mod error;
pub mod mapcore;
pub mod par;
pub mod phase;
pub mod rng;
pub mod sampler;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use mapcore::{BlockTree, Decomposition, HalfEdgeMap, Quadrangulation};
