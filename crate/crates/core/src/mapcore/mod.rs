//! Rooted planar maps, quadrangulations, Tutte's bijection and block
//! decompositions.

pub mod assemble;
pub mod decompose;
pub mod enumerate;
pub mod hemap;
pub mod map;
pub mod metrics;
pub mod quad;
pub mod quad_decompose;
pub mod tree;
pub mod tutte;

pub use assemble::{assemble_map, assemble_quad};
pub use decompose::{decompose_map, first_block_of_size, is_two_connected, map_block_order, map_block_tree};
pub use hemap::Hemap;
pub use map::{HalfEdgeMap, Validation};
pub use metrics::{bfs_from_root, diameter_exact, diameter_lower_bound};
pub use quad::Quadrangulation;
pub use quad_decompose::{decompose_quad, quad_block_tree};
pub use tree::{BlockTree, Decomposition};
pub use tutte::{tutte, tutte_inverse};
