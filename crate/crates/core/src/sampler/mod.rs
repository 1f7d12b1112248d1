//! Random generation: offspring draws, conditioned block trees, uniform
//! quadrangulations, uniform blocks and full samples of the model.

pub mod blocks;
pub mod config;
pub mod cvs;
pub mod gw;
pub mod model;

pub use blocks::{harvest_blocks, sample_uniform_block};
pub use config::{BlockSource, Limits, ObjectKind, SamplerConfig, TreeMethod, EXACT_DP_MAX_N};
pub use cvs::{sample_uniform_quadrangulation, uniform_dyck_path};
pub use gw::{cycle_rotation, sample_gw_conditioned, sample_offspring, tree_from_cyclic, GwTreeSample, TreeSampler};
pub use model::{sample_model, ModelSample, ModelSampler, SampleInfo};
