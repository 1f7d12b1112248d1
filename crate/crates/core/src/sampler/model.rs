//! Full objects of the block-weighted model: a conditioned block tree
//! decorated with independent uniform blocks.

use std::collections::BTreeMap;

use rand::RngCore;
use serde::Serialize;

use super::blocks::{harvest_blocks, sample_uniform_block};
use super::config::{BlockSource, ObjectKind, SamplerConfig, TreeMethod};
use super::cvs::sample_uniform_quadrangulation;
use super::gw::{digest, GwTreeSample, TreeSampler};
use crate::error::{Error, Result};
use crate::mapcore::{assemble_map, assemble_quad, map_block_tree, tutte_inverse, Hemap};
use crate::{par, rng};

/// Facts about how a sample was produced.
#[derive(Clone, Debug, Serialize)]
pub struct SampleInfo {
    pub method: TreeMethod,
    pub approx: bool,
    pub correlated: bool,
    pub tree_rejections: u64,
    /// Quadrangulations drawn to obtain the blocks.
    pub block_draws: u64,
    pub digest: u64,
}

#[derive(Clone, Debug)]
pub struct ModelSample {
    pub object: Hemap,
    pub tree: crate::mapcore::BlockTree,
    pub info: SampleInfo,
}

/// Samples objects for one configuration. Read-only after construction, so
/// one sampler can serve many replicas in parallel.
#[derive(Clone, Debug)]
pub struct ModelSampler {
    config: SamplerConfig,
    trees: TreeSampler,
}

impl ModelSampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        let trees = TreeSampler::new(&config)?;
        Ok(ModelSampler { config, trees })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn trees(&self) -> &TreeSampler {
        &self.trees
    }

    /// The block tree alone.
    pub fn sample_tree(&self, rng: &mut rng::Rng) -> Result<GwTreeSample> {
        self.trees.sample(rng)
    }

    pub fn sample(&self, rng: &mut rng::Rng) -> Result<ModelSample> {
        let kind = self.config.kind;
        if self.config.tree_method == TreeMethod::DirectUniform {
            let q = sample_uniform_quadrangulation(self.config.n, rng);
            let m = tutte_inverse(&q);
            let tree = map_block_tree(&m);
            let object = match kind {
                ObjectKind::Map => Hemap::Map(m),
                ObjectKind::Quad => Hemap::Quad(q),
            };
            let info = SampleInfo {
                method: TreeMethod::DirectUniform,
                approx: false,
                correlated: false,
                tree_rejections: 0,
                block_draws: 1,
                digest: digest(rng),
            };
            return Ok(ModelSample { object, tree, info });
        }

        let t = self.trees.sample(rng)?;
        let sizes: Vec<usize> = t.tree.block_sizes().into_iter().map(|k| k as usize).collect();
        let limit = self.config.limits.max_rejections;
        let (blocks, block_draws) = match self.config.blocks {
            BlockSource::Harvest => harvest_blocks(&sizes, kind, rng, limit)?,
            BlockSource::Fresh => {
                let base = rng.next_u64();
                let drawn = par::try_map_range(sizes.len(), |i| {
                    let mut r = rng::seeded(rng::derive(base, &[i as u64]), 0);
                    sample_uniform_block(sizes[i], kind, &mut r, limit)
                })?;
                let draws = drawn.iter().map(|d| d.1).sum();
                (drawn.into_iter().map(|d| d.0).collect(), draws)
            }
            BlockSource::Pool => {
                let mut pool: BTreeMap<usize, Hemap> = BTreeMap::new();
                let mut draws = 0;
                for &k in &sizes {
                    if !pool.contains_key(&k) {
                        let (b, d) = sample_uniform_block(k, kind, rng, limit)?;
                        draws += d;
                        pool.insert(k, b);
                    }
                }
                (sizes.iter().map(|k| pool[k].clone()).collect(), draws)
            }
        };
        let object = match kind {
            ObjectKind::Map => {
                let maps: Vec<_> = blocks
                    .into_iter()
                    .map(|b| match b {
                        Hemap::Map(m) => m,
                        Hemap::Quad(_) => unreachable!(),
                    })
                    .collect();
                Hemap::Map(assemble_map(&t.tree, &maps)?)
            }
            ObjectKind::Quad => {
                if sizes.is_empty() {
                    return Err(Error::InvalidTree("a quadrangulation needs at least one block".into()));
                }
                let quads: Vec<_> = blocks
                    .into_iter()
                    .map(|b| match b {
                        Hemap::Quad(q) => q,
                        Hemap::Map(_) => unreachable!(),
                    })
                    .collect();
                Hemap::Quad(assemble_quad(&t.tree, &quads)?)
            }
        };
        let info = SampleInfo {
            method: t.method,
            approx: t.approx,
            correlated: self.config.blocks == BlockSource::Pool,
            tree_rejections: t.rejections,
            block_draws,
            digest: digest(rng),
        };
        Ok(ModelSample { object, tree: t.tree, info })
    }
}

/// Convenience wrapper: build a [`ModelSampler`] and draw once.
pub fn sample_model(config: &SamplerConfig, rng: &mut rng::Rng) -> Result<ModelSample> {
    ModelSampler::new(config.clone())?.sample(rng)
}
