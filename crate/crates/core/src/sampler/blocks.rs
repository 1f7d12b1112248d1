//! Uniform blocks, cut out of uniform quadrangulations.
//!
//! Given its block tree, a uniform map has independent uniform blocks. So any
//! block picked by a rule that only looks at the tree is a uniform block of
//! its size.

use std::collections::BTreeMap;

use rand::Rng;

use super::config::ObjectKind;
use super::cvs::sample_uniform_quadrangulation;
use crate::error::{Error, Result};
use crate::mapcore::{decompose_map, first_block_of_size, tutte, tutte_inverse, HalfEdgeMap, Hemap};

/// Size of the uniform quadrangulation drawn to look for a block of size `k`.
/// A uniform map of size `3k` has a block of size about `k`.
pub fn target_size(k: usize) -> usize {
    3 * k
}

fn as_kind(block: HalfEdgeMap, kind: ObjectKind) -> Hemap {
    match kind {
        ObjectKind::Map => Hemap::Map(block),
        ObjectKind::Quad => Hemap::Quad(tutte(&block).expect("a block is never the vertex map")),
    }
}

/// A uniform 2-connected map with `k` edges, or a uniform simple
/// quadrangulation with `k` faces. Returns the block and the number of
/// quadrangulations drawn.
pub fn sample_uniform_block<R: Rng + ?Sized>(
    k: usize,
    kind: ObjectKind,
    rng: &mut R,
    max_rejections: u64,
) -> Result<(Hemap, u64)> {
    if k < 1 {
        return Err(Error::InvalidParameter("block size must be at least 1".into()));
    }
    let mut draws = 0;
    loop {
        if draws >= max_rejections {
            return Err(Error::RejectionLimit(draws));
        }
        draws += 1;
        let m = tutte_inverse(&sample_uniform_quadrangulation(target_size(k), rng));
        if let Some(b) = first_block_of_size(&m, k) {
            return Ok((as_kind(b, kind), draws));
        }
    }
}

/// Uniform independent blocks with the given sizes.
///
/// Quadrangulations are drawn at the size suited to the largest block still
/// missing, and every block they contain fills a missing slot of the same
/// size, in preorder. Which block goes where depends only on block trees, so
/// the output blocks are independent and uniform. Returns the blocks and the
/// number of quadrangulations drawn.
pub fn harvest_blocks<R: Rng + ?Sized>(
    sizes: &[usize],
    kind: ObjectKind,
    rng: &mut R,
    max_rejections: u64,
) -> Result<(Vec<Hemap>, u64)> {
    let mut missing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (slot, &k) in sizes.iter().enumerate().rev() {
        if k < 1 {
            return Err(Error::InvalidParameter("block size must be at least 1".into()));
        }
        missing.entry(k).or_default().push(slot);
    }
    let mut out: Vec<Option<Hemap>> = vec![None; sizes.len()];
    let mut draws = 0;
    while let Some((&k, _)) = missing.last_key_value() {
        if draws >= max_rejections {
            return Err(Error::RejectionLimit(draws));
        }
        draws += 1;
        let m = tutte_inverse(&sample_uniform_quadrangulation(target_size(k), rng));
        for b in decompose_map(&m).blocks {
            let size = b.size();
            if let Some(slots) = missing.get_mut(&size) {
                let slot = slots.pop().unwrap();
                if slots.is_empty() {
                    missing.remove(&size);
                }
                out[slot] = Some(as_kind(b, kind));
            }
        }
    }
    Ok((out.into_iter().map(Option::unwrap).collect(), draws))
}
