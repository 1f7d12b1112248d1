//! Monte Carlo for the distance constant `kappa_u` of the supercritical
//! regime: the size-biased mean, over the block-size law, of the root
//! distance inside a uniform block.

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mapcore::metrics::Graph;
use crate::mapcore::{HalfEdgeMap, Hemap};
use crate::phase::{OffspringDistribution, U_CRITICAL};
use crate::sampler::{harvest_blocks, ObjectKind};
use crate::{par, rng};

/// Samples per parallel task.
const CHUNK: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct KappaEstimate {
    pub u: f64,
    pub kind: ObjectKind,
    /// Estimate of the sum truncated at `j_max`.
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub j_max: usize,
    /// `sum_{j <= j_max} 2j mu(2j)`.
    pub covered_mass: f64,
    /// Upper bound on the truncated part, `sum_{j > j_max} 2j mu(2j) (j + 1)`,
    /// using that distances in a block of size `j` are at most `j + 1`.
    /// Infinite at `9/5`.
    pub tail_bias_bound: f64,
}

/// One draw of the root distance in `block`: to the closer endpoint of a
/// uniform edge for quadrangulations, to the base of a uniform corner for
/// maps.
pub fn block_distance<R: Rng + ?Sized>(block: &Hemap, rng: &mut R) -> u32 {
    let m = block.map();
    let g = Graph::new(m);
    let d = g.bfs(g.vid[m.root() as usize]);
    let h = rng.random_range(0..m.half_edge_count() as u32);
    match block {
        Hemap::Quad(_) => d[g.vid[h as usize] as usize].min(d[g.vid[m.alpha(h) as usize] as usize]),
        Hemap::Map(_) => d[g.vid[h as usize] as usize],
    }
}

/// Mean of [`block_distance`] over a list of blocks, one draw each.
fn distance_sum<R: Rng + ?Sized>(blocks: &[Hemap], rng: &mut R) -> (f64, f64) {
    blocks.iter().fold((0.0, 0.0), |(s, s2), b| {
        let d = block_distance(b, rng) as f64;
        (s + d, s2 + d * d)
    })
}

fn finish(sums: &[(f64, f64)], samples: usize) -> (f64, f64) {
    let s: f64 = sums.iter().map(|x| x.0).sum();
    let s2: f64 = sums.iter().map(|x| x.1).sum();
    let k = samples as f64;
    let mean = s / k;
    let var = if samples > 1 { (s2 - k * mean * mean).max(0.0) / (k - 1.0) } else { f64::NAN };
    (mean, (var / k).sqrt())
}

/// Mean root distance in uniform blocks of size `k`: mean and standard error.
pub fn block_distance_mean(k: usize, kind: ObjectKind, samples: usize, rng: &mut rng::Rng) -> Result<(f64, f64)> {
    let base = rng.next_u64();
    let chunks = samples.div_ceil(CHUNK);
    let sums = par::try_map_range(chunks, |c| {
        let mut r = rng::seeded(rng::derive(base, &[c as u64]), 0);
        let len = CHUNK.min(samples - c * CHUNK);
        let (blocks, _) = harvest_blocks(&vec![k; len], kind, &mut r, u64::MAX)?;
        Ok::<_, Error>(distance_sum(&blocks, &mut r))
    })?;
    Ok(finish(&sums, samples))
}

/// `kappa_u` truncated at block size `j_max`, with `samples` draws.
pub fn kappa_mc(u: f64, kind: ObjectKind, samples: usize, j_max: usize, rng: &mut rng::Rng) -> Result<KappaEstimate> {
    if !(u >= U_CRITICAL) {
        return Err(Error::InvalidParameter(format!("kappa is defined for u >= 9/5, got {u}")));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let dist = OffspringDistribution::with_table(u, j_max)?;
    let biased = dist.size_biased_table();
    let mut cdf = Vec::with_capacity(biased.len());
    let mut acc = 0.0;
    for p in &biased {
        acc += p;
        cdf.push(acc);
    }
    let base = rng.next_u64();
    let chunks = samples.div_ceil(CHUNK);
    let sums = par::try_map_range(chunks, |c| {
        let mut r = rng::seeded(rng::derive(base, &[c as u64]), 0);
        let len = CHUNK.min(samples - c * CHUNK);
        let sizes: Vec<usize> = (0..len)
            .map(|_| {
                let x = r.random::<f64>() * acc;
                cdf.partition_point(|&c| c <= x).clamp(1, biased.len() - 1)
            })
            .collect();
        let (blocks, _) = harvest_blocks(&sizes, kind, &mut r, u64::MAX)?;
        Ok::<_, Error>(distance_sum(&blocks, &mut r))
    })?;
    let (mean, se) = finish(&sums, samples);
    let covered = dist.table_mean();
    Ok(KappaEstimate {
        u,
        kind,
        estimate: covered * mean,
        stderr: covered * se,
        samples,
        j_max: dist.table_len(),
        covered_mass: covered,
        tail_bias_bound: tail_bias_bound(&dist),
    })
}

/// `sum_{j > J} 2j (j + 1) mu(2j)`, summed along the ratio recurrence.
fn tail_bias_bound(dist: &OffspringDistribution) -> f64 {
    if dist.params().w <= 1.0 {
        return f64::INFINITY;
    }
    let start = dist.table_len() + 1;
    let mut p = dist.prob(start);
    let y = dist.params().y;
    let mut total = 0.0;
    for j in start..start + 100_000_000 {
        let term = 2.0 * j as f64 * (j as f64 + 1.0) * p;
        total += term;
        if term <= 1e-17 * total || p == 0.0 {
            return total;
        }
        let jf = j as f64;
        p *= y * 3.0 * jf * (3.0 * jf - 1.0) * (3.0 * jf - 2.0) / ((jf + 1.0) * 2.0 * jf * (2.0 * jf + 1.0));
    }
    f64::INFINITY
}

/// The exact root distance averaged over a list of rooted blocks, each
/// weighted equally, and over all edges (quad) or corners (map).
pub fn exact_block_distance(blocks: &[HalfEdgeMap], kind: ObjectKind) -> Result<f64> {
    let mut total = 0.0;
    for b in blocks {
        let m = match kind {
            ObjectKind::Map => b.clone(),
            ObjectKind::Quad => crate::mapcore::tutte(b)?.into_map(),
        };
        let g = Graph::new(&m);
        let d = g.bfs(g.vid[m.root() as usize]);
        let hec = m.half_edge_count() as u32;
        let s: u32 = (0..hec)
            .map(|h| match kind {
                ObjectKind::Quad => d[g.vid[h as usize] as usize].min(d[g.vid[m.alpha(h) as usize] as usize]),
                ObjectKind::Map => d[g.vid[h as usize] as usize],
            })
            .sum();
        total += s as f64 / hec as f64;
    }
    Ok(total / blocks.len() as f64)
}
