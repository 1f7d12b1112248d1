//! Galton-Watson block trees conditioned to have `2n` edges.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use super::config::{SamplerConfig, TreeMethod, EXACT_DP_MAX_N};
use super::cvs::sample_uniform_quadrangulation;
use crate::error::{Error, Result};
use crate::mapcore::{map_block_tree, tutte_inverse, BlockTree};
use crate::phase::OffspringDistribution;
use crate::rng;

/// Below this many undecided values the rejection sampler stops drawing
/// binomial counts and draws the values one by one.
const INDIVIDUAL_BELOW: u64 = 16;

/// One draw of `xi` from the offspring law (always even).
pub fn sample_offspring<R: Rng + ?Sized>(dist: &OffspringDistribution, rng: &mut R) -> u64 {
    2 * dist.sample_half(rng, usize::MAX).expect("uncapped draw") as u64
}

/// Index at which the cyclic rotation of `degrees` is a preorder outdegree
/// sequence. Requires `sum(degrees) = len - 1`; exactly one rotation works.
pub fn cycle_rotation(degrees: &[u32]) -> Result<usize> {
    let total: i64 = degrees.iter().map(|&d| d as i64).sum();
    if degrees.is_empty() || total != degrees.len() as i64 - 1 {
        return Err(Error::InvalidTree(format!(
            "{} degrees summing to {total}, need length - 1",
            degrees.len()
        )));
    }
    let mut s = 0i64;
    let mut best = i64::MAX;
    let mut at = 0;
    for (k, &d) in degrees.iter().enumerate() {
        s += d as i64 - 1;
        if s < best {
            best = s;
            at = k + 1;
        }
    }
    Ok(at % degrees.len())
}

/// The unique valid rotation of `degrees`, as a tree.
pub fn tree_from_cyclic(mut degrees: Vec<u32>) -> Result<BlockTree> {
    let k = cycle_rotation(&degrees)?;
    degrees.rotate_left(k);
    BlockTree::from_degrees_any(degrees)
}

#[derive(Clone, Debug, Serialize)]
pub struct GwTreeSample {
    pub tree: BlockTree,
    pub method: TreeMethod,
    pub approx: bool,
    /// Rejected attempts before the accepted one.
    pub rejections: u64,
    /// Position of the generator after the draw.
    pub digest: u64,
}

/// Partial-sum tables for the exact sequential sampler.
///
/// Row `m` holds `P(j_1 + ... + j_m = s)` for `s = 0..=n`, divided by the
/// row maximum; `log_scale[m]` is the log of that divisor.
#[derive(Clone, Debug)]
struct DpTable {
    n: usize,
    mu: Vec<f64>,
    rows: Vec<Vec<f64>>,
    log_scale: Vec<f64>,
}

impl DpTable {
    fn new(dist: &OffspringDistribution, n: usize) -> Self {
        let count = 2 * n + 1;
        let mu: Vec<f64> = (0..=n).map(|j| dist.prob(j)).collect();
        let mut rows = Vec::with_capacity(count);
        let mut log_scale = Vec::with_capacity(count);
        let mut first = vec![0.0; n + 1];
        first[0] = 1.0;
        rows.push(first);
        log_scale.push(0.0);
        for m in 1..count {
            let prev = &rows[m - 1];
            let mut row = vec![0.0; n + 1];
            for (s, slot) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for k in 0..=s {
                    acc += mu[k] * prev[s - k];
                }
                *slot = acc;
            }
            let max = row.iter().cloned().fold(0.0, f64::max);
            for x in row.iter_mut() {
                *x /= max;
            }
            log_scale.push(log_scale[m - 1] + max.ln());
            rows.push(row);
        }
        DpTable { n, mu, rows, log_scale }
    }

    /// `ln P(j_1 + ... + j_{2n+1} = n)`, the log acceptance rate of plain
    /// rejection.
    fn log_acceptance(&self) -> f64 {
        let m = self.rows.len() - 1;
        let last = &self.rows[m];
        let mut acc = 0.0;
        for k in 0..=self.n {
            acc += self.mu[k] * last[self.n - k];
        }
        self.log_scale[m] + acc.ln()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let count = 2 * self.n + 1;
        let mut left = self.n;
        let mut out = Vec::with_capacity(count);
        let mut w = Vec::with_capacity(self.n + 1);
        for i in 0..count {
            let row = &self.rows[count - 1 - i];
            w.clear();
            let mut total = 0.0;
            for k in 0..=left {
                total += self.mu[k] * row[left - k];
                w.push(total);
            }
            let x = rng.random::<f64>() * total;
            let k = w.partition_point(|&c| c <= x).min(left);
            out.push(2 * k as u32);
            left -= k;
        }
        debug_assert_eq!(left, 0);
        out
    }
}

/// Draws block trees for a fixed `(u, n)` and method. Build once, sample
/// many times; the tables are read-only.
#[derive(Clone, Debug)]
pub struct TreeSampler {
    n: usize,
    method: TreeMethod,
    max_rejections: u64,
    dist: Option<OffspringDistribution>,
    dp: Option<DpTable>,
}

impl TreeSampler {
    pub fn new(config: &SamplerConfig) -> Result<Self> {
        config.validate()?;
        let n = config.n;
        let dist = match config.tree_method {
            TreeMethod::DirectUniform => None,
            _ => Some(OffspringDistribution::with_table(config.u, config.limits.j_max.min(n + 1))?),
        };
        let dp = match config.tree_method {
            TreeMethod::ExactDp => {
                debug_assert!(n <= EXACT_DP_MAX_N);
                Some(DpTable::new(dist.as_ref().unwrap(), n))
            }
            _ => None,
        };
        Ok(TreeSampler { n, method: config.tree_method, max_rejections: config.limits.max_rejections, dist, dp })
    }

    pub fn method(&self) -> TreeMethod {
        self.method
    }

    pub fn distribution(&self) -> Option<&OffspringDistribution> {
        self.dist.as_ref()
    }

    /// Probability that `2n + 1` i.i.d. offspring sum to `2n` (ExactDp only).
    pub fn acceptance_rate(&self) -> Option<f64> {
        self.dp.as_ref().map(|t| t.log_acceptance().exp())
    }

    pub fn sample(&self, rng: &mut rng::Rng) -> Result<GwTreeSample> {
        let (tree, rejections) = match self.method {
            TreeMethod::RejectionCycle => {
                let (d, r) = self.rejection(rng)?;
                (tree_from_cyclic(d)?, r)
            }
            TreeMethod::ExactDp => {
                let d = self.dp.as_ref().unwrap().sample(rng);
                (tree_from_cyclic(d)?, 0)
            }
            TreeMethod::JansonApprox => {
                let (d, r) = self.janson(rng)?;
                (tree_from_cyclic(d)?, r)
            }
            TreeMethod::DirectUniform => {
                let q = sample_uniform_quadrangulation(self.n, rng);
                (map_block_tree(&tutte_inverse(&q)), 0)
            }
        };
        debug_assert_eq!(tree.edge_count(), 2 * self.n);
        Ok(GwTreeSample { tree, method: self.method, approx: !self.method.is_exact(), rejections, digest: digest(rng) })
    }

    /// Draws `2n + 1` offspring conditioned on summing to `2n`, by rejection.
    /// The values are drawn as counts per size (one binomial per size, in
    /// increasing order), so an attempt is abandoned as soon as the sum is
    /// bound to overshoot.
    fn rejection(&self, rng: &mut rng::Rng) -> Result<(Vec<u32>, u64)> {
        let dist = self.dist.as_ref().unwrap();
        let n = self.n as u64;
        let total = 2 * n + 1;
        let table = dist.table_len();
        let mut counts: Vec<(u32, u64)> = Vec::new();
        let mut singles: Vec<u32> = Vec::new();
        let mut rejections = 0u64;
        'attempt: loop {
            if rejections >= self.max_rejections {
                return Err(Error::RejectionLimit(rejections));
            }
            counts.clear();
            singles.clear();
            let mut left = total;
            let mut sum = 0u64;
            let mut j = 0usize;
            while left > 0 {
                if sum + left * j as u64 > n {
                    rejections += 1;
                    continue 'attempt;
                }
                if left <= INDIVIDUAL_BELOW || j >= table {
                    for _ in 0..left {
                        match dist.sample_half_at_least(rng, j, (n - sum) as usize) {
                            Some(v) => {
                                sum += v as u64;
                                singles.push(v as u32);
                            }
                            None => {
                                rejections += 1;
                                continue 'attempt;
                            }
                        }
                    }
                    break;
                }
                let p = (dist.prob(j) / dist.survival(j)).clamp(0.0, 1.0);
                let c = Binomial::new(left, p).expect("p in [0, 1]").sample(rng);
                if c > 0 {
                    counts.push((j as u32, c));
                    sum += j as u64 * c;
                    left -= c;
                }
                j += 1;
            }
            if sum != n {
                rejections += 1;
                continue;
            }
            let mut degrees = Vec::with_capacity(total as usize);
            for &(j, c) in &counts {
                degrees.extend(std::iter::repeat_n(2 * j, c as usize));
            }
            degrees.extend(singles.iter().map(|&j| 2 * j));
            degrees.shuffle(rng);
            return Ok((degrees, rejections));
        }
    }

    /// `2n` i.i.d. offspring plus one node taking the remainder, in uniform
    /// order.
    fn janson(&self, rng: &mut rng::Rng) -> Result<(Vec<u32>, u64)> {
        let dist = self.dist.as_ref().unwrap();
        let n = self.n;
        let mut degrees = Vec::with_capacity(2 * n + 1);
        let mut rejections = 0u64;
        'attempt: loop {
            if rejections >= self.max_rejections {
                return Err(Error::RejectionLimit(rejections));
            }
            degrees.clear();
            let mut sum = 0usize;
            for _ in 0..2 * n {
                match dist.sample_half(rng, n - sum) {
                    Some(j) => {
                        sum += j;
                        degrees.push(2 * j as u32);
                    }
                    None => {
                        rejections += 1;
                        continue 'attempt;
                    }
                }
            }
            degrees.push(2 * (n - sum) as u32);
            degrees.shuffle(rng);
            return Ok((degrees, rejections));
        }
    }
}

/// Convenience wrapper: build a [`TreeSampler`] and draw once.
pub fn sample_gw_conditioned(config: &SamplerConfig, rng: &mut rng::Rng) -> Result<GwTreeSample> {
    TreeSampler::new(config)?.sample(rng)
}

pub(crate) fn digest(rng: &rng::Rng) -> u64 {
    let pos = rng.get_word_pos();
    rng::mix((pos as u64) ^ rng::mix((pos >> 64) as u64 ^ rng.get_stream()))
}
