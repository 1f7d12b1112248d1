use rand::Rng;

use super::params::PhaseParams;
use crate::error::{Error, Result};

/// Default number of tabulated atoms.
pub const DEFAULT_TABLE: usize = 1 << 16;

/// `t_{j+1} / t_j` for `t_j = b_j y^j`, `j >= 1`.
fn ratio(j: usize, y: f64) -> f64 {
    let j = j as f64;
    y * 3.0 * j * (3.0 * j - 1.0) * (3.0 * j - 2.0) / ((j + 1.0) * 2.0 * j * (2.0 * j + 1.0))
}

/// The block-size law `mu(2j) = u b_j y^j / M_rho` (`j >= 1`) and
/// `mu(0) = 1 / M_rho`, tabulated up to `j_max` with the remaining mass kept
/// as a tail that is sampled by walking the ratio recurrence.
#[derive(Clone, Debug)]
pub struct OffspringDistribution {
    params: PhaseParams,
    probs: Vec<f64>,
    cdf: Vec<f64>,
    sf: Vec<f64>,
    tail: f64,
    last_t: f64,
}

impl OffspringDistribution {
    pub fn new(u: f64) -> Result<Self> {
        Self::with_table(u, DEFAULT_TABLE)
    }

    pub fn with_table(u: f64, j_max: usize) -> Result<Self> {
        if j_max < 1 {
            return Err(Error::InvalidParameter("table needs at least one atom".into()));
        }
        let params = PhaseParams::new(u)?;
        let scale = u / params.m_rho;
        let mut probs = Vec::with_capacity(j_max + 1);
        probs.push(1.0 / params.m_rho);
        let mut t = 2.0 * params.y;
        let mut ts = Vec::with_capacity(j_max);
        for j in 1..=j_max {
            ts.push(t);
            probs.push(scale * t);
            if t < 1e-300 {
                break;
            }
            t *= ratio(j, params.y);
        }
        let last_t = *ts.last().unwrap();
        // smallest terms first
        let head: f64 = ts.iter().rev().sum();
        let tail = (scale * (params.b - 1.0 - head)).max(0.0);
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cdf.push(acc);
        }
        let mut sf = vec![0.0; probs.len()];
        let mut acc = tail;
        for j in (0..probs.len()).rev() {
            acc += probs[j];
            sf[j] = acc;
        }
        Ok(OffspringDistribution { params, probs, cdf, sf, tail, last_t })
    }

    pub fn params(&self) -> &PhaseParams {
        &self.params
    }

    /// Largest tabulated `j`.
    pub fn table_len(&self) -> usize {
        self.probs.len() - 1
    }

    /// `mu(2j)` for tabulated `j`, extended by the recurrence beyond.
    pub fn prob(&self, j: usize) -> f64 {
        if j < self.probs.len() {
            return self.probs[j];
        }
        let mut t = self.last_t;
        for i in self.table_len()..j {
            t *= ratio(i, self.params.y);
        }
        t * self.params.u / self.params.m_rho
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(xi >= 2j)`, tail included.
    pub fn survival(&self, j: usize) -> f64 {
        if j < self.sf.len() {
            self.sf[j]
        } else {
            self.tail
        }
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail
    }

    /// Rigorous upper bound on the mass beyond the table, from
    /// `t_{j+1} / t_j <= (j / (j+1))^(5/2) / w`.
    pub fn tail_bound(&self) -> f64 {
        let j = self.table_len() as f64;
        let w = self.params.w;
        let geometric = if w > 1.0 { 1.0 / (w - 1.0) } else { f64::INFINITY };
        self.last_t * (2.0 / 3.0 * j).min(geometric) * self.params.u / self.params.m_rho
    }

    /// Upper bound on the contribution of the untabulated atoms to the mean.
    pub fn mean_tail_bound(&self) -> f64 {
        let j = self.table_len() as f64;
        let w = self.params.w;
        let geometric = if w > 1.0 { 2.0 * (j / (w - 1.0) + w / ((w - 1.0) * (w - 1.0))) } else { f64::INFINITY };
        self.last_t * (4.0 * j * j).min(geometric) * self.params.u / self.params.m_rho
    }

    /// Mean over the tabulated atoms only.
    pub fn table_mean(&self) -> f64 {
        self.probs.iter().enumerate().rev().map(|(j, p)| 2.0 * j as f64 * p).sum()
    }

    pub fn table_mass(&self) -> f64 {
        self.probs.iter().rev().sum()
    }

    /// Draws `j` (the offspring count is `2j`) by inversion. Values above
    /// `cap` are reported as `None` without being resolved further.
    pub fn sample_half<R: Rng + ?Sized>(&self, rng: &mut R, cap: usize) -> Option<usize> {
        let u: f64 = rng.random();
        self.invert(u, cap)
    }

    /// Smallest `j` with `P(xi <= 2j) > u`.
    pub fn invert(&self, u: f64, cap: usize) -> Option<usize> {
        let last = *self.cdf.last().unwrap();
        let j = if u < last {
            self.cdf.partition_point(|&c| c <= u)
        } else {
            if self.tail <= 0.0 {
                return (self.table_len() <= cap).then_some(self.table_len());
            }
            let target = u - last;
            let scale = self.params.u / self.params.m_rho;
            let mut t = self.last_t;
            let mut acc = 0.0;
            let mut j = self.table_len();
            loop {
                t *= ratio(j, self.params.y);
                j += 1;
                acc += scale * t;
                if acc > target || j > cap || t == 0.0 {
                    break;
                }
            }
            j
        };
        (j <= cap).then_some(j)
    }

    /// Draws `j` conditioned on `j >= from`, by inversion on the survival
    /// function.
    pub fn sample_half_at_least<R: Rng + ?Sized>(&self, rng: &mut R, from: usize, cap: usize) -> Option<usize> {
        if from > cap {
            return None;
        }
        let below = if from == 0 { 0.0 } else { self.cdf.get(from - 1).copied().unwrap_or(*self.cdf.last().unwrap()) };
        let mass = self.survival(from);
        let u: f64 = rng.random();
        self.invert(below + u * mass, cap).map(|j| j.max(from))
    }

    /// `max { j : (2n + 1) mu(2j) >= 1 }`: the block size at which a tree
    /// with `2n + 1` nodes expects about one node.
    pub fn largest_block_threshold(&self, n: u64) -> usize {
        let nodes = 2.0 * n as f64 + 1.0;
        let mut best = 0;
        let limit = (n as usize).min(4 * self.table_len());
        for j in 1..=limit {
            let p = self.prob(j);
            if nodes * p >= 1.0 {
                best = j;
            } else if j > self.table_len() {
                break;
            }
        }
        best
    }

    /// The size-biased law `2j mu(2j) / E(u)`, normalised over the table.
    pub fn size_biased_table(&self) -> Vec<f64> {
        let w: Vec<f64> = self.probs.iter().enumerate().map(|(j, p)| 2.0 * j as f64 * p).collect();
        let total: f64 = w.iter().rev().sum();
        w.into_iter().map(|x| x / total).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn ratio_matches_counts() {
        // b_2 / b_1 = 1/2, b_3 / b_2 = 2
        assert!((ratio(1, 1.0) - 0.5).abs() < 1e-15);
        assert!((ratio(2, 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_bound_behind_tail_bound() {
        for j in 1..200_000usize {
            let jf = j as f64;
            let bound = (jf / (jf + 1.0)).powf(2.5) * 27.0 / 4.0;
            assert!(ratio(j, 1.0) <= bound * (1.0 + 1e-15), "j = {j}");
        }
    }

    #[test]
    fn inversion_is_monotone_and_capped() {
        let d = OffspringDistribution::with_table(1.0, 64).unwrap();
        let mut prev = 0;
        for i in 0..1000 {
            let j = d.invert(i as f64 / 1000.0, usize::MAX).unwrap();
            assert!(j >= prev);
            prev = j;
        }
        assert!(d.invert(1.0 - 1e-12, 10).is_none());
        let mut rng = seeded(1, 0);
        for _ in 0..1000 {
            let j = d.sample_half_at_least(&mut rng, 3, 1_000_000).unwrap();
            assert!(j >= 3);
        }
    }
}
