use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::blocks_count;
use crate::error::{Error, Result};

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// The table `N(n, b)` of rooted maps with `n` edges and `b` blocks, for
/// `0 <= b <= n <= max_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateCoefficients {
    rows: Vec<Vec<BigUint>>,
}

impl BivariateCoefficients {
    /// Solves the decomposition equation by Lagrange inversion:
    /// `N(n, b) = C(2n+1, b) / (2n+1) * [y^n] (B(y) - 1)^b`.
    pub fn solve(max_n: u32) -> Self {
        let blocks: Vec<BigUint> = (0..=max_n).map(blocks_count).collect();
        Self::solve_with_blocks(&blocks)
    }

    /// Same as [`solve`](Self::solve) with caller-supplied block counts
    /// `blocks[k]`, `k = 0..=max_n`.
    pub fn solve_with_blocks(blocks: &[BigUint]) -> Self {
        let max_n = blocks.len() - 1;
        let mut rows: Vec<Vec<BigUint>> = (0..=max_n).map(|n| vec![BigUint::zero(); n + 1]).collect();
        rows[0][0] = BigUint::one();
        // power[n] = [y^n] (B - 1)^b, updated in place for b = 1, 2, ...
        let mut power: Vec<BigUint> = vec![BigUint::zero(); max_n + 1];
        power[0] = BigUint::one();
        for b in 1..=max_n {
            let mut next = vec![BigUint::zero(); max_n + 1];
            for n in b..=max_n {
                let mut acc = BigUint::zero();
                for i in (b - 1)..n {
                    if !power[i].is_zero() {
                        acc += &power[i] * &blocks[n - i];
                    }
                }
                next[n] = acc;
            }
            power = next;
            for n in b..=max_n {
                let (q, r) = (binomial(2 * n as u64 + 1, b as u64) * &power[n]).div_rem(&BigUint::from(2 * n + 1));
                debug_assert!(r.is_zero(), "Lagrange coefficient not integral at ({n}, {b})");
                rows[n][b] = q;
            }
        }
        BivariateCoefficients { rows }
    }

    /// Solves `M = 1 + u (B(z M^2) - 1)` by fixed-point iteration on
    /// truncated bivariate series. Cubic in the table size per round, so
    /// only meant for small `max_n`.
    pub fn solve_fixed_point(max_n: u32) -> Self {
        let n = max_n as usize;
        let blocks: Vec<BigInt> = (0..=max_n).map(|k| BigInt::from(blocks_count(k))).collect();
        // series in z with coefficients polynomials in u, both truncated
        type Series = Vec<Vec<BigInt>>;
        let zero = || -> Series { (0..=n).map(|i| vec![BigInt::zero(); i + 1]).collect() };
        let mul = |a: &Series, b: &Series| -> Series {
            let mut out = zero();
            for i in 0..=n {
                for j in 0..=(n - i) {
                    for (p, x) in a[i].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (q, y) in b[j].iter().enumerate() {
                            if p + q <= i + j && !y.is_zero() {
                                out[i + j][p + q] += x * y;
                            }
                        }
                    }
                }
            }
            out
        };
        let mut m = zero();
        m[0][0] = BigInt::one();
        for _ in 0..=n {
            // y = z M^2
            let sq = mul(&m, &m);
            let mut y = zero();
            for i in 0..n {
                y[i + 1][..sq[i].len()].clone_from_slice(&sq[i]);
            }
            // B(y) - 1 by Horner
            let mut acc = zero();
            for k in (1..=n).rev() {
                acc[0][0] += &blocks[k];
                acc = mul(&acc, &y);
            }
            let mut next = zero();
            next[0][0] = BigInt::one();
            for i in 0..=n {
                for (p, x) in acc[i].iter().enumerate() {
                    if p < i {
                        next[i][p + 1] += x;
                    }
                }
            }
            m = next;
        }
        let rows = m
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.to_biguint().expect("negative coefficient")).collect())
            .collect();
        BivariateCoefficients { rows }
    }

    pub fn max_n(&self) -> u32 {
        self.rows.len() as u32 - 1
    }

    pub fn coefficient(&self, n: u32, b: u32) -> Result<&BigUint> {
        let row = self.row(n)?;
        row.get(b as usize).ok_or(Error::InvalidParameter(format!("b = {b} exceeds n = {n}")))
    }

    pub fn row(&self, n: u32) -> Result<&[BigUint]> {
        self.rows.get(n as usize).map(|r| r.as_slice()).ok_or(Error::Unsolved { n, max: self.max_n() })
    }

    pub fn row_sum(&self, n: u32) -> Result<BigUint> {
        Ok(self.row(n)?.iter().sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::maps_count;

    #[test]
    fn small_rows() {
        let t = BivariateCoefficients::solve(3);
        let as_u64 = |n| t.row(n).unwrap().iter().map(|x| u64::try_from(x).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_u64(0), vec![1]);
        assert_eq!(as_u64(1), vec![0, 2]);
        assert_eq!(as_u64(2), vec![0, 1, 8]);
        assert_eq!(t.row_sum(3).unwrap(), maps_count(3));
    }

    #[test]
    fn fixed_point_agrees() {
        assert_eq!(BivariateCoefficients::solve(9), BivariateCoefficients::solve_fixed_point(9));
    }

    #[test]
    fn out_of_range() {
        let t = BivariateCoefficients::solve(4);
        assert!(matches!(t.row(5), Err(Error::Unsolved { n: 5, max: 4 })));
    }
}
