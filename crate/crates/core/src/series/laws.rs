use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::bivariate::BivariateCoefficients;
use crate::error::{Error, Result};

/// A finitely supported law with exact rational probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLaw {
    pub support: Vec<u32>,
    pub probs: Vec<BigRational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FloatLaw {
    pub support: Vec<u32>,
    pub probs: Vec<f64>,
}

impl ExactLaw {
    pub fn total(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |a, p| a + p)
    }

    pub fn prob(&self, k: u32) -> BigRational {
        self.support.iter().position(|&s| s == k).map(|i| self.probs[i].clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn to_f64(&self) -> FloatLaw {
        FloatLaw { support: self.support.clone(), probs: self.probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect() }
    }
}

fn split(u: &BigRational) -> Result<(BigInt, BigInt)> {
    if !u.is_positive() {
        return Err(Error::InvalidParameter(format!("u must be positive, got {u}")));
    }
    Ok((u.numer().clone(), u.denom().clone()))
}

impl BivariateCoefficients {
    /// `q^n Z_n(p/q) = sum_b N(n, b) p^b q^(n-b)`, an integer.
    fn scaled_partition(&self, n: u32, p: &BigInt, q: &BigInt) -> Result<BigInt> {
        let row = self.row(n)?;
        let mut acc = BigInt::zero();
        for (b, c) in row.iter().enumerate() {
            if !c.is_zero() {
                acc += BigInt::from(c.clone()) * p.pow(b as u32) * q.pow(n - b as u32);
            }
        }
        Ok(acc)
    }

    /// `Z_n(u) = sum_b N(n, b) u^b`.
    pub fn partition_function(&self, n: u32, u: &BigRational) -> Result<BigRational> {
        let (p, q) = split(u)?;
        Ok(BigRational::new(self.scaled_partition(n, &p, &q)?, q.pow(n)))
    }

    /// Law of the number of blocks under the block-weighted model.
    pub fn block_number_law(&self, n: u32, u: &BigRational) -> Result<ExactLaw> {
        let (p, q) = split(u)?;
        let z = self.scaled_partition(n, &p, &q)?;
        let row = self.row(n)?;
        let mut support = Vec::new();
        let mut probs = Vec::new();
        for (b, c) in row.iter().enumerate() {
            if !c.is_zero() {
                support.push(b as u32);
                probs.push(BigRational::new(BigInt::from(c.clone()) * p.pow(b as u32) * q.pow(n - b as u32), z.clone()));
            }
        }
        Ok(ExactLaw { support, probs })
    }

    /// Law of the size of the block containing the root edge, for `n >= 1`.
    ///
    /// A root block of size `k` has `2k` corners, each holding an arbitrary
    /// map, so `P(k) = u b_k [z^(n-k)] M(z,u)^(2k) / Z_n(u)`.
    pub fn root_block_law(&self, n: u32, u: &BigRational) -> Result<ExactLaw> {
        if n == 0 {
            return Err(Error::InvalidParameter("the vertex map has no root block".into()));
        }
        let (p, q) = split(u)?;
        let n_us = n as usize;
        let scaled: Vec<BigInt> = (0..=n).map(|m| self.scaled_partition(m, &p, &q)).collect::<Result<_>>()?;
        let truncated_mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); n_us + 1];
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().enumerate().take(n_us + 1 - i) {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let square = truncated_mul(&scaled, &scaled);
        let mut power = vec![BigInt::zero(); n_us + 1];
        power[0] = BigInt::one();
        let mut support = Vec::new();
        let mut probs = Vec::new();
        let total = &scaled[n_us];
        for k in 1..=n {
            power = truncated_mul(&power, &square);
            let b_k = BigInt::from(super::blocks_count(k));
            let num: BigInt = &p * b_k * q.pow(k - 1) * &power[(n - k) as usize];
            if !num.is_zero() {
                support.push(k);
                probs.push(BigRational::new(num, total.clone()));
            }
        }
        Ok(ExactLaw { support, probs })
    }
}

/// `u` as an exact rational, accepting `p/q` or a finite decimal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b): (BigInt, BigInt) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (!b.is_zero()).then(|| BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    Some(BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}

pub fn to_biguint_pair(r: &BigRational) -> (BigUint, BigUint) {
    (r.numer().magnitude().clone(), r.denom().magnitude().clone())
}
