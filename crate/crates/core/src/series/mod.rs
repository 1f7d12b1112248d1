//! Exact enumeration: rooted maps, 2-connected blocks, and maps counted by
//! size and number of blocks.
//!
//! With `M(z, u) = sum N(n, b) z^n u^b` and `B(y) = sum b_k y^k`, the block
//! decomposition gives `M = 1 + u (B(z M^2) - 1)`.

mod bivariate;
pub mod laws;

pub use bivariate::BivariateCoefficients;
pub use laws::{parse_rational, ExactLaw, FloatLaw};

use num_bigint::BigUint;
use num_traits::One;

fn falling(from: u64, count: u64) -> BigUint {
    (0..count).fold(BigUint::one(), |acc, i| acc * BigUint::from(from - i))
}

fn factorial(n: u64) -> BigUint {
    falling(n, n)
}

/// Rooted planar maps with `n` edges: `2 (2n)! 3^n / ((n+2)! n!)`.
pub fn maps_count(n: u32) -> BigUint {
    let n = n as u64;
    let num = BigUint::from(2u32) * factorial(2 * n) * BigUint::from(3u32).pow(n as u32);
    num / (factorial(n + 2) * factorial(n))
}

/// Rooted 2-connected maps with `n` edges: `2 (3n-3)! / (n! (2n-1)!)` for
/// `n >= 1`, and 1 for the vertex map.
pub fn blocks_count(n: u32) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let n = n as u64;
    BigUint::from(2u32) * factorial(3 * n - 3) / (factorial(n) * factorial(2 * n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let m: Vec<u64> = (0..6).map(|n| maps_count(n).try_into().unwrap()).collect();
        assert_eq!(m, vec![1, 2, 9, 54, 378, 2916]);
        let b: Vec<u64> = (0..8).map(|n| blocks_count(n).try_into().unwrap()).collect();
        assert_eq!(b, vec![1, 2, 1, 2, 6, 22, 91, 408]);
    }
}
