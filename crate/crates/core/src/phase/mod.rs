//! Phase diagram of the block-size law: the singular point `y(u)`, the
//! offspring law of the block tree and its moments, and the predicted size
//! of the largest blocks.

mod offspring;
mod params;
mod schema;

pub use offspring::{OffspringDistribution, DEFAULT_TABLE};
pub use params::*;
pub use schema::{schema_table, SchemaRow};

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct LargestBlockPrediction {
    pub regime: Regime,
    /// Leading-order size of the largest block; `None` at `9/5`, where only
    /// the order `n^(2/3)` is known.
    pub center: Option<f64>,
    /// Order of the fluctuations around `center`.
    pub scale: f64,
}

/// Largest block size predicted for a map of size `n`:
/// `(1 - E(u)) n` below `9/5` (fluctuations of order `(2 n c)^(2/3)`),
/// order `n^(2/3)` at `9/5`, and
/// `ln n / (2 ln w) - (5/4) ln ln n / ln w` above.
pub fn predicted_largest_block(u: f64, n: f64) -> Result<LargestBlockPrediction> {
    let p = PhaseParams::new(u)?;
    Ok(match p.regime {
        Regime::Subcritical => LargestBlockPrediction {
            regime: p.regime,
            center: Some((1.0 - p.mean) * n),
            scale: (2.0 * n * p.c).powf(2.0 / 3.0),
        },
        Regime::Critical => LargestBlockPrediction { regime: p.regime, center: None, scale: n.powf(2.0 / 3.0) },
        Regime::Supercritical => {
            let lw = p.w.ln();
            LargestBlockPrediction {
                regime: p.regime,
                center: Some(n.ln() / (2.0 * lw) - 1.25 * n.ln().ln() / lw),
                scale: 1.0,
            }
        }
    })
}
