use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{DEFAULT_TABLE, U_CRITICAL};

/// Largest `n` accepted by [`TreeMethod::ExactDp`].
pub const EXACT_DP_MAX_N: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Map,
    Quad,
}

impl ObjectKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::Map => "map",
            ObjectKind::Quad => "quad",
        }
    }
}

/// How the block tree is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeMethod {
    /// `2n + 1` i.i.d. offspring until they sum to `2n`. Exact; needs `u >= 9/5`.
    RejectionCycle,
    /// Sequential draws from exact partial-sum tables. Exact; needs `n <= 512`.
    ExactDp,
    /// One special node takes whatever `2n` i.i.d. offspring leave over.
    /// Approximate; only for `u < 9/5`.
    JansonApprox,
    /// Decompose a uniform object. Exact; only for `u = 1`.
    DirectUniform,
}

impl TreeMethod {
    pub fn name(self) -> &'static str {
        match self {
            TreeMethod::RejectionCycle => "rejection-cycle",
            TreeMethod::ExactDp => "exact-dp",
            TreeMethod::JansonApprox => "janson-approx",
            TreeMethod::DirectUniform => "direct-uniform",
        }
    }

    pub fn is_exact(self) -> bool {
        self != TreeMethod::JansonApprox
    }

    /// The exact method when one is allowed, else the approximation.
    pub fn auto(u: f64, n: usize) -> TreeMethod {
        if u >= U_CRITICAL {
            TreeMethod::RejectionCycle
        } else if u == 1.0 {
            TreeMethod::DirectUniform
        } else if n <= EXACT_DP_MAX_N {
            TreeMethod::ExactDp
        } else {
            TreeMethod::JansonApprox
        }
    }

    /// Checks the method against `(u, n)`.
    pub fn check(self, u: f64, n: usize) -> Result<()> {
        let reason = match self {
            TreeMethod::RejectionCycle if u < U_CRITICAL => {
                format!("u = {u} is below 9/5, where the acceptance rate decays exponentially in n")
            }
            TreeMethod::ExactDp if n > EXACT_DP_MAX_N => format!("n = {n} exceeds {EXACT_DP_MAX_N}"),
            TreeMethod::JansonApprox if u >= U_CRITICAL => {
                format!("u = {u} is not below 9/5, where the approximation breaks down")
            }
            TreeMethod::DirectUniform if u != 1.0 => format!("u = {u}, but the uniform shortcut needs u = 1"),
            _ => return Ok(()),
        };
        Err(Error::MethodUnavailable { method: self.name(), reason })
    }
}

/// Where blocks come from when a tree is decorated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSource {
    /// Every block is extracted from quadrangulations drawn for this sample
    /// only. Independent and exact.
    Harvest,
    /// One block per call to the rejection sampler. Independent and exact but
    /// slower for trees with many small blocks.
    Fresh,
    /// One block per distinct size, reused for every node of that size.
    /// Blocks are correlated; outputs are marked as such.
    Pool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_rejections: u64,
    pub j_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_rejections: 100_000_000, j_max: DEFAULT_TABLE }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub u: f64,
    pub n: usize,
    pub kind: ObjectKind,
    pub tree_method: TreeMethod,
    pub blocks: BlockSource,
    pub seed: u64,
    pub limits: Limits,
}

impl SamplerConfig {
    /// A config with the automatic tree method and harvested blocks.
    pub fn new(u: f64, n: usize, kind: ObjectKind, seed: u64) -> Self {
        SamplerConfig {
            u,
            n,
            kind,
            tree_method: TreeMethod::auto(u, n),
            blocks: BlockSource::Harvest,
            seed,
            limits: Limits::default(),
        }
    }

    pub fn with_method(mut self, method: TreeMethod) -> Self {
        self.tree_method = method;
        self
    }

    pub fn with_blocks(mut self, blocks: BlockSource) -> Self {
        self.blocks = blocks;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u > 0.0 && self.u.is_finite()) {
            return Err(Error::InvalidParameter(format!("u must be positive and finite, got {}", self.u)));
        }
        if self.n < 1 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.n > u32::MAX as usize / 8 {
            return Err(Error::TooLarge(self.n));
        }
        if self.limits.j_max < 1 {
            return Err(Error::InvalidParameter("J_max must be at least 1".into()));
        }
        self.tree_method.check(self.u, self.n)
    }
}
