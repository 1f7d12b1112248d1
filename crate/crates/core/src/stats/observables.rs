//! Per-sample observables and the CSV record they go into.

use rand::Rng;
use serde::Serialize;

use crate::mapcore::metrics::root_distances;
use crate::mapcore::{BlockTree, HalfEdgeMap};

/// The `j` largest block sizes, zero-padded.
pub fn largest_blocks(t: &BlockTree, j: usize) -> Vec<u32> {
    t.largest_blocks(j)
}

/// Distances from the root vertex to `reps` uniform vertices.
pub fn distance_sample<R: Rng + ?Sized>(m: &HalfEdgeMap, reps: usize, rng: &mut R) -> Vec<u32> {
    root_distances(m, reps, rng)
}

/// One CSV row. Columns left empty are `None`: distances in tree-only runs,
/// everything measured when the sampler gave up, and the time unless asked
/// for (it would break byte-identical reruns).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRecord {
    pub u: f64,
    pub n: usize,
    pub replica: usize,
    pub seed: u64,
    pub kind: &'static str,
    pub method: &'static str,
    pub approx: bool,
    #[serde(rename = "LB1")]
    pub lb1: Option<u32>,
    #[serde(rename = "LB2")]
    pub lb2: Option<u32>,
    #[serde(rename = "LB3")]
    pub lb3: Option<u32>,
    pub b: Option<usize>,
    pub height: Option<u32>,
    /// Grouped median of the root distances drawn for this object.
    pub dist: Option<f64>,
    pub diam_lb: Option<u32>,
    pub ms: Option<f64>,
    #[serde(skip)]
    pub error: Option<String>,
}

impl SampleRecord {
    pub const COLUMNS: [&'static str; 15] =
        ["u", "n", "replica", "seed", "kind", "method", "approx", "LB1", "LB2", "LB3", "b", "height", "dist", "diam_lb", "ms"];

    /// Fills the tree columns.
    pub fn set_tree(&mut self, t: &BlockTree) {
        let lb = largest_blocks(t, 3);
        self.lb1 = Some(lb[0]);
        self.lb2 = Some(lb[1]);
        self.lb3 = Some(lb[2]);
        self.b = Some(t.block_count());
        self.height = Some(t.height());
    }

    /// The invariants every complete record satisfies.
    pub fn check(&self, t: &BlockTree) -> bool {
        let ranked = self.lb1 >= self.lb2 && self.lb2 >= self.lb3;
        let total: u64 = t.block_sizes().iter().map(|&k| k as u64).sum();
        ranked && total == self.n as u64 && self.b.is_some_and(|b| b <= 2 * self.n + 1)
    }
}
