//! Observables of sampled maps, log-log exponent fits, the distance constant
//! `kappa_u`, and the experiment harness.

mod experiment;
mod fit;
mod kappa;
mod observables;

pub use experiment::{
    run_experiment, Deviations, ExperimentPlan, ExperimentSummary, Fits, PointSummary, Predictions, USummary,
};
pub use fit::{exponent_fit, grouped_median, mean_stderr, median, tail_slope, without_transient, Fit};
pub use kappa::{block_distance, block_distance_mean, exact_block_distance, kappa_mc, KappaEstimate};
pub use observables::{distance_sample, largest_blocks, SampleRecord};
