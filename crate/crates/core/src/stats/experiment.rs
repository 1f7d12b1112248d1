//! Phase-diagram campaigns: replicas over a grid of `(u, n)`, one CSV row
//! each, and a summary with fitted exponents next to the predictions.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::fit::{exponent_fit, grouped_median, mean_stderr, median, without_transient, Fit};
use super::observables::{distance_sample, SampleRecord};
use crate::error::{Error, Result};
use crate::mapcore::diameter_lower_bound;
use crate::phase::{predicted_largest_block, PhaseParams, Regime};
use crate::sampler::{Limits, ModelSampler, ObjectKind, SamplerConfig, TreeMethod};
use crate::{par, rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub u_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    pub kind: ObjectKind,
    /// Build the objects (distances, diameter bound) or only the block trees.
    pub objects: bool,
    /// Tree method; chosen per `(u, n)` when absent.
    pub method: Option<TreeMethod>,
    /// Root distances drawn per object.
    pub reps: usize,
    /// Fill the `ms` column. Off by default so reruns are byte-identical.
    pub timing: bool,
    pub limits: Limits,
}

impl ExperimentPlan {
    pub fn new(u_grid: Vec<f64>, n_grid: Vec<usize>, replicas: usize, seed: u64) -> Self {
        ExperimentPlan {
            u_grid,
            n_grid,
            replicas,
            seed,
            kind: ObjectKind::Quad,
            objects: false,
            method: None,
            reps: 16,
            timing: false,
            limits: Limits::default(),
        }
    }

    /// `2^lo, ..., 2^hi`.
    pub fn dyadic(lo: u32, hi: u32) -> Vec<usize> {
        (lo..=hi).map(|e| 1usize << e).collect()
    }

    pub fn method_for(&self, u: f64, n: usize) -> TreeMethod {
        self.method.unwrap_or_else(|| TreeMethod::auto(u, n))
    }

    pub fn config(&self, u: f64, n: usize) -> SamplerConfig {
        let mut c = SamplerConfig::new(u, n, self.kind, self.seed).with_method(self.method_for(u, n));
        c.limits = self.limits;
        c
    }

    /// Checks every grid point before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.u_grid.is_empty() || self.n_grid.is_empty() || self.replicas == 0 {
            return Err(Error::InvalidParameter("empty grid or no replicas".into()));
        }
        if self.objects && self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be positive when objects are built".into()));
        }
        for &u in &self.u_grid {
            for &n in &self.n_grid {
                self.config(u, n).validate()?;
            }
        }
        Ok(())
    }

    pub fn replica_seed(&self, u: f64, n: usize, replica: usize) -> u64 {
        rng::derive(self.seed, &[u.to_bits(), n as u64, replica as u64])
    }
}

/// Summary of one `(u, n)` point.
#[derive(Clone, Debug, Serialize)]
pub struct PointSummary {
    pub n: usize,
    pub method: TreeMethod,
    pub approx: bool,
    pub replicas: usize,
    pub failures: usize,
    pub errors: Vec<String>,
    pub mean_lb1: Option<f64>,
    pub mean_lb1_over_n: Option<f64>,
    pub stderr_lb1_over_n: Option<f64>,
    pub median_lb2: Option<f64>,
    pub mean_lb2: Option<f64>,
    pub mean_blocks: Option<f64>,
    pub mean_height: Option<f64>,
    /// Average over replicas of the mean node depth of the block tree.
    pub mean_tree_depth: Option<f64>,
    /// `mean_tree_depth * sigma / sqrt(2 * 2n)` above `9/5`.
    pub tree_depth_rescaled: Option<f64>,
    /// Grouped median of every root distance drawn at this point.
    pub median_dist: Option<f64>,
    pub median_diam_lb: Option<f64>,
    pub predicted_lb1: Option<f64>,
    pub predicted_scale: f64,
    /// Mean of `LB1 - predicted_lb1`.
    pub lb1_deviation: Option<f64>,
    /// Share of replicas with `|LB1 - predicted_lb1| <= 4`.
    pub within_4: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Fits {
    /// Mean `LB1` against `n`.
    pub lb1: Option<Fit>,
    /// Median `LB2` against `n`.
    pub lb2: Option<Fit>,
    pub dist: Option<Fit>,
    pub height: Option<Fit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Predictions {
    pub lb1_exponent: f64,
    /// `n^(1/4)`, `n^(1/3)` or `n^(1/2)`.
    pub dist_exponent: f64,
    pub lb1_over_n: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct USummary {
    pub u: f64,
    pub regime: Regime,
    pub mean_offspring: f64,
    pub sigma: Option<f64>,
    pub points: Vec<PointSummary>,
    pub fits: Fits,
    pub predictions: Predictions,
    /// Fitted minus predicted exponents.
    pub deviations: Deviations,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Deviations {
    pub lb1_exponent: Option<f64>,
    pub dist_exponent: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSummary {
    pub plan: ExperimentPlan,
    pub groups: Vec<USummary>,
}

struct Outcome {
    record: SampleRecord,
    distances: Vec<u32>,
    mean_depth: Option<f64>,
}

fn run_replica(plan: &ExperimentPlan, sampler: &ModelSampler, u: f64, n: usize, replica: usize) -> Outcome {
    let seed = plan.replica_seed(u, n, replica);
    let method = sampler.config().tree_method;
    let mut record = SampleRecord {
        u,
        n,
        replica,
        seed,
        kind: plan.kind.name(),
        method: method.name(),
        approx: !method.is_exact(),
        lb1: None,
        lb2: None,
        lb3: None,
        b: None,
        height: None,
        dist: None,
        diam_lb: None,
        ms: None,
        error: None,
    };
    let start = Instant::now();
    let mut rng = rng::seeded(seed, 0);
    let mut distances = Vec::new();
    let mut mean_depth = None;
    let result = if plan.objects {
        sampler.sample(&mut rng).map(|s| {
            record.set_tree(&s.tree);
            mean_depth = Some(s.tree.mean_depth());
            let m = s.object.map();
            distances = distance_sample(m, plan.reps, &mut rng);
            record.dist = grouped_median(&distances);
            record.diam_lb = Some(diameter_lower_bound(m));
        })
    } else {
        sampler.sample_tree(&mut rng).map(|t| {
            record.set_tree(&t.tree);
            mean_depth = Some(t.tree.mean_depth());
        })
    };
    if let Err(e) = result {
        record.error = Some(e.to_string());
    }
    if plan.timing {
        record.ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Outcome { record, distances, mean_depth }
}

fn opt_mean(v: &[f64]) -> Option<f64> {
    mean_stderr(v).map(|m| m.0)
}

fn summarise_point(u: f64, n: usize, method: TreeMethod, outcomes: &[Outcome], sigma: Option<f64>) -> Result<PointSummary> {
    let ok: Vec<&Outcome> = outcomes.iter().filter(|o| o.record.error.is_none()).collect();
    let lb1: Vec<f64> = ok.iter().map(|o| o.record.lb1.unwrap() as f64).collect();
    let lb2: Vec<f64> = ok.iter().map(|o| o.record.lb2.unwrap() as f64).collect();
    let ratio: Vec<f64> = lb1.iter().map(|x| x / n as f64).collect();
    let depth: Vec<f64> = ok.iter().filter_map(|o| o.mean_depth).collect();
    let dists: Vec<u32> = ok.iter().flat_map(|o| o.distances.iter().copied()).collect();
    let diam: Vec<f64> = ok.iter().filter_map(|o| o.record.diam_lb.map(|d| d as f64)).collect();
    let pred = predicted_largest_block(u, n as f64)?;
    let mean_tree_depth = opt_mean(&depth);
    Ok(PointSummary {
        n,
        method,
        approx: !method.is_exact(),
        replicas: outcomes.len(),
        failures: outcomes.len() - ok.len(),
        errors: outcomes.iter().filter_map(|o| o.record.error.clone()).collect(),
        mean_lb1: opt_mean(&lb1),
        mean_lb1_over_n: opt_mean(&ratio),
        stderr_lb1_over_n: mean_stderr(&ratio).map(|m| m.1),
        median_lb2: median(&lb2),
        mean_lb2: opt_mean(&lb2),
        mean_blocks: opt_mean(&ok.iter().map(|o| o.record.b.unwrap() as f64).collect::<Vec<_>>()),
        mean_height: opt_mean(&ok.iter().map(|o| o.record.height.unwrap() as f64).collect::<Vec<_>>()),
        mean_tree_depth,
        tree_depth_rescaled: sigma.zip(mean_tree_depth).map(|(s, d)| d * s / (4.0 * n as f64).sqrt()),
        median_dist: grouped_median(&dists),
        median_diam_lb: median(&diam),
        predicted_lb1: pred.center,
        predicted_scale: pred.scale,
        lb1_deviation: pred.center.and_then(|c| opt_mean(&lb1.iter().map(|x| x - c).collect::<Vec<_>>())),
        within_4: pred.center.filter(|_| !lb1.is_empty()).map(|c| {
            lb1.iter().filter(|&&x| (x - c).abs() <= 4.0).count() as f64 / lb1.len() as f64
        }),
    })
}

fn fit_of(points: &[PointSummary], stat: impl Fn(&PointSummary) -> Option<f64>) -> Option<Fit> {
    let pts: Vec<(f64, f64)> = points.iter().filter_map(|p| stat(p).map(|s| (p.n as f64, s))).collect();
    exponent_fit(&without_transient(pts)).ok()
}

fn summarise_u(u: f64, points: Vec<PointSummary>) -> Result<USummary> {
    let params = PhaseParams::new(u)?;
    let fits = Fits {
        lb1: fit_of(&points, |p| p.mean_lb1),
        lb2: fit_of(&points, |p| p.median_lb2),
        dist: fit_of(&points, |p| p.median_dist),
        height: fit_of(&points, |p| p.mean_height),
    };
    let predictions = match params.regime {
        Regime::Subcritical => {
            Predictions { lb1_exponent: 1.0, dist_exponent: 0.25, lb1_over_n: Some(1.0 - params.mean) }
        }
        Regime::Critical => Predictions { lb1_exponent: 2.0 / 3.0, dist_exponent: 1.0 / 3.0, lb1_over_n: None },
        // LB1 grows like ln n
        Regime::Supercritical => Predictions { lb1_exponent: 0.0, dist_exponent: 0.5, lb1_over_n: None },
    };
    let deviations = Deviations {
        lb1_exponent: fits.lb1.map(|f| f.slope - predictions.lb1_exponent),
        dist_exponent: fits.dist.map(|f| f.slope - predictions.dist_exponent),
    };
    Ok(USummary { u, regime: params.regime, mean_offspring: params.mean, sigma: params.sigma(), points, fits, predictions, deviations })
}

/// Runs the plan, writing one CSV row per replica to `csv_out` in
/// `(u, n, replica)` order. Rows are flushed after every `(u, n)` point.
/// Failed replicas keep their row with the measured columns empty.
pub fn run_experiment<W: Write>(plan: &ExperimentPlan, csv_out: W) -> Result<ExperimentSummary> {
    plan.validate()?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(csv_out);
    writer.write_record(SampleRecord::COLUMNS).map_err(csv_error)?;
    let mut groups = Vec::new();
    for &u in &plan.u_grid {
        let sigma = PhaseParams::new(u)?.sigma();
        let mut points = Vec::new();
        for &n in &plan.n_grid {
            let sampler = ModelSampler::new(plan.config(u, n))?;
            let outcomes = par::map_range(plan.replicas, |r| run_replica(plan, &sampler, u, n, r));
            for o in &outcomes {
                writer.serialize(&o.record).map_err(csv_error)?;
            }
            writer.flush()?;
            points.push(summarise_point(u, n, sampler.config().tree_method, &outcomes, sigma)?);
        }
        groups.push(summarise_u(u, points)?);
    }
    Ok(ExperimentSummary { plan: plan.clone(), groups })
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_depend_on_point_not_order() {
        let a = ExperimentPlan::new(vec![1.0, 5.0], vec![8], 2, 3);
        let b = ExperimentPlan::new(vec![5.0, 1.0], vec![8], 2, 3);
        assert_eq!(a.replica_seed(5.0, 8, 1), b.replica_seed(5.0, 8, 1));
        assert_ne!(a.replica_seed(5.0, 8, 1), a.replica_seed(5.0, 8, 0));
    }

    #[test]
    fn invalid_plans() {
        assert!(ExperimentPlan::new(vec![], vec![8], 2, 0).validate().is_err());
        let mut p = ExperimentPlan::new(vec![1.2], vec![1000], 2, 0);
        p.method = Some(TreeMethod::ExactDp);
        assert!(p.validate().is_err());
        assert!(ExperimentPlan::new(vec![-1.0], vec![8], 2, 0).validate().is_err());
    }
}
