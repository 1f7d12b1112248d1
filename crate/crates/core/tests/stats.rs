use blockmap::mapcore::enumerate::all_rooted_maps;
use blockmap::mapcore::is_two_connected;
use blockmap::rng::seeded;
use blockmap::sampler::{ObjectKind, TreeMethod};
use blockmap::stats::*;
use rand::Rng;
use rand_distr::{Distribution, Normal};

#[test]
fn noisy_power_law() {
    let mut rng = seeded(11, 0);
    let noise = Normal::new(1.0, 0.02).unwrap();
    let pts: Vec<_> = (10..=17)
        .map(|e| {
            let n = (1u64 << e) as f64;
            (n, 3.0 * n.powf(2.0 / 3.0) * noise.sample(&mut rng))
        })
        .collect();
    let f = exponent_fit(&pts).unwrap();
    assert!((f.slope - 2.0 / 3.0).abs() < 0.02, "{f:?}");
    assert!(f.stderr < 0.02);
}

#[test]
fn tail_slope_of_pareto() {
    // P(X > x) = x^(-3/2) on [1, inf)
    let mut rng = seeded(12, 0);
    let xs: Vec<f64> = (0..200_000).map(|_| (1.0 - rng.random::<f64>()).powf(-2.0 / 3.0)).collect();
    let f = tail_slope(&xs, 0.2).unwrap();
    assert!((f.slope + 1.5).abs() < 0.1, "{f:?}");
}

fn exact_mean_distance(k: usize, kind: ObjectKind) -> f64 {
    let blocks: Vec<_> = all_rooted_maps(k).into_iter().filter(is_two_connected).collect();
    exact_block_distance(&blocks, kind).unwrap()
}

#[test]
fn block_distances_match_enumeration() {
    let mut rng = seeded(13, 0);
    for kind in [ObjectKind::Map, ObjectKind::Quad] {
        for k in 1..=4 {
            let exact = exact_mean_distance(k, kind);
            let (mean, se) = block_distance_mean(k, kind, 40_000, &mut rng).unwrap();
            assert!((mean - exact).abs() < 4.0 * se + 1e-9, "{kind:?} k={k}: {mean} ± {se} vs {exact}");
        }
    }
}

#[test]
fn kappa_with_only_unit_blocks() {
    // a table of length one forces j = 1
    let mut rng = seeded(14, 0);
    let k = kappa_mc(5.0, ObjectKind::Quad, 40_000, 1, &mut rng).unwrap();
    assert_eq!(k.j_max, 1);
    let d1 = k.estimate / k.covered_mass;
    assert!((d1 - 0.25).abs() < 4.0 * k.stderr / k.covered_mass, "{k:?}");
    assert!(k.tail_bias_bound > 0.0 && k.tail_bias_bound.is_finite());
}

#[test]
fn kappa_stable_across_seeds() {
    for kind in [ObjectKind::Quad, ObjectKind::Map] {
        let a = kappa_mc(5.0, kind, 20_000, 200, &mut seeded(1, 0)).unwrap();
        let b = kappa_mc(5.0, kind, 20_000, 200, &mut seeded(2, 0)).unwrap();
        let se = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        assert!((a.estimate - b.estimate).abs() < 3.0 * se, "{a:?} {b:?}");
        assert!(a.tail_bias_bound < 1e-6);
        assert!(a.estimate > 0.0);
    }
}

#[test]
fn uniform_maps_condense() {
    let plan = ExperimentPlan::new(vec![1.0], vec![10_000], 100, 15);
    let s = run_experiment(&plan, std::io::sink()).unwrap();
    let p = &s.groups[0].points[0];
    assert_eq!(p.method, TreeMethod::DirectUniform);
    assert_eq!(p.failures, 0);
    let r = p.mean_lb1_over_n.unwrap();
    assert!((0.30..=0.36).contains(&r), "{r}");
}

#[test]
fn experiment_csv_and_summary() {
    let mut plan = ExperimentPlan::new(vec![1.0, 1.8, 5.0], vec![16, 32, 64, 128, 256], 6, 21);
    plan.objects = true;
    plan.reps = 4;
    let mut out = Vec::new();
    let s = run_experiment(&plan, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), SampleRecord::COLUMNS.join(","));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 5 * 6);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.len(), 15);
        assert_eq!(r[2], (i % 6).to_string());
        let lb: Vec<u32> = r[7..10].iter().map(|x| x.parse().unwrap()).collect();
        assert!(lb[0] >= lb[1] && lb[1] >= lb[2]);
        let n: usize = r[1].parse().unwrap();
        assert!(r[10].parse::<usize>().unwrap() <= 2 * n + 1);
        assert!(lb[0] as usize <= n);
        assert!(!r[12].is_empty() && !r[13].is_empty() && r[14].is_empty());
    }
    assert_eq!(s.groups.len(), 3);
    for g in &s.groups {
        assert_eq!(g.points.len(), 5);
        assert_eq!(g.fits.lb1.unwrap().points, 3);
        assert!(g.fits.dist.is_some());
    }
    assert!(s.groups[2].points[0].tree_depth_rescaled.is_some());
    assert!(s.groups[0].points[0].tree_depth_rescaled.is_none());

    let mut again = Vec::new();
    run_experiment(&plan, &mut again).unwrap();
    assert_eq!(text.as_bytes(), &again[..]);
}

#[test]
fn failures_are_rows_not_errors() {
    let mut plan = ExperimentPlan::new(vec![5.0], vec![300], 20, 1);
    plan.limits.max_rejections = 1;
    let mut out = Vec::new();
    let s = run_experiment(&plan, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 21);
    let p = &s.groups[0].points[0];
    assert!(p.failures >= 10, "{p:?}");
    assert_eq!(p.errors.len(), p.failures);
    assert!(text.lines().skip(1).any(|l| l.contains(",,,,,")));
}

proptest::proptest! {
    #[test]
    fn exact_power_laws_are_recovered(a in -2.0f64..2.0, c in 0.01f64..100.0, lo in 1u32..10, k in 3u32..10) {
        let pts: Vec<_> = (lo..lo + k).map(|e| {
            let n = (1u64 << e) as f64;
            (n, c * n.powf(a))
        }).collect();
        let f = exponent_fit(&pts).unwrap();
        proptest::prop_assert!((f.slope - a).abs() < 1e-9);
        proptest::prop_assert!((f.intercept - c.ln()).abs() < 1e-8);
    }

    #[test]
    fn grouped_median_between_neighbours(mut v in proptest::collection::vec(0u32..50, 1..200)) {
        let g = grouped_median(&v).unwrap();
        v.sort_unstable();
        let (lo, hi) = (v[(v.len() - 1) / 2] as f64, v[v.len() / 2] as f64);
        proptest::prop_assert!(g >= lo - 0.5 - 1e-12 && g <= hi + 0.5 + 1e-12, "{} not near [{}, {}]", g, lo, hi);
    }
}
