use std::collections::HashMap;

use blockmap::mapcore::enumerate::all_rooted_maps;
use blockmap::mapcore::{
    assemble_map, assemble_quad, decompose_map, decompose_quad, is_two_connected, map_block_tree, quad_block_tree,
    tutte_inverse, Hemap,
};
use blockmap::phase::OffspringDistribution;
use blockmap::rng::seeded;
use blockmap::sampler::*;
use blockmap::series::{parse_rational, BivariateCoefficients};
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square_p(stat: f64, df: usize) -> f64 {
    ChiSquared::new(df as f64).unwrap().sf(stat)
}

/// Goodness of fit against equiprobable classes.
fn uniform_p(counts: &HashMap<Vec<u32>, u64>, classes: usize) -> f64 {
    let total: u64 = counts.values().sum();
    let e = total as f64 / classes as f64;
    let mut stat: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
    stat += (classes - counts.len()) as f64 * e;
    chi_square_p(stat, classes - 1)
}

/// Two-sample chi-square over categories; categories with fewer than ten
/// observations in total are pooled.
fn two_sample_p<K: std::hash::Hash + Eq + Clone>(a: &HashMap<K, u64>, b: &HashMap<K, u64>) -> (f64, usize) {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let (ka, kb) = ((nb as f64 / na as f64).sqrt(), (na as f64 / nb as f64).sqrt());
    let mut keys: Vec<K> = a.keys().cloned().collect();
    keys.extend(b.keys().filter(|k| !a.contains_key(*k)).cloned());
    let mut cells = Vec::new();
    let (mut pa, mut pb) = (0u64, 0u64);
    for k in keys {
        let x = a.get(&k).copied().unwrap_or(0);
        let y = b.get(&k).copied().unwrap_or(0);
        if x + y < 10 {
            pa += x;
            pb += y;
        } else {
            cells.push((x, y));
        }
    }
    if pa + pb > 0 {
        cells.push((pa, pb));
    }
    let stat: f64 = cells
        .iter()
        .map(|&(x, y)| (ka * x as f64 - kb * y as f64).powi(2) / (x + y) as f64)
        .sum();
    (chi_square_p(stat, cells.len() - 1), cells.len())
}

#[test]
fn offspring_draws() {
    let d1 = OffspringDistribution::new(1.0).unwrap();
    let d5 = OffspringDistribution::new(5.0).unwrap();
    let mut rng = seeded(11, 0);
    let draws = 1_000_000;
    let mut zeros = 0;
    let mut sum = 0u64;
    for _ in 0..draws {
        let x = sample_offspring(&d1, &mut rng);
        assert_eq!(x % 2, 0);
        zeros += (x == 0) as u64;
        let y = sample_offspring(&d5, &mut rng);
        assert_eq!(y % 2, 0);
        sum += y;
    }
    let f0 = zeros as f64 / draws as f64;
    assert!((f0 - 0.75).abs() < 0.002, "{f0}");
    let mean = sum as f64 / draws as f64;
    assert!((mean - 1.0).abs() < 0.01, "{mean}");
}

/// All preorder outdegree sequences with `2n` edges and even outdegrees,
/// with their probability under GW(mu) conditioned on the size.
fn conditioned_tree_law(u: f64, n: usize) -> HashMap<Vec<u32>, f64> {
    let d = OffspringDistribution::new(u).unwrap();
    let nodes = 2 * n + 1;
    let mut out = HashMap::new();
    fn rec(prefix: &mut Vec<u32>, open: i64, nodes: usize, n: usize, w: f64, d: &OffspringDistribution, out: &mut HashMap<Vec<u32>, f64>) {
        if prefix.len() == nodes {
            if open == 0 {
                out.insert(prefix.clone(), w);
            }
            return;
        }
        if open <= 0 {
            return;
        }
        let used: u32 = prefix.iter().sum();
        for j in 0..=(n - used as usize / 2) {
            prefix.push(2 * j as u32);
            rec(prefix, open + 2 * j as i64 - 1, nodes, n, w * d.prob(j), d, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::new(), 1, nodes, n, 1.0, &d, &mut out);
    let total: f64 = out.values().sum();
    out.values_mut().for_each(|w| *w /= total);
    out
}

#[test]
fn exact_dp_tree_shapes_at_n2() {
    let law = conditioned_tree_law(1.0, 2);
    assert_eq!(law.len(), 3);
    let cfg = SamplerConfig::new(1.0, 2, ObjectKind::Map, 0).with_method(TreeMethod::ExactDp);
    let s = TreeSampler::new(&cfg).unwrap();
    let mut rng = seeded(12, 0);
    let draws = 1_000_000;
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for _ in 0..draws {
        *counts.entry(s.sample(&mut rng).unwrap().tree.degrees().to_vec()).or_default() += 1;
    }
    for (shape, p) in &law {
        let f = counts.get(shape).copied().unwrap_or(0) as f64 / draws as f64;
        assert!((f - p).abs() < 3e-3, "{shape:?}: {f} vs {p}");
    }
    assert_eq!(counts.len(), law.len());
}

#[test]
fn exact_dp_agrees_with_rejection() {
    let mut shapes = Vec::new();
    for method in [TreeMethod::ExactDp, TreeMethod::RejectionCycle] {
        let cfg = SamplerConfig::new(2.0, 8, ObjectKind::Map, 0).with_method(method);
        let s = TreeSampler::new(&cfg).unwrap();
        let mut rng = seeded(13, method as u64);
        let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
        for _ in 0..100_000 {
            *counts.entry(s.sample(&mut rng).unwrap().tree.degrees().to_vec()).or_default() += 1;
        }
        shapes.push(counts);
    }
    let (p, cells) = two_sample_p(&shapes[0], &shapes[1]);
    println!("exact-dp vs rejection-cycle at n = 8, u = 2: p = {p:.4} over {cells} cells");
    assert!(p > 0.001);
}

#[test]
fn exact_dp_acceptance_rate_matches_rejection_counts() {
    let cfg = SamplerConfig::new(2.0, 20, ObjectKind::Map, 0).with_method(TreeMethod::ExactDp);
    let a = TreeSampler::new(&cfg).unwrap().acceptance_rate().unwrap();
    let s = TreeSampler::new(&cfg.clone().with_method(TreeMethod::RejectionCycle)).unwrap();
    let mut rng = seeded(14, 0);
    let runs = 4000;
    let rej: u64 = (0..runs).map(|_| s.sample(&mut rng).unwrap().rejections).sum();
    // rejections per success are geometric with mean (1 - a) / a
    let mean = rej as f64 / runs as f64;
    let expect = (1.0 - a) / a;
    let sd = ((1.0 - a) / (a * a) / runs as f64).sqrt();
    assert!((mean - expect).abs() < 5.0 * sd, "{mean} vs {expect} (sd {sd})");
}

fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for k in (1..=n.min(max)).rev() {
        prefix.push(k);
        partitions(n - k, k, prefix, out);
        prefix.pop();
    }
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `ln` of the probability that `count` i.i.d. halves have the given nonzero
/// values (as a multiset) and zeros elsewhere.
fn ln_multiset(count: usize, nonzero: &[usize], mu: &[f64]) -> f64 {
    if nonzero.len() > count {
        return f64::NEG_INFINITY;
    }
    let zeros = count - nonzero.len();
    let mut w = ln_factorial(count) - ln_factorial(zeros) + zeros as f64 * mu[0].ln();
    let mut i = 0;
    while i < nonzero.len() {
        let j = nonzero[i];
        let k = nonzero[i..].iter().take_while(|&&x| x == j).count();
        w += k as f64 * mu[j].ln() - ln_factorial(k);
        i += k;
    }
    w
}

/// Exact laws of the ranked block sizes under the conditioned tree and under
/// the one-special-node approximation.
fn ranked_laws(u: f64, n: usize) -> (HashMap<Vec<u32>, f64>, HashMap<Vec<u32>, f64>) {
    let d = OffspringDistribution::new(u).unwrap();
    let mu: Vec<f64> = (0..=n).map(|j| d.prob(j)).collect();
    let normalise = |m: &mut HashMap<Vec<u32>, f64>| {
        let z: f64 = m.values().sum();
        m.values_mut().for_each(|w| *w /= z);
    };
    let mut exact = HashMap::new();
    let mut ps = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut ps);
    for p in &ps {
        let key: Vec<u32> = p.iter().map(|&x| x as u32).collect();
        exact.insert(key, ln_multiset(2 * n + 1, p, &mu).exp());
    }
    normalise(&mut exact);
    let mut approx: HashMap<Vec<u32>, f64> = HashMap::new();
    for s in 0..=n {
        let mut ps = Vec::new();
        partitions(s, s, &mut Vec::new(), &mut ps);
        for p in ps {
            let w = ln_multiset(2 * n, &p, &mu).exp();
            let mut key: Vec<u32> = p.iter().map(|&x| x as u32).collect();
            if n > s {
                key.push((n - s) as u32);
            }
            key.sort_unstable_by(|a, b| b.cmp(a));
            *approx.entry(key).or_default() += w;
        }
    }
    normalise(&mut approx);
    (exact, approx)
}

fn tv(a: &HashMap<Vec<u32>, f64>, b: &HashMap<Vec<u32>, f64>) -> f64 {
    let mut s: f64 = a.iter().map(|(k, &p)| (p - b.get(k).copied().unwrap_or(0.0)).abs()).sum();
    s += b.iter().filter(|(k, _)| !a.contains_key(*k)).map(|(_, &p)| p).sum::<f64>();
    s / 2.0
}

#[test]
fn janson_against_exact_ranked_laws() {
    // The approximation is asymptotic: at u = 1 its distance to the exact law
    // rises to about 0.4 near n = 10 and only then starts to decrease.
    let draws = 100_000;
    for n in [2, 4, 8] {
        let (exact, approx) = ranked_laws(1.0, n);
        let mut empirical = Vec::new();
        for method in [TreeMethod::ExactDp, TreeMethod::JansonApprox] {
            let cfg = SamplerConfig::new(1.0, n, ObjectKind::Map, 0).with_method(method);
            let s = TreeSampler::new(&cfg).unwrap();
            let mut rng = seeded(15, n as u64);
            let mut counts: HashMap<Vec<u32>, f64> = HashMap::new();
            for _ in 0..draws {
                let t = s.sample(&mut rng).unwrap();
                assert_eq!(t.approx, method == TreeMethod::JansonApprox);
                let mut ranked = t.tree.block_sizes();
                ranked.sort_unstable_by(|a, b| b.cmp(a));
                *counts.entry(ranked).or_default() += 1.0 / draws as f64;
            }
            empirical.push(counts);
        }
        let truth = tv(&exact, &approx);
        let seen = tv(&empirical[0], &empirical[1]);
        println!("ranked block sizes at u = 1, n = {n}: tv exact {truth:.4}, sampled {seen:.4}");
        assert!(tv(&empirical[0], &exact) < 0.01);
        assert!(tv(&empirical[1], &approx) < 0.01);
        assert!((seen - truth).abs() < 0.01);
    }
    let (e, a) = ranked_laws(1.0, 8);
    assert!((tv(&e, &a) - 0.3955).abs() < 1e-3);
    let (e, a) = ranked_laws(1.0, 40);
    assert!(tv(&e, &a) < 0.3955);
}

#[test]
fn uniform_quadrangulations_at_n1_and_n3() {
    let mut rng = seeded(16, 0);
    let one: Vec<_> = all_rooted_maps(1).iter().map(|m| m.canonical_code()).collect();
    let mut hits = 0;
    let draws = 100_000;
    for _ in 0..draws {
        let q = sample_uniform_quadrangulation(1, &mut rng);
        hits += (tutte_inverse(&q).canonical_code() == one[0]) as u64;
    }
    let f = hits as f64 / draws as f64;
    assert!((f - 0.5).abs() < 0.01, "{f}");

    let catalogue: Vec<_> = all_rooted_maps(3).iter().map(|m| m.canonical_code()).collect();
    assert_eq!(catalogue.len(), 54);
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for _ in 0..54_000 {
        let code = tutte_inverse(&sample_uniform_quadrangulation(3, &mut rng)).canonical_code();
        assert!(catalogue.contains(&code));
        *counts.entry(code).or_default() += 1;
    }
    let p = uniform_p(&counts, 54);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn uniform_blocks() {
    let mut rng = seeded(17, 0);
    let draws = 20_000;
    let mut loops = 0;
    for _ in 0..draws {
        let (b, _) = sample_uniform_block(1, ObjectKind::Map, &mut rng, 1000).unwrap();
        loops += (b.map().vertex_count() == 1) as u64;
    }
    let f = loops as f64 / draws as f64;
    assert!((f - 0.5).abs() < 0.01, "{f}");

    let double = all_rooted_maps(2).into_iter().find(|m| is_two_connected(m)).unwrap();
    for _ in 0..200 {
        let (b, _) = sample_uniform_block(2, ObjectKind::Map, &mut rng, 1000).unwrap();
        assert!(b.map().isomorphic(&double));
    }

    let blocks4: Vec<_> =
        all_rooted_maps(4).into_iter().filter(|m| is_two_connected(m)).map(|m| m.canonical_code()).collect();
    assert_eq!(blocks4.len(), 6);
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for _ in 0..6000 {
        let (b, _) = sample_uniform_block(4, ObjectKind::Map, &mut rng, 1000).unwrap();
        let code = b.map().canonical_code();
        assert!(blocks4.contains(&code));
        *counts.entry(code).or_default() += 1;
    }
    assert!(uniform_p(&counts, 6) > 0.001);

    // quadrangulation blocks are simple
    for k in 1..10 {
        let (b, _) = sample_uniform_block(k, ObjectKind::Quad, &mut rng, 10_000).unwrap();
        match b {
            Hemap::Quad(q) => assert!(q.is_simple() && q.size() == k),
            Hemap::Map(_) => panic!("expected a quadrangulation"),
        }
    }
}

#[test]
fn harvested_blocks_are_uniform() {
    let mut rng = seeded(18, 0);
    let blocks4: Vec<_> =
        all_rooted_maps(4).into_iter().filter(|m| is_two_connected(m)).map(|m| m.canonical_code()).collect();
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for _ in 0..2000 {
        let (bs, _) = harvest_blocks(&[4, 1, 4, 2, 4], ObjectKind::Map, &mut rng, 10_000).unwrap();
        for b in bs.iter().filter(|b| b.map().size() == 4) {
            *counts.entry(b.map().canonical_code()).or_default() += 1;
        }
    }
    assert!(counts.keys().all(|c| blocks4.contains(c)));
    assert!(uniform_p(&counts, 6) > 0.001);
}

fn empirical_laws(u: &str, n: usize, method: TreeMethod, draws: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let uf: f64 = {
        let r = parse_rational(u).unwrap();
        num_traits::ToPrimitive::to_f64(&r).unwrap()
    };
    let cfg = SamplerConfig::new(uf, n, ObjectKind::Map, seed).with_method(method);
    let s = ModelSampler::new(cfg).unwrap();
    let mut rng = seeded(seed, 0);
    let mut root = vec![0u64; n + 1];
    let mut count = vec![0u64; 2 * n + 2];
    for _ in 0..draws {
        let m = match s.sample(&mut rng).unwrap().object {
            Hemap::Map(m) => m,
            Hemap::Quad(_) => unreachable!(),
        };
        assert_eq!(m.size(), n);
        let t = map_block_tree(&m);
        root[t.root_block_size() as usize] += 1;
        count[t.block_count()] += 1;
    }
    let f = |v: Vec<u64>| v.into_iter().map(|c| c as f64 / draws as f64).collect();
    (f(root), f(count))
}

fn check_laws(u: &str, n: usize, method: TreeMethod, draws: usize) {
    let table = BivariateCoefficients::solve(n as u32);
    let ur = parse_rational(u).unwrap();
    let root = table.root_block_law(n as u32, &ur).unwrap().to_f64();
    let count = table.block_number_law(n as u32, &ur).unwrap().to_f64();
    let (er, ec) = empirical_laws(u, n, method, draws, 19 + n as u64);
    for (k, p) in root.support.iter().zip(&root.probs) {
        let d = (er[*k as usize] - p).abs();
        assert!(d < 3e-3, "root block {k} at u = {u}, n = {n}: {} vs {p}", er[*k as usize]);
    }
    for (b, p) in count.support.iter().zip(&count.probs) {
        let d = (ec[*b as usize] - p).abs();
        assert!(d < 3e-3, "block count {b} at u = {u}, n = {n}: {} vs {p}", ec[*b as usize]);
    }
}

#[test]
fn model_laws_match_the_series() {
    check_laws("1", 2, TreeMethod::ExactDp, 200_000);
    check_laws("1", 3, TreeMethod::DirectUniform, 200_000);
    check_laws("2", 3, TreeMethod::RejectionCycle, 200_000);
    check_laws("9/5", 4, TreeMethod::RejectionCycle, 200_000);
}

#[test]
fn model_objects_round_trip() {
    let cases = [
        (1.0, 60, TreeMethod::DirectUniform, BlockSource::Harvest),
        (1.3, 60, TreeMethod::ExactDp, BlockSource::Harvest),
        (0.5, 300, TreeMethod::JansonApprox, BlockSource::Harvest),
        (1.8, 300, TreeMethod::RejectionCycle, BlockSource::Harvest),
        (5.0, 300, TreeMethod::RejectionCycle, BlockSource::Fresh),
        (3.0, 100, TreeMethod::RejectionCycle, BlockSource::Pool),
    ];
    for (u, n, method, blocks) in cases {
        for kind in [ObjectKind::Map, ObjectKind::Quad] {
            let cfg = SamplerConfig::new(u, n, kind, 0).with_method(method).with_blocks(blocks);
            let s = ModelSampler::new(cfg).unwrap();
            let mut rng = seeded(20, 0);
            for _ in 0..5 {
                let out = s.sample(&mut rng).unwrap();
                assert_eq!(out.info.correlated, blocks == BlockSource::Pool);
                assert!(out.object.map().validate().is_planar_map());
                match &out.object {
                    Hemap::Map(m) => {
                        assert_eq!(m.size(), n);
                        assert_eq!(map_block_tree(m), out.tree);
                        let d = decompose_map(m);
                        assert!(assemble_map(&d.tree, &d.blocks).unwrap().isomorphic(m));
                    }
                    Hemap::Quad(q) => {
                        assert_eq!(q.size(), n);
                        assert_eq!(quad_block_tree(q), out.tree);
                        let d = decompose_quad(q);
                        assert!(assemble_quad(&d.tree, &d.blocks).unwrap().isomorphic(q));
                    }
                }
            }
        }
    }
}

#[test]
fn same_seed_same_object() {
    for blocks in [BlockSource::Harvest, BlockSource::Fresh] {
        let cfg = SamplerConfig::new(5.0, 500, ObjectKind::Quad, 0).with_blocks(blocks);
        let s = ModelSampler::new(cfg).unwrap();
        let a = s.sample(&mut seeded(21, 3)).unwrap();
        let b = s.sample(&mut seeded(21, 3)).unwrap();
        assert_eq!(a.object, b.object);
        assert_eq!(a.info.digest, b.info.digest);
    }
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_matter() {
    let cfg = SamplerConfig::new(2.0, 400, ObjectKind::Map, 0).with_blocks(BlockSource::Fresh);
    let s = ModelSampler::new(cfg).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| s.sample(&mut seeded(22, 0)).unwrap().object)
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn rejection_counts_at_u5() {
    // logged only: the rejection count should be of order sqrt(n)
    let n = 10_000;
    let cfg = SamplerConfig::new(5.0, n, ObjectKind::Map, 0);
    let s = TreeSampler::new(&cfg).unwrap();
    let mut rng = seeded(23, 0);
    let runs = 50;
    let rej: u64 = (0..runs).map(|_| s.sample(&mut rng).unwrap().rejections).sum();
    let mean = rej as f64 / runs as f64;
    println!("u = 5, n = {n}: mean rejections {mean:.1}, sqrt(n) = {:.1}", (n as f64).sqrt());
}

proptest! {
    #[test]
    fn cycle_lemma_finds_the_unique_rotation(halves in proptest::collection::vec(0u32..4, 1..40), shift in 0usize..1000) {
        // pad with zeros so the degrees sum to length - 1
        let sum: u32 = halves.iter().map(|h| 2 * h).sum();
        let mut degrees: Vec<u32> = halves.iter().map(|h| 2 * h).collect();
        while (degrees.len() as u32) < sum + 1 {
            degrees.push(0);
        }
        prop_assume!(degrees.len() as u32 == sum + 1);
        let len = degrees.len();
        degrees.rotate_left(shift % len);
        let tree = tree_from_cyclic(degrees.clone()).unwrap();
        prop_assert_eq!(tree.edge_count(), sum as usize);
        let valid = (0..len)
            .filter(|&k| {
                let mut r = degrees.clone();
                r.rotate_left(k);
                blockmap::BlockTree::from_degrees_any(r).is_ok()
            })
            .count();
        prop_assert_eq!(valid, 1);
    }

    #[test]
    fn sampled_trees_are_valid(u in 1.8f64..20.0, n in 1usize..200, seed in 0u64..1000) {
        let cfg = SamplerConfig::new(u, n, ObjectKind::Map, seed);
        let t = sample_gw_conditioned(&cfg, &mut seeded(seed, 0)).unwrap();
        prop_assert_eq!(t.tree.edge_count(), 2 * n);
        prop_assert!(t.tree.degrees().iter().all(|d| d % 2 == 0));
    }

    #[test]
    fn quadrangulations_have_euler_characteristic_two(n in 1usize..300, seed in 0u64..1000) {
        let q = sample_uniform_quadrangulation(n, &mut seeded(seed, 1));
        let v = q.map().validate();
        prop_assert!(v.is_planar_map());
        prop_assert_eq!(v.vertices, n + 2);
        prop_assert_eq!(v.faces, n);
    }
}
