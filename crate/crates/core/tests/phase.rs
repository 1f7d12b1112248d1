use blockmap::phase::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// `sum b_j y^j` straight from the closed-form counts, in f64.
fn b_series(y: f64, terms: u32) -> (f64, f64, f64) {
    let mut b = 1.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for j in 1..terms {
        let bj = blockmap::series::blocks_count(j).to_string().parse::<f64>().unwrap();
        let j = j as f64;
        b += bj * y.powf(j);
        d1 += j * bj * y.powf(j - 1.0);
        if j >= 2.0 {
            d2 += j * (j - 1.0) * bj * y.powf(j - 2.0);
        }
    }
    (b, d1, d2)
}

#[test]
fn b_matches_its_power_series() {
    for y in [0.0, 0.01, 0.05, 0.08] {
        let v = b_values(y).unwrap();
        let (b, d1, d2) = b_series(y, 120);
        assert!((v.b - b).abs() < 1e-13, "{y}: {} vs {b}", v.b);
        assert!((v.b1 - d1).abs() < 1e-11, "{y}: {} vs {d1}", v.b1);
        assert!((v.b2 - d2).abs() < 1e-9, "{y}: {} vs {d2}", v.b2);
        assert!(cubic(y, v.b).abs() < 1e-14);
    }
}

#[test]
fn b_solves_the_cubic_on_the_whole_range() {
    for i in 0..=1000 {
        let y = Y_CRITICAL * i as f64 / 1000.0;
        let v = b_values(y).unwrap();
        assert!(cubic(y, v.b).abs() < 1e-14, "y = {y}");
        assert!(v.b >= 1.0 && v.b <= 4.0 / 3.0 + 1e-15);
    }
}

#[test]
fn uniform_mean_is_two_thirds_exactly() {
    let one = BigRational::from_integer(BigInt::from(1));
    assert_eq!(subcritical_mean_exact(&one), BigRational::new(2.into(), 3.into()));
    assert!((PhaseParams::new(1.0).unwrap().mean - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn critical_from_above() {
    assert!((y_of_u(1.8).unwrap() - 4.0 / 27.0).abs() < 1e-12);
    assert!((y_of_u(1.8 + 1e-12).unwrap() - 4.0 / 27.0).abs() < 1e-12);
    for u in [1.8, 2.0, 2.5, 5.0] {
        assert!((PhaseParams::new(u).unwrap().mean - 1.0).abs() < 1e-10, "u = {u}");
    }
}

#[test]
fn criticality_map_inverts_y() {
    for u in [1.81, 2.0, 3.0, 10.0, 100.0] {
        let y = y_of_u(u).unwrap();
        assert!((critical_weight(y).unwrap() - u).abs() < 1e-9 * u, "u = {u}");
    }
    assert!((critical_weight(Y_CRITICAL).unwrap() - 1.8).abs() < 1e-12);
}

#[test]
fn table_brackets_mass_and_mean() {
    for u in [0.3, 1.0, 1.6, 1.8] {
        let d = OffspringDistribution::new(u).unwrap();
        let (mass, tb) = (d.table_mass(), d.tail_bound());
        assert!(mass <= 1.0 + 1e-12 && 1.0 <= mass + tb + 1e-12, "u = {u}: {mass} {tb}");
        assert!(tb < 1e-8);
        let e = d.params().mean;
        assert!(d.table_mean() <= e + 1e-12 && e <= d.table_mean() + d.mean_tail_bound() + 1e-12);
    }
    for u in [2.0, 2.5, 5.0, 50.0] {
        let d = OffspringDistribution::new(u).unwrap();
        assert!((d.table_mass() - 1.0).abs() < 1e-9);
        assert!((d.table_mean() - 1.0).abs() < 1e-10, "u = {u}: {}", d.table_mean());
    }
}

#[test]
fn tail_constant() {
    for (u, j, tol) in [(1.0, 60_000usize, 1e-4), (1.8, 60_000, 1e-4), (5.0, 1000, 5e-3)] {
        let d = OffspringDistribution::new(u).unwrap();
        let p = d.params();
        let jf = j as f64;
        let est = (d.prob(j).ln() + 2.5 * jf.ln() + jf * p.w.ln()).exp();
        assert!((est / p.c - 1.0).abs() < tol, "u = {u}: {est} vs {}", p.c);
    }
}

#[test]
fn variance_matches_second_moment_of_table() {
    for u in [2.0, 5.0, 20.0] {
        let d = OffspringDistribution::new(u).unwrap();
        let m2: f64 = d.probs().iter().enumerate().map(|(j, p)| (2 * j) as f64 * (2 * j) as f64 * p).sum();
        let var = m2 - 1.0;
        assert!((var - d.params().variance.unwrap()).abs() < 1e-8, "u = {u}");
    }
}

#[test]
fn largest_block_predictions() {
    let p = predicted_largest_block(1.6, 1000.0).unwrap();
    assert!((p.center.unwrap() - 72.463_768).abs() < 1e-3);
    assert!(predicted_largest_block(1.8, 1000.0).unwrap().center.is_none());
    assert_eq!(predicted_largest_block(5.0, 1e5).unwrap().regime, Regime::Supercritical);
}

#[test]
fn distance_constants() {
    assert!((subcritical_distance_constant(1.0).unwrap() - (9.0f64 / 8.0).powf(0.25)).abs() < 1e-15);
    assert!(subcritical_distance_constant(2.0).is_err());
    assert!((simple_quad_distance_constant(3.0 / 8.0) - 1.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn supercritical_law_is_critical(u in 1.81f64..50.0) {
        let p = PhaseParams::new(u).unwrap();
        prop_assert!((p.mean - 1.0).abs() < 1e-10);
        prop_assert!((p.variance.unwrap() - p.variance_closed.unwrap()).abs() < 1e-8);
        prop_assert!(p.y < Y_CRITICAL);
        prop_assert!(p.w > 1.0);
    }

    #[test]
    fn subcritical_mean_closed_form(u in 0.01f64..1.8) {
        let p = PhaseParams::new(u).unwrap();
        prop_assert!((p.mean - subcritical_mean(u)).abs() < 1e-14);
        prop_assert!(p.mean < 1.0);
        prop_assert!(p.variance.is_none());
    }

    #[test]
    fn y_is_decreasing(a in 1.8f64..100.0, b in 1.8f64..100.0) {
        prop_assume!(a < b);
        prop_assert!(y_of_u(a).unwrap() >= y_of_u(b).unwrap());
    }
}
