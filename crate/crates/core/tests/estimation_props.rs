use palintoep::ensemble::{EnsembleSpec, EntryDistribution};
use palintoep::estimation::{
    extrapolate, monte_carlo_moments, published, run_ensemble, MomentTable, RunOptions,
};
use palintoep::matchings::upper_bound_moment;
use proptest::prelude::*;

fn model(coefs: &[f64], n: f64) -> f64 {
    coefs.iter().rev().fold(0.0, |acc, c| acc / n + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_is_exact_on_model_data(
        coefs in prop::collection::vec(-50.0f64..50.0, 1..=4),
        extra in 0usize..=2,
        start in 1usize..=4,
    ) {
        let used = coefs.len() - 1;
        let order = used + extra.min(3 - used.min(3));
        let dims: Vec<f64> = (0..order + 4).map(|i| 8.0 * (start + 2 * i) as f64).collect();
        let points: Vec<(f64, f64)> = dims.iter().map(|&n| (n, model(&coefs, n))).collect();
        let fit = extrapolate(&points, order, None).unwrap();
        let scale = coefs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        prop_assert!((fit.limit - coefs[0]).abs() <= 1e-10 * scale, "{:?} vs {:?}", fit, coefs);
        let size = points.iter().map(|p| p.1.abs()).fold(1.0, f64::max);
        prop_assert!(fit.residual <= 1e-10 * size);
    }

    #[test]
    fn uniform_weight_scaling_does_not_move_the_fit(
        ys in prop::collection::vec(0.0f64..10.0, 6),
        ws in prop::collection::vec(0.1f64..10.0, 6),
        factor in 1e-3f64..1e3,
    ) {
        let points: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (8.0 * (i + 1) as f64, y)).collect();
        let scaled: Vec<f64> = ws.iter().map(|w| w * factor).collect();
        let a = extrapolate(&points, 2, Some(&ws)).unwrap();
        let b = extrapolate(&points, 2, Some(&scaled)).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }
}

#[test]
fn published_columns_extrapolate_near_reported_fits() {
    let table = published::small_dim_table();
    table.validate(1).unwrap();
    for &(k, reported) in &published::SMALL_DIM_BEST_FIT {
        let pts: Vec<(f64, f64)> = table.column(k).iter().map(|p| (p.0, p.1)).collect();
        let fit = extrapolate(&pts, 3, None).unwrap();
        assert!(
            (fit.limit - reported).abs() <= 0.1 * reported,
            "k = {k}: {} vs {reported}",
            fit.limit
        );
    }
}

#[test]
fn second_moment_is_one_and_bounds_hold() {
    for n in 0..=2u32 {
        for mult in [1usize, 2] {
            let dim = (mult * 16) << n;
            let spec = EnsembleSpec::new(n, dim, EntryDistribution::Gaussian, 31).unwrap();
            let est = monte_carlo_moments(&spec, 300, 8).unwrap();
            assert!(
                (est[2].mean - 1.0).abs() <= 3.0 * est[2].stderr,
                "{:?}",
                est[2]
            );
            for m in 1..=4u32 {
                let e = est[2 * m as usize];
                assert!(e.mean <= upper_bound_moment(m, n) + 5.0 * e.stderr);
                assert!(e.stderr >= 0.0);
            }
        }
    }
}

#[test]
fn seed_changes_results_and_table_round_trips() {
    let a = EnsembleSpec::new(1, 32, EntryDistribution::Gaussian, 1).unwrap();
    let b = EnsembleSpec::new(1, 32, EntryDistribution::Gaussian, 2).unwrap();
    let ra = run_ensemble(&a, 40, 4, &RunOptions::default()).unwrap();
    let rb = run_ensemble(&b, 40, 4, &RunOptions::default()).unwrap();
    assert_ne!(ra.mean, rb.mean);
    let table = MomentTable::from_runs([&ra]);
    let back = MomentTable::read_csv(table.to_csv().as_bytes()).unwrap();
    assert_eq!(back, table);
}

#[test]
fn rademacher_odd_moments_average_near_zero() {
    let spec = EnsembleSpec::new(1, 64, EntryDistribution::Rademacher, 4).unwrap();
    let est = monte_carlo_moments(&spec, 400, 3).unwrap();
    for k in [1, 3] {
        assert!(est[k].mean.abs() <= 3.0 * est[k].stderr, "{:?}", est[k]);
    }
}
