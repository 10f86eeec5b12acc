use palintoep::ensemble::EntryDistribution;
use palintoep::matchings::{
    configuration_census, configuration_contribution, enumerate_pair_matchings,
    exact_expected_moment, PairMatching,
};

fn rotate(m: &PairMatching) -> PairMatching {
    let size = m.size();
    let shift = |v: usize| v % size + 1;
    let pairs = m
        .pairs()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (shift(a), shift(b));
            (x.min(y), x.max(y))
        })
        .collect::<Vec<_>>();
    let mut pairs = pairs;
    pairs.sort();
    PairMatching::new(pairs).unwrap()
}

#[test]
fn single_palindrome_sixth_moment_configurations_approach_one() {
    let dims = [12, 20, 28];
    for m in enumerate_pair_matchings(6).unwrap() {
        let values: Vec<f64> = dims
            .iter()
            .map(|&d| {
                configuration_contribution(d, 0, &m, None)
                    .unwrap()
                    .contribution
            })
            .collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]), "{m:?}: {values:?}");
        assert!(values[2] > 0.87 && values[2] < 1.0, "{m:?}: {values:?}");
    }
}

#[test]
fn counts_are_invariant_under_cycle_rotation() {
    for (n, dim, size) in [(1, 16, 4), (1, 8, 6), (0, 10, 6), (2, 16, 4)] {
        for m in enumerate_pair_matchings(size).unwrap() {
            let a = configuration_contribution(dim, n, &m, None).unwrap();
            let b = configuration_contribution(dim, n, &rotate(&m), None).unwrap();
            assert_eq!(a.count, b.count, "{m:?} at n={n}, N={dim}");
            assert_eq!(a.negative_sign_count, b.negative_sign_count);
        }
    }
}

#[test]
fn census_reconciles_with_exact_moments() {
    for (n, dim) in [(0, 6), (1, 8), (2, 8)] {
        for dist in [EntryDistribution::Gaussian, EntryDistribution::Rademacher] {
            let census = configuration_census(dim, n, 6, dist).unwrap();
            let exact = exact_expected_moment(dim, n, 6, dist).unwrap();
            assert!(
                (census.total() - exact).abs() <= 1e-12 * exact,
                "{n} {dim} {dist}"
            );
            assert_eq!(census.reports.len(), 15);
        }
    }
}

#[test]
fn sign_split_partitions_each_census() {
    for m in enumerate_pair_matchings(4).unwrap() {
        let r = configuration_contribution(32, 1, &m, None).unwrap();
        assert_eq!(r.count, r.positive_sign_count + r.negative_sign_count);
        assert!(r.main_term <= r.contribution);
    }
}
