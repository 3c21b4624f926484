mod common;

use common::rel_err;
use hermite_count::model::{
    factorial_cumulants_to_params, ordinary_cumulants, params_to_factorial_cumulants, pgf_eval,
    thinning_invariants, thinning_invariants_of_params, HermiteParams,
};
use hermite_count::pmf::adaptive_pmf;
use proptest::prelude::*;

fn coefficient() -> impl Strategy<Value = f64> {
    prop_oneof![1 => Just(0.0), 6 => 0.0..5.0f64]
}

fn params(max_order: usize) -> impl Strategy<Value = HermiteParams> {
    prop::collection::vec(coefficient(), 1..=max_order).prop_map(|a| HermiteParams::new(a).unwrap())
}

fn nondegenerate(max_order: usize) -> impl Strategy<Value = HermiteParams> {
    params(max_order).prop_filter("positive mean", |a| a.mean() > 0.0)
}

proptest! {
    #[test]
    fn cumulant_round_trip(a in params(6)) {
        let back = factorial_cumulants_to_params(&params_to_factorial_cumulants(&a)).unwrap();
        let scale = a.coefficients().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in a.coefficients().iter().zip(back.coefficients()) {
            prop_assert!((x - y).abs() <= 1e-12 * scale, "{x} vs {y}");
        }
    }

    #[test]
    fn overdispersed(a in nondegenerate(6)) {
        let c = ordinary_cumulants(&a);
        prop_assert!(c.variance >= c.mean);
        let poisson_like = a.coefficients()[1..].iter().all(|&v| v == 0.0);
        prop_assert_eq!(c.variance == c.mean, poisson_like);
    }

    #[test]
    fn poisson_has_no_invariants(rate in 1e-3..50.0f64) {
        let c = ordinary_cumulants(&HermiteParams::poisson(rate).unwrap());
        prop_assert_eq!(thinning_invariants(&c).unwrap().eta, vec![0.0; 3]);
        let eta = thinning_invariants_of_params(&HermiteParams::poisson(rate).unwrap()).unwrap().eta;
        prop_assert_eq!(eta, vec![0.0; 3]);
    }

    #[test]
    fn invariants_vanish_above_order(a in nondegenerate(3)) {
        let r = a.order();
        let exact = thinning_invariants_of_params(&a).unwrap().eta;
        let c = ordinary_cumulants(&a);
        let ratio = thinning_invariants(&c).unwrap().eta;
        let mu = c.mean;
        let terms = [
            (c.variance + mu) / mu.powi(2),
            (c.kappa3 + 3.0 * c.variance + 2.0 * mu) / mu.powi(3),
            (c.kappa4 + 6.0 * c.kappa3 + 11.0 * c.variance + 6.0 * mu) / mu.powi(4),
        ];
        for j in r..=3 {
            prop_assert_eq!(exact[j - 1], 0.0);
            prop_assert!(ratio[j - 1].abs() <= 64.0 * f64::EPSILON * terms[j - 1]);
        }
    }

    #[test]
    fn invariant_routes_agree(a in nondegenerate(4)) {
        let exact = thinning_invariants_of_params(&a).unwrap().eta;
        let c = ordinary_cumulants(&a);
        let ratio = thinning_invariants(&c).unwrap().eta;
        let mu = c.mean;
        let terms = [
            (c.variance + mu) / mu.powi(2),
            (c.kappa3 + 3.0 * c.variance + 2.0 * mu) / mu.powi(3),
            (c.kappa4 + 6.0 * c.kappa3 + 11.0 * c.variance + 6.0 * mu) / mu.powi(4),
        ];
        for i in 0..3 {
            prop_assert!((exact[i] - ratio[i]).abs() <= 64.0 * f64::EPSILON * terms[i]);
        }
    }

    #[test]
    fn pgf_matches_table(a in params(4), t in -1.0..=1.0f64) {
        let table = adaptive_pmf(&a, 1e-14).unwrap();
        prop_assert!((pgf_eval(&a, t) - table.power_series(t)).abs() <= 1e-10);
    }
}

#[test]
fn running_example_cumulants() {
    let a = HermiteParams::new(vec![1.0, 0.5]).unwrap();
    assert_eq!(params_to_factorial_cumulants(&a).values(), &[2.0, 1.0]);
    let c = ordinary_cumulants(&a);
    assert_eq!(
        (c.mean, c.variance, c.kappa3, c.kappa4),
        (2.0, 3.0, 5.0, 9.0)
    );
    let eta = thinning_invariants(&c).unwrap().eta;
    assert!(rel_err(eta[0], 0.25) < 1e-15);
    assert_eq!(&eta[1..], &[0.0, 0.0]);
}
