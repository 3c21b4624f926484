mod common;

use common::chi_square_gof;
use hermite_count::pmf::adaptive_pmf;
use hermite_count::sampling::{
    rng_from_seed, sample_binomial, sample_hermite, sample_poisson, thin_sample,
};
use hermite_count::transform::thin_params;
use hermite_count::{Error, HermiteParams, PmfTable};
use proptest::prelude::*;

fn params(a: &[f64]) -> HermiteParams {
    HermiteParams::new(a.to_vec()).unwrap()
}

const SETS: [&[f64]; 5] = [
    &[0.3],
    &[2.0, 0.7],
    &[0.0, 0.0, 1.1],
    &[4.0, 0.0, 0.9],
    &[12.0, 6.0, 3.0],
];

#[test]
fn draws_fit_the_table() {
    for (i, a) in SETS.iter().enumerate() {
        let a = params(a);
        let data = sample_hermite(&a, 100_000, 31 + i as u64).unwrap();
        let test = chi_square_gof(&data.values, &adaptive_pmf(&a, 1e-12).unwrap(), 0.01);
        assert!(test.passes(), "{a:?}: {test:?}");
    }
}

#[test]
fn thinned_draws_fit_the_thinned_table() {
    for (i, (a, p)) in [
        (&[1.0, 0.5][..], 0.5),
        (&[3.0, 1.0, 2.0][..], 0.3),
        (&[0.0, 2.0][..], 0.8),
    ]
    .into_iter()
    .enumerate()
    {
        let a = params(a);
        let batch = sample_hermite(&a, 100_000, 70 + i as u64).unwrap();
        let thinned = thin_sample(&batch, p, 80 + i as u64).unwrap();
        let table = adaptive_pmf(&thin_params(&a, p).unwrap(), 1e-12).unwrap();
        let test = chi_square_gof(&thinned.values, &table, 0.01);
        assert!(test.passes(), "{a:?}, p = {p}: {test:?}");
    }
}

fn poisson_table(rate: f64) -> PmfTable {
    adaptive_pmf(&params(&[rate]), 1e-12).unwrap()
}

#[test]
fn poisson_draws_on_both_sides_of_the_switch() {
    for (i, rate) in [0.05, 7.5, 30.0, 30.5, 250.0].into_iter().enumerate() {
        let mut rng = rng_from_seed(100 + i as u64);
        let values: Vec<u64> = (0..50_000)
            .map(|_| sample_poisson(rate, &mut rng))
            .collect();
        let test = chi_square_gof(&values, &poisson_table(rate), 0.01);
        assert!(test.passes(), "rate {rate}: {test:?}");
    }
}

fn binomial_table(trials: u64, p: f64) -> PmfTable {
    let mut probs = vec![0.0; trials as usize + 1];
    let q = 1.0 - p;
    for (k, slot) in probs.iter_mut().enumerate() {
        let ln_choose = statrs::function::factorial::ln_binomial(trials, k as u64);
        *slot = (ln_choose + k as f64 * p.ln() + (trials - k as u64) as f64 * q.ln()).exp();
    }
    PmfTable::from_probs(probs)
}

#[test]
fn binomial_draws_on_every_path() {
    // Bernoulli trials, inversion on p, inversion on 1 - p, BTPE.
    for (i, (trials, p)) in [(40, 0.3), (500, 0.02), (500, 0.97), (2000, 0.4)]
        .into_iter()
        .enumerate()
    {
        let mut rng = rng_from_seed(200 + i as u64);
        let values: Vec<u64> = (0..50_000)
            .map(|_| sample_binomial(trials, p, &mut rng))
            .collect();
        let test = chi_square_gof(&values, &binomial_table(trials, p), 0.01);
        assert!(test.passes(), "Binomial({trials}, {p}): {test:?}");
    }
}

#[test]
fn degenerate_and_invalid_inputs() {
    assert_eq!(
        sample_hermite(&params(&[0.0, 0.0]), 5, 1).unwrap().values,
        vec![0; 5]
    );
    assert!(matches!(
        sample_hermite(&params(&[1.0]), 0, 1),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        sample_hermite(&params(&[2e6]), 3, 1),
        Err(Error::Overflow(_))
    ));
    let batch = sample_hermite(&params(&[1.0, 0.5]), 100, 5).unwrap();
    assert_eq!(thin_sample(&batch, 1.0, 9).unwrap().values, batch.values);
    assert!(matches!(thin_sample(&batch, 0.0, 9), Err(Error::Domain(_))));
    assert!(matches!(thin_sample(&batch, 1.5, 9), Err(Error::Domain(_))));
}

proptest! {
    #[test]
    fn same_seed_same_batch(
        a in prop::collection::vec(0.0..40.0f64, 1..=3),
        seed in any::<u64>(),
        p in 0.01..=1.0f64,
    ) {
        let a = HermiteParams::new(a).unwrap();
        let first = sample_hermite(&a, 64, seed).unwrap();
        let second = sample_hermite(&a, 64, seed).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(thin_sample(&first, p, seed).unwrap(), thin_sample(&second, p, seed).unwrap());
    }

    #[test]
    fn thinning_never_increases_a_count(
        a in prop::collection::vec(0.0..20.0f64, 1..=3),
        seed in any::<u64>(),
        p in 0.01..=1.0f64,
    ) {
        let batch = sample_hermite(&HermiteParams::new(a).unwrap(), 64, seed).unwrap();
        let thinned = thin_sample(&batch, p, seed ^ 1).unwrap();
        prop_assert!(batch.values.iter().zip(&thinned.values).all(|(x, y)| y <= x));
    }
}
