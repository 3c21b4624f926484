//! Random variates: Hermite draws as `Σ i·X_i` with independent Poisson
//! `X_i`, and binomial thinning of realized counts.
//!
//! All randomness comes from [`SampleRng`], xoshiro256++ seeded through
//! SplitMix64 (`seed_from_u64`). Both algorithms have published reference
//! constants, so a seed fixes the stream independently of platform. Uniform
//! doubles are taken as the top 53 bits of a 64-bit output times `2^-53`.

use rand::{RngCore, SeedableRng};
use rand_distr::{Binomial, Distribution, Poisson};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::HermiteParams;

/// Generator behind every sampling routine.
pub type SampleRng = Xoshiro256PlusPlus;

/// Rates above this are refused by [`sample_hermite`].
pub const MAX_COMPONENT_RATE: f64 = 1e6;

/// Largest rate sampled by sequential cdf inversion.
pub const INVERSION_MAX_RATE: f64 = 30.0;

/// Largest trial count thinned by explicit Bernoulli trials.
pub const BERNOULLI_MAX_TRIALS: u64 = 64;

/// Realized counts together with the seed that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<u64>,
    pub seed: u64,
}

pub fn rng_from_seed(seed: u64) -> SampleRng {
    SampleRng::seed_from_u64(seed)
}

/// Uniform on `[0, 1)` from the top 53 bits of one output.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One Poisson(`rate`) draw.
///
/// Rates up to 30 use sequential search of the cdf. Larger rates use the
/// transformed-rejection sampler (PTRS, Hörmann 1993) from `rand_distr`,
/// which is exact and involves no normal approximation.
pub fn sample_poisson<R: RngCore>(rate: f64, rng: &mut R) -> u64 {
    if rate <= 0.0 {
        return 0;
    }
    if rate <= INVERSION_MAX_RATE {
        let u = uniform(rng);
        let mut term = (-rate).exp();
        let mut cdf = term;
        let mut k = 0u64;
        while u >= cdf {
            k += 1;
            term *= rate / k as f64;
            if term == 0.0 {
                break;
            }
            cdf += term;
        }
        return k;
    }
    let draw: f64 = Poisson::new(rate)
        .expect("positive finite rate")
        .sample(rng);
    draw as u64
}

/// One Binomial(`trials`, `p`) draw.
///
/// Up to 64 trials the Bernoulli variables are drawn one by one. Beyond that,
/// inversion on the smaller of `p` and `1 - p` while the mean stays below 30,
/// and BTPE (`rand_distr`) otherwise.
pub fn sample_binomial<R: RngCore>(trials: u64, p: f64, rng: &mut R) -> u64 {
    if trials == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    if trials <= BERNOULLI_MAX_TRIALS {
        return (0..trials).filter(|_| uniform(rng) < p).count() as u64;
    }
    let (q, flipped) = if p > 0.5 { (1.0 - p, true) } else { (p, false) };
    let draw = if trials as f64 * q <= INVERSION_MAX_RATE {
        binomial_inversion(trials, q, rng)
    } else {
        Binomial::new(trials, q)
            .expect("valid binomial")
            .sample(rng)
    };
    if flipped {
        trials - draw
    } else {
        draw
    }
}

fn binomial_inversion<R: RngCore>(trials: u64, q: f64, rng: &mut R) -> u64 {
    let u = uniform(rng);
    let odds = q / (1.0 - q);
    let mut term = (1.0 - q).powf(trials as f64);
    let mut cdf = term;
    let mut k = 0u64;
    while u >= cdf && k < trials {
        term *= (trials - k) as f64 / (k + 1) as f64 * odds;
        k += 1;
        cdf += term;
    }
    k
}

/// `n` independent draws of `Σ i·X_i`, `X_i ~ Poisson(a_i)`.
pub fn sample_hermite(params: &HermiteParams, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return domain("sample size must be at least 1");
    }
    if let Some(rate) = params
        .coefficients()
        .iter()
        .find(|&&a| a > MAX_COMPONENT_RATE)
    {
        return Err(Error::Overflow(format!(
            "component rate {rate} exceeds {MAX_COMPONENT_RATE}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let values = (0..n).map(|_| draw_hermite(params, &mut rng)).collect();
    Ok(SampleBatch { values, seed })
}

/// One draw using a caller-owned generator.
pub fn draw_hermite<R: RngCore>(params: &HermiteParams, rng: &mut R) -> u64 {
    params
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, &a)| (i as u64 + 1) * sample_poisson(a, rng))
        .sum()
}

/// Replaces every value `x` by a Binomial(`x`, `p`) draw.
pub fn thin_sample(batch: &SampleBatch, p: f64, seed: u64) -> Result<SampleBatch> {
    if !(p > 0.0 && p <= 1.0) {
        return domain(format!("retention probability must lie in (0, 1], got {p}"));
    }
    if p == 1.0 {
        return Ok(SampleBatch {
            values: batch.values.clone(),
            seed,
        });
    }
    let mut rng = rng_from_seed(seed);
    let values = batch
        .values
        .iter()
        .map(|&x| sample_binomial(x, p, &mut rng))
        .collect();
    Ok(SampleBatch { values, seed })
}
