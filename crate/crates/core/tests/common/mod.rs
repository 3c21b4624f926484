//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use hermite_count::sampling::{rng_from_seed, uniform, SampleRng};
use hermite_count::{HermiteParams, PmfTable};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

/// `e^{-λ} λ^k / k!` evaluated through `ln Γ`, no recurrence involved.
pub fn poisson_pmf(rate: f64, k: usize) -> f64 {
    if rate == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * rate.ln() - rate - ln_gamma(k as f64 + 1.0)).exp()
}

/// Law of `Σ i·X_i` by direct convolution of the scaled Poisson components,
/// each truncated once its own tail is below 1e-14.
pub fn convolution_oracle(params: &HermiteParams, k_max: usize) -> Vec<f64> {
    let mut law = vec![0.0; k_max + 1];
    law[0] = 1.0;
    for (i, &rate) in params.coefficients().iter().enumerate() {
        let step = i + 1;
        let mut component = vec![0.0; k_max + 1];
        let mut cumulative = 0.0;
        let mut m = 0;
        while m * step <= k_max {
            let p = poisson_pmf(rate, m);
            component[m * step] = p;
            cumulative += p;
            if 1.0 - cumulative < 1e-14 && m as f64 > rate {
                break;
            }
            m += 1;
        }
        let mut next = vec![0.0; k_max + 1];
        for (k, &x) in law.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (j, &y) in component[..=k_max - k].iter().enumerate() {
                next[k + j] += x * y;
            }
        }
        law = next;
    }
    law
}

pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

pub fn rel_err(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        (x - y).abs() / x.abs().max(y.abs())
    }
}

/// Deterministic stream of test parameters.
pub struct Draws(SampleRng);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Self(rng_from_seed(seed))
    }

    pub fn unit(&mut self) -> f64 {
        uniform(&mut self.0)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        lo + ((hi - lo + 1) as f64 * self.unit()) as usize
    }

    /// Order in `1..=max_order`, coefficients uniform on `[0, max_coef]`.
    pub fn params(&mut self, max_order: usize, max_coef: f64) -> HermiteParams {
        let r = self.index(1, max_order);
        let a = (0..r).map(|_| self.range(0.0, max_coef)).collect();
        HermiteParams::new(a).unwrap()
    }

    /// Retention probability in `(0, 1]`.
    pub fn retention(&mut self) -> f64 {
        1.0 - self.unit()
    }
}

/// Result of a pooled chi-square goodness-of-fit test.
#[derive(Debug)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
}

impl ChiSquareTest {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Chi-square test of `values` against `table` at level `alpha`.
///
/// Bins are formed left to right until each expected count is at least 5;
/// everything beyond the last bin, including mass outside the table, forms
/// the final bin.
pub fn chi_square_gof(values: &[u64], table: &PmfTable, alpha: f64) -> ChiSquareTest {
    let n = values.len() as f64;
    let mut observed = vec![0u64; table.k_max() + 2];
    for &v in values {
        let idx = (v as usize).min(table.k_max() + 1);
        observed[idx] += 1;
    }
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut exp_acc, mut obs_acc) = (0.0, 0.0);
    let mut used = 0.0;
    for (k, &count) in observed[..=table.k_max()].iter().enumerate() {
        exp_acc += n * table.get(k);
        obs_acc += count as f64;
        used += table.get(k);
        if exp_acc >= 5.0 && n * (1.0 - used) >= 5.0 {
            bins.push((obs_acc, exp_acc));
            exp_acc = 0.0;
            obs_acc = 0.0;
        }
    }
    exp_acc += n * (1.0 - used).max(0.0);
    obs_acc += observed[table.k_max() + 1] as f64;
    bins.push((obs_acc, exp_acc));
    let statistic = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = bins.len() - 1;
    let critical = ChiSquared::new(dof as f64)
        .unwrap()
        .inverse_cdf(1.0 - alpha);
    ChiSquareTest {
        statistic,
        dof,
        critical,
    }
}
