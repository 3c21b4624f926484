//! Probability mass functions via the Panjer-type recurrence
//! `p_k = (Σ_i i·a_i·p_{k-i}) / k`, `p_0 = exp(-Σ a_i)`, plus the
//! log-likelihood of a count histogram and its analytic gradient.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimation::CountHistogram;
use crate::model::HermiteParams;

/// Above this `Σ a_i`, `p_0 = exp(-Σ a_i)` is too close to underflow.
pub const MAX_TOTAL_RATE: f64 = 700.0;

/// Default tail tolerance for likelihood work.
pub const DEFAULT_EPS: f64 = 1e-12;

const INITIAL_K: usize = 64;
const MAX_K: usize = 10_000_000;

/// Truncated probability vector `p_0..p_K` with `tail_mass = 1 - Σ p_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    probs: Vec<f64>,
    tail_mass: f64,
}

impl PmfTable {
    /// Wraps a probability vector, recording whatever mass it is missing.
    pub fn from_probs(probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty());
        let tail_mass = 1.0 - probs.iter().sum::<f64>();
        Self { probs, tail_mass }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// `P(X = k)`, zero beyond the truncation point.
    pub fn get(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    /// Truncation point `K`.
    pub fn k_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `Σ k·p_k` over the stored entries.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    /// `Σ p_k t^k` over the stored entries, by Horner's rule.
    pub fn power_series(&self, t: f64) -> f64 {
        self.probs.iter().rev().fold(0.0, |acc, p| acc * t + p)
    }

    /// Keeps entries `0..=k` only.
    pub fn truncated(&self, k: usize) -> Self {
        Self::from_probs(self.probs[..=k.min(self.k_max())].to_vec())
    }
}

fn check_rate(params: &HermiteParams) -> Result<()> {
    let total = params.total_rate();
    if total > MAX_TOTAL_RATE {
        return Err(Error::Overflow(format!(
            "Σ a_i = {total} exceeds {MAX_TOTAL_RATE}; p_0 would underflow"
        )));
    }
    Ok(())
}

/// Extends `probs` by the recurrence until it holds `len` entries.
fn extend_recurrence(a: &[f64], probs: &mut Vec<f64>, len: usize) {
    if probs.is_empty() {
        probs.push((-a.iter().sum::<f64>()).exp());
    }
    probs.reserve(len.saturating_sub(probs.len()));
    for k in probs.len()..len {
        let s = a
            .iter()
            .enumerate()
            .take(k)
            .filter(|(_, ai)| **ai != 0.0)
            .fold(0.0, |acc, (i, ai)| {
                acc + (i + 1) as f64 * ai * probs[k - i - 1]
            });
        probs.push(s / k as f64);
    }
}

/// `p_0..p_K` from the recurrence.
pub fn pmf_table(params: &HermiteParams, k_max: usize) -> Result<PmfTable> {
    check_rate(params)?;
    let mut probs = Vec::new();
    extend_recurrence(params.coefficients(), &mut probs, k_max + 1);
    Ok(PmfTable::from_probs(probs))
}

/// Shortest table whose missing tail mass is below `eps`.
///
/// The table is grown by doubling from 64 entries and then trimmed back to the
/// first `K` with `1 - Σ_{k≤K} p_k < eps`.
pub fn adaptive_pmf(params: &HermiteParams, eps: f64) -> Result<PmfTable> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("tail tolerance must lie in (0, 1), got {eps}"));
    }
    check_rate(params)?;
    let a = params.coefficients();
    let mut probs = Vec::new();
    let mut len = INITIAL_K;
    loop {
        extend_recurrence(a, &mut probs, len);
        let mut cumulative = 0.0;
        for (k, p) in probs.iter().enumerate() {
            cumulative += p;
            if 1.0 - cumulative < eps {
                probs.truncate(k + 1);
                return Ok(PmfTable::from_probs(probs));
            }
        }
        if len >= MAX_K {
            return Err(Error::IterationCap(format!(
                "tail mass still ≥ {eps} at K = {MAX_K}"
            )));
        }
        len = (len * 2).min(MAX_K);
    }
}

/// `Σ_k n_k log p_k`, or `-∞` when an observed count has probability zero.
pub fn log_likelihood(params: &HermiteParams, hist: &CountHistogram) -> Result<f64> {
    let table = pmf_table(params, hist.max_count() as usize)?;
    Ok(loglik_from_table(&table, hist))
}

pub(crate) fn loglik_from_table(table: &PmfTable, hist: &CountHistogram) -> f64 {
    let mut ll = 0.0;
    for (k, n) in hist.iter() {
        let p = table.get(k as usize);
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += n as f64 * p.ln();
    }
    ll
}

/// `∂ℓ/∂a_j = Σ_k n_k (p_{k-j}/p_k - 1)`.
///
/// Follows from `∂Φ/∂a_j = (t^j - 1)Φ`, i.e. `∂p_k/∂a_j = p_{k-j} - p_k`.
pub fn loglik_gradient(params: &HermiteParams, hist: &CountHistogram) -> Result<Vec<f64>> {
    let table = pmf_table(params, hist.max_count() as usize)?;
    gradient_from_table(&table, params.order(), hist)
}

pub(crate) fn gradient_from_table(
    table: &PmfTable,
    order: usize,
    hist: &CountHistogram,
) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; order];
    for (k, n) in hist.iter() {
        let k = k as usize;
        let pk = table.get(k);
        if pk <= 0.0 {
            return domain(format!("observed count {k} has probability zero"));
        }
        for (j, g) in grad.iter_mut().enumerate() {
            let shifted = if k > j { table.get(k - j - 1) } else { 0.0 };
            *g += n as f64 * (shifted / pk - 1.0);
        }
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: &[f64]) -> HermiteParams {
        HermiteParams::new(a.to_vec()).unwrap()
    }

    fn hist(pairs: &[(u64, u64)]) -> CountHistogram {
        CountHistogram::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn poisson_two() {
        let t = pmf_table(&params(&[2.0]), 3).unwrap();
        let e = (-2.0f64).exp();
        let expected = [e, 2.0 * e, 2.0 * e, 4.0 / 3.0 * e];
        for (p, q) in t.probs().iter().zip(expected) {
            assert!((p - q).abs() < 1e-15);
        }
    }

    #[test]
    fn running_order_two_example() {
        let t = pmf_table(&params(&[1.0, 0.5]), 3).unwrap();
        let e = (-1.5f64).exp();
        assert_eq!(t.probs()[0], e);
        assert!((t.probs()[1] - e).abs() < 1e-16);
        assert!((t.probs()[2] - e).abs() < 1e-16);
        assert!((t.probs()[3] - e * 2.0 / 3.0).abs() < 1e-16);
        assert!((t.probs()[3] - 0.1487535).abs() < 1e-7);
    }

    #[test]
    fn even_only_support() {
        let t = pmf_table(&params(&[0.0, 0.5]), 2).unwrap();
        let e = (-0.5f64).exp();
        assert_eq!(t.probs(), &[e, 0.0, 0.5 * e]);
        assert!(t.probs()[1].is_sign_positive());
        let t = pmf_table(&params(&[0.0, 1.3]), 41).unwrap();
        assert!(t.probs().iter().skip(1).step_by(2).all(|&p| p == 0.0));
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(
            pmf_table(&params(&[400.0, 301.0]), 3),
            Err(Error::Overflow(_))
        ));
        assert!(matches!(
            adaptive_pmf(&params(&[701.0]), 1e-6),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn adaptive_poisson_cutoff() {
        // Brute-force Poisson(2) cdf: first K with cdf ≥ 1 - 1e-9.
        let mut term = (-2.0f64).exp();
        let mut cdf = term;
        let mut k = 0;
        while 1.0 - cdf >= 1e-9 {
            k += 1;
            term *= 2.0 / k as f64;
            cdf += term;
        }
        // P(X > 15) = 4.80e-10, P(X > 14) = 3.87e-9
        assert_eq!(k, 15);
        let t = adaptive_pmf(&params(&[2.0]), 1e-9).unwrap();
        assert_eq!(t.k_max(), k);
        assert!(t.tail_mass() < 1e-9);
    }

    #[test]
    fn adaptive_degenerate_and_bad_eps() {
        let t = adaptive_pmf(&params(&[0.0, 0.0]), 1e-3).unwrap();
        assert_eq!(t.probs(), &[1.0]);
        assert_eq!(t.k_max(), 0);
        assert!(matches!(
            adaptive_pmf(&params(&[1.0]), 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            adaptive_pmf(&params(&[1.0]), 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn adaptive_grows_past_initial_size() {
        let t = adaptive_pmf(&params(&[60.0, 5.0]), 1e-12).unwrap();
        assert!(t.k_max() > INITIAL_K);
        assert!(t.tail_mass() < 1e-12);
    }

    #[test]
    fn loglik_examples() {
        assert_eq!(
            log_likelihood(&params(&[2.0]), &hist(&[(0, 1)])).unwrap(),
            -2.0
        );
        let ll = log_likelihood(&params(&[1.0, 0.5]), &hist(&[(0, 1), (1, 1), (2, 1)])).unwrap();
        assert!((ll + 4.5).abs() < 1e-14);
        let ll = log_likelihood(&params(&[0.0, 0.5]), &hist(&[(1, 1)])).unwrap();
        assert_eq!(ll, f64::NEG_INFINITY);
    }

    #[test]
    fn gradient_examples() {
        let g = loglik_gradient(&params(&[2.0]), &hist(&[(0, 1)])).unwrap();
        assert_eq!(g, vec![-1.0]);
        let g = loglik_gradient(&params(&[1.0, 0.5]), &hist(&[(2, 1)])).unwrap();
        assert!(g[0].abs() < 1e-14 && g[1].abs() < 1e-14);
        assert!(matches!(
            loglik_gradient(&params(&[0.0, 0.5]), &hist(&[(3, 2)])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pgf_matches_power_series() {
        let a = params(&[0.8, 0.3, 0.1]);
        let t = adaptive_pmf(&a, 1e-15).unwrap();
        for i in 0..=20 {
            let x = -1.0 + 0.1 * i as f64;
            assert!((crate::model::pgf_eval(&a, x) - t.power_series(x)).abs() < 1e-10);
        }
    }
}
