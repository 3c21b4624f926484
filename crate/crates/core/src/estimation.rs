//! Fitting Hermite laws to observed counts: a factorial-cumulant moment
//! estimator followed by box-constrained maximum likelihood.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{data, domain, Result};
use crate::model::{factorial_cumulants_to_params_clamped, FactorialCumulants, HermiteParams};
use crate::pmf::{gradient_from_table, loglik_from_table, pmf_table};

/// Largest count accepted in a histogram.
pub const MAX_OBSERVED_COUNT: u64 = 1_000_000;

/// Observed counts aggregated as `k → n_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountHistogram {
    bins: BTreeMap<u64, u64>,
    total: u64,
}

impl CountHistogram {
    /// Aggregates raw observations.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let mut bins = BTreeMap::new();
        for &k in counts {
            *bins.entry(k).or_insert(0) += 1;
        }
        Self::from_bins(bins)
    }

    /// Builds from `(count, frequency)` pairs. Zero frequencies are dropped;
    /// a repeated count is an error.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut bins = BTreeMap::new();
        for (k, n) in pairs {
            if bins.contains_key(&k) {
                return data(format!("count {k} appears more than once"));
            }
            if n > 0 {
                bins.insert(k, n);
            }
        }
        Self::from_bins(bins)
    }

    fn from_bins(bins: BTreeMap<u64, u64>) -> Result<Self> {
        if let Some((&k, _)) = bins.iter().next_back() {
            if k > MAX_OBSERVED_COUNT {
                return data(format!(
                    "count {k} exceeds the supported maximum {MAX_OBSERVED_COUNT}"
                ));
            }
        }
        let total = bins.values().sum();
        if total == 0 {
            return data("histogram is empty");
        }
        Ok(Self { bins, total })
    }

    /// Number of observations `n = Σ n_k`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn max_count(&self) -> u64 {
        *self.bins.keys().next_back().expect("non-empty")
    }

    /// `(k, n_k)` in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.bins.iter().map(|(&k, &n)| (k, n))
    }

    pub fn frequency(&self, k: u64) -> u64 {
        self.bins.get(&k).copied().unwrap_or(0)
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(k, n)| k as f64 * n as f64).sum::<f64>() / self.total as f64
    }
}

/// `m_(k) = (1/n) Σ_x n_x · x(x-1)⋯(x-k+1)` for `k = 1..r`.
pub fn sample_factorial_moments(hist: &CountHistogram, r: usize) -> Result<Vec<f64>> {
    if r == 0 {
        return domain("order must be at least 1");
    }
    let n = hist.total() as f64;
    let mut moments = vec![0.0; r];
    for (x, count) in hist.iter() {
        let mut falling = 1.0;
        for (k, m) in moments.iter_mut().enumerate() {
            falling *= x as f64 - k as f64;
            if falling == 0.0 {
                break;
            }
            *m += count as f64 * falling;
        }
    }
    Ok(moments.into_iter().map(|m| m / n).collect())
}

/// `κ_(k) = m_(k) - Σ_{j<k} C(k-1, j-1) κ_(j) m_(k-j)`.
pub fn factorial_moments_to_cumulants(moments: &[f64]) -> Result<FactorialCumulants> {
    let mut kappa: Vec<f64> = Vec::with_capacity(moments.len());
    for k in 1..=moments.len() {
        let mut value = moments[k - 1];
        let mut binom = 1.0; // C(k-1, j-1) at j = 1
        for j in 1..k {
            value -= binom * kappa[j - 1] * moments[k - j - 1];
            binom = binom * (k - j) as f64 / j as f64;
        }
        kappa.push(value);
    }
    FactorialCumulants::new(kappa)
}

/// Moment estimator: sample factorial cumulants pushed through the
/// back-substitution, clamping negative coefficients to zero.
///
/// If clamping zeroes every coefficient, falls back to `a_i = x̄/(i·r)`,
/// which has the sample mean.
pub fn fit_moments(hist: &CountHistogram, r: usize) -> Result<HermiteParams> {
    let moments = sample_factorial_moments(hist, r)?;
    let kappa = factorial_moments_to_cumulants(&moments)?;
    if kappa.mean() <= 0.0 {
        return data("all observations are zero; the sample mean must be positive");
    }
    let a = factorial_cumulants_to_params_clamped(kappa.values());
    if a.iter().all(|&v| v == 0.0) {
        return uniform_split(hist, r);
    }
    HermiteParams::new(a)
}

fn uniform_split(hist: &CountHistogram, r: usize) -> Result<HermiteParams> {
    let mean = hist.mean();
    HermiteParams::new((1..=r).map(|i| mean / (i * r) as f64).collect())
}

/// Stopping rule and iteration budget for [`fit_mle`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: HermiteParams,
    pub loglik: f64,
    /// Projected gradient norm fell below `tol·min(1 + |ℓ|, n)`.
    pub converged: bool,
    pub iterations: usize,
    /// Norm of the projected gradient at termination.
    pub grad_norm: f64,
    pub init: HermiteParams,
    /// Log-likelihood of every accepted iterate, starting with the initializer.
    #[serde(skip)]
    pub loglik_path: Vec<f64>,
}

const ARMIJO_SLOPE: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const MIN_STEP: f64 = 1e-300;
/// Relative log-likelihood change below which differencing two evaluations
/// is dominated by rounding in the recurrence.
const RESOLVABLE: f64 = 1e-10;

/// Maximum likelihood over `a_i ≥ 0`, started from [`fit_moments`].
///
/// A moment start with zero likelihood (an observed count it cannot produce)
/// is replaced by the strictly positive split `a_i = x̄/(i·r)`.
pub fn fit_mle(hist: &CountHistogram, r: usize, opts: &FitOptions) -> Result<FitResult> {
    let mut init = fit_moments(hist, r)?;
    if log_lik(&init, hist)? == f64::NEG_INFINITY {
        init = uniform_split(hist, r)?;
    }
    fit_mle_from(hist, init, opts)
}

/// Projected gradient ascent with Armijo backtracking from a given start.
pub fn fit_mle_from(
    hist: &CountHistogram,
    init: HermiteParams,
    opts: &FitOptions,
) -> Result<FitResult> {
    if init.is_degenerate() {
        return domain("cannot start a fit from the point mass at zero");
    }
    let mut x = init.coefficients().to_vec();
    let mut current = HermiteParams::new(x.clone())?;
    let (mut ll, mut grad) = value_and_gradient(&current, hist)?;
    if ll == f64::NEG_INFINITY {
        return domain("starting point assigns zero probability to observed data");
    }
    let mut path = vec![ll];
    let mut step = 1.0 / hist.total() as f64;
    let mut iterations = 0;
    let mut pg_norm = projected_norm(&x, &grad);

    let n = hist.total() as f64;
    let threshold = |ll: f64| opts.tol * (1.0 + ll.abs()).min(n);
    while iterations < opts.max_iter && pg_norm > threshold(ll) {
        iterations += 1;
        let mut accepted = None;
        let mut s = step;
        while s > MIN_STEP {
            let trial: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(xi, gi)| (xi + s * gi).max(0.0))
                .collect();
            let ascent: f64 = trial
                .iter()
                .zip(&x)
                .zip(&grad)
                .map(|((t, xi), gi)| gi * (t - xi))
                .sum();
            if ascent <= 0.0 {
                break;
            }
            let candidate = HermiteParams::new(trial)?;
            if candidate.is_degenerate() {
                s *= SHRINK;
                continue;
            }
            let trial_ll = log_lik(&candidate, hist)?;
            let gain = if (trial_ll - ll).abs() > RESOLVABLE * (1.0 + ll.abs()) {
                trial_ll - ll
            } else {
                segment_gain(&x, &grad, candidate.coefficients(), hist)?
            };
            if gain >= ARMIJO_SLOPE * ascent {
                accepted = Some((candidate, trial_ll));
                break;
            }
            s *= SHRINK;
        }
        let Some((candidate, trial_ll)) = accepted else {
            break;
        };
        let (_, g) = value_and_gradient(&candidate, hist)?;
        step = spectral_step(&x, candidate.coefficients(), &grad, &g)
            .map_or(s * 2.0, |bb| bb.clamp(s * 1e-3, s * 1e3));
        x = candidate.coefficients().to_vec();
        current = candidate;
        ll = trial_ll;
        grad = g;
        path.push(ll);
        pg_norm = projected_norm(&x, &grad);
    }

    Ok(FitResult {
        params: current,
        loglik: ll,
        converged: pg_norm <= threshold(ll),
        iterations,
        grad_norm: pg_norm,
        init,
        loglik_path: path,
    })
}

/// `ℓ(y) - ℓ(x)` by Simpson's rule on the directional derivative along the
/// segment. Used for moves too small to resolve by differencing.
fn segment_gain(x: &[f64], grad_x: &[f64], y: &[f64], hist: &CountHistogram) -> Result<f64> {
    let d: Vec<f64> = y.iter().zip(x).map(|(yi, xi)| yi - xi).collect();
    let slope = |g: &[f64]| g.iter().zip(&d).map(|(gi, di)| gi * di).sum::<f64>();
    let mid = HermiteParams::new(x.iter().zip(&d).map(|(xi, di)| xi + 0.5 * di).collect())?;
    let end = HermiteParams::new(y.to_vec())?;
    let (_, g_mid) = value_and_gradient(&mid, hist)?;
    let (_, g_end) = value_and_gradient(&end, hist)?;
    Ok((slope(grad_x) + 4.0 * slope(&g_mid) + slope(&g_end)) / 6.0)
}

/// Barzilai–Borwein trial step `|Δx|² / -(Δx·Δg)`, when the last move saw
/// negative curvature.
fn spectral_step(x_old: &[f64], x_new: &[f64], g_old: &[f64], g_new: &[f64]) -> Option<f64> {
    let (mut ss, mut sy) = (0.0, 0.0);
    for i in 0..x_old.len() {
        let dx = x_new[i] - x_old[i];
        ss += dx * dx;
        sy += dx * (g_new[i] - g_old[i]);
    }
    let step = ss / -sy;
    (sy < 0.0 && step.is_finite()).then_some(step)
}

fn log_lik(params: &HermiteParams, hist: &CountHistogram) -> Result<f64> {
    let table = pmf_table(params, hist.max_count() as usize)?;
    Ok(loglik_from_table(&table, hist))
}

fn value_and_gradient(params: &HermiteParams, hist: &CountHistogram) -> Result<(f64, Vec<f64>)> {
    let table = pmf_table(params, hist.max_count() as usize)?;
    let ll = loglik_from_table(&table, hist);
    if ll == f64::NEG_INFINITY {
        return Ok((ll, vec![0.0; params.order()]));
    }
    Ok((ll, gradient_from_table(&table, params.order(), hist)?))
}

/// Gradient with components pointing out of the feasible box removed.
pub(crate) fn projected_gradient(x: &[f64], grad: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(grad)
        .map(|(&xi, &gi)| if xi <= 0.0 && gi < 0.0 { 0.0 } else { gi })
        .collect()
}

fn projected_norm(x: &[f64], grad: &[f64]) -> f64 {
    projected_gradient(x, grad)
        .iter()
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt()
}
