//! Parameterizations of the rth-order Hermite family and conversions among them.
//!
//! A distribution of order `r` has probability generating function
//! `exp{ Σ_i a_i (t^i - 1) }`, i.e. it is the law of `Σ_i i·X_i` for
//! independent `X_i ~ Poisson(a_i)`. The same law is determined by its first
//! `r` factorial cumulants, which add under convolution and scale by `p^k`
//! under binomial thinning.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Admission tolerance for "a_i ≥ 0" after cumulant arithmetic.
pub const NONNEG_TOL: f64 = 1e-9;

/// Coefficients `a_1..a_r` of the exponent polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteParams {
    a: Vec<f64>,
}

impl HermiteParams {
    /// Validates `r ≥ 1` and that every coefficient is finite and non-negative.
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return domain("order must be at least 1");
        }
        if let Some((i, v)) = a
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return domain(format!(
                "a_{} = {v} is not a finite non-negative number",
                i + 1
            ));
        }
        Ok(Self { a })
    }

    pub fn poisson(rate: f64) -> Result<Self> {
        Self::new(vec![rate])
    }

    /// The point mass at zero, expressed at order `r`.
    pub fn degenerate(order: usize) -> Result<Self> {
        Self::new(vec![0.0; order])
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.a
    }

    /// `Σ a_i`, so that `p_0 = exp(-total_rate)`.
    pub fn total_rate(&self) -> f64 {
        self.a.iter().sum()
    }

    /// `Σ i·a_i`.
    pub fn mean(&self) -> f64 {
        self.a
            .iter()
            .enumerate()
            .map(|(i, a)| (i + 1) as f64 * a)
            .sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.a.iter().all(|&v| v == 0.0)
    }

    /// Same law written at a higher order (zero padded).
    pub fn padded(&self, order: usize) -> Self {
        let mut a = self.a.clone();
        if a.len() < order {
            a.resize(order, 0.0);
        }
        Self { a }
    }
}

/// Factorial cumulants `κ_(1)..κ_(r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialCumulants {
    kappa: Vec<f64>,
}

impl FactorialCumulants {
    pub fn new(kappa: Vec<f64>) -> Result<Self> {
        if kappa.is_empty() {
            return domain("order must be at least 1");
        }
        if kappa.iter().any(|v| !v.is_finite()) {
            return domain("factorial cumulants must be finite");
        }
        Ok(Self { kappa })
    }

    pub fn order(&self) -> usize {
        self.kappa.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.kappa
    }

    pub fn mean(&self) -> f64 {
        self.kappa[0]
    }

    /// `η_i = κ_(i+1) / μ^{i+1}` for `i = 1..r-1`, read straight off the
    /// factorial cumulants.
    pub fn eta(&self) -> Result<Vec<f64>> {
        let mu = self.mean();
        if mu <= 0.0 {
            return domain(format!(
                "thinning invariants need a positive mean, got {mu}"
            ));
        }
        Ok(self.kappa[1..]
            .iter()
            .enumerate()
            .map(|(i, k)| k / mu.powi(i as i32 + 2))
            .collect())
    }
}

/// Mean, variance and the third and fourth ordinary cumulants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulantSummary {
    pub mean: f64,
    pub variance: f64,
    pub kappa3: f64,
    pub kappa4: f64,
}

/// `η_1, η_2, η_3`, unchanged by binomial thinning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinningInvariants {
    pub eta: Vec<f64>,
}

/// `i!/(i-j)!`
pub(crate) fn falling_factorial(i: usize, j: usize) -> f64 {
    ((i - j + 1)..=i).map(|v| v as f64).product()
}

/// `κ_(j) = Σ_{i≥j} i!/(i-j)! · a_i`, the j-th derivative of `Σ a_i (t^i - 1)` at 1.
pub fn params_to_factorial_cumulants(params: &HermiteParams) -> FactorialCumulants {
    let a = params.coefficients();
    let r = a.len();
    let kappa = (1..=r)
        .map(|j| (j..=r).map(|i| falling_factorial(i, j) * a[i - 1]).sum())
        .collect();
    FactorialCumulants { kappa }
}

/// Back-substitution from `a_r = κ_(r)/r!` downward.
///
/// Values in `[-NONNEG_TOL, 0)` are clamped to zero; anything more negative
/// means the cumulants do not describe a member of the family.
pub fn factorial_cumulants_to_params(cumulants: &FactorialCumulants) -> Result<HermiteParams> {
    let a = back_substitute(cumulants.values(), |j, v| {
        if v < -NONNEG_TOL {
            domain(format!("factorial cumulants give a_{j} = {v} < 0"))
        } else {
            Ok(v.max(0.0))
        }
    })?;
    HermiteParams::new(a)
}

/// Back-substitution that clamps each negative coefficient to zero as soon as
/// it is produced, so the lower coefficients absorb the remainder.
pub(crate) fn factorial_cumulants_to_params_clamped(kappa: &[f64]) -> Vec<f64> {
    back_substitute(kappa, |_, v| Ok(v.max(0.0))).expect("clamping never fails")
}

fn back_substitute(
    kappa: &[f64],
    mut admit: impl FnMut(usize, f64) -> Result<f64>,
) -> Result<Vec<f64>> {
    let r = kappa.len();
    let mut a = vec![0.0; r];
    for j in (1..=r).rev() {
        let higher: f64 = ((j + 1)..=r)
            .map(|i| falling_factorial(i, j) * a[i - 1])
            .sum();
        let v = (kappa[j - 1] - higher) / falling_factorial(j, j);
        a[j - 1] = admit(j, v)?;
    }
    Ok(a)
}

/// `κ_s = Σ i^s a_i` for `s = 1..4`.
pub fn ordinary_cumulants(params: &HermiteParams) -> CumulantSummary {
    let cumulant = |s: i32| -> f64 {
        params
            .coefficients()
            .iter()
            .enumerate()
            .map(|(i, a)| ((i + 1) as f64).powi(s) * a)
            .sum()
    };
    CumulantSummary {
        mean: cumulant(1),
        variance: cumulant(2),
        kappa3: cumulant(3),
        kappa4: cumulant(4),
    }
}

/// The thinning-invariant ratios computed from ordinary cumulants.
pub fn thinning_invariants(c: &CumulantSummary) -> Result<ThinningInvariants> {
    let mu = c.mean;
    if !(mu > 0.0) {
        return domain(format!(
            "thinning invariants need a positive mean, got {mu}"
        ));
    }
    // κ_3 - 3σ² + 2μ and κ_4 - 6κ_3 + 11σ² - 6μ, grouped as successive
    // differences so a Poisson input gives exact zeros.
    let d1 = c.variance - mu;
    let d2 = c.kappa3 - c.variance;
    let d3 = c.kappa4 - c.kappa3;
    let eta1 = d1 / mu.powi(2);
    let eta2 = (d2 - 2.0 * d1) / mu.powi(3);
    let eta3 = (d3 - 5.0 * d2 + 6.0 * d1) / mu.powi(4);
    Ok(ThinningInvariants {
        eta: vec![eta1, eta2, eta3],
    })
}

/// `η_1, …, η_{max(r,4)-1}` straight from the factorial cumulants of `params`.
///
/// Agrees with [`thinning_invariants`] mathematically, but avoids the
/// cancellation in the ordinary-cumulant combinations, which costs roughly
/// `log10(1/p^i)` digits after thinning by a small `p`.
pub fn thinning_invariants_of_params(params: &HermiteParams) -> Result<ThinningInvariants> {
    let padded = params.padded(params.order().max(4));
    Ok(ThinningInvariants {
        eta: params_to_factorial_cumulants(&padded).eta()?,
    })
}

/// `exp{ Σ a_i (t^i - 1) }`
pub fn pgf_eval(params: &HermiteParams, t: f64) -> f64 {
    let exponent: f64 = params
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, a)| a * (t.powi(i as i32 + 1) - 1.0))
        .sum();
    exponent.exp()
}

/// Ordinary Hermite (order 2) law from its mean and variance.
pub fn hermite2_from_mean_variance(mean: f64, variance: f64) -> Result<HermiteParams> {
    if !(mean > 0.0) || !mean.is_finite() {
        return domain(format!("mean must be positive, got {mean}"));
    }
    if !(variance >= mean && variance <= 2.0 * mean) {
        return domain(format!(
            "variance {variance} outside [{mean}, {}]",
            2.0 * mean
        ));
    }
    HermiteParams::new(vec![2.0 * mean - variance, (variance - mean) / 2.0])
}
