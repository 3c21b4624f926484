//! Order selection by a ladder of nested likelihood-ratio tests.
//!
//! Testing `a_{r+1} = 0` puts the null on the boundary of the parameter box,
//! so the statistic is referred to a 50:50 mixture of a point mass at zero
//! and χ²₁ rather than to χ²₁ itself.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{domain, Result};
use crate::estimation::{fit_mle, fit_mle_from, CountHistogram, FitOptions, FitResult};

/// Raw statistics below this are treated as the atom at zero.
pub const ZERO_ATOM_TOL: f64 = 1e-7;

/// `2(ℓ_full - ℓ_null)` without clamping.
pub fn lrt_statistic_raw(loglik_full: f64, loglik_null: f64) -> f64 {
    2.0 * (loglik_full - loglik_null)
}

/// `max(0, 2(ℓ_full - ℓ_null))`, with values under [`ZERO_ATOM_TOL`] set to 0.
pub fn lrt_statistic(loglik_full: f64, loglik_null: f64) -> f64 {
    let d = lrt_statistic_raw(loglik_full, loglik_null);
    if d < ZERO_ATOM_TOL {
        0.0
    } else {
        d
    }
}

/// Upper tail of the boundary mixture: 1 at `D = 0`, else `½·P(χ²₁ > D)`.
///
/// The χ²₁ survival function is `erfc(√(D/2))`.
pub fn lrt_pvalue(statistic: f64) -> Result<f64> {
    if !(statistic >= 0.0) {
        return domain(format!(
            "test statistic must be non-negative, got {statistic}"
        ));
    }
    if statistic == 0.0 {
        return Ok(1.0);
    }
    Ok(0.5 * erfc((statistic / 2.0).sqrt()))
}

/// One rung of the ladder: order `null_order` against `null_order + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderTest {
    pub null_order: usize,
    pub full_order: usize,
    /// Before clamping; tiny negatives are optimizer noise.
    pub raw_statistic: f64,
    pub statistic: f64,
    pub p_value: f64,
    pub rejected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    /// Fits for orders `1..` as far as the ladder went.
    pub fits: Vec<FitResult>,
    pub tests: Vec<OrderTest>,
    pub chosen_order: usize,
    pub alpha: f64,
}

impl SelectionTrace {
    pub fn chosen_fit(&self) -> &FitResult {
        &self.fits[self.chosen_order - 1]
    }
}

/// Fits orders `1, 2, …` and stops at the first test that fails to reject
/// (or at `r_max`).
///
/// Each larger model is fitted twice, from its own moment start and from the
/// smaller model's optimum padded with a zero, and the better fit is kept.
/// The padded start has exactly the null log-likelihood, so the nested
/// statistic cannot go meaningfully negative.
pub fn select_order(
    hist: &CountHistogram,
    r_max: usize,
    alpha: f64,
    opts: &FitOptions,
) -> Result<SelectionTrace> {
    if r_max == 0 {
        return domain("maximum order must be at least 1");
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!(
            "significance level must lie in (0, 1), got {alpha}"
        ));
    }
    let mut fits = vec![fit_mle(hist, 1, opts)?];
    let mut tests = Vec::new();
    let mut chosen_order = 1;
    for null_order in 1..r_max {
        let null = &fits[null_order - 1];
        let full = fit_nested(hist, null, opts)?;
        let raw = lrt_statistic_raw(full.loglik, null.loglik);
        let statistic = lrt_statistic(full.loglik, null.loglik);
        let p_value = lrt_pvalue(statistic)?;
        let rejected = p_value < alpha;
        tests.push(OrderTest {
            null_order,
            full_order: null_order + 1,
            raw_statistic: raw,
            statistic,
            p_value,
            rejected,
        });
        fits.push(full);
        if !rejected {
            break;
        }
        chosen_order = null_order + 1;
    }
    Ok(SelectionTrace {
        fits,
        tests,
        chosen_order,
        alpha,
    })
}

/// Best of a fresh fit and a warm start from the padded null optimum.
pub fn fit_nested(hist: &CountHistogram, null: &FitResult, opts: &FitOptions) -> Result<FitResult> {
    let order = null.params.order() + 1;
    let warm = fit_mle_from(hist, null.params.padded(order), opts)?;
    let fresh = fit_mle(hist, order, opts)?;
    Ok(if fresh.loglik > warm.loglik {
        fresh
    } else {
        warm
    })
}
