//! Worked families used to check the closure results numerically:
//!
//! * the top inverse `2·Poisson(λ)` whose thinnings are Hermite laws,
//! * the negative binomial family in its `(μ, η_1)` parameterization,
//! * a top inverse without zero gaps, `p_{2k} = c/3^k`, `p_{2k+1} = c/2^k`
//!   with `c = 2/7`, together with its thinnings.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::model::hermite2_from_mean_variance;
use crate::pmf::{pmf_table, PmfTable};
use crate::transform::thin_pmf_oracle;

/// Normalizing constant of the alternating-geometric base law.
pub const EXAMPLE3_C: f64 = 2.0 / 7.0;

/// Tail bound targeted when truncating the alternating-geometric base law.
pub const EXAMPLE3_BASE_TAIL: f64 = 1e-14;

fn poisson_probs(rate: f64, n: usize) -> Vec<f64> {
    let mut probs = Vec::with_capacity(n + 1);
    probs.push((-rate).exp());
    for k in 1..=n {
        let prev = probs[k - 1];
        probs.push(prev * rate / k as f64);
    }
    probs
}

/// `2·Poisson(1/(2η_1))` up to count `k_max`.
pub fn example1_topinverse_pmf(eta1: f64, k_max: usize) -> Result<PmfTable> {
    if !(eta1 > 0.0) || !eta1.is_finite() {
        return domain(format!("η_1 must be positive, got {eta1}"));
    }
    let rate = 1.0 / (2.0 * eta1);
    let poisson = poisson_probs(rate, k_max / 2);
    let mut probs = vec![0.0; k_max + 1];
    for (k, p) in poisson.into_iter().enumerate() {
        probs[2 * k] = p;
    }
    Ok(PmfTable::from_probs(probs))
}

/// Negative binomial with mean `mean` and shape `1/η_1`, i.e. pgf
/// `(1 - μη_1(t - 1))^{-1/η_1}`.
pub fn example2_negbin_pmf(mean: f64, eta1: f64, k_max: usize) -> Result<PmfTable> {
    if !(mean > 0.0 && eta1 > 0.0) || !mean.is_finite() || !eta1.is_finite() {
        return domain(format!("μ and η_1 must be positive, got ({mean}, {eta1})"));
    }
    let shape = 1.0 / eta1;
    let scale = mean * eta1;
    let success = scale / (1.0 + scale);
    let mut probs = Vec::with_capacity(k_max + 1);
    probs.push((-shape * scale.ln_1p()).exp());
    for k in 0..k_max {
        let prev = probs[k];
        probs.push(prev * (k as f64 + shape) / (k + 1) as f64 * success);
    }
    Ok(PmfTable::from_probs(probs))
}

/// Missing mass of the base law after keeping counts `0..=k_max`.
fn example3_base_tail(k_max: usize) -> f64 {
    // first even index 2m and first odd index 2m'+1 beyond k_max
    let even_start = (k_max / 2 + 1) as i32;
    let odd_start = k_max.div_ceil(2) as i32;
    EXAMPLE3_C * (1.5 * (1.0f64 / 3.0).powi(even_start) + 2.0 * 0.5f64.powi(odd_start))
}

/// The alternating-geometric top inverse truncated so the missing mass is
/// below [`EXAMPLE3_BASE_TAIL`] (and at least `min_k` entries).
pub fn example3_base_pmf(min_k: usize) -> PmfTable {
    let mut k_max = min_k;
    while example3_base_tail(k_max) >= EXAMPLE3_BASE_TAIL {
        k_max += 1;
    }
    let probs = (0..=k_max)
        .map(|k| {
            let m = (k / 2) as i32;
            if k % 2 == 0 {
                EXAMPLE3_C * (1.0f64 / 3.0).powi(m)
            } else {
                EXAMPLE3_C * 0.5f64.powi(m)
            }
        })
        .collect();
    PmfTable::from_probs(probs)
}

/// The p-thinned base law, truncated to `0..=k_max`.
pub fn example3_model_pmf(p: f64, k_max: usize) -> Result<PmfTable> {
    let thinned = thin_pmf_oracle(&example3_base_pmf(k_max), p)?;
    Ok(thinned.truncated(k_max))
}

/// Closed form `Φ_X(t) = 6/(21 - 7t²) + 4t/(14 - 7t²)` of the base law.
pub fn example3_base_pgf(t: f64) -> f64 {
    6.0 / (21.0 - 7.0 * t * t) + 4.0 * t / (14.0 - 7.0 * t * t)
}

/// The same model written in its mean, `g(μ(t - 1))` with
/// `g(x) = (900 + 420x)/(3150 - 7(15 + 7x)²) + 1350/(4725 - 7(15 + 7x)²)`.
pub fn example3_mean_form(x: f64) -> f64 {
    let s = (15.0 + 7.0 * x).powi(2);
    (900.0 + 420.0 * x) / (3150.0 - 7.0 * s) + 1350.0 / (4725.0 - 7.0 * s)
}

/// `(Φ_X(1 - p(1 - t)), Σ p*_k t^k)`: closed form against the power series of
/// the numerically thinned table.
pub fn example3_pgf_check(p: f64, t: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && p <= 1.0) {
        return domain(format!("retention probability must lie in (0, 1], got {p}"));
    }
    if !(t.abs() <= 1.0) {
        return domain(format!("|t| must be at most 1, got {t}"));
    }
    let closed = example3_base_pgf(1.0 - p * (1.0 - t));
    let table = thin_pmf_oracle(&example3_base_pmf(0), p)?;
    Ok((closed, table.power_series(t)))
}

/// Some `p_k = 0` is followed by a later `p_n > 0`.
pub fn has_zero_gap(table: &PmfTable) -> bool {
    let probs = table.probs();
    match probs.iter().rposition(|&p| p > 0.0) {
        Some(last) => probs[..last].contains(&0.0),
        None => false,
    }
}

/// Outcome of one fixture check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Largest observed discrepancy (or 0/1 for structural checks).
    pub error: f64,
    pub tolerance: f64,
}

fn max_abs_diff(x: &PmfTable, y: &PmfTable, upto: usize) -> f64 {
    (0..=upto)
        .map(|k| (x.get(k) - y.get(k)).abs())
        .fold(0.0, f64::max)
}

fn check(name: impl Into<String>, error: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed: error <= tolerance,
        error,
        tolerance,
    }
}

fn structural(name: &str, ok: bool) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed: ok,
        error: if ok { 0.0 } else { 1.0 },
        tolerance: 0.0,
    }
}

/// Runs every fixture invariant and reports each one.
pub fn verify_fixtures() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    const TOL: f64 = 1e-10;
    const K: usize = 150;

    // Thinning the even-support law by p = μη_1 lands on the Hermite law.
    for &mean in &[0.5, 1.0, 2.0] {
        for &eta1 in &[0.1, 0.25, 0.5] {
            let p = mean * eta1;
            if p > 1.0 {
                continue;
            }
            let base = example1_topinverse_pmf(eta1, 2 * K)?;
            let thinned = thin_pmf_oracle(&base, p)?;
            let hermite = pmf_table(
                &hermite2_from_mean_variance(mean, mean + eta1 * mean * mean)?,
                K,
            )?;
            out.push(check(
                format!("even-support law thinned to Hermite (μ={mean}, η1={eta1})"),
                max_abs_diff(&thinned, &hermite, K),
                TOL,
            ));
        }
    }
    let base = example1_topinverse_pmf(0.25, 60)?;
    out.push(structural(
        "even-support law has zero odd entries",
        base.probs().iter().skip(1).step_by(2).all(|&p| p == 0.0),
    ));

    // Negative binomial: thinning keeps η_1 and scales μ.
    for &(mean, eta1) in &[(1.0, 1.0), (2.0, 0.5), (0.7, 2.0)] {
        for &p in &[0.2, 0.5, 0.9] {
            let nb = example2_negbin_pmf(mean, eta1, 600)?;
            let thinned = thin_pmf_oracle(&nb, p)?;
            let target = example2_negbin_pmf(p * mean, eta1, K)?;
            out.push(check(
                format!("negative binomial thinning (μ={mean}, η1={eta1}, p={p})"),
                max_abs_diff(&thinned, &target, K),
                TOL,
            ));
        }
    }

    // Alternating-geometric base law and its thinnings.
    let base = example3_base_pmf(0);
    out.push(check(
        "alternating base law normalizes",
        base.tail_mass().abs(),
        1e-12,
    ));
    out.push(structural(
        "alternating base law has no zero gap",
        !has_zero_gap(&base),
    ));
    out.push(structural(
        "even-support law is flagged as having a zero gap",
        has_zero_gap(&example1_topinverse_pmf(0.25, 10)?),
    ));
    for &p in &[0.3, 0.7, 1.0] {
        let table = thin_pmf_oracle(&base, p)?;
        out.push(check(
            format!("thinned alternating law has mean 15p/7 (p={p})"),
            (table.mean() - 15.0 * p / 7.0).abs(),
            1e-8,
        ));
    }
    for &(p, q) in &[(0.9, 0.5), (0.6, 0.3), (1.0, 0.25)] {
        let twice = thin_pmf_oracle(&thin_pmf_oracle(&base, p)?, q)?;
        let once = thin_pmf_oracle(&base, p * q)?;
        out.push(check(
            format!("alternating law thinning composes (p={p}, q={q})"),
            max_abs_diff(&twice, &once, base.k_max()),
            TOL,
        ));
    }
    for &(p, t) in &[(1.0, 0.0), (0.5, 0.3), (0.8, -0.9), (0.2, 1.0)] {
        let (closed, series) = example3_pgf_check(p, t)?;
        out.push(check(
            format!("alternating law pgf closed form vs series (p={p}, t={t})"),
            (closed - series).abs(),
            TOL,
        ));
        let mean = 15.0 * p / 7.0;
        out.push(check(
            format!("alternating law pgf in mean form (p={p}, t={t})"),
            (closed - example3_mean_form(mean * (t - 1.0))).abs(),
            1e-12,
        ));
    }
    Ok(out)
}
