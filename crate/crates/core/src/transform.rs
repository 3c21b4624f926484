//! Binomial thinning and independent addition, at the parameter level and as
//! brute-force operations on probability tables.

use crate::error::{domain, Result};
use crate::model::{FactorialCumulants, HermiteParams};
use crate::pmf::PmfTable;

fn check_retention(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        domain(format!("retention probability must lie in (0, 1], got {p}"))
    }
}

/// Coefficients after independent p-thinning.
///
/// Substituting `1 - p(1 - t)` into `t^i` and expanding gives
/// `a'_j = Σ_{i≥j} C(i, j) p^j (1-p)^{i-j} a_i`.
pub fn thin_params(params: &HermiteParams, p: f64) -> Result<HermiteParams> {
    check_retention(p)?;
    if p == 1.0 {
        return Ok(params.clone());
    }
    let a = params.coefficients();
    let r = a.len();
    let mut out = vec![0.0; r];
    for (i, &ai) in a.iter().enumerate().filter(|(_, ai)| **ai != 0.0) {
        let n = i + 1;
        for (j, o) in out.iter_mut().enumerate().take(n) {
            *o += binomial_term(n, j + 1, p) * ai;
        }
    }
    HermiteParams::new(out)
}

/// `C(n, j) p^j (1-p)^{n-j}`, coefficient built multiplicatively.
fn binomial_term(n: usize, j: usize, p: f64) -> f64 {
    let c: f64 = (1..=j).map(|m| (n - j + m) as f64 / m as f64).product();
    c * p.powi(j as i32) * (1.0 - p).powi((n - j) as i32)
}

/// `κ'_(j) = p^j κ_(j)`.
pub fn thin_factorial_cumulants(
    cumulants: &FactorialCumulants,
    p: f64,
) -> Result<FactorialCumulants> {
    check_retention(p)?;
    let scaled = cumulants
        .values()
        .iter()
        .enumerate()
        .map(|(j, k)| p.powi(j as i32 + 1) * k)
        .collect();
    FactorialCumulants::new(scaled)
}

/// Law of the sum of two independent members: coefficients add.
pub fn add_params(x: &HermiteParams, y: &HermiteParams) -> HermiteParams {
    let order = x.order().max(y.order());
    let a = (0..order)
        .map(|i| {
            x.coefficients().get(i).copied().unwrap_or(0.0)
                + y.coefficients().get(i).copied().unwrap_or(0.0)
        })
        .collect();
    HermiteParams::new(a).expect("sum of admissible coefficients is admissible")
}

/// `(P * Q)_k = Σ_j P_j Q_{k-j}` up to `K_P + K_Q`.
///
/// Entries above `min(K_P, K_Q)` miss the contributions of truncated mass.
pub fn convolve_pmf_oracle(x: &PmfTable, y: &PmfTable) -> PmfTable {
    let (px, py) = (x.probs(), y.probs());
    let mut out = vec![0.0; px.len() + py.len() - 1];
    for (i, a) in px.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        for (j, b) in py.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    PmfTable::from_probs(out)
}

/// Exact law of the p-thinned variable, `p*_k = Σ_{n≥k} P_n C(n,k) p^k (1-p)^{n-k}`,
/// over the stored entries of `P`.
///
/// Evaluated by nesting single-trial thinnings (Horner form in `n`), so no
/// binomial coefficient or power is ever formed and nothing underflows early.
pub fn thin_pmf_oracle(table: &PmfTable, p: f64) -> Result<PmfTable> {
    check_retention(p)?;
    if p == 1.0 {
        return Ok(table.clone());
    }
    let q = 1.0 - p;
    let probs = table.probs();
    let k_max = table.k_max();
    // acc holds Σ_{m≥n} P_m · Bin(m - n, p) after processing level n.
    let mut acc = vec![0.0; k_max + 1];
    for n in (0..=k_max).rev() {
        let width = k_max - n;
        for k in (1..=width).rev() {
            acc[k] = q * acc[k] + p * acc[k - 1];
        }
        acc[0] *= q;
        acc[0] += probs[n];
    }
    Ok(PmfTable::from_probs(acc))
}
