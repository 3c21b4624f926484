//! Thinning and adding Hermite variables stays inside the family: the
//! parameter maps agree with brute-force operations on the tables.
//!
//! cargo run --example thinning_closure

use hermite_count::model::{
    ordinary_cumulants, params_to_factorial_cumulants, thinning_invariants,
    thinning_invariants_of_params,
};
use hermite_count::pmf::{adaptive_pmf, pmf_table};
use hermite_count::transform::{add_params, convolve_pmf_oracle, thin_params, thin_pmf_oracle};
use hermite_count::HermiteParams;

fn max_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn main() -> hermite_count::Result<()> {
    let a = HermiteParams::new(vec![1.2, 0.4, 0.3])?;
    let p = 0.35;
    let thinned = thin_params(&a, p)?;
    println!(
        "a = {:?}, thinned by {p}: {:?}",
        a.coefficients(),
        thinned.coefficients()
    );

    let base = adaptive_pmf(&a, 1e-14)?;
    let brute = thin_pmf_oracle(&base, p)?;
    let direct = pmf_table(&thinned, base.k_max())?;
    println!(
        "table thinning vs parameter thinning: {:.2e}",
        max_diff(brute.probs(), direct.probs())
    );

    let before = params_to_factorial_cumulants(&a);
    let after = params_to_factorial_cumulants(&thinned);
    for (k, (x, y)) in before.values().iter().zip(after.values()).enumerate() {
        println!(
            "κ_({}) = {x:.6} -> {y:.6} (ratio {:.6}, p^k = {:.6})",
            k + 1,
            y / x,
            p.powi(k as i32 + 1)
        );
    }

    println!(
        "η from factorial cumulants: {:?}",
        thinning_invariants_of_params(&a)?.eta
    );
    println!(
        "            after thinning: {:?}",
        thinning_invariants_of_params(&thinned)?.eta
    );
    println!(
        "η from ordinary cumulants:  {:?}",
        thinning_invariants(&ordinary_cumulants(&thinned))?.eta
    );

    let b = HermiteParams::new(vec![0.5, 0.0, 0.0, 0.2])?;
    let sum = add_params(&a, &b);
    let k = adaptive_pmf(&sum, 1e-12)?.k_max();
    let conv = convolve_pmf_oracle(&pmf_table(&a, k)?, &pmf_table(&b, k)?);
    println!(
        "a + b = {:?}, convolution vs recurrence: {:.2e}",
        sum.coefficients(),
        max_diff(&conv.probs()[..=k], pmf_table(&sum, k)?.probs())
    );
    Ok(())
}
