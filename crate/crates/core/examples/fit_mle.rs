//! Moment start and maximum likelihood fit on simulated data, including a
//! fit whose optimum sits on the boundary a_1 = 0.
//!
//! cargo run --example fit_mle

use hermite_count::estimation::{fit_mle, fit_moments, CountHistogram, FitOptions};
use hermite_count::sampling::sample_hermite;
use hermite_count::HermiteParams;

fn main() -> hermite_count::Result<()> {
    let truth = HermiteParams::new(vec![1.0, 0.5])?;
    let data = sample_hermite(&truth, 100_000, 7)?;
    let hist = CountHistogram::from_counts(&data.values)?;

    println!("moments: {:?}", fit_moments(&hist, 2)?.coefficients());
    let fit = fit_mle(&hist, 2, &FitOptions::default())?;
    println!(
        "mle: {:?}  loglik {:.4}  {} iterations  converged {}  |grad| {:.2e}",
        fit.params.coefficients(),
        fit.loglik,
        fit.iterations,
        fit.converged,
        fit.grad_norm
    );
    println!(
        "fitted mean {:.6}, sample mean {:.6}",
        fit.params.mean(),
        hist.mean()
    );

    // Twice a Poisson count: only even values, so the best a_1 is exactly 0.
    let doubled: Vec<u64> = sample_hermite(&HermiteParams::poisson(1.0)?, 20_000, 11)?
        .values
        .iter()
        .map(|x| 2 * x)
        .collect();
    let even = CountHistogram::from_counts(&doubled)?;
    let fit = fit_mle(&even, 2, &FitOptions::default())?;
    println!(
        "even-only data: {:?} (start {:?})",
        fit.params.coefficients(),
        fit.init.coefficients()
    );
    Ok(())
}
