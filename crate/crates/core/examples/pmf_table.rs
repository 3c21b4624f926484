//! Probabilities of an order-3 model from the recurrence, the adaptive
//! truncation point, and a likelihood with its gradient.
//!
//! cargo run --example pmf_table

use hermite_count::estimation::CountHistogram;
use hermite_count::pmf::{adaptive_pmf, log_likelihood, loglik_gradient, pmf_table};
use hermite_count::HermiteParams;

fn main() -> hermite_count::Result<()> {
    let params = HermiteParams::new(vec![1.0, 0.5, 0.25])?;

    let table = pmf_table(&params, 10)?;
    println!("k   P(X = k)");
    for (k, p) in table.probs().iter().enumerate() {
        println!("{k:<3} {p:.10}");
    }
    println!("mass beyond k = 10: {:.3e}", table.tail_mass());

    for eps in [1e-6, 1e-12] {
        let t = adaptive_pmf(&params, eps)?;
        println!("eps {eps:e}: K = {}, tail {:.3e}", t.k_max(), t.tail_mass());
    }

    let hist = CountHistogram::from_counts(&[0, 1, 1, 2, 3, 3, 4, 6, 2, 0])?;
    println!("log-likelihood {:.6}", log_likelihood(&params, &hist)?);
    println!("gradient {:?}", loglik_gradient(&params, &hist)?);

    let gapped = pmf_table(&HermiteParams::new(vec![0.0, 0.8])?, 6)?;
    println!("a = (0, 0.8): {:?}", gapped.probs());
    Ok(())
}
