//! Choosing the order with the boundary-corrected likelihood-ratio ladder.
//!
//! cargo run --example order_selection

use hermite_count::estimation::{CountHistogram, FitOptions};
use hermite_count::sampling::sample_hermite;
use hermite_count::selection::{lrt_pvalue, select_order};
use hermite_count::HermiteParams;

fn main() -> hermite_count::Result<()> {
    for d in [0.0, 1.0, 2.706, 3.841, 6.635] {
        println!("D = {d:<6} p = {:.5}", lrt_pvalue(d)?);
    }

    for (label, a) in [
        ("Poisson(2)", vec![2.0]),
        ("a = (1, 1)", vec![1.0, 1.0]),
        ("a = (1, 0.5, 0.8)", vec![1.0, 0.5, 0.8]),
    ] {
        let data = sample_hermite(&HermiteParams::new(a)?, 10_000, 5)?;
        let hist = CountHistogram::from_counts(&data.values)?;
        let trace = select_order(&hist, 4, 0.05, &FitOptions::default())?;
        println!("\n{label}: chose order {}", trace.chosen_order);
        for t in &trace.tests {
            println!(
                "  {} vs {}: D = {:.4}, p = {:.4}, {}",
                t.null_order,
                t.full_order,
                t.statistic,
                t.p_value,
                if t.rejected { "reject" } else { "keep" }
            );
        }
        println!("  fitted {:?}", trace.chosen_fit().params.coefficients());
    }
    Ok(())
}
