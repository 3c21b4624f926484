//! Seeded draws, thinned draws, and their empirical frequencies next to the
//! exact probabilities.
//!
//! cargo run --example sampling

use hermite_count::pmf::pmf_table;
use hermite_count::sampling::{sample_hermite, thin_sample};
use hermite_count::transform::thin_params;
use hermite_count::HermiteParams;

fn frequencies(values: &[u64], k_max: usize) -> Vec<f64> {
    let mut freq = vec![0.0; k_max + 1];
    for &v in values {
        if (v as usize) <= k_max {
            freq[v as usize] += 1.0;
        }
    }
    freq.iter().map(|f| f / values.len() as f64).collect()
}

fn main() -> hermite_count::Result<()> {
    let a = HermiteParams::new(vec![1.0, 0.5])?;
    let batch = sample_hermite(&a, 100_000, 2024)?;
    println!("first draws: {:?}", &batch.values[..12]);

    let thinned = thin_sample(&batch, 0.5, 7)?;
    let model = thin_params(&a, 0.5)?;
    let exact = pmf_table(&a, 6)?;
    let exact_thinned = pmf_table(&model, 6)?;
    let (f, g) = (
        frequencies(&batch.values, 6),
        frequencies(&thinned.values, 6),
    );
    println!(
        "k   sample   exact    thinned  exact{:?}",
        model.coefficients()
    );
    for k in 0..=6 {
        println!(
            "{k}   {:.4}   {:.4}   {:.4}   {:.4}",
            f[k],
            exact.get(k),
            g[k],
            exact_thinned.get(k)
        );
    }

    let again = sample_hermite(&a, 12, 2024)?;
    println!(
        "same seed, same draws: {}",
        again.values == batch.values[..12]
    );
    Ok(())
}
