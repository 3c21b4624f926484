//! Three worked families: a doubled Poisson whose thinnings are Hermite,
//! the negative binomial, and an alternating-geometric law with mean
//! parameter capped at 15/7.
//!
//! cargo run --example closure_fixtures

use hermite_count::fixtures::{
    example1_topinverse_pmf, example2_negbin_pmf, example3_model_pmf, example3_pgf_check,
    has_zero_gap, verify_fixtures,
};
use hermite_count::pmf::pmf_table;
use hermite_count::transform::thin_pmf_oracle;
use hermite_count::HermiteParams;

fn main() -> hermite_count::Result<()> {
    let doubled = example1_topinverse_pmf(0.25, 40)?;
    let thinned = thin_pmf_oracle(&doubled, 0.5)?;
    let hermite = pmf_table(&HermiteParams::new(vec![1.0, 0.5])?, 40)?;
    println!(
        "2·Poisson(2) thinned by 1/2, first entries {:?}",
        &thinned.probs()[..4]
    );
    println!(
        "Hermite (1, 0.5), first entries            {:?}",
        &hermite.probs()[..4]
    );
    println!(
        "zero gap: doubled {}, thinned {}",
        has_zero_gap(&doubled),
        has_zero_gap(&thinned)
    );

    let nb = example2_negbin_pmf(2.0, 0.5, 200)?;
    let nb_thin = thin_pmf_oracle(&nb, 0.2)?;
    let nb_direct = example2_negbin_pmf(0.4, 0.5, 200)?;
    println!(
        "NB(2, 0.5) thinned by 0.2 vs NB(0.4, 0.5): {:?} vs {:?}",
        &nb_thin.probs()[..3],
        &nb_direct.probs()[..3]
    );

    for p in [0.3, 0.7, 1.0] {
        let table = example3_model_pmf(p, 300)?;
        let (closed, series) = example3_pgf_check(p, 0.5)?;
        println!(
            "p = {p}: mean {:.12} (15p/7 = {:.12}), pgf at 1/2 {closed:.12} vs {series:.12}",
            table.mean(),
            15.0 * p / 7.0
        );
    }

    let checks = verify_fixtures()?;
    let passed = checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} fixture checks pass", checks.len());
    Ok(())
}
