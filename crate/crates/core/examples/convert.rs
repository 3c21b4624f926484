//! Moving between coefficients, factorial cumulants and the mean/variance
//! summary.
//!
//! cargo run --example convert

use hermite_count::model::{
    factorial_cumulants_to_params, hermite2_from_mean_variance, ordinary_cumulants,
    params_to_factorial_cumulants, pgf_eval, thinning_invariants, FactorialCumulants,
};
use hermite_count::HermiteParams;

fn main() -> hermite_count::Result<()> {
    let a = HermiteParams::new(vec![1.0, 0.5, 0.2, 0.05])?;
    let kappa = params_to_factorial_cumulants(&a);
    println!("a     = {:?}", a.coefficients());
    println!("kappa = {:?}", kappa.values());
    println!(
        "back  = {:?}",
        factorial_cumulants_to_params(&kappa)?.coefficients()
    );

    let c = ordinary_cumulants(&a);
    println!(
        "mean {} variance {} κ3 {} κ4 {}",
        c.mean, c.variance, c.kappa3, c.kappa4
    );
    println!("η = {:?}", thinning_invariants(&c)?.eta);
    println!("pgf at 0.5: {:.10}", pgf_eval(&a, 0.5));

    println!(
        "order 2 with mean 2, variance 3: {:?}",
        hermite2_from_mean_variance(2.0, 3.0)?.coefficients()
    );

    match factorial_cumulants_to_params(&FactorialCumulants::new(vec![1.0, -0.5])?) {
        Ok(p) => println!("unexpected {p:?}"),
        Err(e) => println!("κ = (1, -0.5): {e}"),
    }
    Ok(())
}
