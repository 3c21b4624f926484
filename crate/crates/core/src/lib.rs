//! Count distributions whose probability generating function is
//! `exp{ Σ_{i=1}^r a_i (t^i - 1) }` (rth-order Hermite laws).
//!
//! These are the laws of `Σ i·X_i` for independent Poisson `X_i`, and they
//! form the family that is closed both under independent addition and under
//! binomial thinning. The crate provides
//!
//! * conversions between coefficients, factorial cumulants and ordinary
//!   cumulants ([`model`]),
//! * exact probability tables, log-likelihood and gradient ([`pmf`]),
//! * thinning and addition at the parameter and distribution level ([`transform`]),
//! * seeded random variates ([`sampling`]),
//! * moment and maximum-likelihood fitting ([`estimation`]),
//! * likelihood-ratio order selection with a boundary-corrected null ([`selection`]),
//! * worked closure fixtures ([`fixtures`]) and the `hermite` command line ([`cli`]).
//!
//! ```
//! use hermite_count::{pmf::pmf_table, transform::thin_params, HermiteParams};
//!
//! let a = HermiteParams::new(vec![1.0, 0.5]).unwrap();
//! let thinned = thin_params(&a, 0.5).unwrap();
//! assert_eq!(thinned.coefficients(), &[0.75, 0.125]);
//! let table = pmf_table(&a, 3).unwrap();
//! assert!((table.probs()[3] - (-1.5f64).exp() * 2.0 / 3.0).abs() < 1e-15);
//! ```

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimation;
pub mod fixtures;
pub mod model;
pub mod pmf;
pub mod sampling;
pub mod selection;
pub mod transform;

pub use error::{Error, Result};
pub use estimation::{CountHistogram, FitOptions, FitResult};
pub use model::{CumulantSummary, FactorialCumulants, HermiteParams, ThinningInvariants};
pub use pmf::PmfTable;
pub use sampling::SampleBatch;
pub use selection::SelectionTrace;
