//! The `hermite` command line: batch access to tables, fitting, order
//! selection, sampling, thinning and parameter conversion.
//!
//! Reports go to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 failed `verify` check, 2 input or parse error, 3 domain error,
//! 4 non-convergence (the fit is still printed).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::estimation::{fit_mle, fit_moments, CountHistogram, FitOptions};
use crate::fixtures::verify_fixtures;
use crate::model::{
    factorial_cumulants_to_params, ordinary_cumulants, params_to_factorial_cumulants,
    thinning_invariants_of_params, FactorialCumulants, HermiteParams,
};
use crate::pmf::{adaptive_pmf, log_likelihood, loglik_gradient, pmf_table, DEFAULT_EPS};
use crate::sampling::{sample_hermite, thin_sample};
use crate::selection::{select_order, OrderTest};
use crate::transform::thin_params;

/// Added to `--seed` to seed the thinning stream of `sample --thin`.
pub const THIN_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Parser)]
#[command(
    name = "hermite",
    version,
    about = "rth-order Hermite count distributions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the probability table of a model as `k,p` rows and its tail mass.
    Pmf {
        model: PathBuf,
        /// Last count to tabulate.
        #[arg(long, conflicts_with = "eps")]
        k_max: Option<usize>,
        /// Tabulate until the missing tail mass is below this (default 1e-12).
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Fit a model of the given order to count data.
    Fit {
        data: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Method::Mle)]
        method: Method,
    },
    /// Choose the order by a ladder of boundary-corrected likelihood-ratio tests.
    Select {
        data: PathBuf,
        #[arg(long)]
        r_max: usize,
        #[arg(long)]
        alpha: f64,
    },
    /// Draw counts from a model, one per line.
    Sample {
        model: PathBuf,
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Thin every draw with this retention probability (seeded from `seed`).
        #[arg(long)]
        thin: Option<f64>,
    },
    /// Print the model of the p-thinned variable.
    Thin {
        model: PathBuf,
        #[arg(long = "p")]
        p: f64,
    },
    /// Re-express a model as coefficients, factorial cumulants or a summary.
    Convert {
        model: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Run the closure fixture checks.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mle,
    Moments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Cumulants,
    Params,
    Summary,
}

/// Where a document came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
}

/// `{"order": r, "a": [...], "provenance": {...}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub order: usize,
    pub a: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl ModelDocument {
    pub fn new(params: &HermiteParams, provenance: Option<Provenance>) -> Self {
        Self {
            order: params.order(),
            a: params.coefficients().to_vec(),
            provenance,
        }
    }
}

/// `{"order": r, "kappa": [...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CumulantsDocument {
    pub order: usize,
    pub kappa: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryDocument {
    pub order: usize,
    pub mean: f64,
    pub variance: f64,
    pub kappa3: f64,
    pub kappa4: f64,
    /// Absent for the point mass at zero.
    pub eta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitDocument {
    #[serde(flatten)]
    pub model: ModelDocument,
    pub method: Method,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm: f64,
    pub init: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFitDocument {
    pub order: usize,
    pub a: Vec<f64>,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceDocument {
    pub alpha: f64,
    pub chosen_order: usize,
    pub model: ModelDocument,
    pub fits: Vec<OrderFitDocument>,
    pub tests: Vec<OrderTest>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Domain(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Data(_) => CliError::Input(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Input(e.to_string())
}

/// Either parameterization of a model document.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelInput {
    Params(HermiteParams, Option<Provenance>),
    Cumulants(FactorialCumulants),
}

impl ModelInput {
    fn into_params(self) -> Result<HermiteParams, CliError> {
        match self {
            ModelInput::Params(p, _) => Ok(p),
            ModelInput::Cumulants(k) => Ok(factorial_cumulants_to_params(&k)?),
        }
    }
}

/// Parses a model document; shape errors are input errors, inadmissible
/// values are domain errors.
pub fn parse_model(text: &str) -> Result<ModelInput, CliError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("model document: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Input("model document must be a JSON object".into()))?;
    if obj.contains_key("a") {
        let doc: ModelDocument = serde_json::from_value(value.clone())
            .map_err(|e| CliError::Input(format!("model document: {e}")))?;
        if doc.order != doc.a.len() {
            return Err(CliError::Input(format!(
                "order {} does not match {} coefficients",
                doc.order,
                doc.a.len()
            )));
        }
        Ok(ModelInput::Params(
            HermiteParams::new(doc.a)?,
            doc.provenance,
        ))
    } else if obj.contains_key("kappa") {
        let doc: CumulantsDocument = serde_json::from_value(value.clone())
            .map_err(|e| CliError::Input(format!("cumulants document: {e}")))?;
        if doc.order != doc.kappa.len() {
            return Err(CliError::Input(format!(
                "order {} does not match {} cumulants",
                doc.order,
                doc.kappa.len()
            )));
        }
        Ok(ModelInput::Cumulants(FactorialCumulants::new(doc.kappa)?))
    } else {
        Err(CliError::Input(
            "model document needs an \"a\" or \"kappa\" array".into(),
        ))
    }
}

/// Reads counts in either accepted layout: one count per line, or a CSV
/// table with header `count,freq`.
pub fn parse_counts(text: &str) -> Result<CountHistogram, CliError> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    let is_csv = first
        .map(|l| l.replace(' ', "").eq_ignore_ascii_case("count,freq"))
        .unwrap_or(false);
    if is_csv {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_reader(text.trim_start().as_bytes());
        let mut pairs = Vec::new();
        for (line, record) in reader.deserialize::<(u64, u64)>().enumerate() {
            let pair =
                record.map_err(|e| CliError::Input(format!("histogram row {}: {e}", line + 1)))?;
            pairs.push(pair);
        }
        Ok(CountHistogram::from_pairs(pairs)?)
    } else {
        let counts = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.trim()
                    .parse::<u64>()
                    .map_err(|e| CliError::Input(format!("line {}: {:?}: {e}", i + 1, l.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CountHistogram::from_counts(&counts)?)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

fn command_line(args: &[OsString]) -> String {
    args.iter()
        .map(|a| a.to_string_lossy())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs the command line with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, &command_line(&args), out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "hermite: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main_with_std() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}

fn dispatch(
    command: Command,
    argv: &str,
    out: &mut impl Write,
    err: &mut impl Write,
) -> Result<i32, CliError> {
    match command {
        Command::Pmf { model, k_max, eps } => {
            let params = parse_model(&read(&model)?)?.into_params()?;
            let table = match k_max {
                Some(k) => pmf_table(&params, k)?,
                None => adaptive_pmf(&params, eps.unwrap_or(DEFAULT_EPS))?,
            };
            writeln!(out, "k,p").map_err(io_err)?;
            for (k, p) in table.probs().iter().enumerate() {
                writeln!(out, "{k},{p}").map_err(io_err)?;
            }
            writeln!(out, "tail_mass,{}", table.tail_mass()).map_err(io_err)?;
            Ok(0)
        }
        Command::Fit {
            data,
            order,
            method,
        } => {
            if order == 0 {
                return Err(CliError::Domain("--order must be at least 1".into()));
            }
            let hist = parse_counts(&read(&data)?)?;
            let provenance = Some(Provenance {
                source: Some(data.display().to_string()),
                seed: None,
                command: Some(argv.to_string()),
            });
            let doc = match method {
                Method::Mle => {
                    let fit = fit_mle(&hist, order, &FitOptions::default())?;
                    FitDocument {
                        model: ModelDocument::new(&fit.params, provenance),
                        method,
                        loglik: fit.loglik,
                        converged: fit.converged,
                        iterations: fit.iterations,
                        grad_norm: fit.grad_norm,
                        init: fit.init.into_coefficients(),
                    }
                }
                Method::Moments => {
                    let params = fit_moments(&hist, order)?;
                    let loglik = log_likelihood(&params, &hist)?;
                    let grad_norm = loglik_gradient(&params, &hist)
                        .map(|g| {
                            crate::estimation::projected_gradient(params.coefficients(), &g)
                                .iter()
                                .map(|v| v * v)
                                .sum::<f64>()
                                .sqrt()
                        })
                        .unwrap_or(f64::NAN);
                    FitDocument {
                        model: ModelDocument::new(&params, provenance),
                        method,
                        loglik,
                        converged: true,
                        iterations: 0,
                        grad_norm,
                        init: params.coefficients().to_vec(),
                    }
                }
            };
            writeln!(out, "{}", to_json(&doc)).map_err(io_err)?;
            if doc.converged {
                Ok(0)
            } else {
                let _ = writeln!(
                    err,
                    "hermite: fit did not converge (projected gradient {})",
                    doc.grad_norm
                );
                Ok(4)
            }
        }
        Command::Select { data, r_max, alpha } => {
            let hist = parse_counts(&read(&data)?)?;
            let trace = select_order(&hist, r_max, alpha, &FitOptions::default())?;
            let chosen = trace.chosen_fit();
            let doc = TraceDocument {
                alpha,
                chosen_order: trace.chosen_order,
                model: ModelDocument::new(
                    &chosen.params,
                    Some(Provenance {
                        source: Some(data.display().to_string()),
                        seed: None,
                        command: Some(argv.to_string()),
                    }),
                ),
                fits: trace
                    .fits
                    .iter()
                    .map(|f| OrderFitDocument {
                        order: f.params.order(),
                        a: f.params.coefficients().to_vec(),
                        loglik: f.loglik,
                        converged: f.converged,
                        iterations: f.iterations,
                    })
                    .collect(),
                tests: trace.tests.clone(),
            };
            writeln!(out, "{}", to_json(&doc)).map_err(io_err)?;
            Ok(0)
        }
        Command::Sample {
            model,
            n,
            seed,
            thin,
        } => {
            let params = parse_model(&read(&model)?)?.into_params()?;
            let mut batch = sample_hermite(&params, n, seed)?;
            if let Some(p) = thin {
                batch = thin_sample(&batch, p, seed.wrapping_add(THIN_SEED_OFFSET))?;
            }
            let mut text = String::with_capacity(batch.values.len() * 3);
            for v in &batch.values {
                text.push_str(&v.to_string());
                text.push('\n');
            }
            out.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(0)
        }
        Command::Thin { model, p } => {
            let input = parse_model(&read(&model)?)?;
            let provenance = match &input {
                ModelInput::Params(_, prov) => prov.clone(),
                ModelInput::Cumulants(_) => None,
            };
            let thinned = thin_params(&input.into_params()?, p)?;
            writeln!(
                out,
                "{}",
                to_json(&ModelDocument::new(&thinned, provenance))
            )
            .map_err(io_err)?;
            Ok(0)
        }
        Command::Convert { model, to } => {
            let input = parse_model(&read(&model)?)?;
            let text = match (to, input) {
                (Target::Params, ModelInput::Params(p, prov)) => {
                    to_json(&ModelDocument::new(&p, prov))
                }
                (Target::Params, ModelInput::Cumulants(k)) => to_json(&ModelDocument::new(
                    &factorial_cumulants_to_params(&k)?,
                    None,
                )),
                (Target::Cumulants, ModelInput::Cumulants(k)) => {
                    // validate before echoing
                    factorial_cumulants_to_params(&k)?;
                    to_json(&CumulantsDocument {
                        order: k.order(),
                        kappa: k.values().to_vec(),
                    })
                }
                (Target::Cumulants, input) => {
                    let k = params_to_factorial_cumulants(&input.into_params()?);
                    to_json(&CumulantsDocument {
                        order: k.order(),
                        kappa: k.values().to_vec(),
                    })
                }
                (Target::Summary, input) => {
                    let params = input.into_params()?;
                    let c = ordinary_cumulants(&params);
                    to_json(&SummaryDocument {
                        order: params.order(),
                        mean: c.mean,
                        variance: c.variance,
                        kappa3: c.kappa3,
                        kappa4: c.kappa4,
                        eta: thinning_invariants_of_params(&params).ok().map(|t| t.eta),
                    })
                }
            };
            writeln!(out, "{text}").map_err(io_err)?;
            Ok(0)
        }
        Command::Verify => {
            let outcomes = verify_fixtures()?;
            let mut failures = 0;
            for c in &outcomes {
                let status = if c.passed { "PASS" } else { "FAIL" };
                if !c.passed {
                    failures += 1;
                }
                writeln!(
                    out,
                    "{status} {} (error {:.3e}, tolerance {:.0e})",
                    c.name, c.error, c.tolerance
                )
                .map_err(io_err)?;
            }
            writeln!(out, "{} checks, {} failed", outcomes.len(), failures).map_err(io_err)?;
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}
