//! Argument parsing and process-level behavior: where documents go and
//! which exit code a run ends with.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use beew::fit::FitOptions;
use beew::{FamilyId, Margin};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{
    cmd_compare, cmd_eval, cmd_fit, cmd_gof, cmd_simulate, parse_assignments, parse_theta,
    CommandError, CompareRequest, DataSpec, EvalRequest, FitRequest, GofRequest, Quantity,
    SimulateRequest,
};
use crate::data::to_csv;
use crate::report::{compare_table, report_table, to_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "beew",
    version,
    about = "Fit, simulate and assess bivariate exponentiated extended Weibull models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to paired data by EM.
    Fit(FitArgs),
    /// Draw pairs from a model and write them as CSV.
    Simulate(SimulateArgs),
    /// Evaluate the joint distribution at one point.
    Eval(EvalArgs),
    /// Fit a base and a full model and run a likelihood ratio test.
    Compare(CompareArgs),
    /// Log-likelihood, criteria and K-S tests of given parameters.
    Gof(GofArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Two-column delimited data file.
    #[arg(long)]
    pub data: PathBuf,
    /// Pairs with |x1 - x2| <= tie_eps * max(1, |x1|) count as ties.
    #[arg(long, default_value_t = 1e-9)]
    pub tie_eps: f64,
    /// Multiply every value by this factor after reading.
    #[arg(long, default_value_t = 1.0)]
    pub rescale: f64,
}

impl DataArgs {
    fn spec(&self) -> DataSpec {
        DataSpec {
            path: self.data.clone(),
            tie_eps: self.tie_eps,
            rescale: self.rescale,
        }
    }
}

#[derive(Debug, Args)]
pub struct EmArgs {
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    /// Stop when |change in loglik| < rel_tol * (1 + |loglik|).
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
}

impl EmArgs {
    fn options(&self) -> FitOptions {
        FitOptions {
            max_iter: self.max_iter,
            rel_tol: self.rel_tol,
        }
    }
}

/// Comma-separated free parameters: alpha1,alpha2,alpha3, then lambda
/// (not for lfr), then the generator parameters.
const THETA_HELP: &str = "alpha1,alpha2,alpha3[,lambda],generator parameters";

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub model: FamilyId,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub em: EmArgs,
    /// Override starting values, e.g. `alpha3=0.5,lambda=0.04`.
    #[arg(long)]
    pub init: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: FamilyId,
    #[arg(long, help = THETA_HELP, allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the CSV here (and a JSON summary to stdout) instead of the CSV
    /// to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum What {
    Pdf,
    Cdf,
    Survival,
    Hazard,
    Conditional,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Given {
    X1,
    X2,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: FamilyId,
    #[arg(long, help = THETA_HELP, allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x2: f64,
    #[arg(long, value_enum)]
    pub what: What,
    /// For `conditional`: the coordinate conditioned on.
    #[arg(long, value_enum, default_value = "x2")]
    pub given: Given,
    #[arg(long, default_value_t = 1e-9)]
    pub tie_eps: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub base: FamilyId,
    #[arg(long)]
    pub full: FamilyId,
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub em: EmArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    #[arg(long)]
    pub model: FamilyId,
    #[arg(long, help = THETA_HELP, allow_hyphen_values = true)]
    pub theta: String,
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CommandError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CommandError::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CommandError::Domain(format!("cannot write to stdout: {e}")))
        }
    }
}

fn execute(command: Command) -> Result<i32, CommandError> {
    match command {
        Command::Fit(a) => {
            let init = match &a.init {
                Some(text) => parse_assignments(text)?,
                None => Vec::new(),
            };
            let doc = cmd_fit(&FitRequest {
                data: a.data.spec(),
                model: a.model,
                options: a.em.options(),
                init,
            })?;
            eprint!("{}", report_table(&doc));
            emit(&to_json(&doc), a.out.as_deref())?;
            let converged = doc.em.as_ref().is_some_and(|e| e.converged);
            Ok(if converged {
                EXIT_OK
            } else {
                EXIT_NOT_CONVERGED
            })
        }
        Command::Simulate(a) => {
            let theta = parse_theta(a.model, &a.theta)?;
            let (pairs, doc) = cmd_simulate(&SimulateRequest {
                theta,
                n: a.n,
                seed: a.seed,
                out: a.out.clone(),
            });
            emit(&to_csv(&pairs), a.out.as_deref())?;
            if a.out.is_some() {
                emit(&to_json(&doc), None)?;
            }
            Ok(EXIT_OK)
        }
        Command::Eval(a) => {
            let doc = cmd_eval(&EvalRequest {
                theta: parse_theta(a.model, &a.theta)?,
                x1: a.x1,
                x2: a.x2,
                what: match a.what {
                    What::Pdf => Quantity::Pdf,
                    What::Cdf => Quantity::Cdf,
                    What::Survival => Quantity::Survival,
                    What::Hazard => Quantity::Hazard,
                    What::Conditional => Quantity::Conditional,
                },
                given: match a.given {
                    Given::X1 => Margin::First,
                    Given::X2 => Margin::Second,
                },
                tie_eps: a.tie_eps,
            })?;
            eprintln!(
                "{} = {} [{}, {}]",
                doc.what, doc.value, doc.region, doc.kind
            );
            emit(&to_json(&doc), a.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Compare(a) => {
            let doc = cmd_compare(&CompareRequest {
                data: a.data.spec(),
                base: a.base,
                full: a.full,
                options: a.em.options(),
            })?;
            eprint!("{}", compare_table(&doc));
            emit(&to_json(&doc), a.out.as_deref())?;
            let converged = [&doc.base, &doc.full]
                .iter()
                .all(|d| d.em.as_ref().is_some_and(|e| e.converged));
            Ok(if converged {
                EXIT_OK
            } else {
                EXIT_NOT_CONVERGED
            })
        }
        Command::Gof(a) => {
            let doc = cmd_gof(&GofRequest {
                data: a.data.spec(),
                theta: parse_theta(a.model, &a.theta)?,
            })?;
            eprint!("{}", report_table(&doc));
            emit(&to_json(&doc), a.out.as_deref())?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the program on `args` (program name first) and returns its exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
