//! Maximum likelihood fitting of [`Beew`] models.
//!
//! [`em_fit`] is the estimator; [`direct_fit`] maximizes the same
//! likelihood over all free parameters at once with a simplex search and
//! serves as its cross-check. [`observed_information`] turns a fit into
//! standard errors, and [`initial_guess`] supplies a starting point from the
//! marginals and the tie fraction.
//!
//! Free parameters are ordered `α1, α2, α3, λ, ξ…`; `λ` is omitted for
//! generators that pin it (`lfr`).

mod direct;
mod em;
mod info;
mod init;
mod likelihood;
mod sample;
pub mod simplex;

use alloc::vec::Vec;

pub use direct::direct_fit;
pub use em::{
    em_fit, estep, mstep_alphas, mstep_lambda, mstep_xi, LambdaRoot, XiStep, SHAPE_FLOOR,
};
pub use info::{log_scale_information, observed_information, Information};
pub use init::{embed_exponential, initial_guess, initial_xi};
pub use sample::{classify, ClassifiedSample};

use crate::beew::Beew;
use crate::error::{Error, Result};
use crate::gof::{criteria, CriteriaSet};
use crate::hfamily::{FamilyId, HFamily};

/// Conditional probabilities of the latent orderings.
///
/// For `x1 < x2`: `u1 = P(X1 = U1) = α1/(α1+α3)`, `u2 = P(X1 = U3)`. For
/// `x1 > x2`: `v1 = P(X2 = U2) = α2/(α2+α3)`, `v2 = P(X2 = U3)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Weights {
    pub u1: f64,
    pub u2: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iter: 2000,
            rel_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Em,
    Direct,
}

/// Conditions worth surfacing alongside the estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitNote {
    /// `α3` was driven to [`SHAPE_FLOOR`]: the data show no shared component.
    NoSharedComponent,
    /// At least one `ξ` simplex search hit its iteration cap.
    XiSearchNotConverged,
    /// The observed information was not positive definite; no standard errors.
    InformationNotPositiveDefinite,
}

impl FitNote {
    pub fn as_str(self) -> &'static str {
        match self {
            FitNote::NoSharedComponent => "no evidence of shared component",
            FitNote::XiSearchNotConverged => "xi search hit its iteration cap",
            FitNote::InformationNotPositiveDefinite => "observed information not positive definite",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub theta_hat: Beew,
    /// Standard errors in free-parameter order, `None` when the observed
    /// information could not be inverted.
    pub se: Option<Vec<f64>>,
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Number of free parameters.
    pub k: usize,
    pub n: usize,
    /// `None` when `n ≤ k + 1`.
    pub criteria: Option<CriteriaSet>,
    /// Observed log-likelihood after each iteration, starting value first.
    pub trace: Vec<f64>,
    pub notes: Vec<FitNote>,
    pub method: FitMethod,
}

impl FitReport {
    pub fn estimates(&self) -> Vec<f64> {
        free_parameters(&self.theta_hat)
    }

    pub fn parameter_names(&self) -> Vec<&'static str> {
        parameter_names(self.theta_hat.family().id())
    }
}

/// Names of the free parameters of a generator's bivariate model.
pub fn parameter_names(id: FamilyId) -> Vec<&'static str> {
    let mut names = alloc::vec!["alpha1", "alpha2", "alpha3"];
    if !id.lambda_fixed() {
        names.push("lambda");
    }
    names.extend_from_slice(id.xi_names());
    names
}

pub fn free_parameter_count(id: FamilyId) -> usize {
    3 + usize::from(!id.lambda_fixed()) + id.arity()
}

pub fn free_parameters(theta: &Beew) -> Vec<f64> {
    let mut v = theta.alphas().to_vec();
    if !theta.family().lambda_fixed() {
        v.push(theta.lambda());
    }
    v.extend_from_slice(theta.family().xi());
    v
}

pub fn from_free_parameters(id: FamilyId, values: &[f64]) -> Result<Beew> {
    let k = free_parameter_count(id);
    if values.len() != k {
        return Err(Error::XiArity {
            family: id.as_str(),
            expected: k,
            got: values.len(),
        });
    }
    let (lambda, xi) = if id.lambda_fixed() {
        (1.0, &values[3..])
    } else {
        (values[3], &values[4..])
    };
    let family = HFamily::new(id, xi)?;
    Beew::new(values[0], values[1], values[2], lambda, family)
}

/// Observed-data log-likelihood `Σ_{I1} ln f1 + Σ_{I2} ln f2 + Σ_{I0} ln f0`,
/// evaluated observation by observation from the model's branch densities.
///
/// Returns `−∞` when some observation has zero density.
pub fn loglik(theta: &Beew, sample: &ClassifiedSample) -> f64 {
    let pairs = sample.pairs();
    let mut total = 0.0;
    for (row, &(x1, x2)) in pairs.iter().enumerate() {
        let term = theta.ln_density(x1, x2, sample.region_of(row));
        if term.is_nan() || term == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        total += term;
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    sample: &ClassifiedSample,
    theta_hat: Beew,
    loglik: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
    mut notes: Vec<FitNote>,
    method: FitMethod,
) -> Result<FitReport> {
    let id = theta_hat.family().id();
    let k = free_parameter_count(id);
    let n = sample.n();
    let se = match observed_information(&theta_hat, sample) {
        Ok(info) => Some(info.se),
        Err(_) => {
            notes.push(FitNote::InformationNotPositiveDefinite);
            None
        }
    };
    Ok(FitReport {
        theta_hat,
        se,
        loglik,
        iterations,
        converged,
        k,
        n,
        criteria: criteria(k, n, loglik).ok(),
        trace,
        notes,
        method,
    })
}

/// Starting point from [`initial_guess`] followed by [`em_fit`].
pub fn fit(sample: &ClassifiedSample, id: FamilyId, options: &FitOptions) -> Result<FitReport> {
    let theta0 = initial_guess(sample, id)?;
    em_fit(sample, &theta0, options)
}
