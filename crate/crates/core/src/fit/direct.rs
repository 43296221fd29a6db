//! Simplex maximization of the observed likelihood over all free
//! parameters on the log scale.

use alloc::vec::Vec;

use crate::beew::Beew;
use crate::error::Result;
use crate::math::{abs, exp, ln};

use super::likelihood::cached_loglik;
use super::sample::ClassifiedSample;
use super::simplex::NelderMead;
use super::{
    finish_report, free_parameters, from_free_parameters, FitMethod, FitOptions, FitReport,
};

const MAX_RESTARTS: usize = 20;

/// Maximizes the likelihood from `theta0` with restarted Nelder–Mead.
///
/// The search restarts from its own optimum with a fresh simplex until a
/// restart gains less than `rel_tol · (1 + |ℓ|)`. `max_iter` caps each
/// individual simplex run.
pub fn direct_fit(
    sample: &ClassifiedSample,
    theta0: &Beew,
    options: &FitOptions,
) -> Result<FitReport> {
    let id = theta0.family().id();
    let objective = |z: &[f64]| {
        let values: Vec<f64> = z.iter().map(|&v| exp(v)).collect();
        match from_free_parameters(id, &values) {
            Ok(theta) => -cached_loglik(sample, &theta),
            Err(_) => f64::INFINITY,
        }
    };

    let mut z: Vec<f64> = free_parameters(theta0).iter().map(|&v| ln(v)).collect();
    let mut best = objective(&z);
    let mut trace = alloc::vec![-best];
    let mut iterations = 0;
    let mut converged = false;
    for restart in 0..MAX_RESTARTS {
        let nm = NelderMead {
            initial_step: if restart == 0 { 0.1 } else { 0.02 },
            xtol: 1e-10,
            ftol: 0.0,
            max_iter: options.max_iter.max(1) * 5,
        };
        let m = nm.minimize(&objective, &z);
        iterations += m.iterations;
        let gain = best - m.value;
        if m.value < best {
            best = m.value;
            z = m.x;
        }
        trace.push(-best);
        if m.converged && gain <= options.rel_tol * (1.0 + abs(best)) {
            converged = true;
            break;
        }
    }

    let values: Vec<f64> = z.iter().map(|&v| exp(v)).collect();
    let theta_hat = from_free_parameters(id, &values)?;
    let loglik = super::loglik(&theta_hat, sample);
    finish_report(
        sample,
        theta_hat,
        loglik,
        iterations,
        converged,
        trace,
        Vec::new(),
        FitMethod::Direct,
    )
}
