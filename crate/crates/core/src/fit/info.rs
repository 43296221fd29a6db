//! Observed Fisher information and standard errors.

use alloc::vec;
use alloc::vec::Vec;

use crate::beew::Beew;
use crate::error::{Error, Result};
use crate::math::{abs, exp, ln, sqrt};

use super::likelihood::cached_loglik;
use super::sample::ClassifiedSample;
use super::{free_parameters, from_free_parameters};

#[derive(Debug, Clone, PartialEq)]
pub struct Information {
    /// Asymptotic covariance of the free parameters, row-major `k × k`.
    pub covariance: Vec<f64>,
    pub se: Vec<f64>,
}

impl Information {
    pub fn dim(&self) -> usize {
        self.se.len()
    }

    pub fn covariance_at(&self, i: usize, j: usize) -> f64 {
        self.covariance[i * self.dim() + j]
    }
}

/// Standard errors of the free parameters of `theta_hat` from the negative
/// Hessian of the log-likelihood.
pub fn observed_information(theta_hat: &Beew, sample: &ClassifiedSample) -> Result<Information> {
    let id = theta_hat.family().id();
    let loglik = |params: &[f64]| match from_free_parameters(id, params) {
        Ok(theta) => cached_loglik(sample, &theta),
        Err(_) => f64::NEG_INFINITY,
    };
    log_scale_information(loglik, &free_parameters(theta_hat))
}

/// Covariance of positive parameters from a log-likelihood.
///
/// The Hessian is taken by central differences in `φ = ln θ` with step
/// `1e-4 · (1 + |φ_i|)`, inverted, and mapped back with the delta method
/// `Cov(θ) = diag(θ) Cov(φ) diag(θ)`.
pub fn log_scale_information<F: Fn(&[f64]) -> f64>(
    loglik: F,
    theta: &[f64],
) -> Result<Information> {
    let k = theta.len();
    if theta.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::domain(
            "parameter",
            f64::NAN,
            "interior point with all parameters > 0",
        ));
    }
    let phi: Vec<f64> = theta.iter().map(|&t| ln(t)).collect();
    let steps: Vec<f64> = phi.iter().map(|&p| 1e-4 * (1.0 + abs(p))).collect();
    let mut point = phi.clone();
    let mut eval = |offsets: &[(usize, f64)]| {
        point.copy_from_slice(&phi);
        for &(i, d) in offsets {
            point[i] += d;
        }
        let natural: Vec<f64> = point.iter().map(|&p| exp(p)).collect();
        loglik(&natural)
    };

    let centre = eval(&[]);
    // information = −Hessian
    let mut info = vec![0.0; k * k];
    for i in 0..k {
        let hi = steps[i];
        let plus = eval(&[(i, hi)]);
        let minus = eval(&[(i, -hi)]);
        info[i * k + i] = -(plus - 2.0 * centre + minus) / (hi * hi);
        for j in 0..i {
            let hj = steps[j];
            let pp = eval(&[(i, hi), (j, hj)]);
            let pm = eval(&[(i, hi), (j, -hj)]);
            let mp = eval(&[(i, -hi), (j, hj)]);
            let mm = eval(&[(i, -hi), (j, -hj)]);
            let v = -(pp - pm - mp + mm) / (4.0 * hi * hj);
            info[i * k + j] = v;
            info[j * k + i] = v;
        }
    }
    if info.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotPositiveDefinite);
    }

    let cov_phi = invert_spd(&info, k)?;
    let mut covariance = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            covariance[i * k + j] = theta[i] * theta[j] * cov_phi[i * k + j];
        }
    }
    let se = (0..k).map(|i| sqrt(covariance[i * k + i])).collect();
    Ok(Information { covariance, se })
}

/// Inverse of a symmetric positive definite matrix through its Cholesky
/// factor; fails if the factorization breaks down.
pub(crate) fn invert_spd(a: &[f64], k: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let mut s = a[i * k + j];
            for p in 0..j {
                s -= l[i * k + p] * l[j * k + p];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::NotPositiveDefinite);
                }
                l[i * k + i] = sqrt(s);
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    // L⁻¹ by forward substitution, then A⁻¹ = L⁻ᵀ L⁻¹
    let mut linv = vec![0.0; k * k];
    for c in 0..k {
        for i in c..k {
            let mut s = if i == c { 1.0 } else { 0.0 };
            for p in c..i {
                s -= l[i * k + p] * linv[p * k + c];
            }
            linv[i * k + c] = s / l[i * k + i];
        }
    }
    let mut inv = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let s: f64 = (i..k).map(|p| linv[p * k + i] * linv[p * k + j]).sum();
            inv[i * k + j] = s;
            inv[j * k + i] = s;
        }
    }
    Ok(inv)
}
