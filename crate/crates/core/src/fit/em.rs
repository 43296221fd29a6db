//! The EM algorithm.
//!
//! For `x1 < x2` the latent question is whether `X1` came from `U1` or from
//! the shared `U3`; for `x1 > x2`, whether `X2` came from `U2` or `U3`. Ties
//! are complete observations (`X1 = X2 = U3`). The conditional probabilities
//! of those events depend on the shapes only, so the E-step is four ratios.
//!
//! Each iteration then maximizes the pseudo log-likelihood conditionally:
//! `λ` by a safeguarded Newton solve of its score, `ξ` by a simplex search,
//! and finally the shapes in closed form.

use alloc::vec::Vec;

use crate::beew::Beew;
use crate::error::{Error, Result};
use crate::hfamily::HFamily;
use crate::math::{abs, exp, ln, sqrt};

use super::likelihood::Evaluated;
use super::sample::ClassifiedSample;
use super::simplex::NelderMead;
use super::{finish_report, FitMethod, FitNote, FitOptions, FitReport, Weights};

/// Shapes are kept at or above this value.
pub const SHAPE_FLOOR: f64 = 1e-8;

const MAX_BRACKET_STEPS: usize = 200;
const MAX_ROOT_STEPS: usize = 200;

/// E-step weights; they depend on the shapes only, not on the data.
pub fn estep(theta: &Beew) -> Weights {
    let [a1, a2, a3] = theta.alphas();
    let u1 = a1 / (a1 + a3);
    let v1 = a2 / (a2 + a3);
    Weights {
        u1,
        u2: 1.0 - u1,
        v1,
        v2: 1.0 - v1,
    }
}

/// Shape update at fixed `λ` and `ξ`.
///
/// `α̂1 = (u1 n1 + n2) / −[Σ_{I0} W(x) + Σ_{I1∪I2} W(x1)]`,
/// `α̂2 = (n1 + v1 n2) / −[Σ_{I0} W(x) + Σ_{I1∪I2} W(x2)]`,
/// `α̂3 = (n0 + u2 n1 + v2 n2) / −[Σ_{I0} W(x) + Σ_{I1} W(x1) + Σ_{I2} W(x2)]`,
/// with `W(x) = ln(1 − e^{−λH(x)}) < 0`. Results are floored at
/// [`SHAPE_FLOOR`].
pub fn mstep_alphas(
    sample: &ClassifiedSample,
    weights: &Weights,
    lambda: f64,
    family: &HFamily,
) -> Result<[f64; 3]> {
    alpha_update(&Evaluated::new(sample, family), weights, lambda)
}

pub(crate) fn alpha_update(ev: &Evaluated, weights: &Weights, lambda: f64) -> Result<[f64; 3]> {
    let s = ev.w_sums(lambda);
    let counts = ev.shape_counts(weights);
    let denominators = [
        s.tie + s.lower1 + s.upper1,
        s.tie + s.lower2 + s.upper2,
        s.tie + s.lower1 + s.upper2,
    ];
    let names = ["alpha1", "alpha2", "alpha3"];
    let mut out = [0.0; 3];
    for i in 0..3 {
        if !(denominators[i] < 0.0) || denominators[i].is_infinite() {
            return Err(Error::DegenerateMStep(names[i]));
        }
        out[i] = (counts[i] / -denominators[i]).max(SHAPE_FLOOR);
    }
    Ok(out)
}

/// A root of the `λ` score together with the bracket it was found in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaRoot {
    pub lambda: f64,
    pub lo: f64,
    pub hi: f64,
    pub score: f64,
}

/// Solves `∂ℓ_pseudo/∂λ = 0` at fixed shapes and `ξ`, starting from
/// `lambda_init`.
pub fn mstep_lambda(
    sample: &ClassifiedSample,
    alphas: [f64; 3],
    family: &HFamily,
    lambda_init: f64,
) -> Result<LambdaRoot> {
    lambda_root(&Evaluated::new(sample, family), alphas, lambda_init)
}

pub(crate) fn lambda_root(
    ev: &Evaluated,
    alphas: [f64; 3],
    lambda_init: f64,
) -> Result<LambdaRoot> {
    let score = |l: f64| ev.lambda_score(alphas, l);
    let (s0, _) = score(lambda_init);
    if s0 == 0.0 {
        return Ok(LambdaRoot {
            lambda: lambda_init,
            lo: lambda_init,
            hi: lambda_init,
            score: 0.0,
        });
    }
    // Score is positive as λ → 0⁺ and tends to −ΣH < 0 as λ → ∞.
    let (mut lo, mut hi) = (lambda_init, lambda_init);
    let mut steps = 0;
    if s0 > 0.0 {
        loop {
            hi *= 2.0;
            steps += 1;
            if score(hi).0 < 0.0 {
                break;
            }
            lo = hi;
            if steps == MAX_BRACKET_STEPS {
                return Err(Error::Bracket("lambda"));
            }
        }
    } else {
        loop {
            lo *= 0.5;
            steps += 1;
            if score(lo).0 > 0.0 {
                break;
            }
            hi = lo;
            if steps == MAX_BRACKET_STEPS {
                return Err(Error::Bracket("lambda"));
            }
        }
    }

    let tol = 1e-12 * ev.rate_terms().max(1.0);
    let mut x = sqrt(lo * hi);
    let (mut fx, mut dfx) = score(x);
    for _ in 0..MAX_ROOT_STEPS {
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if abs(fx) <= tol || hi - lo <= 4.0 * f64::EPSILON * x {
            break;
        }
        let newton = x - fx / dfx;
        x = if dfx < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            sqrt(lo * hi)
        };
        (fx, dfx) = score(x);
    }
    Ok(LambdaRoot {
        lambda: x,
        lo,
        hi,
        score: fx,
    })
}

/// Result of a `ξ` update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiStep {
    pub family: HFamily,
    pub converged: bool,
}

/// Maximizes the pseudo log-likelihood over `ξ` at fixed shapes and `λ` by a
/// simplex search on `ln ξ`, starting from `family`'s current parameters.
pub fn mstep_xi(
    sample: &ClassifiedSample,
    alphas: [f64; 3],
    lambda: f64,
    family: &HFamily,
) -> XiStep {
    if family.xi().is_empty() {
        return XiStep {
            family: *family,
            converged: true,
        };
    }
    let start: Vec<f64> = family.xi().iter().map(|&v| ln(v.max(1e-12))).collect();
    // The shape-only terms of the pseudo likelihood do not involve ξ.
    let weights = Weights::default();
    let objective = |z: &[f64]| -> f64 {
        let xi: Vec<f64> = z.iter().map(|&v| exp(v)).collect();
        match family.with_xi(&xi) {
            Ok(fam) => {
                let ev = Evaluated::new(sample, &fam);
                let s = ev.w_sums(lambda);
                -ev.pseudo(alphas, lambda, &weights, &s)
            }
            Err(_) => f64::INFINITY,
        }
    };
    let nm = NelderMead {
        initial_step: 0.05,
        xtol: 1e-7,
        ftol: 0.0,
        max_iter: 2000,
    };
    let best = nm.minimize(&objective, &start);
    let xi: Vec<f64> = best.x.iter().map(|&v| exp(v)).collect();
    match family.with_xi(&xi) {
        Ok(fam) if best.value <= objective(&start) => XiStep {
            family: fam,
            converged: best.converged,
        },
        _ => XiStep {
            family: *family,
            converged: false,
        },
    }
}

/// Runs EM from `theta0` until the observed log-likelihood changes by less
/// than `rel_tol · (1 + |ℓ|)` or `max_iter` iterations have run.
pub fn em_fit(sample: &ClassifiedSample, theta0: &Beew, options: &FitOptions) -> Result<FitReport> {
    let mut alphas = theta0.alphas();
    let mut lambda = theta0.lambda();
    let mut family = *theta0.family();
    let mut ev = Evaluated::new(sample, &family);
    let mut loglik = ev.observed(alphas, lambda, &ev.w_sums(lambda));
    let mut trace = Vec::with_capacity(64);
    trace.push(loglik);
    let mut notes = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < options.max_iter {
        iterations += 1;
        let it = iterations;
        let theta = Beew::new(alphas[0], alphas[1], alphas[2], lambda, family)
            .map_err(|e| e.at_iteration(it))?;
        let weights = estep(&theta);

        if !family.lambda_fixed() {
            let root = lambda_root(&ev, alphas, lambda).map_err(|e| e.at_iteration(it))?;
            // keep the old value if a non-concave score led to a worse point
            let before = ev.pseudo(alphas, lambda, &weights, &ev.w_sums(lambda));
            let after = ev.pseudo(alphas, root.lambda, &weights, &ev.w_sums(root.lambda));
            if after >= before {
                lambda = root.lambda;
            }
        }

        if !family.xi().is_empty() {
            let step = mstep_xi(sample, alphas, lambda, &family);
            if !step.converged && !notes.contains(&FitNote::XiSearchNotConverged) {
                notes.push(FitNote::XiSearchNotConverged);
            }
            family = step.family;
            ev = Evaluated::new(sample, &family);
        }

        alphas = alpha_update(&ev, &weights, lambda).map_err(|e| e.at_iteration(it))?;

        let next = ev.observed(alphas, lambda, &ev.w_sums(lambda));
        trace.push(next);
        let change = abs(next - loglik);
        loglik = next;
        if change < options.rel_tol * (1.0 + abs(loglik)) {
            converged = true;
            break;
        }
    }

    if alphas[2] <= SHAPE_FLOOR {
        notes.push(FitNote::NoSharedComponent);
    }
    let theta_hat = Beew::new(alphas[0], alphas[1], alphas[2], lambda, family)?;
    finish_report(
        sample,
        theta_hat,
        loglik,
        iterations,
        converged,
        trace,
        notes,
        FitMethod::Em,
    )
}
