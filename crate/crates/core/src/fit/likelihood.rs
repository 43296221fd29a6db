//! Log-likelihood evaluation with the generator pre-evaluated at the data.
//!
//! Every quantity the EM steps need is a function of `H` and `ln h` at the
//! observations plus a handful of sums of `W(x) = ln(1 − e^{−λH(x)})`, so
//! the generator is evaluated once per ξ and reused across λ and α updates.

use alloc::vec::Vec;

use crate::beew::Beew;
use crate::eew::ln_base_cdf;
use crate::hfamily::HFamily;
use crate::math::{expm1, h_over_expm1, ln};

use super::sample::ClassifiedSample;
use super::Weights;

/// Sums of `W` over the five observation groups.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct WSums {
    /// `Σ_{I0} W(x_i)`
    pub tie: f64,
    /// `Σ_{I1} W(x_1i)`
    pub lower1: f64,
    /// `Σ_{I1} W(x_2i)`
    pub lower2: f64,
    /// `Σ_{I2} W(x_1i)`
    pub upper1: f64,
    /// `Σ_{I2} W(x_2i)`
    pub upper2: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Evaluated {
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
    tie_h: Vec<f64>,
    lower_h: Vec<(f64, f64)>,
    upper_h: Vec<(f64, f64)>,
    sum_ln_rate: f64,
    sum_h: f64,
}

impl Evaluated {
    pub fn new(sample: &ClassifiedSample, family: &HFamily) -> Self {
        let pairs = sample.pairs();
        let mut sum_ln_rate = 0.0;
        let mut sum_h = 0.0;
        let mut visit = |x: f64| {
            let h = family.cumulative(x);
            sum_ln_rate += family.ln_rate(x);
            sum_h += h;
            h
        };
        let tie_h: Vec<f64> = sample
            .tie_rows()
            .iter()
            .map(|&r| visit(sample.tie_value(r)))
            .collect();
        let mut pair_h = |rows: &[usize]| -> Vec<(f64, f64)> {
            rows.iter()
                .map(|&r| {
                    let (x1, x2) = pairs[r];
                    (visit(x1), visit(x2))
                })
                .collect()
        };
        let lower_h = pair_h(sample.lower_rows());
        let upper_h = pair_h(sample.upper_rows());
        Evaluated {
            n0: tie_h.len() as f64,
            n1: lower_h.len() as f64,
            n2: upper_h.len() as f64,
            tie_h,
            lower_h,
            upper_h,
            sum_ln_rate,
            sum_h,
        }
    }

    /// Number of `h` factors in the likelihood, `n0 + 2n1 + 2n2`.
    pub fn rate_terms(&self) -> f64 {
        self.n0 + 2.0 * (self.n1 + self.n2)
    }

    pub fn w_sums(&self, lambda: f64) -> WSums {
        let w = |h: f64| ln_base_cdf(lambda * h);
        let mut s = WSums {
            tie: self.tie_h.iter().map(|&h| w(h)).sum(),
            ..WSums::default()
        };
        for &(h1, h2) in &self.lower_h {
            s.lower1 += w(h1);
            s.lower2 += w(h2);
        }
        for &(h1, h2) in &self.upper_h {
            s.upper1 += w(h1);
            s.upper2 += w(h2);
        }
        s
    }

    /// Terms shared by the observed and pseudo log-likelihoods.
    fn common(&self, alpha: [f64; 3], lambda: f64, s: &WSums) -> f64 {
        let [a1, a2, a3] = alpha;
        self.rate_terms() * ln(lambda) + self.sum_ln_rate - lambda * self.sum_h
            + (a1 + a2 + a3 - 1.0) * s.tie
            + (a1 + a3 - 1.0) * s.lower1
            + (a2 - 1.0) * s.lower2
            + (a1 - 1.0) * s.upper1
            + (a2 + a3 - 1.0) * s.upper2
    }

    /// `Σ_{I1} ln f1 + Σ_{I2} ln f2 + Σ_{I0} ln f0`.
    pub fn observed(&self, alpha: [f64; 3], lambda: f64, s: &WSums) -> f64 {
        let [a1, a2, a3] = alpha;
        let mut shapes = 0.0;
        if self.n0 > 0.0 {
            shapes += self.n0 * ln(a3);
        }
        if self.n1 > 0.0 {
            shapes += self.n1 * (ln(a1 + a3) + ln(a2));
        }
        if self.n2 > 0.0 {
            shapes += self.n2 * (ln(a1) + ln(a2 + a3));
        }
        let value = shapes + self.common(alpha, lambda, s);
        if value.is_nan() {
            f64::NEG_INFINITY
        } else {
            value
        }
    }

    /// Expected complete-data log-likelihood given the E-step weights.
    pub fn pseudo(&self, alpha: [f64; 3], lambda: f64, weights: &Weights, s: &WSums) -> f64 {
        let [c1, c2, c3] = self.shape_counts(weights);
        let [a1, a2, a3] = alpha;
        let mut shapes = 0.0;
        for (c, a) in [(c1, a1), (c2, a2), (c3, a3)] {
            if c > 0.0 {
                shapes += c * ln(a);
            }
        }
        let value = shapes + self.common(alpha, lambda, s);
        if value.is_nan() {
            f64::NEG_INFINITY
        } else {
            value
        }
    }

    /// Expected number of observations attributed to each latent component:
    /// `(u1 n1 + n2, n1 + v1 n2, n0 + u2 n1 + v2 n2)`.
    pub fn shape_counts(&self, w: &Weights) -> [f64; 3] {
        [
            w.u1 * self.n1 + self.n2,
            self.n1 + w.v1 * self.n2,
            self.n0 + w.u2 * self.n1 + w.v2 * self.n2,
        ]
    }

    /// `∂ℓ/∂λ` and `∂²ℓ/∂λ²` at fixed shapes and ξ.
    ///
    /// The score is `(n0 + 2n1 + 2n2)/λ + Σ (a − 1) H e^{−λH}/(1 − e^{−λH})
    /// − ΣH`, with `a` the shape attached to each coordinate.
    pub fn lambda_score(&self, alpha: [f64; 3], lambda: f64) -> (f64, f64) {
        let [a1, a2, a3] = alpha;
        let mut score = self.rate_terms() / lambda - self.sum_h;
        let mut curvature = -self.rate_terms() / (lambda * lambda);
        let mut add = |coef: f64, h: f64| {
            let t = lambda * h;
            score += coef * h_over_expm1(h, t);
            // d/dλ [H/(e^{λH} − 1)] = −H² / ((e^{t} − 1)(1 − e^{−t}))
            curvature -= coef * h * h / (expm1(t) * -expm1(-t));
        };
        for &h in &self.tie_h {
            add(a1 + a2 + a3 - 1.0, h);
        }
        for &(h1, h2) in &self.lower_h {
            add(a1 + a3 - 1.0, h1);
            add(a2 - 1.0, h2);
        }
        for &(h1, h2) in &self.upper_h {
            add(a1 - 1.0, h1);
            add(a2 + a3 - 1.0, h2);
        }
        (score, curvature)
    }
}

/// Observed-data log-likelihood through the cached path.
pub(crate) fn cached_loglik(sample: &ClassifiedSample, theta: &Beew) -> f64 {
    let ev = Evaluated::new(sample, theta.family());
    let sums = ev.w_sums(theta.lambda());
    ev.observed(theta.alphas(), theta.lambda(), &sums)
}
