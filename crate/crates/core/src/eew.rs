//! Univariate exponentiated extended Weibull law `EEW(α, λ, ξ)`.
//!
//! `F(x) = (1 − e^{−λH(x; ξ)})^α` and
//! `f(x) = αλ h(x; ξ) e^{−λH(x; ξ)} (1 − e^{−λH(x; ξ)})^{α−1}` for `x > 0`.

use alloc::vec::Vec;

use rand::distr::Open01;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hfamily::HFamily;
use crate::math::{exp, expm1, ln, ln1mexp};

/// Past this value of `λH` the base cdf `1 − e^{−λH}` equals 1 in f64.
pub(crate) const SATURATION: f64 = 745.0;

/// `ln(1 − e^{−λH})`, the log of the α = 1 cdf, given `t = λH`.
#[inline]
pub(crate) fn ln_base_cdf(t: f64) -> f64 {
    if t > SATURATION {
        0.0
    } else {
        ln1mexp(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eew {
    alpha: f64,
    lambda: f64,
    family: HFamily,
}

impl Eew {
    pub fn new(alpha: f64, lambda: f64, family: HFamily) -> Result<Self> {
        check_param("alpha", alpha)?;
        check_param("lambda", lambda)?;
        Ok(Eew {
            alpha,
            lambda,
            family,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn family(&self) -> &HFamily {
        &self.family
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Eew::new(alpha, self.lambda, self.family)
    }

    #[inline]
    fn scaled(&self, x: f64) -> f64 {
        self.lambda * self.family.cumulative(x)
    }

    /// `F(x)`; zero for `x ≤ 0`.
    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        let t = self.scaled(x);
        if t > SATURATION {
            return 1.0;
        }
        exp(self.alpha * ln1mexp(t))
    }

    pub fn ln_cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        self.alpha * ln_base_cdf(self.scaled(x))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        exp(self.ln_pdf(x))
    }

    /// `ln f(x)` computed term by term; `−∞` for `x ≤ 0`.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        let t = self.scaled(x);
        let head = ln(self.alpha) + ln(self.lambda) + self.family.ln_rate(x) - t;
        if t > SATURATION {
            head
        } else {
            head + (self.alpha - 1.0) * ln1mexp(t)
        }
    }

    /// `F⁻¹(u) = H⁻¹(−ln(1 − u^{1/α}) / λ)` for `0 < u < 1`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain("u", u, "0 < u < 1"));
        }
        // 1 − u^{1/α} = −expm1(ln u / α)
        let y = -ln(-expm1(ln(u) / self.alpha)) / self.lambda;
        self.family.h_inverse(y)
    }

    /// One inverse-transform draw.
    ///
    /// # Panics
    ///
    /// Only if the generator inverse cannot bracket a finite target, which
    /// no registered family does.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile(u)
            .expect("generator inverse failed on a probability in (0, 1)")
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

pub(crate) fn check_param(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, value, "finite and > 0"))
    }
}
