//! Extended Weibull generators `H(x; ξ)`.
//!
//! An extended Weibull law has cdf `1 − e^{−λH(x; ξ)}` on `(0, ∞)` where `H`
//! is nonnegative, strictly increasing, vanishes at `0⁺` and diverges at
//! infinity. Six generators are registered; their ids and ξ names form the
//! vocabulary of the command line and of report files:
//!
//! | id     | `H(x; ξ)`                  | ξ                 | domain                          |
//! |--------|----------------------------|-------------------|---------------------------------|
//! | `exp`  | `x`                        | none              |                                 |
//! | `lfr`  | `βx + γx²/2` (λ fixed = 1) | `beta, gamma`     | `β ≥ 0, γ ≥ 0, β + γ > 0`       |
//! | `weib` | `x^β`                      | `beta`            | `β > 0`                         |
//! | `gomp` | `(e^{βx} − 1)/β`           | `beta`            | `β > 0`                         |
//! | `wg`   | `x^β (e^{γx^δ} − 1)`       | `beta, gamma, delta` | `β ≥ 0, γ > 0, δ > 0`        |
//! | `mwe`  | `β (e^{(x/β)^γ} − 1)`      | `beta, gamma`     | `β > 0, γ > 0`                  |
//!
//! Parameters are validated once, when an [`HFamily`] is built. The unchecked
//! evaluators ([`HFamily::cumulative`], [`HFamily::rate`],
//! [`HFamily::ln_rate`]) are what the likelihood code calls in its inner
//! loops.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::math::{abs, exp, expm1, ln, ln1p, powf, sqrt};

/// Identifier of a registered generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    Exp,
    Lfr,
    Weib,
    Gomp,
    Wg,
    Mwe,
}

impl FamilyId {
    pub const ALL: [FamilyId; 6] = [
        FamilyId::Exp,
        FamilyId::Lfr,
        FamilyId::Weib,
        FamilyId::Gomp,
        FamilyId::Wg,
        FamilyId::Mwe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::Exp => "exp",
            FamilyId::Lfr => "lfr",
            FamilyId::Weib => "weib",
            FamilyId::Gomp => "gomp",
            FamilyId::Wg => "wg",
            FamilyId::Mwe => "mwe",
        }
    }

    /// Conventional name of the bivariate sub-model built on this generator.
    pub fn model_name(self) -> &'static str {
        match self {
            FamilyId::Exp => "BGE",
            FamilyId::Lfr => "BGLFR",
            FamilyId::Weib => "BEW",
            FamilyId::Gomp => "BGG",
            FamilyId::Wg => "BEGWG",
            FamilyId::Mwe => "BEMWE",
        }
    }

    pub fn xi_names(self) -> &'static [&'static str] {
        match self {
            FamilyId::Exp => &[],
            FamilyId::Lfr => &["beta", "gamma"],
            FamilyId::Weib | FamilyId::Gomp => &["beta"],
            FamilyId::Wg => &["beta", "gamma", "delta"],
            FamilyId::Mwe => &["beta", "gamma"],
        }
    }

    pub fn arity(self) -> usize {
        self.xi_names().len()
    }

    /// `lfr` carries its scale in `β`; the EEW scale `λ` is pinned to 1.
    pub fn lambda_fixed(self) -> bool {
        matches!(self, FamilyId::Lfr)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownFamily(s.into()))
    }
}

/// A validated generator `H(x; ξ)` together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HFamily {
    id: FamilyId,
    xi: [f64; 3],
}

impl HFamily {
    /// Builds a generator, checking the arity and domain of `xi`.
    pub fn new(id: FamilyId, xi: &[f64]) -> Result<Self> {
        if xi.len() != id.arity() {
            return Err(Error::XiArity {
                family: id.as_str(),
                expected: id.arity(),
                got: xi.len(),
            });
        }
        let names = id.xi_names();
        let positive = |i: usize| -> Result<()> {
            if xi[i].is_finite() && xi[i] > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(names[i], xi[i], "finite and > 0"))
            }
        };
        let nonnegative = |i: usize| -> Result<()> {
            if xi[i].is_finite() && xi[i] >= 0.0 {
                Ok(())
            } else {
                Err(Error::domain(names[i], xi[i], "finite and >= 0"))
            }
        };
        match id {
            FamilyId::Exp => {}
            FamilyId::Lfr => {
                nonnegative(0)?;
                nonnegative(1)?;
                if xi[0] + xi[1] <= 0.0 {
                    return Err(Error::domain("beta + gamma", xi[0] + xi[1], "> 0"));
                }
            }
            FamilyId::Weib | FamilyId::Gomp => positive(0)?,
            FamilyId::Wg => {
                nonnegative(0)?;
                positive(1)?;
                positive(2)?;
            }
            FamilyId::Mwe => {
                positive(0)?;
                positive(1)?;
            }
        }
        let mut store = [0.0; 3];
        store[..xi.len()].copy_from_slice(xi);
        Ok(HFamily { id, xi: store })
    }

    pub fn exp() -> Self {
        HFamily {
            id: FamilyId::Exp,
            xi: [0.0; 3],
        }
    }

    pub fn linear_failure_rate(beta: f64, gamma: f64) -> Result<Self> {
        Self::new(FamilyId::Lfr, &[beta, gamma])
    }

    pub fn weibull(beta: f64) -> Result<Self> {
        Self::new(FamilyId::Weib, &[beta])
    }

    pub fn gompertz(beta: f64) -> Result<Self> {
        Self::new(FamilyId::Gomp, &[beta])
    }

    pub fn weibull_gompertz(beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        Self::new(FamilyId::Wg, &[beta, gamma, delta])
    }

    pub fn modified_weibull_extension(beta: f64, gamma: f64) -> Result<Self> {
        Self::new(FamilyId::Mwe, &[beta, gamma])
    }

    pub fn id(&self) -> FamilyId {
        self.id
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi[..self.id.arity()]
    }

    /// Same generator kind with new parameters.
    pub fn with_xi(&self, xi: &[f64]) -> Result<Self> {
        Self::new(self.id, xi)
    }

    pub fn lambda_fixed(&self) -> bool {
        self.id.lambda_fixed()
    }

    /// `H(x; ξ)`, rejecting `x ≤ 0`.
    pub fn h_eval(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(self.cumulative(x))
    }

    /// `h(x; ξ) = dH/dx`, rejecting `x ≤ 0`.
    pub fn h_deriv(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        Ok(self.rate(x))
    }

    /// `H⁻¹(y; ξ)` for `y ≥ 0`; `H⁻¹(0) = 0`.
    pub fn h_inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) || y.is_infinite() {
            return Err(Error::domain("y", y, "finite and >= 0"));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let [a, b, _] = self.xi;
        match self.id {
            FamilyId::Exp => Ok(y),
            FamilyId::Lfr => Ok(2.0 * y / (a + sqrt(a * a + 2.0 * b * y))),
            FamilyId::Weib => Ok(powf(y, 1.0 / a)),
            FamilyId::Gomp => Ok(ln1p(a * y) / a),
            FamilyId::Wg => invert_increasing(|x| self.cumulative(x), y),
            FamilyId::Mwe => Ok(a * powf(ln1p(y / a), 1.0 / b)),
        }
    }

    /// `H(x; ξ)` without the `x > 0` check.
    #[inline]
    pub fn cumulative(&self, x: f64) -> f64 {
        let [a, b, c] = self.xi;
        match self.id {
            FamilyId::Exp => x,
            FamilyId::Lfr => x * (a + 0.5 * b * x),
            FamilyId::Weib => powf(x, a),
            FamilyId::Gomp => expm1(a * x) / a,
            FamilyId::Wg => powf(x, a) * expm1(b * powf(x, c)),
            FamilyId::Mwe => a * expm1(powf(x / a, b)),
        }
    }

    /// `h(x; ξ)` without the `x > 0` check.
    #[inline]
    pub fn rate(&self, x: f64) -> f64 {
        let [a, b, _] = self.xi;
        match self.id {
            FamilyId::Exp => 1.0,
            FamilyId::Lfr => a + b * x,
            FamilyId::Weib => a * powf(x, a - 1.0),
            FamilyId::Gomp => exp(a * x),
            FamilyId::Mwe => {
                let s = powf(x / a, b);
                b * powf(x / a, b - 1.0) * exp(s)
            }
            FamilyId::Wg => exp(self.ln_rate(x)),
        }
    }

    /// `ln h(x; ξ)`, evaluated without forming `h` where it could overflow.
    #[inline]
    pub fn ln_rate(&self, x: f64) -> f64 {
        let [a, b, c] = self.xi;
        match self.id {
            FamilyId::Exp => 0.0,
            FamilyId::Lfr => ln(a + b * x),
            FamilyId::Weib => ln(a) + (a - 1.0) * ln(x),
            FamilyId::Gomp => a * x,
            FamilyId::Wg => {
                // h = x^{β−1} e^{s} [β(1 − e^{−s}) + γδx^δ],  s = γx^δ
                let xd = powf(x, c);
                let s = b * xd;
                (a - 1.0) * ln(x) + s + ln(a * -expm1(-s) + b * c * xd)
            }
            FamilyId::Mwe => {
                let r = x / a;
                ln(b) + (b - 1.0) * ln(r) + powf(r, b)
            }
        }
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("x", x, "finite and > 0"))
    }
}

const INITIAL_LO: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 200;
const MAX_BISECTIONS: usize = 200;

/// Solves `g(x) = y` for a strictly increasing `g` on `(0, ∞)` with
/// `g(0⁺) = 0` by bracketing and bisection.
///
/// The bracket starts at `[1e-12, 1]`; the upper end doubles until `g(hi) ≥ y`
/// (at most 200 times) and the lower end shrinks while `g(lo) > y`.
pub fn invert_increasing<G: Fn(f64) -> f64>(g: G, y: f64) -> Result<f64> {
    let mut lo = INITIAL_LO;
    let mut hi = 1.0;
    let mut doublings = 0;
    while !(g(hi) >= y) {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::NoConvergence("generator inverse bracket"));
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
    }
    while g(lo) > y {
        if lo < 1e-300 {
            return Ok(lo);
        }
        hi = lo;
        lo *= 1e-4;
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (glo, ghi) = (g(lo), g(hi));
    Ok(if abs(y - glo) <= abs(ghi - y) { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        abs(a - b) <= rel * abs(b).max(1e-300)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(HFamily::exp().h_eval(1.0).unwrap(), 1.0);
        assert_eq!(HFamily::weibull(2.0).unwrap().h_eval(3.0).unwrap(), 9.0);
        let g = HFamily::gompertz(1.0).unwrap().h_eval(1.0).unwrap();
        assert!(close(g, core::f64::consts::E - 1.0, 1e-14));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(HFamily::exp().h_deriv(5.0).unwrap(), 1.0);
        let lfr = HFamily::linear_failure_rate(0.5, 2.0).unwrap();
        assert_eq!(lfr.h_deriv(1.0).unwrap(), 2.5);
        let w = HFamily::weibull(3.0).unwrap().h_deriv(2.0).unwrap();
        assert!(close(w, 12.0, 1e-14));
        let fam = HFamily::weibull(3.0).unwrap();
        let eps = 1e-6 * 2.0;
        let fd = (fam.cumulative(2.0 + eps) - fam.cumulative(2.0 - eps)) / (2.0 * eps);
        assert!(close(fd, 12.0, 1e-8));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(HFamily::exp().h_inverse(0.7).unwrap(), 0.7);
        let w = HFamily::weibull(2.0).unwrap().h_inverse(9.0).unwrap();
        assert!(close(w, 3.0, 1e-15));
        // x(e^x − 1) = e − 1 has the root x = 1
        let wg = HFamily::weibull_gompertz(1.0, 1.0, 1.0).unwrap();
        let y = core::f64::consts::E - 1.0;
        let x = wg.h_inverse(y).unwrap();
        assert!(close(x, 1.0, 1e-12));
        assert!(close(wg.cumulative(x), y, 1e-12));
        let y = 1.7182818;
        assert!(close(wg.cumulative(wg.h_inverse(y).unwrap()), y, 1e-12));
        assert_eq!(wg.h_inverse(0.0).unwrap(), 0.0);
    }

    #[test]
    fn inverse_of_tiny_and_huge_values() {
        let wg = HFamily::weibull_gompertz(0.5, 2.0, 1.5).unwrap();
        for &x in &[1e-9, 1e-4, 0.3, 4.0] {
            let y = wg.cumulative(x);
            assert!(close(wg.h_inverse(y).unwrap(), x, 1e-10), "x = {x}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(HFamily::exp().h_eval(0.0).is_err());
        assert!(HFamily::exp().h_eval(-1.0).is_err());
        assert!(HFamily::exp().h_deriv(f64::NAN).is_err());
        assert!(HFamily::exp().h_inverse(-0.1).is_err());
        assert!(HFamily::weibull(0.0).is_err());
        assert!(HFamily::weibull(-1.0).is_err());
        assert!(HFamily::gompertz(f64::INFINITY).is_err());
        assert!(HFamily::linear_failure_rate(0.0, 0.0).is_err());
        assert!(HFamily::linear_failure_rate(0.0, 1.0).is_ok());
        assert!(HFamily::weibull_gompertz(0.0, 1.0, 1.0).is_ok());
        assert!(HFamily::weibull_gompertz(1.0, 0.0, 1.0).is_err());
        assert!(HFamily::modified_weibull_extension(1.0, -2.0).is_err());
        assert!(matches!(
            HFamily::new(FamilyId::Wg, &[1.0]),
            Err(Error::XiArity {
                expected: 3,
                got: 1,
                ..
            })
        ));
    }

    #[test]
    fn ids_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.as_str().parse::<FamilyId>().unwrap(), id);
        }
        assert!("frechet".parse::<FamilyId>().is_err());
        assert!(FamilyId::Lfr.lambda_fixed());
        assert!(!FamilyId::Weib.lambda_fixed());
    }

    #[test]
    fn ln_rate_agrees_with_rate() {
        let fams = [
            HFamily::exp(),
            HFamily::linear_failure_rate(0.5, 2.0).unwrap(),
            HFamily::weibull(0.7).unwrap(),
            HFamily::gompertz(0.3).unwrap(),
            HFamily::weibull_gompertz(0.5, 1.5, 0.8).unwrap(),
            HFamily::modified_weibull_extension(2.0, 1.3).unwrap(),
        ];
        for fam in fams {
            for &x in &[0.01, 0.5, 1.0, 3.0] {
                assert!(
                    close(exp(fam.ln_rate(x)), fam.rate(x), 1e-12),
                    "{fam:?} {x}"
                );
            }
        }
    }
}
