//! The bivariate law `BEEW(α1, α2, α3, λ, ξ)`.
//!
//! With `U_k ~ EEW(α_k, λ, ξ)` independent, `X1 = max(U1, U3)` and
//! `X2 = max(U2, U3)`. The law puts mass `α3 / (α1 + α2 + α3)` on the
//! diagonal `x1 = x2` (the event that `U3` is the largest) and spreads the
//! rest with a surface density on either side of it.

use alloc::vec::Vec;

use rand::Rng;

use crate::eew::{check_param, ln_base_cdf, Eew};
use crate::error::{Error, Result};
use crate::hfamily::HFamily;
use crate::math::{abs, exp, ln, powf};

/// One of the two coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Margin {
    First,
    Second,
}

impl Margin {
    pub fn other(self) -> Margin {
        match self {
            Margin::First => Margin::Second,
            Margin::Second => Margin::First,
        }
    }
}

/// Which branch of the joint density a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    X1Less,
    X2Less,
    Diagonal,
}

impl Region {
    /// `x1` and `x2` tie when `|x1 − x2| ≤ tie_eps · max(1, |x1|)`.
    pub fn classify(x1: f64, x2: f64, tie_eps: f64) -> Region {
        if abs(x1 - x2) <= tie_eps * abs(x1).max(1.0) {
            Region::Diagonal
        } else if x1 < x2 {
            Region::X1Less
        } else {
            Region::X2Less
        }
    }
}

/// A joint density value tagged with its branch.
///
/// Off the diagonal `value` is a surface density (per unit area); on the
/// diagonal it is the line density `f0` of the singular part (per unit
/// length). The two must not be summed together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateEvaluation {
    pub region: Region,
    pub value: f64,
}

impl BivariateEvaluation {
    pub fn is_line_density(&self) -> bool {
        self.region == Region::Diagonal
    }
}

/// Conditional law of `X_i` given `X_j = x_j` evaluated at `x_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditional {
    /// Density of the continuous part (`x_i ≠ x_j`).
    Density(f64),
    /// Probability of the point mass at `x_i = x_j`.
    Atom(f64),
}

impl Conditional {
    pub fn value(&self) -> f64 {
        match *self {
            Conditional::Density(v) | Conditional::Atom(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beew {
    alpha: [f64; 3],
    lambda: f64,
    family: HFamily,
}

impl Beew {
    pub fn new(
        alpha1: f64,
        alpha2: f64,
        alpha3: f64,
        lambda: f64,
        family: HFamily,
    ) -> Result<Self> {
        check_param("alpha1", alpha1)?;
        check_param("alpha2", alpha2)?;
        check_param("alpha3", alpha3)?;
        check_param("lambda", lambda)?;
        Ok(Beew {
            alpha: [alpha1, alpha2, alpha3],
            lambda,
            family,
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha[0]
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha[1]
    }

    pub fn alpha3(&self) -> f64 {
        self.alpha[2]
    }

    pub fn alphas(&self) -> [f64; 3] {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn family(&self) -> &HFamily {
        &self.family
    }

    pub fn total_shape(&self) -> f64 {
        self.alpha[0] + self.alpha[1] + self.alpha[2]
    }

    /// Probability of a tie, `α3 / (α1 + α2 + α3)`.
    pub fn singular_weight(&self) -> f64 {
        self.alpha[2] / self.total_shape()
    }

    /// Same model with the coordinates swapped (`α1 ↔ α2`).
    pub fn swapped(&self) -> Beew {
        Beew {
            alpha: [self.alpha[1], self.alpha[0], self.alpha[2]],
            ..*self
        }
    }

    fn eew(&self, alpha: f64) -> Eew {
        Eew::new(alpha, self.lambda, self.family).expect("validated shape")
    }

    /// The latent component `U_k`.
    ///
    /// # Panics
    ///
    /// If `k` is not 1, 2 or 3.
    pub fn component(&self, k: usize) -> Eew {
        assert!((1..=3).contains(&k), "component index {k} outside 1..=3");
        self.eew(self.alpha[k - 1])
    }

    /// `X1 ~ EEW(α1 + α3)`, `X2 ~ EEW(α2 + α3)`.
    pub fn marginal(&self, which: Margin) -> Eew {
        let own = match which {
            Margin::First => self.alpha[0],
            Margin::Second => self.alpha[1],
        };
        self.eew(own + self.alpha[2])
    }

    /// Law of `max(X1, X2)`, which is `EEW(α1 + α2 + α3)`.
    pub fn max_law(&self) -> Eew {
        self.eew(self.total_shape())
    }

    #[inline]
    fn ln_base(&self, x: f64) -> f64 {
        ln_base_cdf(self.lambda * self.family.cumulative(x))
    }

    /// `F(x1, x2) = F_EEW(x1; α1) F_EEW(x2; α2) F_EEW(min(x1, x2); α3)`.
    pub fn joint_cdf(&self, x1: f64, x2: f64) -> f64 {
        let z = x1.min(x2);
        if !(z > 0.0) {
            return 0.0;
        }
        let [a1, a2, a3] = self.alpha;
        exp(a1 * self.ln_base(x1) + a2 * self.ln_base(x2) + a3 * self.ln_base(z))
    }

    /// The same joint cdf written branch by branch through the univariate
    /// laws: `F(x1; α1+α3) F(x2; α2)` below the diagonal, its mirror above
    /// it and `F(x; α1+α2+α3)` on it.
    pub fn joint_cdf_branches(&self, x1: f64, x2: f64) -> f64 {
        let [a1, a2, a3] = self.alpha;
        if x1 < x2 {
            self.eew(a1 + a3).cdf(x1) * self.eew(a2).cdf(x2)
        } else if x2 < x1 {
            self.eew(a1).cdf(x1) * self.eew(a2 + a3).cdf(x2)
        } else {
            self.max_law().cdf(x1)
        }
    }

    /// `ln f1(x1, x2) = ln f_EEW(x1; α1+α3) + ln f_EEW(x2; α2)`, the branch
    /// for `x1 < x2`.
    pub fn ln_f1(&self, x1: f64, x2: f64) -> f64 {
        let [a1, a2, a3] = self.alpha;
        self.eew(a1 + a3).ln_pdf(x1) + self.eew(a2).ln_pdf(x2)
    }

    /// `ln f2(x1, x2) = ln f_EEW(x1; α1) + ln f_EEW(x2; α2+α3)`, the branch
    /// for `x2 < x1`.
    pub fn ln_f2(&self, x1: f64, x2: f64) -> f64 {
        let [a1, a2, a3] = self.alpha;
        self.eew(a1).ln_pdf(x1) + self.eew(a2 + a3).ln_pdf(x2)
    }

    /// `ln f0(x)`, the diagonal line density
    /// `α3 λ h(x) (1 − e^{−λH})^{α1+α2+α3−1} e^{−λH}`.
    pub fn ln_f0(&self, x: f64) -> f64 {
        ln(self.singular_weight()) + self.max_law().ln_pdf(x)
    }

    /// Log of the branch density selected by `region`.
    pub fn ln_density(&self, x1: f64, x2: f64, region: Region) -> f64 {
        match region {
            Region::X1Less => self.ln_f1(x1, x2),
            Region::X2Less => self.ln_f2(x1, x2),
            Region::Diagonal => self.ln_f0(0.5 * (x1 + x2)),
        }
    }

    /// The joint density, dispatched on the tie predicate.
    pub fn joint_pdf(&self, x1: f64, x2: f64, tie_eps: f64) -> BivariateEvaluation {
        let region = Region::classify(x1, x2, tie_eps);
        BivariateEvaluation {
            region,
            value: exp(self.ln_density(x1, x2, region)),
        }
    }

    /// Conditional law of `X_i` (`target`) given the other coordinate `= x_j`.
    ///
    /// Off the diagonal this is the ratio of the joint density to the
    /// marginal density of `X_j`; on it, the atom
    /// `α3 / (α_j + α3) · (1 − e^{−λH(x_j)})^{α_i}`.
    pub fn conditional(
        &self,
        target: Margin,
        xi: f64,
        xj: f64,
        tie_eps: f64,
    ) -> Result<Conditional> {
        let given = target.other();
        let ln_marginal = self.marginal(given).ln_pdf(xj);
        if ln_marginal == f64::NEG_INFINITY {
            return Err(Error::Underflow(
                "marginal density of the conditioning variable",
            ));
        }
        let (x1, x2) = match target {
            Margin::First => (xi, xj),
            Margin::Second => (xj, xi),
        };
        let region = Region::classify(x1, x2, tie_eps);
        if region == Region::Diagonal {
            let ai = match target {
                Margin::First => self.alpha[0],
                Margin::Second => self.alpha[1],
            };
            let aj = match given {
                Margin::First => self.alpha[0],
                Margin::Second => self.alpha[1],
            };
            let a3 = self.alpha[2];
            let atom = a3 / (aj + a3) * exp(ai * self.ln_base(xj));
            return Ok(Conditional::Atom(atom));
        }
        Ok(Conditional::Density(exp(
            self.ln_density(x1, x2, region) - ln_marginal
        )))
    }

    /// `S(x1, x2) = 1 − F_X1(x1) − F_X2(x2) + F(x1, x2)`.
    pub fn joint_survival(&self, x1: f64, x2: f64) -> f64 {
        1.0 - self.marginal(Margin::First).cdf(x1) - self.marginal(Margin::Second).cdf(x2)
            + self.joint_cdf(x1, x2)
    }

    /// Basu's bivariate failure rate `f(x1, x2) / S(x1, x2)`, tagged with the
    /// density branch used.
    pub fn hazard(&self, x1: f64, x2: f64, tie_eps: f64) -> Result<BivariateEvaluation> {
        let survival = self.joint_survival(x1, x2);
        if !(survival > 0.0) {
            return Err(Error::Underflow("joint survival"));
        }
        let density = self.joint_pdf(x1, x2, tie_eps);
        Ok(BivariateEvaluation {
            region: density.region,
            value: density.value / survival,
        })
    }

    pub fn decompose(&self) -> Decomposition {
        Decomposition { model: *self }
    }

    /// Marshall–Olkin copula parameters `θ_i = α3 / (α_i + α3)`.
    pub fn copula_thetas(&self) -> (f64, f64) {
        let [a1, a2, a3] = self.alpha;
        (a3 / (a1 + a3), a3 / (a2 + a3))
    }

    /// Joint cdf assembled as `C_{θ1,θ2}(F_X1(x1), F_X2(x2))`.
    pub fn mo_copula_cdf(&self, x1: f64, x2: f64) -> f64 {
        let (t1, t2) = self.copula_thetas();
        mo_copula(
            self.marginal(Margin::First).cdf(x1),
            self.marginal(Margin::Second).cdf(x2),
            t1,
            t2,
        )
    }

    /// cdf of `max(X1, X2)`: `(1 − e^{−λH(y)})^{α1+α2+α3}`.
    pub fn max_cdf(&self, y: f64) -> f64 {
        self.max_law().cdf(y)
    }

    /// cdf of `min(X1, X2)`:
    /// `B^{α1+α3} + B^{α2+α3} − B^{α1+α2+α3}` with `B = 1 − e^{−λH(t)}`.
    pub fn min_cdf(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        let l = self.ln_base(t);
        let [a1, a2, a3] = self.alpha;
        exp((a1 + a3) * l) + exp((a2 + a3) * l) - exp((a1 + a2 + a3) * l)
    }

    /// One draw of `(max(U1, U3), max(U2, U3))`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let u1 = self.component(1).draw(rng);
        let u2 = self.component(2).draw(rng);
        let u3 = self.component(3).draw(rng);
        (u1.max(u3), u2.max(u3))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// `C(u1, u2) = u1^{1−θ1} u2^{1−θ2} min(u1^{θ1}, u2^{θ2})`.
pub fn mo_copula(u1: f64, u2: f64, theta1: f64, theta2: f64) -> f64 {
    powf(u1, 1.0 - theta1) * powf(u2, 1.0 - theta2) * powf(u1, theta1).min(powf(u2, theta2))
}

/// Split of the joint cdf into absolutely continuous and singular parts,
/// `F = w_abs F_a + w_sing F_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    model: Beew,
}

impl Decomposition {
    pub fn singular_weight(&self) -> f64 {
        self.model.singular_weight()
    }

    pub fn absolute_weight(&self) -> f64 {
        let [a1, a2, _] = self.model.alpha;
        (a1 + a2) / self.model.total_shape()
    }

    /// `F_s(x1, x2) = (1 − e^{−λH(z)})^{α1+α2+α3}`, `z = min(x1, x2)`.
    pub fn singular_cdf(&self, x1: f64, x2: f64) -> f64 {
        self.model.max_cdf(x1.min(x2))
    }

    /// `F_a = (Σα / (α1+α2)) F − (α3 / (α1+α2)) F_s`.
    pub fn absolutely_continuous_cdf(&self, x1: f64, x2: f64) -> f64 {
        let [a1, a2, a3] = self.model.alpha;
        let total = a1 + a2 + a3;
        let base = a1 + a2;
        total / base * self.model.joint_cdf(x1, x2) - a3 / base * self.singular_cdf(x1, x2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Beew {
        Beew::new(1.0, 1.0, 1.0, 1.0, HFamily::exp()).unwrap()
    }

    fn near(a: f64, b: f64, tol: f64) -> bool {
        abs(a - b) <= tol
    }

    #[test]
    fn joint_cdf_examples() {
        let m = unit();
        assert!(near(m.joint_cdf(1.0, 1.0), 0.252_580_457_827_647_17, 1e-15));
        assert!(near(m.joint_cdf(1.0, 2.0), 0.345_499_615_504_109_06, 1e-15));
        assert_eq!(m.joint_cdf(0.0, 2.0), 0.0);
        assert!(near(m.joint_cdf(1.0, 1.0), m.max_law().cdf(1.0), 1e-15));
        // x2 → ∞ gives the first marginal
        assert!(near(
            m.joint_cdf(0.7, 1e3),
            m.marginal(Margin::First).cdf(0.7),
            1e-15
        ));
    }

    #[test]
    fn joint_pdf_examples() {
        let m = unit();
        let e = m.joint_pdf(0.5, 1.5, 0.0);
        assert_eq!(e.region, Region::X1Less);
        // f1 = f_EEW(0.5; 2) f_EEW(1.5; 1) assembled by hand
        let by_hand = 2.0 * exp(-0.5) * (1.0 - exp(-0.5)) * exp(-1.5);
        assert!(near(e.value, by_hand, 1e-15));
        let d = m.joint_pdf(1.0, 1.0, 0.0);
        assert!(d.is_line_density());
        assert!(near(d.value, 0.146_995_943_066_080_88, 1e-15));
        assert_eq!(m.joint_pdf(2.0, 1.0, 0.0).region, Region::X2Less);
    }

    #[test]
    fn label_swap_symmetry() {
        let m = Beew::new(0.7, 0.7, 1.3, 0.5, HFamily::weibull(1.4).unwrap()).unwrap();
        for &(a, b) in &[(0.2, 0.9), (1.0, 3.0), (0.01, 0.02)] {
            let f1 = m.joint_pdf(a, b, 0.0).value;
            let f2 = m.joint_pdf(b, a, 0.0).value;
            assert!(near(f1, f2, 1e-15 * f1.max(1.0)));
        }
    }

    #[test]
    fn tie_predicate() {
        assert_eq!(Region::classify(1.0, 1.0000001, 1e-6), Region::Diagonal);
        assert_eq!(Region::classify(1.0, 1.0000001, 0.0), Region::X1Less);
        assert_eq!(Region::classify(1000.0, 1000.0001, 1e-6), Region::Diagonal);
    }

    #[test]
    fn marginal_examples() {
        let m = unit();
        assert_eq!(m.marginal(Margin::First).alpha(), 2.0);
        let m = Beew::new(0.3, 0.7, 1.1, 1.0, HFamily::exp()).unwrap();
        assert!(near(m.marginal(Margin::Second).alpha(), 1.8, 1e-15));
        let tiny = Beew::new(1.3, 0.4, 1e-14, 1.0, HFamily::exp()).unwrap();
        assert!(near(tiny.marginal(Margin::First).alpha(), 1.3, 1e-13));
    }

    #[test]
    fn conditional_examples() {
        let m = unit();
        // x2 < x1: conditional of X1 is f_EEW(x1; α1), free of x2
        let c = m.conditional(Margin::First, 2.0, 0.5, 0.0).unwrap();
        let c2 = m.conditional(Margin::First, 2.0, 1.5, 0.0).unwrap();
        let expected = m.component(1).pdf(2.0);
        assert!(matches!(c, Conditional::Density(_)));
        assert!(near(c.value(), expected, 1e-15));
        assert!(near(c2.value(), expected, 1e-15));
        let atom = m.conditional(Margin::First, 1.0, 1.0, 0.0).unwrap();
        let expected = 0.5 * (1.0 - exp(-1.0));
        assert!(matches!(atom, Conditional::Atom(_)));
        assert!(near(atom.value(), expected, 1e-15));
        let far = Beew::new(1.0, 1.0, 1.0, 1.0, HFamily::gompertz(5.0).unwrap()).unwrap();
        assert!(far.conditional(Margin::First, 1.0, 400.0, 0.0).is_err());
    }

    #[test]
    fn survival_examples() {
        let m = unit();
        assert!(near(m.joint_survival(1e-300, 1e-300), 1.0, 1e-15));
        assert!(near(m.joint_survival(1e3, 1e3), 0.0, 1e-15));
        assert!(near(
            m.joint_survival(1.0, 1.0),
            0.453_427_656_040_191_1,
            1e-15
        ));
    }

    #[test]
    fn hazard_examples() {
        let m = unit();
        let h = m.hazard(0.5, 1.5, 0.0).unwrap();
        let f1 = exp(m.ln_f1(0.5, 1.5));
        let s = m.joint_survival(0.5, 1.5);
        assert!(near(h.value, f1 / s, 1e-15));
        let d = m.hazard(1.0, 1.0, 0.0).unwrap();
        assert!(d.is_line_density());
        assert!(near(
            d.value,
            exp(m.ln_f0(1.0)) / m.joint_survival(1.0, 1.0),
            1e-15
        ));
        assert!(m.hazard(60.0, 60.0, 0.0).is_err());
    }

    #[test]
    fn hazard_of_independent_exponentials() {
        // α1 = α2 = 1, α3 → 0: X1, X2 approach independent exponentials, whose
        // hazard at an off-diagonal point is e^{−x1} e^{−x2} / (e^{−x1} e^{−x2}) = 1
        let m = Beew::new(1.0, 1.0, 1e-12, 1.0, HFamily::exp()).unwrap();
        let h = m.hazard(0.8, 1.3, 0.0).unwrap();
        let f = exp(-0.8) * exp(-1.3);
        let s = (1.0 - (1.0 - exp(-0.8))) * (1.0 - (1.0 - exp(-1.3)));
        assert!(near(h.value, f / s, 1e-9));
        assert!(near(h.value, 1.0, 1e-9));
    }

    #[test]
    fn decomposition_examples() {
        let d = unit().decompose();
        assert!(near(d.singular_weight(), 1.0 / 3.0, 1e-15));
        let d = Beew::new(2.0, 1.0, 1.0, 1.0, HFamily::exp())
            .unwrap()
            .decompose();
        assert_eq!(d.singular_weight(), 0.25);
        assert_eq!(d.absolute_weight(), 0.75);
    }

    #[test]
    fn copula_limits() {
        let (u1, u2) = (0.3, 0.8);
        assert!(near(mo_copula(u1, u2, 0.0, 0.0), u1 * u2, 1e-15));
        assert!(near(mo_copula(u1, u2, 1.0, 1.0), u1.min(u2), 1e-15));
        let indep = Beew::new(1.0, 2.0, 1e-15, 1.0, HFamily::exp()).unwrap();
        let (t1, t2) = indep.copula_thetas();
        assert!(t1 < 1e-14 && t2 < 1e-14);
        let comon = Beew::new(1e-15, 1e-15, 1.0, 1.0, HFamily::exp()).unwrap();
        let (t1, t2) = comon.copula_thetas();
        assert!(t1 > 1.0 - 1e-14 && t2 > 1.0 - 1e-14);
    }

    #[test]
    fn min_and_max_examples() {
        let m = unit();
        assert!(near(m.min_cdf(1.0), 0.546_572_343_959_808_9, 1e-15));
        assert!(near(m.max_cdf(1.0), m.joint_cdf(1.0, 1.0), 1e-15));
        assert_eq!(m.min_cdf(0.0), 0.0);
    }
}
