//! Starting values for the fitters.
//!
//! Both marginals are EEW with the shared `(λ, ξ)`, so a profile likelihood
//! of the two margins fitted jointly gives `(a1, a2, λ, ξ)` with
//! `a_i = α_i + α3`. The tie fraction estimates `α3 / (α1 + α2 + α3)`, which
//! splits the marginal shapes into the three components.

use alloc::vec;
use alloc::vec::Vec;

use crate::beew::Beew;
use crate::eew::ln_base_cdf;
use crate::error::Result;
use crate::hfamily::{FamilyId, HFamily};
use crate::math::{exp, ln, sqrt};

use super::sample::ClassifiedSample;
use super::simplex::NelderMead;

/// Generator parameters that make `H` roughly linear over data of typical
/// size `scale`.
pub fn initial_xi(id: FamilyId, scale: f64) -> Vec<f64> {
    match id {
        FamilyId::Exp => vec![],
        FamilyId::Lfr => vec![1.0 / scale, 0.1 / (scale * scale)],
        FamilyId::Weib => vec![1.0],
        FamilyId::Gomp => vec![0.1 / scale],
        FamilyId::Wg => vec![0.5, 0.5 / sqrt(scale), 0.5],
        FamilyId::Mwe => vec![2.0 * scale, 1.0],
    }
}

/// Profile log-likelihood of one margin: `α` is replaced by its maximizer
/// `−n / Σ W(x)` at the given `λ` and generator.
fn margin_profile(xs: &[f64], lambda: f64, family: &HFamily) -> (f64, f64) {
    let n = xs.len() as f64;
    let mut w = 0.0;
    let mut rest = 0.0;
    for &x in xs {
        let h = family.cumulative(x);
        w += ln_base_cdf(lambda * h);
        rest += family.ln_rate(x) - lambda * h;
    }
    let alpha = -n / w;
    let value = n * ln(alpha) + n * ln(lambda) + rest + (alpha - 1.0) * w;
    (
        alpha,
        if value.is_nan() {
            f64::NEG_INFINITY
        } else {
            value
        },
    )
}

/// Starting point for [`em_fit`](super::em_fit) and
/// [`direct_fit`](super::direct_fit).
pub fn initial_guess(sample: &ClassifiedSample, id: FamilyId) -> Result<Beew> {
    let x1: Vec<f64> = sample.pairs().iter().map(|p| p.0).collect();
    let x2: Vec<f64> = sample.pairs().iter().map(|p| p.1).collect();
    let n = sample.n() as f64;
    let scale = (x1.iter().sum::<f64>() + x2.iter().sum::<f64>()) / (2.0 * n);

    let xi0 = initial_xi(id, scale);
    let family0 = HFamily::new(id, &xi0)?;
    let lambda0 = if id.lambda_fixed() {
        1.0
    } else {
        let total_h: f64 = x1.iter().chain(&x2).map(|&x| family0.cumulative(x)).sum();
        2.0 * n / total_h
    };

    let free_lambda = !id.lambda_fixed();
    let unpack = |z: &[f64]| -> Option<(f64, HFamily)> {
        let (lambda, xi_z) = if free_lambda {
            (exp(z[0]), &z[1..])
        } else {
            (1.0, z)
        };
        let xi: Vec<f64> = xi_z.iter().map(|&v| exp(v)).collect();
        HFamily::new(id, &xi).ok().map(|f| (lambda, f))
    };
    let objective = |z: &[f64]| match unpack(z) {
        Some((lambda, fam)) => {
            -(margin_profile(&x1, lambda, &fam).1 + margin_profile(&x2, lambda, &fam).1)
        }
        None => f64::INFINITY,
    };
    let mut start = Vec::with_capacity(1 + xi0.len());
    if free_lambda {
        start.push(ln(lambda0));
    }
    start.extend(xi0.iter().map(|&v| ln(v)));
    let nm = NelderMead {
        initial_step: 0.2,
        xtol: 1e-6,
        ftol: 0.0,
        max_iter: 4000,
    };
    let best = nm.minimize(&objective, &start);
    let (lambda, family) = unpack(&best.x).unwrap_or((lambda0, family0));
    let a1 = margin_profile(&x1, lambda, &family).0;
    let a2 = margin_profile(&x2, lambda, &family).0;

    // α3 / (a1 + a2 − α3) = p0  ⇒  α3 = p0 (a1 + a2) / (1 + p0)
    let p0 = (sample.n0() as f64 + 1.0) / (n + 2.0);
    let alpha3 = p0 * (a1 + a2) / (1.0 + p0);
    let alpha1 = (a1 - alpha3).max(0.1 * a1);
    let alpha2 = (a2 - alpha3).max(0.1 * a2);
    Beew::new(alpha1, alpha2, alpha3, lambda, family)
}

/// A model of family `id` whose law is numerically indistinguishable from
/// the `exp`-generator model `base` on data no larger than `x_max`.
///
/// Used to start the fit of a richer family at the fitted nested model, so
/// its likelihood cannot end below the nested one.
pub fn embed_exponential(base: &Beew, id: FamilyId, x_max: f64) -> Result<Beew> {
    let [a1, a2, a3] = base.alphas();
    let lambda = base.lambda();
    let x_max = x_max.max(1e-300);
    let tiny = 1e-10;
    let (lambda, xi) = match id {
        FamilyId::Exp => (lambda, vec![]),
        // λ H = (λβ) x + λγ x²/2 with λ pinned at 1
        FamilyId::Lfr => (1.0, vec![lambda, tiny * lambda / x_max]),
        FamilyId::Weib => (lambda, vec![1.0]),
        FamilyId::Gomp => (lambda, vec![tiny / x_max]),
        // x (e^{x^δ} − 1) → x (e − 1) as δ → 0
        FamilyId::Wg => (lambda / crate::math::expm1(1.0), vec![1.0, 1.0, tiny]),
        FamilyId::Mwe => (lambda, vec![x_max / tiny, 1.0]),
    };
    Beew::new(a1, a2, a3, lambda, HFamily::new(id, &xi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::classify;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn recovers_rough_parameters_for_generalized_exponential() {
        let truth = Beew::new(1.5, 0.5, 1.2, 0.04, HFamily::exp()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = classify(&truth.sample(&mut rng, 2000), 0.0).unwrap();
        let g = initial_guess(&s, FamilyId::Exp).unwrap();
        assert!((g.lambda() / 0.04 - 1.0).abs() < 0.2, "{g:?}");
        assert!((g.alpha1() + g.alpha3() - 2.7).abs() < 0.5, "{g:?}");
        assert!((g.singular_weight() - 1.2 / 3.2).abs() < 0.05, "{g:?}");
    }

    #[test]
    fn every_family_gets_a_valid_start() {
        let truth = Beew::new(1.0, 2.0, 0.7, 1.0, HFamily::weibull(1.5).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = classify(&truth.sample(&mut rng, 300), 0.0).unwrap();
        for id in FamilyId::ALL {
            let g = initial_guess(&s, id).unwrap();
            assert!(crate::fit::loglik(&g, &s).is_finite(), "{id}");
            assert_eq!(g.family().xi().len(), id.arity());
        }
    }
}
