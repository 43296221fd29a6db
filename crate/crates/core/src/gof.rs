//! Information criteria, Kolmogorov–Smirnov tests and likelihood ratio tests.

use alloc::vec::Vec;

use crate::beew::Beew;
use crate::error::{Error, Result};
use crate::fit::FitReport;
use crate::hfamily::FamilyId;
use crate::math::{abs, erfc, exp, ln, sqrt, PI};

/// AIC, AICC and BIC for a fitted model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaSet {
    pub k: usize,
    pub n: usize,
    pub loglik: f64,
    pub aic: f64,
    pub aicc: f64,
    pub bic: f64,
}

/// `AIC = 2k − 2ℓ`, `AICC = AIC + 2k(k+1)/(n−k−1)`, `BIC = k ln n − 2ℓ`.
///
/// Fails when `n ≤ k + 1`, where AICC is undefined.
pub fn criteria(k: usize, n: usize, loglik: f64) -> Result<CriteriaSet> {
    if n <= k + 1 {
        return Err(Error::TooFewObservations { n, k });
    }
    let kf = k as f64;
    let aic = 2.0 * kf - 2.0 * loglik;
    let aicc = aic + 2.0 * kf * (kf + 1.0) / (n - k - 1) as f64;
    let bic = kf * ln(n as f64) - 2.0 * loglik;
    Ok(CriteriaSet {
        k,
        n,
        loglik,
        aic,
        aicc,
        bic,
    })
}

/// Kolmogorov tail `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
///
/// For small `λ` the alternating series converges slowly, so the equivalent
/// theta-function form `1 − √(2π)/λ Σ e^{−(2k−1)²π²/(8λ²)}` is used there.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.18 {
        let c = PI * PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=64u32 {
            let m = (2 * k - 1) as f64;
            let term = exp(-m * m * c);
            sum += term;
            if term <= 1e-17 * sum {
                break;
            }
        }
        (1.0 - sqrt(2.0 * PI) / lambda * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=64u32 {
            let kf = k as f64;
            let term = exp(-2.0 * kf * kf * lambda * lambda);
            sum += sign * term;
            if term < 1e-17 {
                break;
            }
            sign = -sign;
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// Which fitted law a K-S test compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KsTarget {
    /// `X1` against `EEW(α1 + α3)`.
    First,
    /// `X2` against `EEW(α2 + α3)`.
    Second,
    /// `max(X1, X2)` against `EEW(α1 + α2 + α3)`.
    Max,
}

impl KsTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            KsTarget::First => "x1",
            KsTarget::Second => "x2",
            KsTarget::Max => "max",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub p_value: f64,
}

/// Asymptotic p-value `Q(√n D)`, with no small-sample correction.
pub fn ks_p_value(statistic: f64, n: usize) -> f64 {
    kolmogorov_tail(sqrt(n as f64) * statistic)
}

/// `D = sup |F_n − F|` from the order statistics.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::NoData);
    }
    let mut sorted: Vec<f64> = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(d)
}

/// One-sample two-sided K-S test against a continuous cdf.
pub fn ks_test<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<KsResult> {
    let statistic = ks_statistic(sample, cdf)?;
    Ok(KsResult {
        statistic,
        n: sample.len(),
        p_value: ks_p_value(statistic, sample.len()),
    })
}

/// K-S tests of `X1`, `X2` and `max(X1, X2)` against the fitted model.
pub fn ks_triplet(model: &Beew, pairs: &[(f64, f64)]) -> Result<[(KsTarget, KsResult); 3]> {
    use crate::beew::Margin;
    let x1: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let x2: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mx: Vec<f64> = pairs.iter().map(|p| p.0.max(p.1)).collect();
    let m1 = model.marginal(Margin::First);
    let m2 = model.marginal(Margin::Second);
    let max = model.max_law();
    Ok([
        (KsTarget::First, ks_test(&x1, |x| m1.cdf(x))?),
        (KsTarget::Second, ks_test(&x2, |x| m2.cdf(x))?),
        (KsTarget::Max, ks_test(&mx, |x| max.cdf(x))?),
    ])
}

/// Upper tail of the chi-square distribution with integer `df ≥ 1`.
///
/// Uses the finite sums available for integer degrees of freedom: a Poisson
/// sum for even `df`, `erfc` plus a half-integer sum for odd `df`.
pub fn chi_square_sf(x: f64, df: u32) -> f64 {
    assert!(df >= 1, "chi-square needs df >= 1");
    if !(x > 0.0) {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let half = 0.5 * x;
    let decay = exp(-half);
    if df.is_multiple_of(2) {
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..df / 2 {
            term *= half / j as f64;
            sum += term;
        }
        (decay * sum).min(1.0)
    } else {
        let mut tail = erfc(sqrt(half));
        // (x/2)^{j−1/2} / Γ(j + 1/2) for j = 1, 2, ...
        let mut term = sqrt(half) / (0.5 * sqrt(PI));
        for j in 1..=(df - 1) / 2 {
            tail += decay * term;
            term *= half / (j as f64 + 0.5);
        }
        tail.min(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrtResult {
    /// `2(ℓ_full − ℓ_base)`.
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    /// The full model collapsed onto the base model (statistic ≈ 0). The
    /// nesting point sits on the parameter boundary for some families, where
    /// the chi-square reference law does not hold.
    pub boundary: bool,
}

/// Threshold on the statistic below which a test is reported as a boundary fit.
const BOUNDARY_STATISTIC: f64 = 1e-6;

/// LRT from log-likelihoods and free-parameter counts.
pub fn likelihood_ratio(
    loglik_base: f64,
    k_base: usize,
    loglik_full: f64,
    k_full: usize,
) -> Result<LrtResult> {
    if k_full <= k_base {
        return Err(Error::NotNested(if k_full == k_base {
            "equal k"
        } else {
            "full model has fewer parameters"
        }));
    }
    let statistic = 2.0 * (loglik_full - loglik_base);
    let df = (k_full - k_base) as u32;
    Ok(LrtResult {
        statistic,
        df,
        p_value: chi_square_sf(statistic.max(0.0), df),
        boundary: abs(statistic) < BOUNDARY_STATISTIC,
    })
}

/// Whether the `base` generator's model is a special or limiting case of
/// the `full` one that [`lrt`] accepts. Only the `exp` generator is tested
/// against the others.
pub fn nests(base: FamilyId, full: FamilyId) -> bool {
    base == FamilyId::Exp && full != FamilyId::Exp
}

/// LRT of a base fit against a full fit on the same data.
pub fn lrt(base: &FitReport, full: &FitReport) -> Result<LrtResult> {
    let (b, f) = (base.theta_hat.family().id(), full.theta_hat.family().id());
    if b == f {
        return Err(Error::NotNested("equal k"));
    }
    if !nests(b, f) {
        return Err(Error::NotNested(
            "the base model must use the exp generator",
        ));
    }
    likelihood_ratio(base.loglik, base.k, full.loglik, full.k)
}
